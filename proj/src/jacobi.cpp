#include <mcacube/jacobi.hpp>

#include <cmath>
#include <sstream>

#include <mcacube/error.hpp>

namespace mcacube {

  namespace {

    double
    off_diagonal_norm(SymmetricMatrix const& a)
    {
      double sum = 0.0;
      for (std::size_t i = 0; i < a.order; ++i) {
        for (std::size_t j = i + 1; j < a.order; ++j) {
          sum += 2.0 * a(i, j) * a(i, j);
        }
      }
      return std::sqrt(sum);
    }

    double
    frobenius_norm(SymmetricMatrix const& a)
    {
      double sum = 0.0;
      for (auto v : a.values) {
        sum += v * v;
      }
      return std::sqrt(sum);
    }

    // Zeroes a(p, q) with the rotation of Golub & Van Loan (alg. 8.4.1).
    void
    rotate(SymmetricMatrix& a, std::vector<double>& v, std::size_t p, std::size_t q)
    {
      auto const n = a.order;
      double const apq = a(p, q);
      double const theta = (a(q, q) - a(p, p)) / (2.0 * apq);
      double const t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
      double const c = 1.0 / std::sqrt(t * t + 1.0);
      double const s = t * c;

      for (std::size_t k = 0; k < n; ++k) {
        double const akp = a(k, p);
        double const akq = a(k, q);
        a(k, p) = c * akp - s * akq;
        a(k, q) = s * akp + c * akq;
      }
      for (std::size_t k = 0; k < n; ++k) {
        double const apk = a(p, k);
        double const aqk = a(q, k);
        a(p, k) = c * apk - s * aqk;
        a(q, k) = s * apk + c * aqk;
      }
      a(p, q) = 0.0;
      a(q, p) = 0.0;

      for (std::size_t k = 0; k < n; ++k) {
        double const vkp = v[k * n + p];
        double const vkq = v[k * n + q];
        v[k * n + p] = c * vkp - s * vkq;
        v[k * n + q] = s * vkp + c * vkq;
      }
    }

  } // namespace

  JacobiResult
  jacobi_eigen(SymmetricMatrix a, JacobiOptions const& options)
  {
    auto const n = a.order;
    JacobiResult result;
    result.eigenvectors.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      result.eigenvectors[i * n + i] = 1.0;
    }

    double const threshold = options.tolerance * std::max(1.0, frobenius_norm(a));
    double off = off_diagonal_norm(a);
    int sweep = 0;
    while (off > threshold) {
      if (sweep == options.max_sweeps) {
        std::ostringstream msg;
        msg << "Jacobi iteration did not converge after " << sweep
            << " sweeps: off-diagonal norm " << off << " > " << threshold;
        throw NumericalError(msg.str());
      }
      for (std::size_t p = 0; p + 1 < n; ++p) {
        for (std::size_t q = p + 1; q < n; ++q) {
          if (a(p, q) != 0.0) {
            rotate(a, result.eigenvectors, p, q);
          }
        }
      }
      ++sweep;
      off = off_diagonal_norm(a);
    }

    result.eigenvalues.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      result.eigenvalues[i] = a(i, i);
    }
    result.sweeps = sweep;
    result.off_norm = off;
    return result;
  }

} // namespace mcacube
