#pragma once

#include <cstddef>
#include <vector>

namespace mcacube {

  // Dense row-major symmetric matrix of order n.
  struct SymmetricMatrix {
    std::size_t order = 0;
    std::vector<double> values;

    SymmetricMatrix() = default;
    explicit SymmetricMatrix(std::size_t n) : order(n), values(n * n, 0.0) {}

    double& operator()(std::size_t i, std::size_t j) { return values[i * order + j]; }
    double operator()(std::size_t i, std::size_t j) const { return values[i * order + j]; }
  };

  struct JacobiOptions {
    // convergence once off(A) <= tolerance * max(1, ||A||_F)
    double tolerance = 1e-12;
    int max_sweeps = 100;
  };

  struct JacobiResult {
    // unsorted; eigenvalues[k] pairs with column k of eigenvectors
    std::vector<double> eigenvalues;
    // row-major order x order, orthonormal columns
    std::vector<double> eigenvectors;
    int sweeps = 0;
    double off_norm = 0.0;

    double vector_entry(std::size_t row, std::size_t k) const
    {
      return eigenvectors[row * eigenvalues.size() + k];
    }
  };

  // Cyclic-by-row Jacobi rotations. The sweep order is fixed, so the result
  // is a deterministic function of the input. Throws NumericalError when
  // the off-diagonal norm is still above threshold after max_sweeps.
  JacobiResult jacobi_eigen(SymmetricMatrix matrix, JacobiOptions const& options = {});

} // namespace mcacube
