#include <mcacube/mca.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include <json.hpp>

#include <mcacube/error.hpp>
#include <mcacube/jacobi.hpp>

namespace mcacube {

  std::size_t
  DisjunctiveTable::block_of(std::size_t column) const
  {
    auto it = std::upper_bound(block_offsets_.begin(), block_offsets_.end(), column);
    return static_cast<std::size_t>(it - block_offsets_.begin()) - 1;
  }

  std::span<std::uint32_t const>
  DisjunctiveTable::active_columns(std::size_t row) const
  {
    auto const d = dimension_count();
    return std::span<std::uint32_t const>(active_).subspan(row * d, d);
  }

  std::uint8_t
  DisjunctiveTable::entry(std::size_t row, std::size_t column) const
  {
    auto const cols = active_columns(row);
    return std::find(cols.begin(), cols.end(), column) != cols.end() ? 1 : 0;
  }

  DisjunctiveTable
  build_disjunctive(Cube const& cube)
  {
    if (cube.fact_count() == 0) {
      throw InputError("empty cube");
    }
    auto const& shape = cube.shape();
    auto const d = shape.size();

    DisjunctiveTable z;
    z.rows_ = cube.fact_count();
    z.block_offsets_.assign(d + 1, 0);
    for (std::size_t t = 0; t < d; ++t) {
      z.block_offsets_[t + 1] = z.block_offsets_[t] + shape[t];
    }
    z.column_sums_.assign(z.block_offsets_.back(), 0);
    z.active_.reserve(z.rows_ * d);
    for (auto const& fact : cube.facts()) {
      for (std::size_t t = 0; t < d; ++t) {
        auto const col = static_cast<std::uint32_t>(z.block_offsets_[t] + fact.coords[t]);
        z.active_.push_back(col);
        ++z.column_sums_[col];
      }
    }
    return z;
  }

  BurtTable
  burt(DisjunctiveTable const& z)
  {
    BurtTable b;
    b.order = z.column_count();
    b.block_offsets = z.block_offsets();
    b.entries.assign(b.order * b.order, 0);
    for (std::size_t i = 0; i < z.row_count(); ++i) {
      auto const cols = z.active_columns(i);
      for (auto r : cols) {
        for (auto c : cols) {
          ++b.entries[r * b.order + c];
        }
      }
    }
    b.diagonal_weights.resize(b.order);
    for (std::size_t j = 0; j < b.order; ++j) {
      b.diagonal_weights[j] = b(j, j);
    }
    return b;
  }

  namespace {

    std::size_t
    block_index(std::vector<std::size_t> const& offsets, std::size_t column)
    {
      auto it = std::upper_bound(offsets.begin(), offsets.end(), column);
      return static_cast<std::size_t>(it - offsets.begin()) - 1;
    }

    // Per-modality signature that depends only on the Burt table, the block
    // a modality belongs to and its weight, so it follows the modality under
    // any relabelling within blocks and is unchanged when every fact is
    // duplicated. Two rounds of neighbourhood refinement
    // separate modalities that share a weight.
    std::vector<double>
    modality_signature(BurtTable const& b, std::vector<std::size_t> const& kept, double n)
    {
      auto const m = kept.size();
      std::vector<double> h(m);
      for (std::size_t a = 0; a < m; ++a) {
        auto const j = kept[a];
        h[a] = std::sqrt(static_cast<double>(b(j, j)) / n) +
               0.5 * static_cast<double>(block_index(b.block_offsets, j));
      }
      for (int round = 0; round < 2; ++round) {
        std::vector<double> next(m);
        for (std::size_t a = 0; a < m; ++a) {
          auto const j = kept[a];
          double acc = 0.0;
          for (std::size_t c = 0; c < m; ++c) {
            acc += static_cast<double>(b(j, kept[c])) * std::sin(1.0 + h[c]);
          }
          next[a] = h[a] + acc / static_cast<double>(b(j, j));
        }
        h = std::move(next);
      }
      return h;
    }

    // Replaces the columns `cols` of `vectors` (an orthonormal basis of one
    // eigenspace) with the eigenvectors of the signature compressed onto
    // that space, ordered by decreasing compressed value.
    void
    canonicalize_eigenspace(std::vector<std::vector<double>>& vectors,
                            std::vector<std::size_t> const& cols,
                            std::vector<double> const& signature)
    {
      auto const k = cols.size();
      auto const m = signature.size();
      SymmetricMatrix c(k);
      for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = a; b < k; ++b) {
          double acc = 0.0;
          for (std::size_t r = 0; r < m; ++r) {
            acc += vectors[cols[a]][r] * signature[r] * vectors[cols[b]][r];
          }
          c(a, b) = acc;
          c(b, a) = acc;
        }
      }
      auto const sub = jacobi_eigen(c);
      std::vector<std::size_t> order(k);
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return sub.eigenvalues[x] > sub.eigenvalues[y];
      });

      std::vector<std::vector<double>> rotated(k, std::vector<double>(m, 0.0));
      for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = 0; b < k; ++b) {
          double const q = sub.vector_entry(b, order[a]);
          for (std::size_t r = 0; r < m; ++r) {
            rotated[a][r] += q * vectors[cols[b]][r];
          }
        }
      }
      for (std::size_t a = 0; a < k; ++a) {
        vectors[cols[a]] = std::move(rotated[a]);
      }
    }

  } // namespace

  EigenSystem
  solve_eigen(BurtTable const& b, std::size_t dimension_count, EigenOptions const& options)
  {
    if (dimension_count == 0 || b.dimension_count() != dimension_count) {
      throw InputError("Burt table has " + std::to_string(b.dimension_count()) +
                       " blocks, expected " + std::to_string(dimension_count));
    }
    auto const p = b.order;
    auto const d = static_cast<double>(dimension_count);

    EigenSystem eig;
    eig.dimension_count = dimension_count;
    eig.block_offsets = b.block_offsets;
    eig.weights = b.diagonal_weights;

    std::int64_t trace = 0;
    std::vector<std::size_t> kept;
    for (std::size_t j = 0; j < p; ++j) {
      trace += b.diagonal_weights[j];
      if (b.diagonal_weights[j] > 0) {
        kept.push_back(j);
      } else {
        eig.dropped_modalities.push_back(j);
      }
    }
    if (kept.empty()) {
      throw InputError("every modality has zero weight");
    }
    eig.fact_count = trace / static_cast<std::int64_t>(dimension_count);
    auto const n = static_cast<double>(eig.fact_count);
    auto const m = kept.size();

    std::vector<double> root_weight(m);
    for (std::size_t a = 0; a < m; ++a) {
      root_weight[a] = std::sqrt(static_cast<double>(b.diagonal_weights[kept[a]]));
    }

    // W = (1/d) X^-1/2 B X^-1/2 with the trivial direction sqrt(z)/sqrt(nd)
    // deflated, so it lands on eigenvalue 0 and cannot mix with a genuine
    // eigenvalue-1 axis.
    SymmetricMatrix w(m);
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t c = 0; c < m; ++c) {
        double const rr = root_weight[a] * root_weight[c];
        w(a, c) = static_cast<double>(b(kept[a], kept[c])) / (d * rr) - rr / (n * d);
      }
    }

    auto const solved = jacobi_eigen(w, {options.jacobi_tolerance, options.max_sweeps});
    eig.sweeps = solved.sweeps;

    struct Candidate {
      double eigenvalue;
      std::size_t source;
    };
    std::vector<Candidate> candidates;
    std::vector<std::vector<double>> vectors(m);
    for (std::size_t k = 0; k < m; ++k) {
      double const lambda = solved.eigenvalues[k];
      if (!(lambda > options.min_eigenvalue)) {
        continue;
      }
      std::vector<double> v(m);
      for (std::size_t a = 0; a < m; ++a) {
        v[a] = solved.vector_entry(a, k);
      }
      // weighted spread of phi = X^-1/2 v relative to its weighted rms
      double mean = 0.0;
      double square = 0.0;
      for (std::size_t a = 0; a < m; ++a) {
        double const z = root_weight[a] * root_weight[a];
        double const phi = v[a] / root_weight[a];
        mean += z * phi;
        square += z * phi * phi;
      }
      double const total = n * d;
      mean /= total;
      square /= total;
      double const variance = std::max(0.0, square - mean * mean);
      if (std::sqrt(variance) < options.trivial_tolerance * std::sqrt(square)) {
        continue;
      }
      vectors[k] = std::move(v);
      candidates.push_back({lambda, k});
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](Candidate const& x, Candidate const& y) { return x.eigenvalue > y.eigenvalue; });

    // pick a relabelling-independent basis inside each degenerate eigenspace
    std::vector<double> signature;
    for (std::size_t first = 0; first < candidates.size();) {
      std::size_t last = first + 1;
      while (last < candidates.size() &&
             candidates[last - 1].eigenvalue - candidates[last].eigenvalue <=
               options.degeneracy_tolerance * std::max(1.0, candidates[first].eigenvalue)) {
        ++last;
      }
      if (last - first > 1) {
        if (signature.empty()) {
          signature = modality_signature(b, kept, n);
        }
        std::vector<std::size_t> cols;
        for (auto k = first; k < last; ++k) {
          cols.push_back(candidates[k].source);
        }
        canonicalize_eigenspace(vectors, cols, signature);
      }
      first = last;
    }

    for (auto const& cand : candidates) {
      auto const& v = vectors[cand.source];
      FactorialAxis axis;
      axis.eigenvalue = cand.eigenvalue;
      axis.coordinates.assign(p, 0.0);
      double const scale = std::sqrt(n * d * cand.eigenvalue);
      for (std::size_t a = 0; a < m; ++a) {
        axis.coordinates[kept[a]] = scale * v[a] / root_weight[a];
      }

      // largest |coordinate| positive; when near-largest coordinates disagree
      // in sign the heavier side wins, then the sign of the weighted third
      // moment, then the lowest column
      double largest = 0.0;
      for (auto x : axis.coordinates) {
        largest = std::max(largest, std::abs(x));
      }
      double heavier = 0.0;
      double skew = 0.0;
      double lowest = 0.0;
      for (std::size_t j = 0; j < p; ++j) {
        double const x = axis.coordinates[j];
        double const w = static_cast<double>(b.diagonal_weights[j]);
        if (std::abs(x) >= largest * (1.0 - 1e-9)) {
          heavier += x < 0.0 ? -w : w;
          if (lowest == 0.0) {
            lowest = x;
          }
        }
        skew += w * x * x * x;
      }
      double const skew_scale = n * d * largest * largest * largest;
      bool flip = false;
      if (heavier != 0.0) {
        flip = heavier < 0.0;
      } else if (std::abs(skew) > 1e-9 * skew_scale) {
        flip = skew < 0.0;
      } else {
        flip = lowest < 0.0;
      }
      if (flip) {
        for (auto& y : axis.coordinates) {
          y = -y;
        }
      }
      eig.axes.push_back(std::move(axis));
    }
    return eig;
  }

  Contributions
  contributions(EigenSystem const& eig, DisjunctiveTable const& z)
  {
    auto const p = eig.column_count();
    if (z.column_count() != p) {
      throw InputError("disjunctive table has " + std::to_string(z.column_count()) +
                       " columns, eigen system has " + std::to_string(p));
    }
    auto const d = eig.dimension_count;
    auto const& sums = z.column_sums();
    double const nd = static_cast<double>(z.row_count()) * static_cast<double>(d);

    Contributions out;
    out.per_modality.assign(eig.axes.size(), std::vector<double>(p, 0.0));
    out.per_dimension.assign(eig.axes.size(), std::vector<double>(d, 0.0));
    for (std::size_t alpha = 0; alpha < eig.axes.size(); ++alpha) {
      auto const& axis = eig.axes[alpha];
      if (!(axis.eigenvalue > 0.0)) {
        continue;
      }
      for (std::size_t t = 0; t < d; ++t) {
        for (auto j = eig.block_offsets[t]; j < eig.block_offsets[t + 1]; ++j) {
          double const phi = axis.coordinates[j];
          double const cr = static_cast<double>(sums[j]) * phi * phi / (nd * axis.eigenvalue);
          out.per_modality[alpha][j] = cr;
          out.per_dimension[alpha][t] += cr;
        }
      }
    }
    return out;
  }

  double
  eigen_residual(BurtTable const& b, EigenSystem const& eig, std::size_t axis)
  {
    auto const& a = eig.axes.at(axis);
    auto const d = static_cast<double>(eig.dimension_count);
    double worst = 0.0;
    for (std::size_t j = 0; j < b.order; ++j) {
      if (b.diagonal_weights[j] == 0) {
        continue;
      }
      double acc = 0.0;
      for (std::size_t k = 0; k < b.order; ++k) {
        acc += static_cast<double>(b(j, k)) * a.coordinates[k];
      }
      double const lhs = acc / (d * static_cast<double>(b.diagonal_weights[j]));
      worst = std::max(worst, std::abs(lhs - a.eigenvalue * a.coordinates[j]));
    }
    return worst;
  }

  void
  write_debug_document(BurtTable const& b, EigenSystem const& eig, std::ostream& out)
  {
    using nlohmann::json;
    json doc;
    doc["schemaVersion"] = 1;
    doc["kind"] = "mca-debug";
    json rows = json::array();
    for (std::size_t i = 0; i < b.order; ++i) {
      rows.push_back(std::vector<std::int64_t>(b.entries.begin() + static_cast<std::ptrdiff_t>(i * b.order),
                                               b.entries.begin() + static_cast<std::ptrdiff_t>((i + 1) * b.order)));
    }
    doc["burt"] = rows;
    doc["diagonal"] = b.diagonal_weights;
    doc["blockOffsets"] = b.block_offsets;
    doc["droppedModalities"] = eig.dropped_modalities;
    json axes = json::array();
    for (std::size_t alpha = 0; alpha < eig.axes.size(); ++alpha) {
      axes.push_back({{"axis", alpha + 1},
                      {"eigenvalue", eig.axes[alpha].eigenvalue},
                      {"coordinates", eig.axes[alpha].coordinates}});
    }
    doc["axes"] = axes;
    out << doc.dump(2) << '\n';
  }

} // namespace mcacube
