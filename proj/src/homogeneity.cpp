#include <mcacube/homogeneity.hpp>

#include <algorithm>
#include <limits>
#include <ostream>
#include <unordered_set>

#include <json.hpp>

#include <mcacube/error.hpp>

namespace mcacube {

  namespace {

    // All 3^d - 1 non-zero offsets in {-1, 0, 1}^d.
    std::vector<std::vector<int>>
    moore_offsets(std::size_t d)
    {
      std::vector<std::vector<int>> out;
      std::vector<int> offset(d, -1);
      while (true) {
        if (std::any_of(offset.begin(), offset.end(), [](int v) { return v != 0; })) {
          out.push_back(offset);
        }
        std::size_t t = d;
        while (t > 0 && offset[t - 1] == 1) {
          offset[t - 1] = -1;
          --t;
        }
        if (t == 0) {
          break;
        }
        ++offset[t - 1];
      }
      return out;
    }

    // Calls visit(linear index) for every in-range neighbour of `cell`.
    template <typename Visit>
    void
    for_each_neighbor(CellCoords const& cell, Shape const& shape,
                      std::vector<std::vector<int>> const& offsets, Visit&& visit)
    {
      auto const d = shape.size();
      for (auto const& off : offsets) {
        std::uint64_t index = 0;
        bool inside = true;
        for (std::size_t t = 0; t < d; ++t) {
          auto const c = static_cast<std::int64_t>(cell[t]) + off[t];
          if (c < 0 || c >= static_cast<std::int64_t>(shape[t])) {
            inside = false;
            break;
          }
          index = index * shape[t] + static_cast<std::uint64_t>(c);
        }
        if (inside) {
          visit(index);
        }
      }
    }

    std::uint64_t
    checked_mul(std::uint64_t a, std::uint64_t b)
    {
      if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
        throw InputError("shape too large for the homogeneity index");
      }
      return a * b;
    }

  } // namespace

  std::vector<CellCoords>
  neighbors(CellCoords const& cell, Shape const& shape)
  {
    std::vector<CellCoords> out;
    for_each_neighbor(cell, shape, moore_offsets(shape.size()),
                      [&](std::uint64_t index) { out.push_back(coords_of(shape, index)); });
    return out;
  }

  std::uint64_t
  delta(Cube const& cube, CellCoords const& cell)
  {
    if (!cube.is_full(cell)) {
      return 0;
    }
    auto const& occ = cube.occupancy();
    std::uint64_t count = 0;
    for_each_neighbor(cell, cube.shape(), moore_offsets(cube.dimension_count()),
                      [&](std::uint64_t index) {
                        count += std::binary_search(occ.begin(), occ.end(), index) ? 1 : 0;
                      });
    return count;
  }

  std::uint64_t
  ihb(Shape const& shape, std::span<std::uint64_t const> occupied)
  {
    std::unordered_set<std::uint64_t> full(occupied.begin(), occupied.end());
    auto const offsets = moore_offsets(shape.size());
    std::uint64_t total = 0;
    for (auto cell : full) {
      for_each_neighbor(coords_of(shape, cell), shape, offsets,
                        [&](std::uint64_t index) { total += full.count(index); });
    }
    return total;
  }

  std::uint64_t
  ihb(Cube const& cube)
  {
    return ihb(cube.shape(), cube.occupancy());
  }

  std::uint64_t
  ihb_max(Shape const& shape)
  {
    std::uint64_t with_self = 1;
    std::uint64_t cells = 1;
    for (auto p : shape) {
      if (p == 0) {
        throw InputError("dimension with no modalities");
      }
      with_self = checked_mul(with_self, 3 * p - 2);
      cells = checked_mul(cells, p);
    }
    return with_self - cells;
  }

  double
  ih(Shape const& shape, std::span<std::uint64_t const> occupied)
  {
    auto const max = ihb_max(shape);
    if (max == 0) {
      throw InputError("degenerate shape: every dimension has a single modality");
    }
    return static_cast<double>(ihb(shape, occupied)) / static_cast<double>(max);
  }

  double
  ih(Cube const& cube)
  {
    return ih(cube.shape(), cube.occupancy());
  }

  double
  gain(double ih_initial, double ih_arranged)
  {
    if (ih_initial == 0.0) {
      throw NumericalError("baseline has no adjacent full pairs");
    }
    return (ih_arranged - ih_initial) / ih_initial;
  }

  HomogeneityReport
  homogeneity_report(Cube const& cube)
  {
    HomogeneityReport report;
    report.ihb = ihb(cube);
    report.ihb_max = ihb_max(cube.shape());
    report.ih = ih(cube);
    report.sparsity = sparsity(cube);
    return report;
  }

  void
  write_report_document(HomogeneityReport const& report, std::ostream& out)
  {
    nlohmann::json doc;
    doc["schemaVersion"] = 1;
    doc["kind"] = "homogeneity";
    doc["ihb"] = report.ihb;
    doc["ihbMax"] = report.ihb_max;
    doc["ih"] = report.ih;
    doc["sparsity"] = report.sparsity;
    if (report.gain_vs_baseline) {
      doc["gain"] = *report.gain_vs_baseline;
    } else {
      doc["gain"] = nullptr;
    }
    out << doc.dump(2) << '\n';
  }

  BruteForceResult
  brute_force_best(Cube const& cube, std::uint64_t limit)
  {
    auto const& shape = cube.shape();
    auto const d = shape.size();
    if (ihb_max(shape) == 0) {
      throw InputError("degenerate shape: every dimension has a single modality");
    }

    std::uint64_t space = 1;
    for (auto p : shape) {
      for (std::uint64_t k = 2; k <= p; ++k) {
        space *= k;
        if (space > limit) {
          throw InputError("search space exceeds " + std::to_string(limit) +
                           " arrangements; use a smaller shape");
        }
      }
    }

    std::vector<CellCoords> cells;
    for (auto index : cube.occupancy()) {
      cells.push_back(cube.coords_of(index));
    }

    std::vector<Permutation> perms(d);
    for (std::size_t t = 0; t < d; ++t) {
      perms[t] = identity_permutation(shape[t]);
    }

    BruteForceResult result;
    std::uint64_t best_ihb = 0;
    std::vector<Permutation> best = perms;
    std::vector<std::uint64_t> mapped(cells.size());
    std::vector<Permutation> position(d);
    bool first = true;
    while (true) {
      for (std::size_t t = 0; t < d; ++t) {
        position[t] = inverse_permutation(perms[t]);
      }
      for (std::size_t c = 0; c < cells.size(); ++c) {
        std::uint64_t index = 0;
        for (std::size_t t = 0; t < d; ++t) {
          index = index * shape[t] + position[t][cells[c][t]];
        }
        mapped[c] = index;
      }
      auto const value = ihb(shape, mapped);
      ++result.configurations;
      if (first || value > best_ihb) {
        best_ihb = value;
        best = perms;
        first = false;
      }

      // lexicographic successor of the tuple, last dimension fastest
      std::size_t t = d;
      while (t > 0 && !std::next_permutation(perms[t - 1].begin(), perms[t - 1].end())) {
        --t;
      }
      if (t == 0) {
        break;
      }
    }

    for (auto const& dim : cube.schema().dimensions) {
      result.arrangement.initial_orders.push_back(dim.modalities);
    }
    for (std::size_t t = 0; t < d; ++t) {
      DimensionArrangement entry;
      entry.dimension = t;
      entry.permutation = best[t];
      result.arrangement.per_dimension.push_back(std::move(entry));
    }
    result.ih = static_cast<double>(best_ihb) / static_cast<double>(ihb_max(shape));
    return result;
  }

} // namespace mcacube
