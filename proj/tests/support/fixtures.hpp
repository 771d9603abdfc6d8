#pragma once

//
// Test-only cube builders and oracles. Nothing here calls into the
// homogeneity or MCA code paths it is used to check.
//

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <mcacube/cube.hpp>

#ifndef MCACUBE_DATA_DIR
#error "MCACUBE_DATA_DIR must point at the data/ fixtures"
#endif

namespace mcacube::testing {

  inline std::string
  data_path(std::string const& name)
  {
    return std::string(MCACUBE_DATA_DIR) + "/" + name;
  }

  inline Cube
  load_fixture(std::string const& stem)
  {
    return load_fact_table(data_path(stem + ".csv"), data_path(stem + ".schema.json"));
  }

  inline CubeSchema
  labelled_schema(Shape const& shape)
  {
    CubeSchema schema;
    for (std::size_t t = 0; t < shape.size(); ++t) {
      DimensionSpec dim;
      dim.name = "D" + std::to_string(t + 1);
      for (std::size_t j = 0; j < shape[t]; ++j) {
        dim.modalities.push_back(dim.name + "_" + std::to_string(j + 1));
      }
      schema.dimensions.push_back(std::move(dim));
    }
    return schema;
  }

  inline Cube
  make_cube(Shape const& shape, std::vector<CellCoords> const& cells)
  {
    std::vector<Fact> facts;
    for (auto const& c : cells) {
      facts.push_back(Fact{c, {}});
    }
    return Cube(labelled_schema(shape), std::move(facts));
  }

  // d dimensions with sizes in [p_lo, p_hi], n uniform facts in [n_lo, n_hi]
  inline Cube
  random_cube(std::mt19937_64& rng, std::size_t d, std::size_t p_lo, std::size_t p_hi,
              std::size_t n_lo, std::size_t n_hi)
  {
    std::uniform_int_distribution<std::size_t> size(p_lo, p_hi);
    std::uniform_int_distribution<std::size_t> count(n_lo, n_hi);
    Shape shape(d);
    for (auto& p : shape) {
      p = size(rng);
    }
    auto const n = count(rng);
    std::vector<CellCoords> cells;
    for (std::size_t i = 0; i < n; ++i) {
      CellCoords c(d);
      for (std::size_t t = 0; t < d; ++t) {
        c[t] = static_cast<std::uint32_t>(std::uniform_int_distribution<std::size_t>(0, shape[t] - 1)(rng));
      }
      cells.push_back(c);
    }
    return make_cube(shape, cells);
  }

  inline std::vector<Permutation>
  random_permutations(Shape const& shape, std::mt19937_64& rng)
  {
    std::vector<Permutation> perms;
    for (auto p : shape) {
      Permutation perm(p);
      for (std::size_t k = 0; k < p; ++k) {
        perm[k] = k;
      }
      std::shuffle(perm.begin(), perm.end(), rng);
      perms.push_back(perm);
    }
    return perms;
  }

  inline std::vector<Permutation>
  reversal(Shape const& shape, std::size_t t)
  {
    std::vector<Permutation> perms;
    for (std::size_t u = 0; u < shape.size(); ++u) {
      Permutation perm(shape[u]);
      for (std::size_t k = 0; k < shape[u]; ++k) {
        perm[k] = u == t ? shape[u] - 1 - k : k;
      }
      perms.push_back(perm);
    }
    return perms;
  }

  // 2 x (unordered pairs of distinct full cells at Chebyshev distance 1)
  inline std::uint64_t
  ihb_pairwise(Cube const& cube)
  {
    std::vector<CellCoords> cells;
    for (auto index : cube.occupancy()) {
      cells.push_back(cube.coords_of(index));
    }
    std::uint64_t pairs = 0;
    for (std::size_t a = 0; a < cells.size(); ++a) {
      for (std::size_t b = a + 1; b < cells.size(); ++b) {
        long worst = 0;
        for (std::size_t t = 0; t < cells[a].size(); ++t) {
          worst = std::max(worst, std::labs(static_cast<long>(cells[a][t]) - static_cast<long>(cells[b][t])));
        }
        pairs += worst == 1 ? 1 : 0;
      }
    }
    return 2 * pairs;
  }

  // sum over all cells of the in-range Moore neighbour count, by enumeration
  inline std::uint64_t
  ihb_max_enumerated(Shape const& shape)
  {
    auto const d = shape.size();
    std::uint64_t cells = 1;
    for (auto p : shape) {
      cells *= p;
    }
    std::uint64_t total = 0;
    for (std::uint64_t a = 0; a < cells; ++a) {
      auto const ca = coords_of(shape, a);
      for (std::uint64_t b = 0; b < cells; ++b) {
        if (a == b) {
          continue;
        }
        auto const cb = coords_of(shape, b);
        bool near = true;
        for (std::size_t t = 0; t < d && near; ++t) {
          near = std::labs(static_cast<long>(ca[t]) - static_cast<long>(cb[t])) <= 1;
        }
        total += near ? 1 : 0;
      }
    }
    return total;
  }

  // Spearman rank correlation with average ranks for ties.
  inline double
  spearman(std::vector<double> const& x, std::vector<double> const& y)
  {
    auto ranks = [](std::vector<double> const& v) {
      std::vector<std::size_t> idx(v.size());
      for (std::size_t i = 0; i < v.size(); ++i) {
        idx[i] = i;
      }
      std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
      std::vector<double> r(v.size());
      for (std::size_t i = 0; i < idx.size();) {
        std::size_t j = i;
        while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) {
          ++j;
        }
        double const avg = 0.5 * static_cast<double>(i + j) + 1.0;
        for (auto k = i; k <= j; ++k) {
          r[idx[k]] = avg;
        }
        i = j + 1;
      }
      return r;
    };
    auto const rx = ranks(x);
    auto const ry = ranks(y);
    auto const n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      mx += rx[i];
      my += ry[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      sxy += (rx[i] - mx) * (ry[i] - my);
      sxx += (rx[i] - mx) * (rx[i] - mx);
      syy += (ry[i] - my) * (ry[i] - my);
    }
    if (sxx == 0 || syy == 0) {
      return 0.0;
    }
    return sxy / std::sqrt(sxx * syy);
  }

} // namespace mcacube::testing
