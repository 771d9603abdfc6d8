#include <doctest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include <mcacube/error.hpp>
#include <mcacube/mca.hpp>

#include "support/fixtures.hpp"

using namespace mcacube;
using namespace mcacube::testing;

namespace {

  struct Solved {
    DisjunctiveTable z;
    BurtTable b;
    EigenSystem eig;
    Contributions contrib;
  };

  Solved
  solve(Cube const& cube)
  {
    Solved s;
    s.z = build_disjunctive(cube);
    s.b = burt(s.z);
    s.eig = solve_eigen(s.b, cube.dimension_count());
    s.contrib = contributions(s.eig, s.z);
    return s;
  }

  double
  max_abs(std::vector<double> const& v)
  {
    double m = 0.0;
    for (auto x : v) {
      m = std::max(m, std::abs(x));
    }
    return m;
  }

  // Generic 3 x 3 x 2 cube; reference values from a dense non-symmetric
  // eigen solve of (1/d) X^-1 B (tests/oracles/oracle_values.py).
  Cube
  generic_cube()
  {
    return make_cube({3, 3, 2}, {{0, 0, 0}, {0, 1, 0}, {1, 1, 1}, {1, 2, 1}, {2, 2, 0},
                                 {2, 0, 1}, {0, 0, 1}, {1, 1, 0}, {2, 2, 1}, {0, 2, 0},
                                 {1, 0, 0}, {2, 1, 1}, {0, 0, 0}});
  }

} // namespace

TEST_CASE("build_disjunctive codes each fact block-wise")
{
  auto const z = build_disjunctive(make_cube({2, 2}, {{0, 0}, {1, 1}}));
  REQUIRE(z.row_count() == 2);
  REQUIRE(z.column_count() == 4);
  std::vector<int> row0, row1;
  for (std::size_t j = 0; j < 4; ++j) {
    row0.push_back(z.entry(0, j));
    row1.push_back(z.entry(1, j));
  }
  CHECK(row0 == std::vector<int>{1, 0, 1, 0});
  CHECK(row1 == std::vector<int>{0, 1, 0, 1});
  CHECK(z.column_sums() == std::vector<std::int64_t>{1, 1, 1, 1});
  CHECK(z.block_of(3) == 1);
}

TEST_CASE("disjunctive table invariants on random cubes")
{
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    auto const cube = random_cube(rng, 1 + trial % 4, 1, 6, 1, 50);
    auto const z = build_disjunctive(cube);
    auto const d = cube.dimension_count();
    for (std::size_t i = 0; i < z.row_count(); ++i) {
      int total = 0;
      for (std::size_t t = 0; t < d; ++t) {
        int block = 0;
        for (auto j = z.block_offsets()[t]; j < z.block_offsets()[t + 1]; ++j) {
          block += z.entry(i, j);
        }
        CHECK(block == 1);
        total += block;
      }
      CHECK(total == static_cast<int>(d));
    }
    for (std::size_t t = 0; t < d; ++t) {
      std::int64_t sum = 0;
      for (auto j = z.block_offsets()[t]; j < z.block_offsets()[t + 1]; ++j) {
        sum += z.column_sums()[j];
      }
      CHECK(sum == static_cast<std::int64_t>(cube.fact_count()));
    }
  }
}

TEST_CASE("case-study shape: two dimensions with 58 + 25 modalities give 83 columns")
{
  std::vector<CellCoords> cells;
  for (std::uint32_t i = 0; i < 311959; ++i) {
    cells.push_back({i % 58, (i / 58) % 25});
  }
  auto const z = build_disjunctive(make_cube({58, 25}, cells));
  CHECK(z.row_count() == 311959);
  CHECK(z.column_count() == 83);
}

TEST_CASE("empty cube is refused")
{
  CHECK_THROWS_WITH_AS(build_disjunctive(make_cube({2, 2}, {})), "empty cube", InputError);
}

TEST_CASE("burt table of the 2 x 2 diagonal example")
{
  auto const b = burt(build_disjunctive(make_cube({2, 2}, {{0, 0}, {1, 1}})));
  std::vector<std::int64_t> const expected{1, 0, 1, 0, 0, 1, 0, 1, 1, 0, 1, 0, 0, 1, 0, 1};
  CHECK(b.entries == expected);
  CHECK(b.diagonal_weights == std::vector<std::int64_t>{1, 1, 1, 1});
  // block (1, 2) is the identity
  CHECK(b(0, 2) == 1);
  CHECK(b(0, 3) == 0);
  CHECK(b(1, 2) == 0);
  CHECK(b(1, 3) == 1);
}

TEST_CASE("burt invariants: symmetric, trace n d, diagonal blocks, contingency blocks sum to n")
{
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    auto const cube = random_cube(rng, 2 + trial % 3, 1, 6, 1, 60);
    auto const z = build_disjunctive(cube);
    auto const b = burt(z);
    auto const d = cube.dimension_count();
    auto const n = static_cast<std::int64_t>(cube.fact_count());
    std::int64_t trace = 0;
    for (std::size_t i = 0; i < b.order; ++i) {
      trace += b(i, i);
      CHECK(b(i, i) == z.column_sums()[i]);
      for (std::size_t j = 0; j < b.order; ++j) {
        CHECK(b(i, j) == b(j, i));
      }
    }
    CHECK(trace == n * static_cast<std::int64_t>(d));
    auto const& off = b.block_offsets;
    for (std::size_t t = 0; t < d; ++t) {
      for (std::size_t u = 0; u < d; ++u) {
        std::int64_t sum = 0;
        for (auto i = off[t]; i < off[t + 1]; ++i) {
          for (auto j = off[u]; j < off[u + 1]; ++j) {
            sum += b(i, j);
            if (t == u && i != j) {
              CHECK(b(i, j) == 0);
            }
          }
        }
        CHECK(sum == n);
      }
    }
  }
}

TEST_CASE("perfectly associated pair of facts: one axis, eigenvalue sum 1")
{
  auto const s = solve(make_cube({2, 2}, {{0, 0}, {1, 1}}));
  // spectrum of (1/2) X^-1 B is {1, 1, 0, 0}; one 1 is the trivial axis
  REQUIRE(s.eig.axes.size() == 1);
  CHECK(s.eig.axes[0].eigenvalue == doctest::Approx(1.0).epsilon(1e-12));
  // coordinates +-1 with the first positive, matching the association
  auto const& phi = s.eig.axes[0].coordinates;
  CHECK(phi[0] == doctest::Approx(1.0));
  CHECK(phi[1] == doctest::Approx(-1.0));
  CHECK(phi[2] == doctest::Approx(1.0));
  CHECK(phi[3] == doctest::Approx(-1.0));
  CHECK(s.contrib.per_dimension[0][0] == doctest::Approx(0.5));
  CHECK(s.contrib.per_dimension[0][1] == doctest::Approx(0.5));
}

TEST_CASE("generic cube matches the dense non-symmetric reference solve")
{
  auto const s = solve(generic_cube());
  std::vector<double> const lambda{0.539175554093524, 0.420620349739432, 0.30834344956188,
                                   0.241030965993436, 0.157496347278395};
  std::vector<std::vector<double>> const cr{
    {0.458964759298118, 0.21386453578819, 0.327170704913692},
    {0.507581536972994, 0.485992197133725, 0.00642626589328123},
    {0.0211770813568827, 0.666940805591492, 0.311882113051625},
    {0.475794113806756, 0.497566474486367, 0.0266394117068757},
    {0.536482508565248, 0.135635987000225, 0.327881504434526}};
  REQUIRE(s.eig.axes.size() == lambda.size());
  for (std::size_t a = 0; a < lambda.size(); ++a) {
    CHECK(s.eig.axes[a].eigenvalue == doctest::Approx(lambda[a]).epsilon(1e-12));
    for (std::size_t t = 0; t < 3; ++t) {
      CHECK(s.contrib.per_dimension[a][t] == doctest::Approx(cr[a][t]).epsilon(1e-10));
    }
  }
}

TEST_CASE("retained axis count for a two-dimension cube: p - d non-trivial axes")
{
  // every cell full once: independent dimensions, no association, but the
  // analysis still returns p - d = 81 axes when all cross-tabs are generic
  std::mt19937_64 rng(4);
  std::vector<CellCoords> cells;
  for (std::uint32_t i = 0; i < 58; ++i) {
    for (std::uint32_t j = 0; j < 25; ++j) {
      auto const copies = 1 + rng() % 4;
      for (std::uint64_t k = 0; k < copies; ++k) {
        cells.push_back({i, j});
      }
    }
  }
  auto const s = solve(make_cube({58, 25}, cells));
  CHECK(s.eig.axes.size() == 81);
  double total = 0.0;
  for (auto const& a : s.eig.axes) {
    total += a.eigenvalue;
  }
  CHECK(total == doctest::Approx((83.0 - 2.0) / 2.0).epsilon(1e-10));
}

TEST_CASE("eigen system invariants on random cubes")
{
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    auto const cube = random_cube(rng, 2 + trial % 3, 2, 7, 5, 120);
    auto const s = solve(cube);
    auto const n = static_cast<double>(cube.fact_count());
    auto const d = static_cast<double>(cube.dimension_count());
    auto const p_nonempty = static_cast<double>(s.eig.nonempty_count());
    REQUIRE(s.eig.axes.size() <= s.eig.nonempty_count() - cube.dimension_count());

    double total = 0.0;
    for (std::size_t a = 0; a < s.eig.axes.size(); ++a) {
      auto const& axis = s.eig.axes[a];
      total += axis.eigenvalue;
      CHECK(axis.eigenvalue > 0.0);
      CHECK(axis.eigenvalue <= 1.0 + 1e-12);
      if (a > 0) {
        CHECK(axis.eigenvalue <= s.eig.axes[a - 1].eigenvalue);
      }
      CHECK(eigen_residual(s.b, s.eig, a) <= 1e-8 * std::max(1.0, max_abs(axis.coordinates)));

      double centre = 0.0;
      double norm = 0.0;
      for (std::size_t j = 0; j < axis.coordinates.size(); ++j) {
        auto const w = static_cast<double>(s.eig.weights[j]);
        centre += w * axis.coordinates[j];
        norm += w * axis.coordinates[j] * axis.coordinates[j];
      }
      CHECK(std::abs(centre) <= 1e-8);
      CHECK(norm == doctest::Approx(n * d * axis.eigenvalue).epsilon(1e-10));

      double cr_total = 0.0;
      for (auto c : s.contrib.per_modality[a]) {
        CHECK(c >= 0.0);
        cr_total += c;
      }
      CHECK(std::abs(cr_total - 1.0) <= 1e-8);
      double dim_total = std::accumulate(s.contrib.per_dimension[a].begin(),
                                         s.contrib.per_dimension[a].end(), 0.0);
      CHECK(std::abs(dim_total - 1.0) <= 1e-8);
    }
    CHECK(std::abs(total - (p_nonempty - d) / d) <= 1e-8);
  }
}

TEST_CASE("empty modalities are dropped and get zero coordinates")
{
  // modality 3 of D1 and modality 1 of D2 never occur
  auto const s = solve(make_cube({3, 3}, {{0, 1}, {1, 2}, {0, 2}, {1, 1}, {0, 1}}));
  CHECK(s.eig.dropped_modalities == std::vector<std::size_t>{2, 3});
  for (auto const& axis : s.eig.axes) {
    CHECK(axis.coordinates[2] == 0.0);
    CHECK(axis.coordinates[3] == 0.0);
  }
}

TEST_CASE("all-zero weights are refused")
{
  BurtTable b;
  b.order = 2;
  b.block_offsets = {0, 1, 2};
  b.entries = {0, 0, 0, 0};
  b.diagonal_weights = {0, 0};
  CHECK_THROWS_AS(solve_eigen(b, 2), InputError);
}

TEST_CASE("single-fact cube: only the trivial structure, concentrated on its modalities")
{
  auto const cube = make_cube({2, 2}, {{0, 1}});
  auto const z = build_disjunctive(cube);
  auto const b = burt(z);
  auto const eig = solve_eigen(b, 2);
  // p' = d = 2: nothing beyond the trivial axis
  CHECK(eig.axes.empty());
  CHECK(eig.dropped_modalities == std::vector<std::size_t>{1, 2});
  // the trivial solution phi = 1 on the fact's modalities carries all the mass
  EigenSystem trivial = eig;
  trivial.axes.push_back({1.0, {1.0, 0.0, 0.0, 1.0}});
  auto const contrib = contributions(trivial, z);
  CHECK(contrib.per_modality[0] == std::vector<double>{0.5, 0.0, 0.0, 0.5});
}

TEST_CASE("permutation equivariance of eigenvalues, coordinates and contributions")
{
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 15; ++trial) {
    auto const cube = random_cube(rng, 2 + trial % 2, 2, 6, 10, 80);
    auto const perms = random_permutations(cube.shape(), rng);
    auto const moved = apply_permutations(cube, perms);
    auto const a = solve(cube);
    auto const b = solve(moved);
    REQUIRE(a.eig.axes.size() == b.eig.axes.size());
    for (std::size_t k = 0; k < a.eig.axes.size(); ++k) {
      CHECK(a.eig.axes[k].eigenvalue == doctest::Approx(b.eig.axes[k].eigenvalue).epsilon(1e-10));
      for (std::size_t t = 0; t < cube.dimension_count(); ++t) {
        CHECK(std::abs(a.contrib.per_dimension[k][t] - b.contrib.per_dimension[k][t]) < 1e-7);
        // coordinates follow the modalities (up to the axis sign)
        auto const off = a.eig.block_offsets[t];
        double same = 0.0, flipped = 0.0;
        for (std::size_t pos = 0; pos < perms[t].size(); ++pos) {
          double const x = a.eig.axes[k].coordinates[off + perms[t][pos]];
          double const y = b.eig.axes[k].coordinates[off + pos];
          same = std::max(same, std::abs(x - y));
          flipped = std::max(flipped, std::abs(x + y));
        }
        CHECK(std::min(same, flipped) < 1e-7);
      }
    }
  }
}

TEST_CASE("duplicating every fact leaves the analysis unchanged")
{
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    auto const cube = random_cube(rng, 2 + trial % 2, 2, 6, 10, 60);
    auto facts = cube.facts();
    auto const copy = facts;
    facts.insert(facts.end(), copy.begin(), copy.end());
    auto const doubled = Cube(cube.schema(), facts);
    auto const a = solve(cube);
    auto const b = solve(doubled);
    REQUIRE(a.eig.axes.size() == b.eig.axes.size());
    for (std::size_t k = 0; k < a.eig.axes.size(); ++k) {
      CHECK(a.eig.axes[k].eigenvalue == doctest::Approx(b.eig.axes[k].eigenvalue).epsilon(1e-10));
      for (std::size_t j = 0; j < a.eig.axes[k].coordinates.size(); ++j) {
        CHECK(std::abs(a.eig.axes[k].coordinates[j] - b.eig.axes[k].coordinates[j]) < 1e-7);
        CHECK(std::abs(a.contrib.per_modality[k][j] - b.contrib.per_modality[k][j]) < 1e-9);
      }
    }
  }
}

TEST_CASE("two dimensions of unequal size: the larger one owns a degenerate 1/2 eigenspace")
{
  // with p1 > p2 every vector of the 1/2 eigenspace lives on the first block
  std::mt19937_64 rng(30);
  std::vector<CellCoords> cells;
  for (int i = 0; i < 120; ++i) {
    cells.push_back({static_cast<std::uint32_t>(rng() % 7), static_cast<std::uint32_t>(rng() % 3)});
  }
  auto const s = solve(make_cube({7, 3}, cells));
  std::size_t half = 0;
  for (std::size_t a = 0; a < s.eig.axes.size(); ++a) {
    if (std::abs(s.eig.axes[a].eigenvalue - 0.5) < 1e-9) {
      ++half;
      CHECK(s.contrib.per_dimension[a][0] == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
  CHECK(half == 4);
}

TEST_CASE("debug document lists B, the diagonal and every axis")
{
  auto const s = solve(generic_cube());
  std::ostringstream out;
  write_debug_document(s.b, s.eig, out);
  auto const doc = nlohmann::json::parse(out.str());
  CHECK(doc["schemaVersion"] == 1);
  CHECK(doc["burt"].size() == 8);
  CHECK(doc["diagonal"].size() == 8);
  CHECK(doc["axes"].size() == 5);
  CHECK(doc["axes"][0]["axis"] == 1);
}
