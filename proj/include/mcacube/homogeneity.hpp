#pragma once

//
// Neighbourhood-based homogeneity of the full cells of a cube.
//
// Two distinct cells are neighbours when every coordinate differs by at most
// one (Moore neighbourhood, no wraparound). The raw index IHB counts ordered
// pairs of full neighbours; IH divides it by the all-full maximum.
//

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include <mcacube/arrangement.hpp>
#include <mcacube/cube.hpp>

namespace mcacube {

  std::vector<CellCoords> neighbors(CellCoords const& cell, Shape const& shape);

  // number of full neighbours of a full cell, 0 for an empty cell
  std::uint64_t delta(Cube const& cube, CellCoords const& cell);

  std::uint64_t ihb(Shape const& shape, std::span<std::uint64_t const> occupied);
  std::uint64_t ihb(Cube const& cube);

  // prod(3 p_t - 2) - prod(p_t)
  std::uint64_t ihb_max(Shape const& shape);

  // Throws InputError("degenerate shape") when ihb_max is 0.
  double ih(Shape const& shape, std::span<std::uint64_t const> occupied);
  double ih(Cube const& cube);

  // Throws NumericalError when ih_initial is 0.
  double gain(double ih_initial, double ih_arranged);

  struct HomogeneityReport {
    std::uint64_t ihb = 0;
    std::uint64_t ihb_max = 0;
    double ih = 0.0;
    double sparsity = 0.0;
    std::optional<double> gain_vs_baseline;
  };

  HomogeneityReport homogeneity_report(Cube const& cube);

  void write_report_document(HomogeneityReport const& report, std::ostream& out);

  struct BruteForceResult {
    Arrangement arrangement;
    double ih = 0.0;
    std::uint64_t configurations = 0;
  };

  // Exhaustive search over every per-dimension permutation. Returns the
  // lexicographically smallest permutation tuple attaining the maximal IH.
  // Throws InputError when prod(p_t!) exceeds `limit`.
  BruteForceResult brute_force_best(Cube const& cube, std::uint64_t limit = 1'000'000);

} // namespace mcacube
