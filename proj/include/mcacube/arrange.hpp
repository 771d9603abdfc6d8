#pragma once

#include <cstddef>
#include <iosfwd>

#include <mcacube/arrangement.hpp>
#include <mcacube/cube.hpp>
#include <mcacube/mca.hpp>

namespace mcacube {

  // Retained axis maximizing lambda * Cr(D_t). Near-equal scores (relative
  // 1e-9) fall back to the larger eigenvalue, then to the smaller axis index.
  // Throws InputError when no axis is retained.
  std::size_t select_axis(EigenSystem const& eig, Contributions const& contrib, std::size_t t);

  // Non-empty modalities of dimension t by ascending coordinate on `axis`,
  // coordinate ties in catalog order; empty modalities appended in catalog
  // order.
  Permutation order_modalities(EigenSystem const& eig, std::size_t t, std::size_t axis);

  // Same ordering when no axis is available: non-empty modalities first.
  Permutation order_without_axis(EigenSystem const& eig, std::size_t t);

  Arrangement arrange_cube(Cube const& cube, EigenOptions const& options = {});

  //
  // Arrangement document (JSON, schemaVersion 1): per dimension the chosen
  // axis (1-based, null when bypassed), eigenvalue, contribution, score and
  // the arranged modality labels.
  //
  void write_arrangement_document(Arrangement const& arrangement, CubeSchema const& schema,
                                  std::ostream& out);

  // Per-dimension permutations matching the labelled order in the document.
  // Throws InputError on unknown dimensions, labels or incomplete orders.
  std::vector<Permutation> read_arrangement_permutations(std::istream& in,
                                                         CubeSchema const& schema);
  std::vector<Permutation> read_arrangement_permutations(std::string const& path,
                                                         CubeSchema const& schema);

} // namespace mcacube
