#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace mcacube {

  // permutation[k] is the original (catalog) index of the modality placed
  // at position k.
  using Permutation = std::vector<std::size_t>;

  struct DimensionArrangement {
    std::size_t dimension = 0;
    // 0-based index into EigenSystem::axes; empty when the dimension
    // bypassed axis selection.
    std::optional<std::size_t> chosen_axis;
    double eigenvalue = 0.0;
    double contribution = 0.0;
    double score = 0.0;
    Permutation permutation;
  };

  struct Arrangement {
    std::vector<DimensionArrangement> per_dimension;
    // catalog labels of the cube the arrangement was computed on
    std::vector<std::vector<std::string>> initial_orders;
  };

  bool is_permutation_of_range(Permutation const& perm, std::size_t size);

  Permutation identity_permutation(std::size_t size);

  Permutation inverse_permutation(Permutation const& perm);

} // namespace mcacube
