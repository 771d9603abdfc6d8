#include <mcacube/arrangement.hpp>

#include <numeric>

namespace mcacube {

  bool
  is_permutation_of_range(Permutation const& perm, std::size_t size)
  {
    if (perm.size() != size) {
      return false;
    }
    std::vector<bool> seen(size, false);
    for (auto v : perm) {
      if (v >= size || seen[v]) {
        return false;
      }
      seen[v] = true;
    }
    return true;
  }

  Permutation
  identity_permutation(std::size_t size)
  {
    Permutation perm(size);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    return perm;
  }

  Permutation
  inverse_permutation(Permutation const& perm)
  {
    Permutation inv(perm.size());
    for (std::size_t k = 0; k < perm.size(); ++k) {
      inv[perm[k]] = k;
    }
    return inv;
  }

} // namespace mcacube
