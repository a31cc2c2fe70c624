#pragma once

#include <cstddef>
#include <vector>

namespace contactlab {

// Subset lattice transforms over vectors indexed by bitmask. zeta maps f to
// g(U) = sum over S subset of U of f(S); mobius is its exact inverse.
inline void subset_zeta(std::vector<double>& v) {
  std::size_t n = v.size();
  for (std::size_t bit = 1; bit < n; bit <<= 1)
    for (std::size_t mask = 0; mask < n; ++mask)
      if (mask & bit) v[mask] += v[mask ^ bit];
}

inline void subset_mobius(std::vector<double>& v) {
  std::size_t n = v.size();
  for (std::size_t bit = 1; bit < n; bit <<= 1)
    for (std::size_t mask = 0; mask < n; ++mask)
      if (mask & bit) v[mask] -= v[mask ^ bit];
}

}  // namespace contactlab
