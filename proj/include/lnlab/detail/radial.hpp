#pragma once

#include <concepts>

namespace lnlab::detail {

template <std::floating_point T>
struct RadialPair {
  T radial;
  T tangential;
};

/// Eigenvalues of -g_v^{-1}A_{g_v} for g_v = v^{-2}δ with v = v(r):
/// radial ½v_r² - v v_rr, tangential ½v_r² - v v_r / r (multiplicity n-1).
/// At r = 0 the smooth even limit v_r/r -> v_rr is used instead.
template <std::floating_point T>
RadialPair<T> radial_pair(T v, T v_r, T v_rr, T r) {
  if (r == T(0)) {
    return {-v * v_rr, -v * v_rr};
  }
  const T half_sq = v_r * v_r / T(2);
  return {half_sq - v * v_rr, half_sq - v * v_r / r};
}

}  // namespace lnlab::detail
