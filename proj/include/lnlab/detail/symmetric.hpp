#pragma once

// Scalar-generic kernels behind the cone algebra. The public API in
// cone.hpp works in double; the solver instantiates these for long double
// so that residuals of fine-grid profiles stay above the rounding floor.

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <span>

namespace lnlab {

inline constexpr int kMaxDimension = 64;

/// Strict-interior threshold on the normalized membership margin.
inline constexpr double kMarginFloor = 1e-12;

namespace testing {

/// Relative error injected into every elementary symmetric value. Zero in
/// normal operation; the acceptance harness uses it as a mutation check.
inline std::atomic<double> sigma_perturbation{0.0};

}  // namespace testing

namespace detail {

inline double binomial(int n, int j) {
  if (j < 0 || j > n) return 0.0;
  double b = 1.0;
  for (int i = 1; i <= j; ++i) b = b * (n - j + i) / i;
  return std::round(b);
}

/// c_{n,k} = C(n,k)^{-1/k}, so that c σ_k(e)^{1/k} = 1.
inline double garding_normalization(int n, int k) {
  return std::pow(binomial(n, k), -1.0 / k);
}

template <std::floating_point T>
using Buffer = std::array<T, kMaxDimension + 1>;

/// Coefficients e[0..kmax] of prod_i (t + x_i), read from the top:
/// e[j] = σ_j(x). Terms above x.size() are zero.
template <std::floating_point T>
void elementary_symmetric(std::span<const T> x, int kmax, std::span<T> e) {
  std::fill(e.begin(), e.begin() + kmax + 1, T(0));
  e[0] = T(1);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const int top = std::min<int>(static_cast<int>(i) + 1, kmax);
    for (int j = top; j >= 1; --j) e[j] += x[i] * e[j - 1];
  }
  const double eps = testing::sigma_perturbation.load(std::memory_order_relaxed);
  if (eps != 0.0) {
    for (int j = 1; j <= kmax; ++j) e[j] *= T(1) + static_cast<T>(eps);
  }
}

/// σ_k of x with entry `skip` removed.
template <std::floating_point T>
T sigma_excluding(std::span<const T> x, std::size_t skip, int k) {
  Buffer<T> e{};
  e[0] = T(1);
  int seen = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i == skip) continue;
    ++seen;
    const int top = std::min(seen, k);
    for (int j = top; j >= 1; --j) e[j] += x[i] * e[j - 1];
  }
  const double eps = testing::sigma_perturbation.load(std::memory_order_relaxed);
  if (eps != 0.0 && k >= 1) e[k] *= T(1) + static_cast<T>(eps);
  return e[k];
}

template <std::floating_point T>
T sum(std::span<const T> x) {
  T s = 0;
  for (T v : x) s += v;
  return s;
}

/// Copies x into a buffer in ascending order. Symmetric functions are then
/// evaluated on a canonical ordering, so permuting the input cannot change
/// the rounding.
template <std::floating_point T>
Buffer<T> sorted_copy(std::span<const T> x) {
  Buffer<T> out{};
  std::copy(x.begin(), x.end(), out.begin());
  std::sort(out.begin(), out.begin() + x.size());
  return out;
}

/// λ^τ = τλ + (1-τ)σ_1(λ)e.
template <std::floating_point T>
void tau_deform(std::span<const T> x, T tau, std::span<T> out) {
  const T s = sum(x);
  for (std::size_t i = 0; i < x.size(); ++i)
    out[i] = tau * x[i] + (T(1) - tau) * s;
}

template <std::floating_point T>
struct MembershipT {
  bool inside;
  T margin;
};

/// Membership of x in Γ_k^τ. The margin is min_j σ_j(x^τ) scaled by
/// C(n,j) max(1, |x^τ|_inf)^j.
template <std::floating_point T>
MembershipT<T> membership(std::span<const T> x, int k, T tau) {
  const int n = static_cast<int>(x.size());
  const Buffer<T> xs = sorted_copy(x);
  Buffer<T> mu{};
  tau_deform<T>(std::span<const T>(xs.data(), x.size()), tau,
                std::span<T>(mu.data(), x.size()));
  Buffer<T> e{};
  elementary_symmetric<T>(std::span<const T>(mu.data(), x.size()), k,
                          std::span<T>(e));
  T scale = 1;
  for (int i = 0; i < n; ++i) scale = std::max(scale, std::abs(mu[i]));
  bool inside = true;
  T margin = std::numeric_limits<T>::infinity();
  T power = 1;
  for (int j = 1; j <= k; ++j) {
    power *= scale;
    inside = inside && e[j] > T(0);
    margin = std::min(margin, e[j] / (static_cast<T>(binomial(n, j)) * power));
  }
  return {inside, margin};
}

/// f^τ(x) = c_{n,k} σ_k(x^τ)^{1/k} / (τ + n(1-τ)). Caller checks membership.
template <std::floating_point T>
T f_value(std::span<const T> x, int k, T tau) {
  const int n = static_cast<int>(x.size());
  const Buffer<T> xs = sorted_copy(x);
  Buffer<T> mu{};
  tau_deform<T>(std::span<const T>(xs.data(), x.size()), tau,
                std::span<T>(mu.data(), x.size()));
  Buffer<T> e{};
  elementary_symmetric<T>(std::span<const T>(mu.data(), x.size()), k,
                          std::span<T>(e));
  // c_{n,k} σ_k^{1/k} = (σ_k / C(n,k))^{1/k}; one rounding fewer, f(e) = 1
  const T binom = static_cast<T>(binomial(n, k));
  return std::pow(e[k] / binom, T(1) / T(k)) / (tau + T(n) * (T(1) - tau));
}

/// Gradient of f^τ: chain rule through x^τ and σ_k^{1/k}.
template <std::floating_point T>
void f_gradient(std::span<const T> x, int k, T tau, std::span<T> grad) {
  const std::size_t n = x.size();
  Buffer<T> mu{};
  tau_deform<T>(x, tau, std::span<T>(mu.data(), n));
  const std::span<const T> mus(mu.data(), n);
  Buffer<T> e{};
  elementary_symmetric<T>(mus, k, std::span<T>(e));
  const T c = static_cast<T>(garding_normalization(static_cast<int>(n), k));
  const T outer = c / T(k) * std::pow(e[k], T(1) / T(k) - T(1));
  T total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    grad[i] = outer * sigma_excluding<T>(mus, i, k - 1);
    total += grad[i];
  }
  const T denom = tau + T(n) * (T(1) - tau);
  for (std::size_t i = 0; i < n; ++i)
    grad[i] = (tau * grad[i] + (T(1) - tau) * total) / denom;
}

}  // namespace detail
}  // namespace lnlab
