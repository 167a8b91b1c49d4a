#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace lnlab {

/// Eigenvalues λ(-g^{-1}A_g) at a point. Downstream quantities are symmetric
/// functions of the entries, so their order carries no meaning.
class Spectrum {
 public:
  Spectrum() = default;
  explicit Spectrum(std::vector<double> values) : values_(std::move(values)) {}
  Spectrum(std::initializer_list<double> values) : values_(values) {}

  /// The all-ones vector e in dimension n.
  static Spectrum ones(int n) { return Spectrum(std::vector<double>(n, 1.0)); }
  /// (-mu, 1, ..., 1).
  static Spectrum tilted(int n, double mu);

  int size() const noexcept { return static_cast<int>(values_.size()); }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  Spectrum scaled(double t) const;

  friend bool operator==(const Spectrum&, const Spectrum&) = default;

 private:
  std::vector<double> values_;
};

/// Gårding cone Γ_k^+ in R^n, or its deformation Γ^τ = {λ : λ^τ ∈ Γ_k^+}.
/// tau = 1 is the undeformed cone, tau = 0 collapses to Γ_1^+. The paired
/// defining function is f^τ with f = c_{n,k} σ_k^{1/k}.
struct ConeSpec {
  int n = 3;
  int k = 1;
  double tau = 1.0;

  static ConeSpec garding(int n, int k) { return ConeSpec{n, k, 1.0}; }
  static ConeSpec deformed(int n, int k, double tau) {
    return ConeSpec{n, k, tau};
  }

  /// Throws InvalidArgument unless 3 <= n <= kMaxDimension, 1 <= k <= n and
  /// 0 <= tau <= 1.
  void validate() const;

  friend bool operator==(const ConeSpec&, const ConeSpec&) = default;
};

struct Membership {
  bool inside;
  /// min_j σ_j(λ^τ) / (C(n,j) max(1, |λ^τ|_inf)^j); positive iff inside.
  double margin;
};

/// σ_j(λ) by the product-expansion recurrence. Requires 1 <= j <= n.
double sigma_k(const Spectrum& lambda, int j);

Spectrum tau_deform(const Spectrum& lambda, double tau);

Membership in_cone(const ConeSpec& cone, const Spectrum& lambda);

/// f^τ(λ). Throws DomainError (carrying the margin) outside the cone.
double f_eval(const ConeSpec& cone, const Spectrum& lambda);

/// ∇f^τ(λ). Throws DegeneratePoint when the margin is below kMarginFloor.
Spectrum grad_f(const ConeSpec& cone, const Spectrum& lambda);

/// μ_Γ^+: the value where membership of (-μ, 1, ..., 1) flips, bracketed in
/// [0, n-1] and bisected a fixed 60 times.
double mu_plus(const ConeSpec& cone);

/// Whether (1, 0, ..., 0) lies in the open cone. Decides the smooth regime.
bool contains_ray_e1(const ConeSpec& cone);

/// c_{n,k} = C(n,k)^{-1/k}.
double garding_normalization(int n, int k);

}  // namespace lnlab
