#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <variant>
#include <vector>

#include "lnlab/cone.hpp"

namespace lnlab {

struct Ball {
  double radius = 1.0;
};

struct Annulus {
  double inner = 0.5;
  double outer = 1.0;
};

using Domain = std::variant<Ball, Annulus>;

/// Smallest and largest radius of the domain (0 for a ball).
double inner_radius(const Domain& domain);
double outer_radius(const Domain& domain);
bool is_ball(const Domain& domain);
/// Throws InvalidArgument for non-positive radii or inner >= outer.
void validate_domain(const Domain& domain);

/// Conformal factor u(r) of g_u = u^{-2}δ sampled on a uniform radial grid.
/// Interior values are strictly positive; boundary values may be zero (the
/// u = 0 Loewner-Nirenberg data). For a ball, node 0 sits at the center
/// and the profile is extended evenly across it.
class RadialProfile {
 public:
  /// values[i] is u at inner + i h, h = (outer - inner) / (values.size() - 1).
  RadialProfile(Domain domain, std::vector<double> values);

  static RadialProfile sample(const Domain& domain, int cells,
                              const std::function<double(double)>& u);

  const Domain& domain() const noexcept { return domain_; }
  bool is_ball() const noexcept { return lnlab::is_ball(domain_); }
  int cells() const noexcept { return static_cast<int>(values_.size()) - 1; }
  std::size_t size() const noexcept { return values_.size(); }
  double spacing() const noexcept { return spacing_; }
  double radius(std::size_t i) const noexcept {
    return inner_radius(domain_) + static_cast<double>(i) * spacing_;
  }
  std::vector<double> radii() const;
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

 private:
  Domain domain_;
  std::vector<double> values_;
  double spacing_;
};

struct RadialEigenvalues {
  double radial;
  double tangential;
};

/// λ(-g_v^{-1}A_{g_v}) for g_v = v^{-2}δ, from v and its radial derivatives.
/// r = 0 applies the center limit. Throws InvalidProfile for v <= 0.
RadialEigenvalues radial_schouten_spectrum(double v, double v_r, double v_rr,
                                           double r, int n);

/// λ(-g_w^{-1}A_{g_w}) for g_w = w^{-2}δ with w = w(x_n); the normal
/// eigenvalue comes first.
Spectrum halfspace_schouten_spectrum(double w, double w_prime,
                                     double w_doubleprime, int n);

/// Per-node spectra of a radial profile: one radial eigenvalue plus n-1
/// equal tangential ones.
struct SchoutenSpectrumField {
  int n = 3;
  std::vector<double> radii;
  std::vector<double> radial;
  std::vector<double> tangential;

  std::size_t size() const noexcept { return radial.size(); }
  Spectrum at(std::size_t i) const;
};

struct DiscreteDerivatives {
  std::vector<double> first;
  std::vector<double> second;
};

/// Second-order differences: central in the interior, the even extension
/// at a ball center, one-sided (3 and 4 point) at boundary nodes.
DiscreteDerivatives discrete_derivatives(const RadialProfile& profile);

SchoutenSpectrumField spectrum_field(const RadialProfile& profile, int n);

/// λ(-g^{-1}Ric) = (n-2) λ(-g^{-1}A) + σ_1(λ(-g^{-1}A)) e.
Spectrum ricci_spectrum_from_schouten(const Spectrum& schouten, int n);

/// Componentwise lower bound on λ(-g^{-1}A_{g^N}), g^N = exp(2 exp(Nv)) g:
/// the spectrum dominates scale * (chi1, chi2, ..., chi2).
struct RescaledBound {
  double chi1;
  double chi2;
  double scale;
};

RescaledBound rescaled_metric_spectrum_bound(double N, double v, double dv_sq,
                                             double C0, double C2, double C3);

/// CSV with header r,u,radial_eig,tangential_eig.
void write_spectrum_csv(std::ostream& os, const RadialProfile& profile,
                        const SchoutenSpectrumField& field);

}  // namespace lnlab
