#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lnlab/cone.hpp"

namespace lnlab {

/// Background bounds and an auxiliary function v sampled at nodes.
///   C0: metric equivalence C0^{-1}δ <= g <= C0 δ and Christoffel bound;
///   C2: Schouten upper bound A_g <= C2 g;
///   C3: lower bound on the Hessian of v, ∇²_g v >= -C3.
struct BackgroundData {
  std::vector<double> v;
  std::vector<double> dv_sq;  // |dv|²_δ
  double C0 = 1.0;
  double C2 = 0.0;
  double C3 = 0.0;

  /// Throws InvalidArgument for bad constants or v < 1 and CriticalPoint
  /// where |dv|² vanishes.
  void validate() const;
};

struct NodeCertificate {
  double chi1;
  double chi2;
  double scale;
  /// 1 - 4C0C2/(N² e^{Nv} |dv|²) - 4C0C3/(N |dv|²). Positive exactly when
  /// chi1 > -chi2 + e^{-Nv}; the factored form avoids the cancellation in
  /// chi1 + chi2 at large N.
  double slack;
};

struct AdmissibilityCertificate {
  double N = 0.0;
  std::vector<NodeCertificate> nodes;
  /// 1 - exp(-N max v); any cone with μ_Γ^+ at least this is certified.
  double mu_required = 0.0;
  bool valid = false;
  std::size_t worst_node = 0;
};

/// Certificate for a fixed N (valid or not).
AdmissibilityCertificate certificate_at(const BackgroundData& data, double N);

/// Search grid for N: 2^j / 8 for j = 0..40.
std::vector<double> n_search_grid();

/// Smallest N on the search grid whose certificate is valid at every node.
/// Throws NoCertificate (with the worst node at the largest N) if none is.
AdmissibilityCertificate find_N(const BackgroundData& data);

struct Verification {
  bool ok;
  /// Minimum in_cone margin of the lower-bound vectors (chi1, chi2, ...).
  double margin;
  /// Minimum of chi1 + μ_Γ^+ chi2 over the nodes.
  double mu_margin;
};

Verification verify_admissible(const BackgroundData& data,
                               const AdmissibilityCertificate& cert,
                               const ConeSpec& cone);

/// v = 1 + x along a scan direction in flat space: |dv|² = 1, zero Hessian.
BackgroundData scan_background(std::span<const double> x);

/// Radial auxiliary function on a Euclidean annulus, given v, v_r, v_rr at
/// radii r > 0. Constants are extracted from the samples with a 1.1 safety
/// factor: C0 = 1, C2 = 0, C3 = 1.1 max(0, -min(v_rr, v_r / r)).
BackgroundData radial_background(std::span<const double> r,
                                 std::span<const double> v,
                                 std::span<const double> v_r,
                                 std::span<const double> v_rr);

/// λ(-δ^{-1}A_{g^N}) computed directly from the conformal factor
/// (finite while e^{2Nv} is representable)
/// u = exp(-exp(Nv)) of g^N, for a radial v over flat space.
Spectrum rescaled_spectrum_radial(double N, double r, double v, double v_r,
                                  double v_rr, int n);

/// Same for v = v(x_n) (scan direction), through the half-space formula.
Spectrum rescaled_spectrum_scan(double N, double v, double v_x, double v_xx,
                                int n);

}  // namespace lnlab
