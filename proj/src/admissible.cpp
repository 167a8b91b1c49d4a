#include "lnlab/admissible.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "lnlab/errors.hpp"
#include "lnlab/geometry.hpp"

namespace lnlab {

namespace {

constexpr double kSafetyFactor = 1.1;

bool node_valid(const NodeCertificate& c) {
  return c.chi2 > 0.5 && c.chi2 <= 1.0 && c.slack > 0.0;
}

// Smaller is worse; negative means the node fails.
double node_score(const NodeCertificate& c) {
  return std::min(c.slack, 2.0 * c.chi2 - 1.0);
}

}  // namespace

void BackgroundData::validate() const {
  if (v.empty()) throw InvalidArgument("background has no nodes");
  if (v.size() != dv_sq.size()) {
    throw InvalidArgument("v and |dv|^2 sample counts differ");
  }
  if (!(C0 >= 1.0)) throw InvalidArgument("C0 must be at least 1");
  if (!(C2 >= 0.0) || !(C3 >= 0.0)) {
    throw InvalidArgument("C2 and C3 must be non-negative");
  }
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] >= 1.0)) {
      throw InvalidArgument("auxiliary function below 1 at node " +
                            std::to_string(i));
    }
    if (!(dv_sq[i] > 0.0)) {
      throw CriticalPoint("auxiliary function has a critical point at node " +
                              std::to_string(i),
                          i);
    }
  }
}

AdmissibilityCertificate certificate_at(const BackgroundData& data, double N) {
  data.validate();
  AdmissibilityCertificate cert;
  cert.N = N;
  cert.nodes.reserve(data.v.size());
  double worst = std::numeric_limits<double>::infinity();
  double v_max = 1.0;
  for (std::size_t i = 0; i < data.v.size(); ++i) {
    const double v = data.v[i];
    const double dv = data.dv_sq[i];
    const auto b =
        rescaled_metric_spectrum_bound(N, v, dv, data.C0, data.C2, data.C3);
    NodeCertificate c{b.chi1, b.chi2, b.scale, 0.0};
    c.slack = 1.0 - 4 * data.C0 * data.C2 * std::exp(-N * v) / (N * N * dv) -
              4 * data.C0 * data.C3 / (N * dv);
    const double score = node_score(c);
    if (score < worst) {
      worst = score;
      cert.worst_node = i;
    }
    cert.nodes.push_back(c);
    v_max = std::max(v_max, v);
  }
  cert.mu_required = -std::expm1(-N * v_max);
  cert.valid = std::all_of(cert.nodes.begin(), cert.nodes.end(), node_valid);
  return cert;
}

std::vector<double> n_search_grid() {
  std::vector<double> grid;
  for (int j = 0; j <= 40; ++j) grid.push_back(std::ldexp(1.0, j) / 8.0);
  return grid;
}

AdmissibilityCertificate find_N(const BackgroundData& data) {
  data.validate();
  AdmissibilityCertificate last;
  for (double N : n_search_grid()) {
    last = certificate_at(data, N);
    if (last.valid) return last;
  }
  std::ostringstream os;
  os << "no valid N up to " << last.N << "; worst node " << last.worst_node;
  throw NoCertificate(os.str(), last.worst_node);
}

Verification verify_admissible(const BackgroundData& data,
                               const AdmissibilityCertificate& cert,
                               const ConeSpec& cone) {
  if (cert.nodes.size() != data.v.size()) {
    throw InvalidArgument("certificate does not match the background data");
  }
  const double mu = mu_plus(cone);
  Verification out{mu >= cert.mu_required,
                   std::numeric_limits<double>::infinity(),
                   std::numeric_limits<double>::infinity()};
  for (const auto& node : cert.nodes) {
    // Membership is scale invariant, so the direction (chi1, chi2, ...)
    // stands in for scale * (chi1, chi2, ...).
    Spectrum bound(std::vector<double>(cone.n, node.chi2));
    bound[0] = node.chi1;
    const Membership m = in_cone(cone, bound);
    out.ok = out.ok && m.inside;
    out.margin = std::min(out.margin, m.margin);
    out.mu_margin = std::min(out.mu_margin, node.chi1 + mu * node.chi2);
  }
  return out;
}

BackgroundData scan_background(std::span<const double> x) {
  BackgroundData data;
  for (double xi : x) {
    data.v.push_back(1.0 + xi);
    data.dv_sq.push_back(1.0);
  }
  data.validate();
  return data;
}

BackgroundData radial_background(std::span<const double> r,
                                 std::span<const double> v,
                                 std::span<const double> v_r,
                                 std::span<const double> v_rr) {
  if (r.size() != v.size() || v.size() != v_r.size() ||
      v_r.size() != v_rr.size()) {
    throw InvalidArgument("radial background samples have different sizes");
  }
  BackgroundData data;
  double hessian_min = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!(r[i] > 0.0)) {
      throw InvalidArgument("radial background needs r > 0");
    }
    data.v.push_back(v[i]);
    data.dv_sq.push_back(v_r[i] * v_r[i]);
    hessian_min = std::min({hessian_min, v_rr[i], v_r[i] / r[i]});
  }
  data.C0 = 1.0;
  data.C2 = 0.0;
  data.C3 = kSafetyFactor * -hessian_min;
  data.validate();
  return data;
}

Spectrum rescaled_spectrum_radial(double N, double r, double v, double v_r,
                                  double v_rr, int n) {
  // u = exp(-E), E = exp(Nv): u'/u = -N E v_r, u''/u = (u'/u)' + (u'/u)^2.
  const double E = std::exp(N * v);
  const double log_d1 = -N * E * v_r;
  const double log_d2 = -N * (N * E * v_r * v_r + E * v_rr) + log_d1 * log_d1;
  const auto eig = radial_schouten_spectrum(1.0, log_d1, log_d2, r, n);
  Spectrum s(std::vector<double>(n, eig.tangential));
  s[0] = eig.radial;
  return s;
}

Spectrum rescaled_spectrum_scan(double N, double v, double v_x, double v_xx,
                                int n) {
  const double E = std::exp(N * v);
  const double log_d1 = -N * E * v_x;
  const double log_d2 = -N * (N * E * v_x * v_x + E * v_xx) + log_d1 * log_d1;
  return halfspace_schouten_spectrum(1.0, log_d1, log_d2, n);
}

}  // namespace lnlab
