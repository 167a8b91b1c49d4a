#include "lnlab/geometry.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "lnlab/detail/format.hpp"
#include "lnlab/detail/radial.hpp"
#include "lnlab/errors.hpp"

namespace lnlab {

double inner_radius(const Domain& domain) {
  if (const auto* a = std::get_if<Annulus>(&domain)) return a->inner;
  return 0.0;
}

double outer_radius(const Domain& domain) {
  if (const auto* a = std::get_if<Annulus>(&domain)) return a->outer;
  return std::get<Ball>(domain).radius;
}

bool is_ball(const Domain& domain) {
  return std::holds_alternative<Ball>(domain);
}

void validate_domain(const Domain& domain) {
  if (const auto* b = std::get_if<Ball>(&domain)) {
    if (!(b->radius > 0.0 && std::isfinite(b->radius))) {
      throw InvalidArgument("ball radius must be positive");
    }
    return;
  }
  const auto& a = std::get<Annulus>(domain);
  if (!(a.inner > 0.0 && a.inner < a.outer && std::isfinite(a.outer))) {
    throw InvalidArgument("annulus requires 0 < inner < outer");
  }
}

RadialProfile::RadialProfile(Domain domain, std::vector<double> values)
    : domain_(domain), values_(std::move(values)) {
  validate_domain(domain_);
  if (values_.size() < 4) {
    throw InvalidProfile("a radial profile needs at least 4 nodes");
  }
  spacing_ = (outer_radius(domain_) - inner_radius(domain_)) /
             static_cast<double>(values_.size() - 1);
  const std::size_t last = values_.size() - 1;
  for (std::size_t i = 0; i <= last; ++i) {
    const double u = values_[i];
    const bool boundary = (i == last) || (i == 0 && !is_ball());
    if (!std::isfinite(u) || u < 0.0 || (!boundary && u == 0.0)) {
      std::ostringstream os;
      os << "profile value " << u << " at node " << i
         << " violates positivity";
      throw InvalidProfile(os.str());
    }
  }
}

RadialProfile RadialProfile::sample(const Domain& domain, int cells,
                                    const std::function<double(double)>& u) {
  validate_domain(domain);
  if (cells < 3) throw InvalidArgument("grid needs at least 3 cells");
  const double a = inner_radius(domain);
  const double h = (outer_radius(domain) - a) / cells;
  std::vector<double> values(cells + 1);
  for (int i = 0; i <= cells; ++i) values[i] = u(a + i * h);
  return RadialProfile(domain, std::move(values));
}

std::vector<double> RadialProfile::radii() const {
  std::vector<double> r(values_.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = radius(i);
  return r;
}

RadialEigenvalues radial_schouten_spectrum(double v, double v_r, double v_rr,
                                           double r, int n) {
  if (n < 3) throw InvalidArgument("dimension must be at least 3");
  if (!(v > 0.0)) throw InvalidProfile("conformal factor must be positive");
  if (r < 0.0) throw InvalidArgument("radius must be non-negative");
  const auto p = detail::radial_pair<double>(v, v_r, v_rr, r);
  return {p.radial, p.tangential};
}

Spectrum halfspace_schouten_spectrum(double w, double w_prime,
                                     double w_doubleprime, int n) {
  if (n < 3) throw InvalidArgument("dimension must be at least 3");
  if (!(w > 0.0)) throw InvalidProfile("conformal factor must be positive");
  const double half_sq = 0.5 * w_prime * w_prime;
  Spectrum s(std::vector<double>(n, half_sq));
  s[0] = half_sq - w * w_doubleprime;
  return s;
}

Spectrum SchoutenSpectrumField::at(std::size_t i) const {
  Spectrum s(std::vector<double>(n, tangential.at(i)));
  s[0] = radial.at(i);
  return s;
}

DiscreteDerivatives discrete_derivatives(const RadialProfile& profile) {
  const auto u = profile.values();
  const std::size_t last = u.size() - 1;
  const double h = profile.spacing();
  const double h2 = h * h;
  DiscreteDerivatives d{std::vector<double>(u.size()),
                        std::vector<double>(u.size())};
  for (std::size_t i = 1; i < last; ++i) {
    d.first[i] = (u[i + 1] - u[i - 1]) / (2 * h);
    d.second[i] = (u[i + 1] - 2 * u[i] + u[i - 1]) / h2;
  }
  if (profile.is_ball()) {
    d.first[0] = 0.0;
    d.second[0] = 2 * (u[1] - u[0]) / h2;
  } else {
    d.first[0] = (-3 * u[0] + 4 * u[1] - u[2]) / (2 * h);
    d.second[0] = (2 * u[0] - 5 * u[1] + 4 * u[2] - u[3]) / h2;
  }
  d.first[last] = (3 * u[last] - 4 * u[last - 1] + u[last - 2]) / (2 * h);
  d.second[last] =
      (2 * u[last] - 5 * u[last - 1] + 4 * u[last - 2] - u[last - 3]) / h2;
  return d;
}

SchoutenSpectrumField spectrum_field(const RadialProfile& profile, int n) {
  if (n < 3) throw InvalidArgument("dimension must be at least 3");
  const auto d = discrete_derivatives(profile);
  SchoutenSpectrumField field;
  field.n = n;
  field.radii = profile.radii();
  field.radial.resize(profile.size());
  field.tangential.resize(profile.size());
  for (std::size_t i = 0; i < profile.size(); ++i) {
    // Boundary nodes may carry u = 0, where the formula is still regular.
    const auto p = detail::radial_pair<double>(profile[i], d.first[i],
                                               d.second[i], field.radii[i]);
    field.radial[i] = p.radial;
    field.tangential[i] = p.tangential;
  }
  return field;
}

Spectrum ricci_spectrum_from_schouten(const Spectrum& schouten, int n) {
  if (schouten.size() != n) {
    throw InvalidArgument("spectrum size does not match dimension");
  }
  double trace = 0.0;
  for (double x : schouten.values()) trace += x;
  Spectrum out = schouten;
  for (int i = 0; i < n; ++i) out[i] = (n - 2) * schouten[i] + trace;
  return out;
}

RescaledBound rescaled_metric_spectrum_bound(double N, double v, double dv_sq,
                                             double C0, double C2, double C3) {
  if (!(dv_sq > 0.0)) {
    throw CriticalPoint("auxiliary function has a critical point", 0);
  }
  if (!(N > 0.0)) throw InvalidArgument("N must be positive");
  if (!(v >= 1.0)) throw InvalidArgument("auxiliary function must be >= 1");
  const double growth = std::exp(N * v);  // e^{Nv}; may overflow to inf
  const double curvature_term = 2 * C0 * C2 / (N * N * growth * growth * dv_sq);
  const double hessian_term = 2 * C0 * C3 / (N * growth * dv_sq);
  RescaledBound b;
  b.chi2 = 1.0 - curvature_term - hessian_term;
  b.chi1 = -b.chi2 + 2.0 / growth - 2 * curvature_term - 2 * hessian_term;
  b.scale = 0.5 * N * N * growth * growth * dv_sq / C0;
  return b;
}

void write_spectrum_csv(std::ostream& os, const RadialProfile& profile,
                        const SchoutenSpectrumField& field) {
  os << "r,u,radial_eig,tangential_eig\n";
  for (std::size_t i = 0; i < profile.size(); ++i) {
    os << detail::format_real(profile.radius(i)) << ','
       << detail::format_real(profile[i]) << ','
       << detail::format_real(field.radial[i]) << ','
       << detail::format_real(field.tangential[i]) << '\n';
  }
}

}  // namespace lnlab
