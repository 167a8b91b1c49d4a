#include "lnlab/cone.hpp"

#include <cmath>
#include <sstream>

#include "lnlab/detail/symmetric.hpp"
#include "lnlab/errors.hpp"

namespace lnlab {

namespace {

void require_dimension(const ConeSpec& cone, const Spectrum& lambda) {
  cone.validate();
  if (lambda.size() != cone.n) {
    std::ostringstream os;
    os << "spectrum has " << lambda.size() << " entries, cone dimension is "
       << cone.n;
    throw InvalidArgument(os.str());
  }
}

}  // namespace

Spectrum Spectrum::tilted(int n, double mu) {
  Spectrum s = ones(n);
  s[0] = -mu;
  return s;
}

Spectrum Spectrum::scaled(double t) const {
  Spectrum out = *this;
  for (double& v : out.values_) v *= t;
  return out;
}

void ConeSpec::validate() const {
  if (n < 3 || n > kMaxDimension) {
    throw InvalidArgument("cone dimension n must lie in [3, " +
                          std::to_string(kMaxDimension) + "], got " +
                          std::to_string(n));
  }
  if (k < 1 || k > n) {
    throw InvalidArgument("Gårding order k must lie in [1, n], got " +
                          std::to_string(k));
  }
  if (!(tau >= 0.0 && tau <= 1.0)) {
    throw InvalidArgument("tau must lie in [0, 1]");
  }
}

double garding_normalization(int n, int k) {
  return detail::garding_normalization(n, k);
}

double sigma_k(const Spectrum& lambda, int j) {
  const int n = lambda.size();
  if (j < 1 || j > n) {
    throw InvalidArgument("sigma_k: order " + std::to_string(j) +
                          " outside [1, " + std::to_string(n) + "]");
  }
  std::vector<double> e(j + 1);
  detail::elementary_symmetric<double>(lambda.values(), j, e);
  return e[j];
}

Spectrum tau_deform(const Spectrum& lambda, double tau) {
  if (!(tau >= 0.0 && tau <= 1.0)) {
    throw InvalidArgument("tau_deform: tau must lie in [0, 1]");
  }
  std::vector<double> out(lambda.size());
  detail::tau_deform<double>(lambda.values(), tau, out);
  return Spectrum(std::move(out));
}

Membership in_cone(const ConeSpec& cone, const Spectrum& lambda) {
  require_dimension(cone, lambda);
  const auto m = detail::membership<double>(lambda.values(), cone.k, cone.tau);
  return {m.inside, m.margin};
}

double f_eval(const ConeSpec& cone, const Spectrum& lambda) {
  const Membership m = in_cone(cone, lambda);
  if (!m.inside) {
    throw DomainError("f_eval: spectrum outside the cone", m.margin);
  }
  return detail::f_value<double>(lambda.values(), cone.k, cone.tau);
}

Spectrum grad_f(const ConeSpec& cone, const Spectrum& lambda) {
  const Membership m = in_cone(cone, lambda);
  if (!m.inside || m.margin < kMarginFloor) {
    throw DegeneratePoint("grad_f: spectrum too close to the cone boundary",
                          m.margin);
  }
  std::vector<double> g(lambda.size());
  detail::f_gradient<double>(lambda.values(), cone.k, cone.tau, g);
  return Spectrum(std::move(g));
}

double mu_plus(const ConeSpec& cone) {
  cone.validate();
  double lo = 0.0;
  double hi = cone.n - 1.0;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (in_cone(cone, Spectrum::tilted(cone.n, mid)).inside) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

bool contains_ray_e1(const ConeSpec& cone) {
  Spectrum e1(std::vector<double>(cone.n, 0.0));
  e1[0] = 1.0;
  return in_cone(cone, e1).inside;
}

}  // namespace lnlab
