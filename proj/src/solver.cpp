#include "lnlab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>

#include "lnlab/detail/radial.hpp"
#include "lnlab/detail/symmetric.hpp"
#include "lnlab/errors.hpp"

extern "C" void dgtsv_(const int* n, const int* nrhs, double* dl, double* d,
                       double* du, double* b, const int* ldb, int* info);

namespace lnlab {

namespace {

// Residuals are formed in extended precision: on a 4000-cell grid the
// rounding noise of u_{i+1} - 2u_i + u_{i-1} over h² alone exceeds 1e-10 in
// double.
using Real = long double;

enum class NodeKind { Center, Interior, Boundary };

struct Evaluation {
  std::vector<Real> F;
  Real sup = 0;
  Real norm2 = 0;
  double margin = std::numeric_limits<double>::infinity();
  std::size_t worst = 0;
  bool inside = true;      // every equation row in Γ^τ
  bool admissible = true;  // inside, above the margin floor, u > 0
};

class Discretization {
 public:
  explicit Discretization(const ProblemSpec& spec)
      : spec_(spec),
        nodes_(static_cast<std::size_t>(spec.grid) + 1),
        inner_(inner_radius(spec.domain)),
        h_((static_cast<Real>(outer_radius(spec.domain)) - inner_) /
           static_cast<Real>(spec.grid)),
        ball_(is_ball(spec.domain)),
        psi_(nodes_) {
    for (std::size_t i = 0; i < nodes_; ++i)
      psi_[i] = spec.rhs(static_cast<double>(radius(i)));
  }

  std::size_t nodes() const { return nodes_; }
  Real spacing() const { return h_; }

  Real radius(std::size_t i) const {
    return inner_ + static_cast<Real>(i) * h_;
  }

  NodeKind kind(std::size_t i) const {
    if (i + 1 == nodes_) return NodeKind::Boundary;
    if (i == 0) return ball_ ? NodeKind::Center : NodeKind::Boundary;
    return NodeKind::Interior;
  }

  double boundary_value(std::size_t i) const {
    return i == 0 ? spec_.delta_inner : spec_.delta_outer;
  }

  template <typename T>
  detail::RadialPair<T> local_pair(std::span<const T> u, std::size_t i) const {
    const T h = static_cast<T>(h_);
    if (kind(i) == NodeKind::Center) {
      const T q = T(2) * (u[1] - u[0]) / (h * h);
      return detail::radial_pair<T>(u[0], T(0), q, T(0));
    }
    const T p = (u[i + 1] - u[i - 1]) / (T(2) * h);
    const T q = (u[i + 1] - T(2) * u[i] + u[i - 1]) / (h * h);
    return detail::radial_pair<T>(u[i], p, q, static_cast<T>(radius(i)));
  }

  template <typename T>
  T row(std::span<const T> u, std::size_t i,
        detail::MembershipT<T>& member) const {
    if (kind(i) == NodeKind::Boundary) {
      member = {true, std::numeric_limits<T>::infinity()};
      return u[i] - static_cast<T>(boundary_value(i));
    }
    const auto pair = local_pair<T>(u, i);
    detail::Buffer<T> lam{};
    const auto n = static_cast<std::size_t>(spec_.n);
    lam[0] = pair.radial;
    std::fill(lam.begin() + 1, lam.begin() + n, pair.tangential);
    const std::span<const T> spectrum(lam.data(), n);
    const T tau = static_cast<T>(spec_.tau);
    member = detail::membership<T>(spectrum, spec_.k, tau);
    if (!member.inside) return std::numeric_limits<T>::quiet_NaN();
    return detail::f_value<T>(spectrum, spec_.k, tau) -
           static_cast<T>(psi_[i]);
  }

  Evaluation evaluate(std::span<const Real> u, double floor) const {
    Evaluation ev;
    ev.F.resize(nodes_);
    for (std::size_t i = 0; i < nodes_; ++i) {
      detail::MembershipT<Real> member{};
      ev.F[i] = row<Real>(u, i, member);
      const bool boundary = kind(i) == NodeKind::Boundary;
      if (!(boundary ? u[i] >= 0 : u[i] > 0)) {
        ev.admissible = false;
        ev.inside = ev.inside && boundary;
      }
      if (boundary) continue;
      const double margin = static_cast<double>(member.margin);
      if (!(margin >= ev.margin)) {
        ev.margin = margin;
        ev.worst = i;
      }
      if (!member.inside) {
        ev.inside = false;
        ev.admissible = false;
      } else if (margin < floor) {
        ev.admissible = false;
      }
    }
    if (ev.inside) {
      for (Real f : ev.F) {
        ev.sup = std::max(ev.sup, std::abs(f));
        ev.norm2 += f * f;
      }
      ev.norm2 = std::sqrt(ev.norm2);
    } else {
      ev.sup = ev.norm2 = std::numeric_limits<Real>::infinity();
    }
    return ev;
  }

  Tridiagonal analytic_jacobian(std::span<const Real> ul) const {
    std::vector<double> u(ul.begin(), ul.end());
    const double h = static_cast<double>(h_);
    const double h2 = h * h;
    const auto n = static_cast<std::size_t>(spec_.n);
    Tridiagonal J{std::vector<double>(nodes_ - 1), std::vector<double>(nodes_),
                  std::vector<double>(nodes_ - 1)};
    for (std::size_t i = 0; i < nodes_; ++i) {
      const NodeKind node = kind(i);
      if (node == NodeKind::Boundary) {
        J.diag[i] = 1.0;
        continue;
      }
      const auto pair = local_pair<double>(u, i);
      detail::Buffer<double> lam{};
      lam[0] = pair.radial;
      std::fill(lam.begin() + 1, lam.begin() + n, pair.tangential);
      detail::Buffer<double> g{};
      detail::f_gradient<double>(std::span<const double>(lam.data(), n),
                                 spec_.k, spec_.tau,
                                 std::span<double>(g.data(), n));
      const double g_radial = g[0];
      const double g_tangential =
          std::accumulate(g.begin() + 1, g.begin() + n, 0.0);
      if (node == NodeKind::Center) {
        // λ = -u_0 q e with q = 2(u_1 - u_0)/h².
        const double q = 2 * (u[1] - u[0]) / h2;
        const double g_all = g_radial + g_tangential;
        J.diag[0] = g_all * (-q + 2 * u[0] / h2);
        J.upper[0] = g_all * (-2 * u[0] / h2);
        continue;
      }
      const double r = static_cast<double>(radius(i));
      const double p = (u[i + 1] - u[i - 1]) / (2 * h);
      const double q = (u[i + 1] - 2 * u[i] + u[i - 1]) / h2;
      const double w = u[i];
      // ρ = ½p² - w q and t = ½p² - w p / r, differentiated in
      // (u_{i-1}, u_i, u_{i+1}).
      const double rho_minus = -p / (2 * h) - w / h2;
      const double rho_center = -q + 2 * w / h2;
      const double rho_plus = p / (2 * h) - w / h2;
      const double t_minus = -p / (2 * h) + w / (2 * h * r);
      const double t_center = -p / r;
      const double t_plus = p / (2 * h) - w / (2 * h * r);
      J.lower[i - 1] = g_radial * rho_minus + g_tangential * t_minus;
      J.diag[i] = g_radial * rho_center + g_tangential * t_center;
      J.upper[i] = g_radial * rho_plus + g_tangential * t_plus;
    }
    return J;
  }

  Tridiagonal finite_difference_jacobian(std::span<const Real> ul) const {
    std::vector<Real> u(ul.begin(), ul.end());
    Tridiagonal J{std::vector<double>(nodes_ - 1), std::vector<double>(nodes_),
                  std::vector<double>(nodes_ - 1)};
    const auto partial = [&](std::size_t i, std::size_t j) {
      const Real saved = u[j];
      const Real eps = Real(1e-7) * std::max(std::abs(saved), Real(1e-6));
      detail::MembershipT<Real> member{};
      u[j] = saved + eps;
      const Real up = row<Real>(u, i, member);
      u[j] = saved - eps;
      const Real down = row<Real>(u, i, member);
      u[j] = saved;
      return static_cast<double>((up - down) / (2 * eps));
    };
    for (std::size_t i = 0; i < nodes_; ++i) {
      J.diag[i] = partial(i, i);
      if (i > 0) J.lower[i - 1] = partial(i, i - 1);
      if (i + 1 < nodes_) J.upper[i] = partial(i, i + 1);
    }
    return J;
  }

 private:
  ProblemSpec spec_;
  std::size_t nodes_;
  Real inner_;
  Real h_;
  bool ball_;
  std::vector<double> psi_;
};

bool solve_tridiagonal(Tridiagonal J, std::vector<double>& rhs) {
  const int n = static_cast<int>(J.diag.size());
  const int nrhs = 1;
  int info = 0;
  dgtsv_(&n, &nrhs, J.lower.data(), J.diag.data(), J.upper.data(), rhs.data(),
         &n, &info);
  return info == 0;
}

void require_matching_grid(const RadialProfile& profile,
                           const ProblemSpec& spec) {
  if (profile.cells() != spec.grid ||
      profile.is_ball() != is_ball(spec.domain) ||
      inner_radius(profile.domain()) != inner_radius(spec.domain) ||
      outer_radius(profile.domain()) != outer_radius(spec.domain)) {
    throw InvalidArgument("profile grid does not match the problem");
  }
}

std::vector<Real> extended(const RadialProfile& profile) {
  return {profile.values().begin(), profile.values().end()};
}

RadialProfile to_profile(const ProblemSpec& spec, std::span<const Real> u) {
  return RadialProfile(spec.domain, std::vector<double>(u.begin(), u.end()));
}

SolveReport make_report(const ProblemSpec& spec, std::span<const Real> u,
                        const Evaluation& ev) {
  SolveReport report{to_profile(spec, u), 0.0, 0.0, 0.0, 0.0, 0.0, 0.0,
                     0.0, 0.0, 0.0, 0, 0, false, {}};
  const auto& profile = report.profile;
  report.tau = spec.tau;
  report.delta_inner = is_ball(spec.domain) ? 0.0 : spec.delta_inner;
  report.delta_outer = spec.delta_outer;
  report.residual_sup = static_cast<double>(ev.sup);
  report.admissibility_margin_min = ev.margin;
  report.boundary_slope = boundary_slope(profile);
  const auto [lo, hi] =
      std::minmax_element(profile.values().begin(), profile.values().end());
  report.c0_min = *lo;
  report.c0_max = *hi;
  const auto d = discrete_derivatives(profile);
  for (double g : d.first) report.grad_sup = std::max(report.grad_sup, std::abs(g));
  return report;
}

// Hyperbolic ball model s (R² - r²)/(2R) and its exterior counterpart
// s (r² - A²)/(2A); both have spectrum (s²/2) e.
double ball_model(double r, double R) { return (R * R - r * r) / (2 * R); }
double exterior_model(double r, double A) { return (r * r - A * A) / (2 * A); }

// R with ball_model(b, R) = d.
double fit_ball(double b, double d) { return d + std::sqrt(d * d + b * b); }
// A with exterior_model(a, A) = d.
double fit_exterior(double a, double d) { return -d + std::sqrt(d * d + a * a); }

}  // namespace

double RadialRhs::operator()(double r) const {
  double value = 0.0;
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it)
    value = value * r + *it;
  return value;
}

bool RadialRhs::is_constant() const {
  return std::all_of(coefficients.begin() + std::min<std::size_t>(1, coefficients.size()),
                     coefficients.end(), [](double c) { return c == 0.0; });
}

ProblemSpec ProblemSpec::with_tau(double t) const {
  ProblemSpec out = *this;
  out.tau = t;
  return out;
}

ProblemSpec ProblemSpec::with_delta(double delta) const {
  ProblemSpec out = *this;
  out.delta_inner = delta;
  out.delta_outer = delta;
  return out;
}

void ProblemSpec::validate() const {
  ConeSpec{n, k, tau}.validate();
  if (!(tau < 1.0)) {
    throw InvalidArgument("the solver requires tau < 1; tau = 1 is a limit");
  }
  validate_domain(domain);
  if (grid < 4) throw InvalidArgument("grid needs at least 4 cells");
  if (!(delta_outer > 0.0) || (!is_ball(domain) && !(delta_inner > 0.0))) {
    throw InvalidArgument("boundary data delta must be positive");
  }
  if (rhs.coefficients.empty()) throw InvalidArgument("empty right-hand side");
  const double a = inner_radius(domain);
  const double h = (outer_radius(domain) - a) / grid;
  for (int i = 0; i <= grid; ++i) {
    if (!(rhs(a + i * h) > 0.0)) {
      throw InvalidArgument("right-hand side must be positive on the domain");
    }
  }
}

std::vector<double> residual(const RadialProfile& profile,
                             const ProblemSpec& spec) {
  spec.validate();
  require_matching_grid(profile, spec);
  const Discretization disc(spec);
  const auto u = extended(profile);
  const auto ev = disc.evaluate(u, -std::numeric_limits<double>::infinity());
  if (!ev.inside) {
    std::ostringstream os;
    os << "spectrum outside the cone at node " << ev.worst << " (margin "
       << ev.margin << ")";
    throw InadmissibleIterate(os.str(), ev.worst, ev.margin);
  }
  return {ev.F.begin(), ev.F.end()};
}

double admissibility_margin(const RadialProfile& profile,
                            const ProblemSpec& spec) {
  spec.validate();
  require_matching_grid(profile, spec);
  const Discretization disc(spec);
  return disc.evaluate(extended(profile), 0.0).margin;
}

Tridiagonal jacobian(const RadialProfile& profile, const ProblemSpec& spec,
                     bool finite_difference) {
  spec.validate();
  require_matching_grid(profile, spec);
  const Discretization disc(spec);
  const auto u = extended(profile);
  const auto ev = disc.evaluate(u, kMarginFloor);
  if (!ev.admissible) {
    throw InadmissibleIterate("Jacobian requested at an inadmissible profile",
                              ev.worst, ev.margin);
  }
  return finite_difference ? disc.finite_difference_jacobian(u)
                           : disc.analytic_jacobian(u);
}

RadialProfile initial_guess(const ProblemSpec& spec) {
  spec.validate();
  const double a = inner_radius(spec.domain);
  const double b = outer_radius(spec.domain);
  const double h = (b - a) / spec.grid;
  double psi_mean = 0.0;
  for (int i = 0; i <= spec.grid; ++i) psi_mean += spec.rhs(a + i * h);
  psi_mean /= spec.grid + 1;
  const double s = std::sqrt(2 * psi_mean);

  if (is_ball(spec.domain)) {
    const double R = fit_ball(b, spec.delta_outer / s);
    return RadialProfile::sample(spec.domain, spec.grid, [&](double r) {
      return s * ball_model(r, R);
    });
  }

  // Annulus: smoothed minimum (u_in^{-p} + u_out^{-p})^{-1/p} of the exterior
  // and ball models, with the model radii adjusted so the boundary values
  // match.
  constexpr double p = 8.0;
  const double d_in = spec.delta_inner / s;
  const double d_out = spec.delta_outer / s;
  double target_in = d_in;
  double target_out = d_out;
  double A = fit_exterior(a, target_in);
  double B = fit_ball(b, target_out);
  for (int it = 0; it < 50; ++it) {
    const double rest_in = std::pow(d_in, -p) - std::pow(ball_model(a, B), -p);
    const double rest_out = std::pow(d_out, -p) - std::pow(exterior_model(b, A), -p);
    if (rest_in > 0.0) target_in = std::pow(rest_in, -1.0 / p);
    if (rest_out > 0.0) target_out = std::pow(rest_out, -1.0 / p);
    A = fit_exterior(a, target_in);
    B = fit_ball(b, target_out);
  }
  auto profile = RadialProfile::sample(spec.domain, spec.grid, [&](double r) {
    if (r <= a) return spec.delta_inner;
    if (r >= b) return spec.delta_outer;
    const double inner_part = std::pow(exterior_model(r, A), -p);
    const double outer_part = std::pow(ball_model(r, B), -p);
    return s * std::pow(inner_part + outer_part, -1.0 / p);
  });
  std::vector<double> values(profile.values().begin(), profile.values().end());
  values.front() = spec.delta_inner;
  values.back() = spec.delta_outer;
  return RadialProfile(spec.domain, std::move(values));
}

SolveReport newton_solve(const RadialProfile& init, const ProblemSpec& spec,
                         const NewtonOptions& options) {
  spec.validate();
  require_matching_grid(init, spec);
  const Discretization disc(spec);
  auto u = extended(init);
  auto ev = disc.evaluate(u, options.margin_floor);
  if (!ev.admissible) {
    std::ostringstream os;
    os << "initial profile is not admissible at node " << ev.worst
       << " (margin " << ev.margin << ")";
    throw InadmissibleIterate(os.str(), ev.worst, ev.margin);
  }

  int iterations = 0;
  bool converged = false;
  std::string message;
  std::vector<Real> trial(u.size());
  while (true) {
    if (ev.sup <= static_cast<Real>(options.tolerance)) {
      converged = true;
      break;
    }
    if (iterations >= options.max_iterations) {
      message = "maximum Newton iterations reached";
      break;
    }
    Tridiagonal J = options.finite_difference_jacobian
                        ? disc.finite_difference_jacobian(u)
                        : disc.analytic_jacobian(u);
    std::vector<double> step(u.size());
    for (std::size_t i = 0; i < u.size(); ++i)
      step[i] = -static_cast<double>(ev.F[i]);
    if (!solve_tridiagonal(std::move(J), step)) {
      message = "singular Jacobian";
      break;
    }
    bool accepted = false;
    double alpha = 1.0;
    for (int halving = 0; halving <= options.max_halvings; ++halving) {
      if (alpha < options.min_step) break;
      for (std::size_t i = 0; i < u.size(); ++i)
        trial[i] = u[i] + static_cast<Real>(alpha) * step[i];
      auto candidate = disc.evaluate(trial, options.margin_floor);
      if (candidate.admissible && candidate.norm2 < ev.norm2) {
        u.swap(trial);
        ev = std::move(candidate);
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      message = "line search failed";
      break;
    }
    ++iterations;
  }

  SolveReport report = make_report(spec, u, ev);
  report.newton_iterations = iterations;
  report.converged = converged;
  report.message = converged ? "converged" : message;
  return report;
}

SolveReport continuation_tau(const ProblemSpec& spec,
                             const TauSchedule& schedule,
                             const NewtonOptions& options,
                             const ReportObserver& observer) {
  spec.validate();
  if (!(schedule.step > 0.0) || !(schedule.min_step > 0.0)) {
    throw InvalidArgument("tau schedule steps must be positive");
  }
  const ProblemSpec start = spec.with_tau(0.0);
  SolveReport current = newton_solve(initial_guess(start), start, options);
  if (!current.converged) {
    throw ContinuationStall("tau = 0 start problem failed: " + current.message,
                            0.0);
  }
  if (observer) observer(current);
  int total_iterations = current.newton_iterations;
  int steps = 0;
  double step = schedule.step;
  while (current.tau < spec.tau) {
    const double next = std::min(spec.tau, current.tau + step);
    const ProblemSpec leg = spec.with_tau(next);
    bool ok = false;
    try {
      SolveReport attempt = newton_solve(current.profile, leg, options);
      total_iterations += attempt.newton_iterations;
      if (attempt.converged) {
        current = std::move(attempt);
        ok = true;
      }
    } catch (const InadmissibleIterate&) {
      // previous solution lies outside the smaller cone Γ^next
    }
    if (ok) {
      ++steps;
      if (observer) observer(current);
      step = std::min(schedule.step, 2 * step);
      continue;
    }
    step *= 0.5;
    if (step < schedule.min_step) {
      std::ostringstream os;
      os << "tau continuation stalled at tau = " << current.tau;
      throw ContinuationStall(os.str(), current.tau);
    }
  }
  current.newton_iterations = total_iterations;
  current.continuation_steps = steps;
  return current;
}

std::vector<double> geometric_schedule(double start, double stop,
                                       double ratio) {
  if (!(start > 0.0 && stop > 0.0 && stop <= start && ratio > 0.0 &&
        ratio < 1.0)) {
    throw InvalidArgument("geometric schedule needs start >= stop > 0 and "
                          "0 < ratio < 1");
  }
  std::vector<double> out;
  for (double d = start; d > stop * (1 + 1e-12); d *= ratio) out.push_back(d);
  out.push_back(stop);
  return out;
}

std::vector<MonotonicityViolation> check_delta_monotone(
    std::span<const SolveReport> reports) {
  std::vector<MonotonicityViolation> out;
  for (std::size_t leg = 0; leg + 1 < reports.size(); ++leg) {
    const auto& earlier = reports[leg].profile;
    const auto& later = reports[leg + 1].profile;
    if (earlier.size() != later.size()) {
      throw InvalidArgument("reports are on different grids");
    }
    const double tol = earlier.spacing() * earlier.spacing();
    for (std::size_t i = 0; i < earlier.size(); ++i) {
      const double excess = later[i] - earlier[i];
      if (excess > tol) out.push_back({leg, i, excess});
    }
  }
  return out;
}

DeltaSweep continuation_delta(const ProblemSpec& spec,
                              std::span<const double> schedule,
                              const TauSchedule& tau_schedule,
                              const NewtonOptions& options) {
  if (schedule.empty()) throw InvalidArgument("empty delta schedule");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (!(schedule[i] > 0.0) || (i > 0 && !(schedule[i] < schedule[i - 1]))) {
      throw InvalidArgument("delta schedule must be positive and strictly "
                            "decreasing");
    }
  }
  spec.with_delta(schedule[0]).validate();

  DeltaSweep sweep;
  for (double delta : schedule) {
    const ProblemSpec leg = spec.with_delta(delta);
    std::optional<SolveReport> result;
    if (!sweep.reports.empty()) {
      try {
        auto warm = newton_solve(sweep.reports.back().profile, leg, options);
        if (warm.converged) result = std::move(warm);
      } catch (const InadmissibleIterate&) {
      }
    }
    if (!result) {
      try {
        result = continuation_tau(leg, tau_schedule, options);
      } catch (const Error& e) {
        sweep.completed = false;
        std::ostringstream os;
        os << "delta = " << delta << ": " << e.what();
        sweep.failure = os.str();
        break;
      }
    }
    sweep.deltas.push_back(delta);
    sweep.reports.push_back(std::move(*result));
  }

  sweep.violations = check_delta_monotone(sweep.reports);
  for (std::size_t leg = 0; leg + 1 < sweep.reports.size(); ++leg) {
    const auto& a = sweep.reports[leg].profile;
    const auto& b = sweep.reports[leg + 1].profile;
    const double lo = inner_radius(a.domain());
    const double hi = outer_radius(a.domain());
    const double band = kInteriorFraction * (hi - lo);
    double diff = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double r = a.radius(i);
      const bool interior = (a.is_ball() || r - lo >= band) && hi - r >= band;
      if (interior) diff = std::max(diff, std::abs(b[i] - a[i]));
    }
    sweep.interior_differences.push_back(diff);
  }
  for (std::size_t i = 1; i < sweep.interior_differences.size(); ++i) {
    if (sweep.interior_differences[i] > sweep.interior_differences[i - 1]) {
      sweep.cauchy = false;
    }
  }
  return sweep;
}

double boundary_slope(const RadialProfile& profile) {
  if (profile.size() < 4) {
    throw InvalidArgument("boundary slope needs at least 4 nodes");
  }
  const std::size_t last = profile.size() - 1;
  const double h = profile.spacing();
  double q[4] = {0, 0, 0, 0};
  for (std::size_t j = 1; j <= 3; ++j) {
    q[j] = (profile[last - j] - profile[last]) / (static_cast<double>(j) * h);
  }
  // q(d) = q0 + c1 d + c2 d² sampled at d = h, 2h, 3h.
  return 3 * q[1] - 3 * q[2] + q[3];
}

double boundary_slope(const SolveReport& report) {
  return boundary_slope(report.profile);
}

bool comparison_check(const RadialProfile& u, const RadialProfile& v,
                      Ordering direction) {
  if (u.size() != v.size() || u.is_ball() != v.is_ball() ||
      inner_radius(u.domain()) != inner_radius(v.domain()) ||
      outer_radius(u.domain()) != outer_radius(v.domain())) {
    throw InvalidArgument("comparison requires a common grid");
  }
  const double tol = u.spacing() * u.spacing();
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double gap = direction == Ordering::LessEqual ? u[i] - v[i]
                                                        : v[i] - u[i];
    if (gap > tol) return false;
  }
  return true;
}

BarrierBound barrier_slope_bound(double delta, double m, double psi_max,
                                 double r_geom) {
  if (!(delta > 0.0) || !(delta < m)) {
    throw InvalidArgument("barrier needs 0 < delta < m");
  }
  if (!(psi_max > 0.0)) throw InvalidArgument("psi_max must be positive");
  if (!(r_geom > 0.0)) throw InvalidArgument("r_geom must be positive");
  const double R = std::min(std::sqrt(2.0 / psi_max), r_geom);
  return {R, 2.0 * std::sqrt(1.0 + delta) / R};
}

BarrierCheck barrier_domination(const SolveReport& report, double psi_max) {
  const auto& u = report.profile;
  const double m = *std::max_element(u.values().begin(), u.values().end());
  const double tol = u.spacing() * u.spacing();
  BarrierCheck out{true, -std::numeric_limits<double>::infinity(), 0};
  const auto check_from = [&](std::size_t anchor, double hole) {
    const double delta = u[anchor];
    if (!(delta < m)) return;
    // the touching ball of radius R√(1+δ) has to fit in the hole
    const double r_geom = hole / std::sqrt(1 + delta);
    const auto bound = barrier_slope_bound(delta, m, psi_max, r_geom);
    const double R = bound.R;
    const double r1 = R * std::sqrt(1 + delta);
    const double r2 = R * std::sqrt(1 + m);
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double s = std::abs(u.radius(i) - u.radius(anchor));
      if (s > r2 - r1) continue;
      const double rr = r1 + s;
      const double barrier = (rr * rr - R * R) / (R * R);
      const double excess = u[i] - barrier;
      out.worst_excess = std::max(out.worst_excess, excess);
      out.dominated = out.dominated && excess <= tol;
      ++out.nodes_checked;
    }
  };
  check_from(u.size() - 1, std::numeric_limits<double>::infinity());
  if (!u.is_ball()) check_from(0, inner_radius(u.domain()));
  return out;
}

}  // namespace lnlab
