#include "lnlab/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "lnlab/admissible.hpp"
#include "lnlab/cone.hpp"
#include "lnlab/errors.hpp"
#include "lnlab/geometry.hpp"
#include "lnlab/solver.hpp"

namespace lnlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(4) << x;
  return os.str();
}

struct Outcome {
  bool passed = false;
  std::string measured;
  std::string expected;
};

struct Criterion {
  int id;
  const char* group;
  const char* title;
  double time_limit;
  std::function<Outcome(std::uint64_t)> run;
};

double half_hyperbolic(double r) { return 0.5 * (1.0 - r * r); }

// ---------------------------------------------------------------------------

Outcome hyperbolic_exactness(std::uint64_t) {
  constexpr int kGrid = 2000;
  const auto profile = RadialProfile::sample(Ball{1.0}, kGrid, half_hyperbolic);
  const double h = profile.spacing();
  double worst = 0.0;
  int cases = 0;
  for (int n = 3; n <= 6; ++n) {
    const auto field = spectrum_field(profile, n);
    const double taus[] = {0.0, (n - 2.0) / (n - 1.0), 0.99};
    for (int k = 1; k <= n; ++k) {
      for (double tau : taus) {
        const ConeSpec cone{n, k, tau};
        // the last node is the boundary, where u = 0 and the formula is
        // still regular
        for (std::size_t i = 0; i < profile.size(); ++i) {
          worst = std::max(worst, std::abs(f_eval(cone, field.at(i)) - 0.5));
        }
        ++cases;
      }
    }
  }
  return {worst <= 5 * h * h,
          "max |f - 1/2| = " + fmt(worst) + " over " + std::to_string(cases) +
              " cones",
          "<= 5h^2 = " + fmt(5 * h * h)};
}

Outcome mu_table(std::uint64_t) {
  double worst = 0.0;
  for (int n = 3; n <= 8; ++n) {
    for (int k = 1; k <= n; ++k) {
      const double expected = static_cast<double>(n - k) / k;
      worst = std::max(worst, std::abs(mu_plus(ConeSpec::garding(n, k)) -
                                        expected));
    }
  }
  double worst_deformed = 0.0;
  for (int n = 3; n <= 8; ++n) {
    for (int t = 0; t <= 20; ++t) {
      const double tau = t / 20.0;
      const double expected = (1.0 - tau) * (n - 1);
      worst_deformed = std::max(
          worst_deformed,
          std::abs(mu_plus(ConeSpec::deformed(n, n, tau)) - expected));
    }
  }
  return {worst <= 1e-10 && worst_deformed <= 1e-10,
          "max err (n-k)/k: " + fmt(worst) +
              ", (1-tau)(n-1): " + fmt(worst_deformed),
          "<= 1e-10"};
}

Outcome barrier(std::uint64_t) {
  double worst = 0.0;
  for (double R : {0.5, 1.0, 2.0}) {
    const double expected = 2.0 / (R * R);
    for (int i = 0; i <= 200; ++i) {
      // r from R√1.01 to R√3, i.e. 0.01 <= v <= 2
      const double r = R * std::sqrt(1.01 + 1.99 * i / 200.0);
      const double v = (r * r - R * R) / (R * R);
      const auto eig =
          radial_schouten_spectrum(v, 2 * r / (R * R), 2 / (R * R), r, 3);
      worst = std::max({worst, std::abs(eig.radial - expected),
                        std::abs(eig.tangential - expected)});
    }
  }
  // f(2/R² e) against 1/2 over every cone; R = 2 is the equality case.
  constexpr double kRoundoff = 1e-12;
  bool holds = true;
  bool fails_beyond = true;
  double f_at_2 = kInf;
  for (int n = 3; n <= 6; ++n) {
    for (int k = 1; k <= n; ++k) {
      for (double tau : {0.0, 0.5, 1.0}) {
        const ConeSpec cone{n, k, tau};
        for (double R : {0.5, 1.0, 1.5, 2.0}) {
          const double v = 0.5 * R * R * 1.3;  // any point r = R√(1+v)
          const double r = R * std::sqrt(1 + v);
          const auto eig =
              radial_schouten_spectrum(v, 2 * r / (R * R), 2 / (R * R), r, n);
          Spectrum s(std::vector<double>(n, eig.tangential));
          s[0] = eig.radial;
          const double f = f_eval(cone, s);
          holds = holds && f >= 0.5 - kRoundoff;
          if (R == 2.0) f_at_2 = std::min(f_at_2, f);
        }
        const double R = 2.1;
        const Spectrum s(std::vector<double>(n, 2 / (R * R)));
        fails_beyond = fails_beyond && f_eval(cone, s) < 0.5;
      }
    }
  }
  std::string measured = "spectrum err " + fmt(worst) + "; f>=1/2 for R<=2: " +
                         (holds ? "yes" : "no") + " (min f at R=2: " +
                         fmt(f_at_2) + "); fails at R=2.1: " +
                         (fails_beyond ? "yes" : "no");
  return {worst <= 1e-10 && holds && fails_beyond, measured,
          "err <= 1e-10, holds up to R=2, fails at R=2.1"};
}

Outcome constructor(std::uint64_t) {
  std::vector<double> x(101);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = i / 100.0;
  const auto data = scan_background(x);
  const auto cert = find_N(data);
  bool ok = true;
  double margin = kInf;
  double direct_margin = kInf;
  for (int n : {4, 6}) {
    const auto cone = ConeSpec::garding(n, n / 2);
    const auto ver = verify_admissible(data, cert, cone);
    ok = ok && ver.ok && std::abs(mu_plus(cone) - 1.0) <= 1e-10;
    margin = std::min(margin, ver.margin);
    for (double v : data.v) {
      const auto m = in_cone(cone, rescaled_spectrum_scan(cert.N, v, 1.0, 0.0, n));
      ok = ok && m.inside;
      direct_margin = std::min(direct_margin, m.margin);
    }
  }
  return {ok,
          "N = " + fmt(cert.N) + ", certificate margin " + fmt(margin) +
              ", direct margin " + fmt(direct_margin),
          "verify ok and direct spectrum in cone at all 101 nodes (n=4,6)"};
}

double sup_error_on_coarse(const RadialProfile& coarse,
                           const RadialProfile& fine) {
  const std::size_t stride = fine.cells() / coarse.cells();
  double err = 0.0;
  for (std::size_t i = 0; i < coarse.size(); ++i) {
    err = std::max(err, std::abs(coarse[i] - fine[i * stride]));
  }
  return err;
}

Outcome solver_convergence(std::uint64_t) {
  ProblemSpec spec;
  spec.n = 4;
  spec.k = 2;
  spec.tau = 0.95;
  spec.domain = Ball{1.0};
  spec.delta_outer = 0.05;
  spec.grid = 1000;
  const auto rep = continuation_tau(spec);

  // the constant-ψ solution is an exact discrete solution (quadratic), so
  // its error shows only roundoff
  const double delta = spec.delta_outer;
  const double R = delta + std::sqrt(delta * delta + 1.0);
  double exact_err = 0.0;
  for (std::size_t i = 0; i < rep.profile.size(); ++i) {
    const double r = rep.profile.radius(i);
    exact_err = std::max(exact_err,
                         std::abs(rep.profile[i] - (R * R - r * r) / (2 * R)));
  }

  // order on the same problem with ψ = 1/2 + r²/4
  ProblemSpec variant = spec;
  variant.rhs.coefficients = {0.5, 0.0, 0.25};
  std::vector<RadialProfile> sols;
  for (int grid : {1000, 2000, 8000}) {
    variant.grid = grid;
    const auto r = continuation_tau(variant);
    if (!r.converged) {
      return {false, "variant solve failed at grid " + std::to_string(grid),
              "converged"};
    }
    sols.push_back(r.profile);
  }
  const double e1 = sup_error_on_coarse(sols[0], sols[2]);
  const double e2 = sup_error_on_coarse(sols[1], sols[2]);
  const double ratio = e1 / e2;
  const bool ok = rep.converged && rep.residual_sup <= 1e-10 &&
                  rep.admissibility_margin_min > 0.0 && ratio >= 3.5 &&
                  ratio <= 4.5;
  return {ok,
          std::string(rep.converged ? "converged" : "not converged") +
              ", residual " + fmt(rep.residual_sup) + ", margin " +
              fmt(rep.admissibility_margin_min) +
              ", exact-solution err " + fmt(exact_err) +
              ", doubling ratio " + fmt(ratio) + " (psi = 1/2 + r^2/4, errs " +
              fmt(e1) + ", " + fmt(e2) + ")",
          "residual <= 1e-10, margin > 0, ratio in [3.5, 4.5]"};
}

std::vector<std::size_t> interior_nodes(const RadialProfile& u) {
  const double a = inner_radius(u.domain());
  const double b = outer_radius(u.domain());
  const double keep = kInteriorFraction * (b - a);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double r = u.radius(i);
    const double dist = u.is_ball() ? b - r : std::min(r - a, b - r);
    if (dist >= keep) out.push_back(i);
  }
  return out;
}

Outcome limit(std::uint64_t) {
  ProblemSpec spec;
  spec.n = 3;
  spec.k = 1;
  spec.tau = 0.9;
  spec.domain = Ball{1.0};
  spec.grid = 1000;
  const auto schedule = geometric_schedule(0.1, 1e-4);
  const auto sweep = continuation_delta(spec, schedule);
  if (!sweep.completed || sweep.reports.empty() ||
      sweep.reports.size() != schedule.size()) {
    return {false, "sweep stopped: " + sweep.failure, "full schedule"};
  }
  const auto& last = sweep.reports.back();
  double dist = 0.0;
  for (std::size_t i : interior_nodes(last.profile)) {
    dist = std::max(dist, std::abs(last.profile[i] -
                                   half_hyperbolic(last.profile.radius(i))));
  }
  const double slope = last.boundary_slope;
  const bool ok = dist < 1e-3 && std::abs(slope - 1.0) <= 0.01 &&
                  sweep.violations.empty();
  return {ok,
          "delta " + fmt(last.delta_outer) + ": interior dist " + fmt(dist) +
              ", slope " + fmt(slope) + ", violations " +
              std::to_string(sweep.violations.size()) + ", cauchy " +
              (sweep.cauchy ? "yes" : "no"),
          "dist < 1e-3, |slope - 1| <= 0.01, no violations"};
}

Outcome ordering(std::uint64_t) {
  ProblemSpec ball;
  ball.n = 3;
  ball.k = 1;
  ball.tau = 0.9;
  ball.domain = Ball{1.0};
  ball.rhs.coefficients = {0.5, 0.0, 0.25};
  ball.grid = 400;

  ProblemSpec annulus;
  annulus.n = 4;
  annulus.k = 2;
  annulus.tau = 0.9;
  annulus.domain = Annulus{1.0, 2.0};
  annulus.grid = 400;

  std::size_t delta_violations = 0;
  std::size_t legs = 0;
  std::string failures;
  const auto ball_sweep =
      continuation_delta(ball, geometric_schedule(0.1, 1e-4));
  const auto ann_sweep =
      continuation_delta(annulus, geometric_schedule(0.1, 1e-3));
  for (const auto* s : {&ball_sweep, &ann_sweep}) {
    if (!s->completed) failures += " sweep: " + s->failure;
    delta_violations += s->violations.size();
    legs += s->reports.empty() ? 0 : s->reports.size() - 1;
  }

  std::size_t tau_violations = 0;
  double min_gap = kInf;
  double max_gap = 0.0;
  int comparisons = 0;
  ProblemSpec ball4 = ball;
  ball4.n = 4;
  ball4.k = 2;
  for (ProblemSpec base : {ball4, annulus}) {
    base = base.with_delta(0.05);
    const auto u0 = continuation_tau(base.with_tau(0.0));
    for (double tau : {0.5, 0.9}) {
      const auto ut = continuation_tau(base.with_tau(tau));
      if (!comparison_check(ut.profile, u0.profile, Ordering::GreaterEqual)) {
        ++tau_violations;
      }
      for (std::size_t i = 0; i < ut.profile.size(); ++i) {
        min_gap = std::min(min_gap, ut.profile[i] - u0.profile[i]);
        max_gap = std::max(max_gap, ut.profile[i] - u0.profile[i]);
      }
      ++comparisons;
    }
  }
  const bool ok = failures.empty() && delta_violations == 0 &&
                  tau_violations == 0;
  return {ok,
          "delta violations " + std::to_string(delta_violations) + " over " +
              std::to_string(legs) + " legs; tau violations " +
              std::to_string(tau_violations) + " over " +
              std::to_string(comparisons) + " comparisons (u_tau - u_0 in [" +
              fmt(min_gap) + ", " + fmt(max_gap) + "])" + failures,
          "zero violations beyond h^2"};
}

// ---------------------------------------------------------------------------
// randomized cone properties

struct Sampler {
  std::mt19937_64 rng;
  explicit Sampler(std::uint64_t seed) : rng(seed) {}

  double uniform(double a, double b) {
    return std::uniform_real_distribution<double>(a, b)(rng);
  }
  int integer(int a, int b) {
    return std::uniform_int_distribution<int>(a, b)(rng);
  }

  ConeSpec cone() {
    const int n = integer(3, 8);
    const int k = integer(1, n);
    const double tau = integer(0, 3) == 0 ? 1.0 : uniform(0.0, 1.0);
    return ConeSpec{n, k, tau};
  }

  Spectrum inside(const ConeSpec& c, double min_margin) {
    for (;;) {
      Spectrum s(std::vector<double>(c.n));
      const double shift = uniform(0.0, 2.0);
      for (int i = 0; i < c.n; ++i) s[i] = uniform(-1.0, 1.0) + shift;
      const auto m = in_cone(c, s);
      if (m.inside && m.margin >= min_margin) return s;
    }
  }
};

double scale_of(double x) { return std::max(1.0, std::abs(x)); }

Outcome cone_properties(std::uint64_t seed) {
  constexpr int kTrials = 10000;
  Sampler g(seed);
  struct Tally {
    const char* name;
    int failures = 0;
  };
  Tally homogeneity{"homogeneity"}, concavity{"concavity"},
      monotonicity{"monotonicity"}, permutation{"permutation"},
      euler{"euler"}, trace{"trace"}, gradient{"gradient"};
  double worst_gradient = 0.0;

  for (int t = 0; t < kTrials; ++t) {
    const auto c = g.cone();
    const auto l = g.inside(c, 1e-8);
    const double f = f_eval(c, l);
    const double s = g.uniform(0.1, 10.0);
    const auto ls = l.scaled(s);
    if (!in_cone(c, ls).inside ||
        std::abs(f_eval(c, ls) - s * f) > 1e-12 * scale_of(s * f)) {
      ++homogeneity.failures;
    }
  }
  for (int t = 0; t < kTrials; ++t) {
    const auto c = g.cone();
    const auto a = g.inside(c, 1e-8);
    const auto b = g.inside(c, 1e-8);
    const double w = g.uniform(0.0, 1.0);
    Spectrum m(std::vector<double>(c.n));
    for (int i = 0; i < c.n; ++i) m[i] = w * a[i] + (1 - w) * b[i];
    const double chord = w * f_eval(c, a) + (1 - w) * f_eval(c, b);
    if (!in_cone(c, m).inside || f_eval(c, m) < chord - 1e-12 * scale_of(chord)) {
      ++concavity.failures;
    }
  }
  for (int t = 0; t < kTrials; ++t) {
    const auto c = g.cone();
    const auto a = g.inside(c, 1e-8);
    Spectrum b = a;
    for (int i = 0; i < c.n; ++i) b[i] += g.uniform(0.0, 1.0);
    const double fa = f_eval(c, a);
    if (!in_cone(c, b).inside || f_eval(c, b) < fa - 1e-12 * scale_of(fa)) {
      ++monotonicity.failures;
    }
  }
  for (int t = 0; t < kTrials; ++t) {
    const auto c = g.cone();
    // include points outside the cone: membership must not depend on order
    Spectrum a(std::vector<double>(c.n));
    for (int i = 0; i < c.n; ++i) a[i] = g.uniform(-1.0, 2.0);
    Spectrum b = a;
    std::shuffle(b.values().begin(), b.values().end(), g.rng);
    const auto ma = in_cone(c, a);
    const auto mb = in_cone(c, b);
    bool same = ma.inside == mb.inside && ma.margin == mb.margin;
    if (same && ma.inside) same = f_eval(c, a) == f_eval(c, b);
    if (!same) ++permutation.failures;
  }
  for (int t = 0; t < kTrials; ++t) {
    const auto c = g.cone();
    const auto a = g.inside(c, 1e-6);
    const auto grad = grad_f(c, a);
    double dot = 0.0;
    for (int i = 0; i < c.n; ++i) dot += a[i] * grad[i];
    const double f = f_eval(c, a);
    if (std::abs(dot - f) > 1e-10 * scale_of(f)) ++euler.failures;
  }
  for (int t = 0; t < kTrials; ++t) {
    const auto c = g.cone();
    const auto a = g.inside(c, 1e-8);
    const double mean = sigma_k(a, 1) / c.n;
    if (f_eval(c, a) > mean + 1e-12 * scale_of(mean)) ++trace.failures;
  }
  for (int t = 0; t < kTrials; ++t) {
    const auto c = g.cone();
    const auto a = g.inside(c, 1e-2);
    const auto grad = grad_f(c, a);
    double top = 0.0;
    for (int i = 0; i < c.n; ++i) top = std::max(top, std::abs(a[i]));
    const double eps = 1e-5 * std::max(1.0, top);
    double err = 0.0, norm = 0.0;
    for (int i = 0; i < c.n; ++i) {
      Spectrum p = a, m = a;
      p[i] += eps;
      m[i] -= eps;
      const double fd = (f_eval(c, p) - f_eval(c, m)) / (2 * eps);
      err = std::max(err, std::abs(fd - grad[i]));
      norm = std::max(norm, std::abs(grad[i]));
    }
    const double rel = err / norm;
    worst_gradient = std::max(worst_gradient, rel);
    if (!(rel <= 1e-6)) ++gradient.failures;
  }

  int total = 0;
  std::string detail;
  for (const auto* tally : {&homogeneity, &concavity, &monotonicity,
                            &permutation, &euler, &trace, &gradient}) {
    total += tally->failures;
    if (tally->failures) {
      detail += std::string(" ") + tally->name + "=" +
                std::to_string(tally->failures);
    }
  }
  return {total == 0,
          std::to_string(total) + " failures in 7 x " +
              std::to_string(kTrials) + " trials" + detail +
              "; worst gradient rel err " + fmt(worst_gradient),
          "zero failures"};
}

Outcome ricci_identity(std::uint64_t seed) {
  Sampler g(seed ^ 0x9e3779b97f4a7c15ULL);
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const int n = g.integer(3, 8);
    Spectrum l{std::vector<double>(n)};
    for (int i = 0; i < n; ++i) l[i] = g.uniform(-2.0, 2.0);
    const double tau = (n - 2.0) / (n - 1.0);
    const auto deformed = tau_deform(l, tau);
    const auto ric = ricci_spectrum_from_schouten(l, n);
    double top = 1.0;
    for (int i = 0; i < n; ++i) top = std::max(top, std::abs(l[i]));
    for (int i = 0; i < n; ++i) {
      worst = std::max(worst,
                       std::abs(deformed[i] - ric[i] / (n - 1)) / top);
    }
  }

  // f^τ(λ) = P c σ_k(Ric)^{1/k}; P(n-1) is 1/2 for the normalized operator
  // and 1 for σ_k^{1/k} applied to λ^τ directly
  double lo = kInf, hi = -kInf, lo_raw = kInf, hi_raw = -kInf;
  for (int t = 0; t < 1000; ++t) {
    const int n = g.integer(3, 8);
    const int k = g.integer(1, n);
    const double tau = (n - 2.0) / (n - 1.0);
    const ConeSpec c{n, k, tau};
    const auto l = g.inside(c, 1e-6);
    const auto ric = ricci_spectrum_from_schouten(l, n);
    const double ric_root = std::pow(sigma_k(ric, k), 1.0 / k);
    const double p = f_eval(c, l) / (garding_normalization(n, k) * ric_root);
    const double raw =
        std::pow(sigma_k(tau_deform(l, tau), k), 1.0 / k) / ric_root;
    lo = std::min(lo, p * (n - 1));
    hi = std::max(hi, p * (n - 1));
    lo_raw = std::min(lo_raw, raw * (n - 1));
    hi_raw = std::max(hi_raw, raw * (n - 1));
  }
  std::ostringstream m;
  m << "identity err " << fmt(worst) << "; prefactor x (n-1): normalized f^tau "
    << std::setprecision(15) << lo << ".." << hi << ", bare sigma_k^(1/k) "
    << lo_raw << ".." << hi_raw << " (candidates 1/(2(n-1)), 1/(n-1))";
  return {worst <= 1e-12, m.str(), "identity <= 1e-12; prefactor reported"};
}

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all = {
      {1, "hyperbolic", "hyperbolic ball exactness", 5.0, hyperbolic_exactness},
      {2, "mu", "mu_plus table", 1.0, mu_table},
      {3, "barrier", "exterior-ball barrier", 1.0, barrier},
      {4, "constructor", "admissible metric construction", 1.0, constructor},
      {5, "solver", "solver convergence n=4 k=2 tau=0.95", 30.0,
       solver_convergence},
      {6, "limit", "delta -> 0 limit n=3 k=1 tau=0.9", 60.0, limit},
      {7, "ordering", "delta and tau ordering", 0.0, ordering},
      {8, "cone", "cone property suite", 10.0, cone_properties},
      {9, "ricci", "Ricci identity at tau=(n-2)/(n-1)", 0.0, ricci_identity},
  };
  return all;
}

}  // namespace

std::vector<std::string> acceptance_groups() {
  std::vector<std::string> out;
  for (const auto& c : criteria()) out.emplace_back(c.group);
  return out;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options) {
  const auto groups = acceptance_groups();
  for (const auto& g : options.only) {
    if (std::find(groups.begin(), groups.end(), g) == groups.end()) {
      throw InvalidArgument("unknown acceptance group '" + g + "'");
    }
  }
  std::vector<CriterionResult> results;
  for (const auto& c : criteria()) {
    if (!options.only.empty() &&
        std::find(options.only.begin(), options.only.end(), c.group) ==
            options.only.end()) {
      continue;
    }
    CriterionResult r;
    r.id = c.id;
    r.group = c.group;
    r.title = c.title;
    r.time_limit = c.time_limit;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run(options.seed);
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what(), "no exception"};
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                              start)
                    .count();
    r.passed = o.passed && (c.time_limit <= 0.0 || r.seconds < c.time_limit);
    r.measured = o.measured;
    r.expected = o.expected;
    if (c.time_limit > 0.0) {
      r.expected += "; runtime < " + fmt(c.time_limit) + " s";
    }
    results.push_back(std::move(r));
  }
  return results;
}

void print_acceptance(std::ostream& os,
                      const std::vector<CriterionResult>& results) {
  int passed = 0;
  for (const auto& r : results) {
    passed += r.passed;
    os << (r.passed ? "PASS" : "FAIL") << " [" << r.id << "] " << r.group
       << ": " << r.title << " | measured: " << r.measured << " ("
       << std::fixed << std::setprecision(2) << r.seconds << " s)"
       << std::defaultfloat << " | expected: " << r.expected << '\n';
  }
  os << passed << '/' << results.size() << " criteria passed\n";
}

}  // namespace lnlab
