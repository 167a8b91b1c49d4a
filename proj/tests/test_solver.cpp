#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "lnlab/errors.hpp"
#include "lnlab/solver.hpp"

using namespace lnlab;

namespace {

// Exact solution on Ball(1) for constant ψ = 1/2 and boundary value delta.
double exact_ball(double r, double delta) {
  const double R = delta + std::sqrt(delta * delta + 1.0);
  return (R * R - r * r) / (2 * R);
}

ProblemSpec ball_problem(int n, int k, double tau, double delta, int grid) {
  ProblemSpec s;
  s.n = n;
  s.k = k;
  s.tau = tau;
  s.domain = Ball{1.0};
  s.delta_outer = delta;
  s.grid = grid;
  return s;
}

double sup_diff(const RadialProfile& a, const RadialProfile& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace

TEST_CASE("exact solution is a Newton fixed point") {
  for (int n = 3; n <= 6; ++n) {
    for (int k = 1; k <= n; ++k) {
      for (double tau : {0.0, (n - 2.0) / (n - 1.0), 0.99}) {
        const auto spec = ball_problem(n, k, tau, 0.1, 400);
        const auto u = RadialProfile::sample(
            spec.domain, spec.grid, [](double r) { return exact_ball(r, 0.1); });
        const auto res = residual(u, spec);
        const double h = u.spacing();
        for (double x : res) CHECK(std::abs(x) <= h * h);
        const auto rep = newton_solve(u, spec);
        CHECK(rep.converged);
        CHECK(rep.newton_iterations <= 2);
      }
    }
  }
}

TEST_CASE("hyperbolic profile residual is O(h^2)") {
  auto spec = ball_problem(4, 2, 0.5, 0.1, 1000);
  // boundary row carries u - delta; interior rows are the equation
  const auto u = RadialProfile::sample(spec.domain, spec.grid,
                                       [](double r) { return 0.5 * (1 - r * r); });
  const auto res = residual(u, spec);
  const double h = u.spacing();
  for (std::size_t i = 0; i + 1 < res.size(); ++i) CHECK(std::abs(res[i]) <= h * h);
  CHECK(res.back() == doctest::Approx(-0.1));
}

TEST_CASE("constant profile on an annulus is inadmissible") {
  ProblemSpec spec;
  spec.domain = Annulus{1.0, 2.0};
  spec.grid = 50;
  const auto u = RadialProfile::sample(spec.domain, spec.grid, [](double) { return 0.1; });
  CHECK_THROWS_AS(residual(u, spec), InadmissibleIterate);
  CHECK_THROWS_AS(newton_solve(u, spec), InadmissibleIterate);
}

TEST_CASE("barrier profile is a supersolution") {
  for (double R : {0.5, 1.0, 2.0}) {
    const double delta = 0.01, m = 1.0;
    ProblemSpec spec;
    spec.n = 3;
    spec.k = 1;
    spec.domain = Annulus{R * std::sqrt(1 + delta), R * std::sqrt(1 + m)};
    spec.delta_inner = delta;
    spec.delta_outer = m;
    spec.grid = 200;
    const auto v = RadialProfile::sample(
        spec.domain, spec.grid, [R](double r) { return (r * r - R * R) / (R * R); });
    for (double tau : {0.0, 0.5, 0.99}) {
      const auto res = residual(v, spec.with_tau(tau));
      for (std::size_t i = 1; i + 1 < res.size(); ++i) CHECK(res[i] >= -1e-10);
    }
    // τ = 1 is never handed to the solver; check the operator directly
    const auto field = spectrum_field(v, 3);
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
      CHECK(f_eval(ConeSpec::garding(3, 1), field.at(i)) >= 0.5 - 1e-10);
    }
  }
}

TEST_CASE("Newton recovers the exact solution from a perturbation") {
  const double delta = 0.1;
  const auto spec = ball_problem(3, 1, 0.5, delta, 500);
  const auto init = RadialProfile::sample(spec.domain, spec.grid, [&](double r) {
    return exact_ball(r, delta) + 1e-3 * std::cos(std::numbers::pi * r / 2);
  });
  const auto rep = newton_solve(init, spec);
  REQUIRE(rep.converged);
  CHECK(rep.residual_sup <= 1e-10);
  double err = 0.0;
  for (std::size_t i = 0; i < rep.profile.size(); ++i) {
    err = std::max(err, std::abs(rep.profile[i] -
                                 exact_ball(rep.profile.radius(i), delta)));
  }
  const double h = rep.profile.spacing();
  CHECK(err <= h * h);
}

TEST_CASE("grid refinement: 4x reference agrees within O(h^2)") {
  auto spec = ball_problem(4, 2, 0.9, 0.05, 500);
  spec.rhs.coefficients = {0.5, 0.0, 0.25};
  const auto coarse = continuation_tau(spec);
  spec.grid = 2000;
  const auto fine = continuation_tau(spec);
  REQUIRE(coarse.converged);
  REQUIRE(fine.converged);
  const double h = coarse.profile.spacing();
  double d = 0.0;
  for (std::size_t i = 0; i < coarse.profile.size(); ++i) {
    d = std::max(d, std::abs(coarse.profile[i] - fine.profile[4 * i]));
  }
  CHECK(d <= h * h);
  CHECK(d > 0.0);
}

TEST_CASE("analytic Jacobian matches finite differences") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> amp(-0.05, 0.05);
  int compared = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 3 + trial % 4;
    const int k = 1 + trial % n;
    const double tau = 0.2 * (trial % 5);
    ProblemSpec spec;
    spec.n = n;
    spec.k = k;
    spec.tau = tau;
    spec.grid = 60;
    const double a = amp(rng), b = amp(rng);
    std::function<double(double)> fn;
    if (trial % 2 == 0) {
      spec.domain = Ball{1.0};
      fn = [=](double r) {
        return exact_ball(r, 0.1) * (1 + a * std::cos(std::numbers::pi * r) + b * r * r);
      };
    } else {
      spec.domain = Annulus{1.0, 2.0};
      spec.rhs.coefficients = {0.5, 0.1};
      // exterior hyperbolic model, scaled and tilted
      fn = [=](double r) {
        return (r * r - 0.25) / 1.0 * (2.0 - r) * (1 + a * std::sin(3 * r) + b) + 0.05;
      };
    }
    const auto u = RadialProfile::sample(spec.domain, spec.grid, fn);
    if (!(admissibility_margin(u, spec) > 1e-6)) continue;
    ++compared;
    const auto J = jacobian(u, spec, false);
    const auto F = jacobian(u, spec, true);
    double err = 0.0, norm = 0.0;
    for (std::size_t i = 0; i < J.diag.size(); ++i) {
      err = std::max(err, std::abs(J.diag[i] - F.diag[i]));
      norm = std::max(norm, std::abs(J.diag[i]));
    }
    for (std::size_t i = 0; i < J.lower.size(); ++i) {
      err = std::max({err, std::abs(J.lower[i] - F.lower[i]),
                      std::abs(J.upper[i] - F.upper[i])});
      norm = std::max({norm, std::abs(J.lower[i]), std::abs(J.upper[i])});
    }
    CHECK(err / norm <= 1e-6);
  }
  CHECK(compared >= 20);
}

TEST_CASE("finite-difference Jacobian option converges too") {
  const auto spec = ball_problem(4, 2, 0.5, 0.1, 200);
  NewtonOptions opts;
  opts.finite_difference_jacobian = true;
  const auto init = RadialProfile::sample(spec.domain, spec.grid, [](double r) {
    return exact_ball(r, 0.1) * (1 + 0.01 * (1 - r * r));
  });
  const auto rep = newton_solve(init, spec, opts);
  CHECK(rep.converged);
}

TEST_CASE("tau continuation keeps every report admissible") {
  for (int n = 3; n <= 6; ++n) {
    for (int k = 1; k <= n; ++k) {
      auto spec = ball_problem(n, k, 0.99, 0.1, 200);
      spec.rhs.coefficients = {0.5, 0.0, 0.2};
      std::vector<double> margins;
      const auto rep = continuation_tau(spec, {}, {}, [&](const SolveReport& r) {
        margins.push_back(r.admissibility_margin_min);
      });
      CHECK(rep.converged);
      CHECK(rep.tau == 0.99);
      CHECK(!margins.empty());
      for (double m : margins) CHECK(m > 0.0);
    }
  }
}

TEST_CASE("tau = 0 target is a single solve") {
  const auto rep = continuation_tau(ball_problem(3, 1, 0.0, 0.1, 100));
  CHECK(rep.converged);
  CHECK(rep.continuation_steps == 0);
}

TEST_CASE("threshold case n=4 k=2 tau=0.95 converges") {
  const auto rep = continuation_tau(ball_problem(4, 2, 0.95, 0.05, 1000));
  CHECK(rep.converged);
  CHECK(rep.residual_sup <= 1e-10);
  CHECK(rep.admissibility_margin_min > 0.0);
}

TEST_CASE("annulus continuation") {
  ProblemSpec spec;
  spec.n = 4;
  spec.k = 2;
  spec.tau = 0.95;
  spec.domain = Annulus{1.0, 2.0};
  spec.delta_inner = 0.05;
  spec.delta_outer = 0.2;
  spec.grid = 400;
  const auto rep = continuation_tau(spec);
  CHECK(rep.converged);
  CHECK(rep.profile[0] == doctest::Approx(0.05));
  CHECK(rep.profile[rep.profile.size() - 1] == doctest::Approx(0.2));
}

TEST_CASE("spec validation") {
  auto spec = ball_problem(3, 1, 1.0, 0.1, 100);
  CHECK_THROWS_AS(spec.validate(), InvalidArgument);
  spec.tau = 0.5;
  spec.delta_outer = 0.0;
  CHECK_THROWS_AS(spec.validate(), InvalidArgument);
  spec.delta_outer = 0.1;
  spec.rhs.coefficients = {0.1, -1.0};
  CHECK_THROWS_AS(spec.validate(), InvalidArgument);
  spec.rhs.coefficients = {0.5};
  spec.domain = Annulus{2.0, 1.0};
  CHECK_THROWS_AS(spec.validate(), InvalidArgument);
}

TEST_CASE("delta sweep: limit, monotonicity and slope") {
  const auto schedule = geometric_schedule(0.1, 1e-4);
  CHECK(schedule.front() == 0.1);
  CHECK(schedule.back() == 1e-4);
  for (std::size_t i = 1; i < schedule.size(); ++i) CHECK(schedule[i] < schedule[i - 1]);

  const auto sweep = continuation_delta(ball_problem(3, 1, 0.9, 0.1, 1000), schedule);
  REQUIRE(sweep.completed);
  CHECK(sweep.violations.empty());
  CHECK(sweep.cauchy);
  const auto& last = sweep.reports.back();
  CHECK(std::abs(last.boundary_slope - 1.0) <= 0.01);
  for (std::size_t i = 0; i < last.profile.size(); ++i) {
    const double r = last.profile.radius(i);
    if (r <= 0.75) CHECK(std::abs(last.profile[i] - 0.5 * (1 - r * r)) < 1e-3);
  }
}

TEST_CASE("threshold case is Cauchy in delta") {
  const auto sweep = continuation_delta(ball_problem(4, 2, 0.95, 0.1, 400),
                                        geometric_schedule(0.1, 1e-3));
  REQUIRE(sweep.completed);
  CHECK(sweep.cauchy);
  CHECK(sweep.violations.empty());
}

TEST_CASE("monotonicity violations are flagged") {
  const auto spec = ball_problem(3, 1, 0.5, 0.1, 100);
  SolveReport a{RadialProfile::sample(spec.domain, 100,
                                      [](double r) { return exact_ball(r, 0.1); })};
  SolveReport b{RadialProfile::sample(
      spec.domain, 100, [](double r) { return exact_ball(r, 0.1) + 0.01; })};
  const std::vector<SolveReport> reports{a, b};
  const auto v = check_delta_monotone(reports);
  REQUIRE(!v.empty());
  CHECK(v.front().leg == 0);
  CHECK(v.front().excess == doctest::Approx(0.01));
  const std::vector<SolveReport> ok{b, a};
  CHECK(check_delta_monotone(ok).empty());
}

TEST_CASE("boundary slope") {
  const auto hyp = RadialProfile::sample(Ball{1.0}, 200, [](double r) { return 0.5 * (1 - r * r); });
  CHECK(boundary_slope(hyp) == doctest::Approx(1.0).epsilon(1e-10));
  const auto lin = RadialProfile::sample(Annulus{1.0, 2.0}, 100,
                                         [](double r) { return 0.3 + 2.5 * (2.0 - r); });
  CHECK(boundary_slope(lin) == doctest::Approx(2.5).epsilon(1e-10));
  const auto cubic = RadialProfile::sample(Ball{1.0}, 100, [](double r) {
    const double d = 1 - r;
    return 0.01 + 0.7 * d + d * d * d;
  });
  CHECK(boundary_slope(cubic) == doctest::Approx(0.7).epsilon(1e-10));
}

TEST_CASE("comparison check") {
  const auto u = RadialProfile::sample(Ball{1.0}, 100, [](double r) { return exact_ball(r, 0.1); });
  CHECK(comparison_check(u, u, Ordering::LessEqual));
  CHECK(comparison_check(u, u, Ordering::GreaterEqual));
  const auto w = RadialProfile::sample(Ball{1.0}, 100, [](double r) { return exact_ball(r, 0.2); });
  CHECK(comparison_check(u, w, Ordering::LessEqual));
  CHECK_FALSE(comparison_check(u, w, Ordering::GreaterEqual));
  const auto x = RadialProfile::sample(Ball{1.0}, 50, [](double r) { return exact_ball(r, 0.1); });
  CHECK_THROWS_AS(comparison_check(u, x, Ordering::LessEqual), InvalidArgument);
}

TEST_CASE("tau ordering against the tau = 0 solution") {
  auto spec = ball_problem(4, 2, 0.0, 0.05, 400);
  spec.rhs.coefficients = {0.5, 0.0, 0.25};
  const auto u0 = continuation_tau(spec);
  for (double tau : {0.5, 0.9}) {
    const auto ut = continuation_tau(spec.with_tau(tau));
    CHECK(comparison_check(ut.profile, u0.profile, Ordering::GreaterEqual));
    CHECK(sup_diff(ut.profile, u0.profile) > 1e-6);
  }
}

TEST_CASE("barrier slope bound") {
  const auto small = barrier_slope_bound(1e-12, 3.0);
  CHECK(small.R == doctest::Approx(2.0));
  CHECK(small.slope_bound == doctest::Approx(1.0));
  const double m = 0.6;
  const auto half = barrier_slope_bound(m / 2, m);
  CHECK(half.slope_bound == doctest::Approx(2 * std::sqrt(1 + m / 2) / half.R));
  CHECK_THROWS_AS(barrier_slope_bound(0.5, 0.5), InvalidArgument);
  CHECK_THROWS_AS(barrier_slope_bound(0.0, 0.5), InvalidArgument);

  const auto rep = continuation_tau(ball_problem(3, 1, 0.9, 0.01, 1000));
  REQUIRE(rep.converged);
  const double m_u = *std::max_element(rep.profile.values().begin(),
                                       rep.profile.values().end());
  CHECK(rep.boundary_slope <= barrier_slope_bound(0.01, m_u).slope_bound);
  const auto dom = barrier_domination(rep);
  CHECK(dom.dominated);
  CHECK(dom.nodes_checked > 0);
}

TEST_CASE("barrier domination on an annulus") {
  ProblemSpec spec;
  spec.n = 3;
  spec.k = 1;
  spec.tau = 0.9;
  spec.domain = Annulus{1.0, 2.0};
  spec.delta_inner = spec.delta_outer = 0.01;
  spec.grid = 400;
  const auto rep = continuation_tau(spec);
  REQUIRE(rep.converged);
  const auto dom = barrier_domination(rep);
  CHECK(dom.dominated);
  // inner anchor: R is capped by the hole
  const double m_u = *std::max_element(rep.profile.values().begin(),
                                       rep.profile.values().end());
  const auto inner = barrier_slope_bound(0.01, m_u, 0.5, 1.0 / std::sqrt(1.01));
  CHECK(inner.R < 2.0);
  CHECK((rep.profile[1] - rep.profile[0]) / rep.profile.spacing() <= inner.slope_bound);
}
