#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "lnlab/cone.hpp"
#include "lnlab/geometry.hpp"

namespace lnlab {

/// Right-hand side ψ(r) = Σ_i coefficients[i] r^i. Defaults to ψ ≡ 1/2.
struct RadialRhs {
  std::vector<double> coefficients{0.5};

  double operator()(double r) const;
  bool is_constant() const;
};

/// Radial Dirichlet problem
///   f^τ(λ(-g_u^{-1}A_{g_u})) = ψ,  λ ∈ Γ^τ   in the domain,
///   u = δ                                   on the boundary,
/// with Γ = Γ_k^+ in dimension n. The τ = 1 problem is reached only as a
/// limit, so tau < 1 is required.
struct ProblemSpec {
  int n = 3;
  int k = 1;
  double tau = 0.0;
  Domain domain = Ball{1.0};
  RadialRhs rhs;
  double delta_inner = 0.1;  // annulus inner boundary; unused for a ball
  double delta_outer = 0.1;
  int grid = 1000;  // number of cells

  ConeSpec cone() const { return ConeSpec{n, k, tau}; }
  ProblemSpec with_tau(double t) const;
  /// Same problem with δ on every boundary component.
  ProblemSpec with_delta(double delta) const;
  void validate() const;
};

struct NewtonOptions {
  double tolerance = 1e-10;  // on the sup norm of the residual
  int max_iterations = 50;
  int max_halvings = 40;
  double min_step = 1e-14;
  double margin_floor = 1e-12;
  bool finite_difference_jacobian = false;
};

struct SolveReport {
  RadialProfile profile;
  double tau = 0.0;
  double delta_inner = 0.0;
  double delta_outer = 0.0;
  double residual_sup = 0.0;
  double admissibility_margin_min = 0.0;
  double boundary_slope = 0.0;
  double c0_min = 0.0;
  double c0_max = 0.0;
  double grad_sup = 0.0;
  int newton_iterations = 0;
  int continuation_steps = 0;
  bool converged = false;
  std::string message;
};

/// Interior rows f^τ(λ_i) - ψ_i, boundary rows u - δ. Throws
/// InadmissibleIterate naming the worst node if any interior spectrum is
/// outside Γ^τ.
std::vector<double> residual(const RadialProfile& profile,
                             const ProblemSpec& spec);

/// Minimum membership margin over the rows that carry the equation.
double admissibility_margin(const RadialProfile& profile,
                            const ProblemSpec& spec);

/// Banded Jacobian of the discrete system: lower[i] couples row i+1 to
/// unknown i, upper[i] couples row i to unknown i+1.
struct Tridiagonal {
  std::vector<double> lower;
  std::vector<double> diag;
  std::vector<double> upper;
};

Tridiagonal jacobian(const RadialProfile& profile, const ProblemSpec& spec,
                     bool finite_difference = false);

/// Scaled hyperbolic model fitted to the boundary data and the mean of ψ.
/// On a ball with constant ψ this is the exact solution.
RadialProfile initial_guess(const ProblemSpec& spec);

/// Damped Newton. Throws InadmissibleIterate if `init` is not admissible;
/// other failures come back with converged = false.
SolveReport newton_solve(const RadialProfile& init, const ProblemSpec& spec,
                         const NewtonOptions& options = {});

struct TauSchedule {
  double step = 0.05;
  double min_step = 1e-6;
};

using ReportObserver = std::function<void(const SolveReport&)>;

/// Solves the τ = 0 problem from initial_guess, then walks τ up to
/// spec.tau, warm-starting each solve and halving the step on failure.
/// Throws ContinuationStall once the step falls below schedule.min_step.
SolveReport continuation_tau(const ProblemSpec& spec,
                             const TauSchedule& schedule = {},
                             const NewtonOptions& options = {},
                             const ReportObserver& observer = {});

struct MonotonicityViolation {
  std::size_t leg;  // violation between reports leg and leg + 1
  std::size_t node;
  double excess;
};

struct DeltaSweep {
  std::vector<double> deltas;
  std::vector<SolveReport> reports;
  bool completed = true;
  std::string failure;
  std::vector<MonotonicityViolation> violations;
  /// Sup over interior nodes of |u_{δ_{i+1}} - u_{δ_i}|.
  std::vector<double> interior_differences;
  /// interior_differences is non-increasing.
  bool cauchy = true;
};

/// δ_0 > δ_1 > ... > 0 geometric with the given ratio, ending at or above
/// stop.
std::vector<double> geometric_schedule(double start, double stop,
                                       double ratio = 0.5);

/// Solves spec for each δ in the strictly decreasing schedule, warm-starting
/// from the previous leg, and records ordering and stabilization checks.
DeltaSweep continuation_delta(const ProblemSpec& spec,
                              std::span<const double> schedule,
                              const TauSchedule& tau_schedule = {},
                              const NewtonOptions& options = {});

/// Pairs of consecutive reports where u_{δ_{i+1}} > u_{δ_i} + h².
std::vector<MonotonicityViolation> check_delta_monotone(
    std::span<const SolveReport> reports);

/// Nodes whose distance to the boundary is at least this fraction of the
/// domain width count as interior for stabilization checks.
inline constexpr double kInteriorFraction = 0.25;

/// Richardson extrapolation of (u(r) - u(b)) / (b - r) to r = b from the
/// last three interior nodes; the limit of u/d when u(b) = 0.
double boundary_slope(const RadialProfile& profile);
double boundary_slope(const SolveReport& report);

enum class Ordering { LessEqual, GreaterEqual };

/// u <= v (or u >= v) at every node, up to h².
bool comparison_check(const RadialProfile& u, const RadialProfile& v,
                      Ordering direction);

struct BarrierBound {
  double R;
  double slope_bound;
};

/// Exterior-ball barrier v = (r² - R²)/R² with v = delta at r_1 = R√(1+delta)
/// and v = m at r_2 = R√(1+m). In flat space its eigenvalues are all 2/R²,
/// so R <= √(2/psi_max) (2 for ψ = 1/2). The ball of radius r_1 must also fit
/// outside the domain, which caps R at r_geom. The inward slope at r_1 is
/// 2√(1+delta)/R.
BarrierBound barrier_slope_bound(
    double delta, double m, double psi_max = 0.5,
    double r_geom = std::numeric_limits<double>::infinity());

struct BarrierCheck {
  bool dominated;
  double worst_excess;  // max of u - barrier over the checked nodes
  std::size_t nodes_checked;
};

/// Compares the solution near each boundary component against the barrier
/// anchored at its boundary value, with m = max u.
BarrierCheck barrier_domination(const SolveReport& report,
                                double psi_max = 0.5);

}  // namespace lnlab
