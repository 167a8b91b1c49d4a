#include "lnlab/report_io.hpp"

#include <cmath>
#include <string>
#include <variant>

#include "lnlab/detail/format.hpp"
#include "lnlab/geometry.hpp"

namespace lnlab {

using nlohmann::ordered_json;

namespace {

ordered_json real(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

ordered_json reals(std::span<const double> xs) {
  ordered_json out = ordered_json::array();
  for (double x : xs) out.push_back(real(x));
  return out;
}

ordered_json domain_json(const Domain& d) {
  if (const auto* b = std::get_if<Ball>(&d)) {
    return {{"type", "ball"}, {"radius", b->radius}};
  }
  const auto& a = std::get<Annulus>(d);
  return {{"type", "annulus"}, {"inner", a.inner}, {"outer", a.outer}};
}

void indent(std::ostream& os, int depth) {
  for (int i = 0; i < depth; ++i) os << "  ";
}

void emit(std::ostream& os, const ordered_json& v, int depth) {
  switch (v.type()) {
    case ordered_json::value_t::object: {
      if (v.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) os << ",\n";
        first = false;
        indent(os, depth + 1);
        os << ordered_json(it.key()).dump() << ": ";
        emit(os, it.value(), depth + 1);
      }
      os << '\n';
      indent(os, depth);
      os << '}';
      return;
    }
    case ordered_json::value_t::array: {
      if (v.empty()) {
        os << "[]";
        return;
      }
      // numeric arrays stay on one line
      bool flat = true;
      for (const auto& x : v) flat = flat && !x.is_structured();
      if (flat) {
        os << '[';
        for (std::size_t i = 0; i < v.size(); ++i) {
          if (i) os << ", ";
          emit(os, v[i], depth);
        }
        os << ']';
        return;
      }
      os << "[\n";
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) os << ",\n";
        indent(os, depth + 1);
        emit(os, v[i], depth + 1);
      }
      os << '\n';
      indent(os, depth);
      os << ']';
      return;
    }
    case ordered_json::value_t::number_float: {
      const double x = v.get<double>();
      if (std::isfinite(x)) {
        os << detail::format_real(x);
      } else {
        os << "null";
      }
      return;
    }
    default:
      os << v.dump();
  }
}

}  // namespace

ordered_json to_json(const ProblemSpec& spec) {
  ordered_json j;
  j["n"] = spec.n;
  j["k"] = spec.k;
  j["tau"] = spec.tau;
  j["domain"] = domain_json(spec.domain);
  j["rhs"] = reals(spec.rhs.coefficients);
  if (!is_ball(spec.domain)) j["delta_inner"] = spec.delta_inner;
  j["delta_outer"] = spec.delta_outer;
  j["grid"] = spec.grid;
  return j;
}

ordered_json to_json(const SolveReport& report, bool include_profile) {
  ordered_json j;
  j["converged"] = report.converged;
  j["message"] = report.message;
  j["tau"] = real(report.tau);
  j["delta_inner"] = real(report.delta_inner);
  j["delta_outer"] = real(report.delta_outer);
  j["residual_sup"] = real(report.residual_sup);
  j["admissibility_margin_min"] = real(report.admissibility_margin_min);
  j["boundary_slope"] = real(report.boundary_slope);
  j["c0_min"] = real(report.c0_min);
  j["c0_max"] = real(report.c0_max);
  j["grad_sup"] = real(report.grad_sup);
  j["newton_iterations"] = report.newton_iterations;
  j["continuation_steps"] = report.continuation_steps;
  j["domain"] = domain_json(report.profile.domain());
  j["grid"] = report.profile.cells();
  if (include_profile) {
    const auto r = report.profile.radii();
    j["profile"] = {{"r", reals(r)}, {"u", reals(report.profile.values())}};
  }
  return j;
}

ordered_json to_json(const DeltaSweep& sweep) {
  ordered_json j;
  j["completed"] = sweep.completed;
  j["failure"] = sweep.failure;
  j["deltas"] = reals(sweep.deltas);
  j["cauchy"] = sweep.cauchy;
  j["interior_differences"] = reals(sweep.interior_differences);
  ordered_json violations = ordered_json::array();
  for (const auto& v : sweep.violations) {
    violations.push_back(
        {{"leg", v.leg}, {"node", v.node}, {"excess", real(v.excess)}});
  }
  j["violations"] = violations;
  ordered_json legs = ordered_json::array();
  for (const auto& rep : sweep.reports) legs.push_back(to_json(rep, false));
  j["legs"] = legs;
  return j;
}

ordered_json to_json(const AdmissibilityCertificate& cert,
                     const std::optional<Verification>& verification) {
  ordered_json j;
  j["N"] = real(cert.N);
  j["mu_required"] = real(cert.mu_required);
  j["valid"] = cert.valid;
  j["worst_node"] = cert.worst_node;
  ordered_json chi1 = ordered_json::array(), chi2 = ordered_json::array(),
               slack = ordered_json::array(), margin = ordered_json::array();
  for (const auto& node : cert.nodes) {
    chi1.push_back(real(node.chi1));
    chi2.push_back(real(node.chi2));
    slack.push_back(real(node.slack));
    margin.push_back(real(std::min(node.slack, 2.0 * node.chi2 - 1.0)));
  }
  j["nodes"] = {{"chi1", chi1},
                {"chi2", chi2},
                {"slack", slack},
                {"worst_margin", margin}};
  if (verification) {
    j["verification"] = {{"ok", verification->ok},
                         {"margin", real(verification->margin)},
                         {"mu_margin", real(verification->mu_margin)}};
  }
  return j;
}

void write_json(std::ostream& os, const ordered_json& value) {
  emit(os, value, 0);
  os << '\n';
}

void write_solution_csv(std::ostream& os, const SolveReport& report,
                        const ProblemSpec& spec) {
  const auto& u = report.profile;
  ProblemSpec at = spec.with_tau(report.tau);
  at.delta_inner = report.delta_inner;
  at.delta_outer = report.delta_outer;
  at.grid = u.cells();
  std::vector<double> res;
  try {
    res = residual(u, at);
  } catch (const std::exception&) {
    res.assign(u.size(), std::nan(""));
  }
  const auto field = spectrum_field(u, spec.n);
  const auto cone = at.cone();
  const std::size_t last = u.size() - 1;
  os << "r,u,residual,margin\n";
  for (std::size_t i = 0; i <= last; ++i) {
    os << detail::format_real(u.radius(i)) << ',' << detail::format_real(u[i])
       << ',' << detail::format_real(res[i]) << ',';
    const bool boundary = i == last || (i == 0 && !u.is_ball());
    if (!boundary) os << detail::format_real(in_cone(cone, field.at(i)).margin);
    os << '\n';
  }
}

}  // namespace lnlab
