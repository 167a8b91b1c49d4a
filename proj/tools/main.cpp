#include <cstdio>
#include <filesystem>
#include <functional>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lnlab/acceptance.hpp"
#include "lnlab/cone.hpp"
#include "lnlab/detail/format.hpp"
#include "lnlab/detail/symmetric.hpp"
#include "lnlab/errors.hpp"
#include "lnlab/report_io.hpp"
#include "lnlab/solver.hpp"

namespace fs = std::filesystem;
using lnlab::detail::format_real;

namespace {

constexpr int kExitNumerical = 1;
constexpr int kExitUsage = 2;

struct Config {
  int n = 3;
  int k = 0;  // 0: every k for cone, 1 otherwise
  double tau = -1.0;
  std::string domain = "ball";
  double radius = 1.0;
  double inner = 1.0;
  double outer = 2.0;
  int grid = 1000;
  std::vector<double> delta_schedule;
  std::vector<double> tau_schedule;
  std::vector<double> rhs{0.5};
  std::string out;
  std::uint64_t seed = lnlab::AcceptanceOptions{}.seed;
  std::vector<std::string> only;
  double mutate_sigma = 0.0;
  std::string config;
};

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    out.push_back(std::stod(item, &used));
    if (item.find_first_not_of(" \t", used) != std::string::npos) {
      throw std::invalid_argument(item);
    }
  }
  return out;
}

void list_option(CLI::App& app, const std::string& name,
                 std::vector<double>& target, const std::string& help) {
  app.add_option_function<std::string>(
         name,
         [&target, name](const std::string& s) {
           try {
             target = parse_list(s);
           } catch (const std::exception&) {
             throw CLI::ValidationError(name, "expected comma-separated numbers");
           }
         },
         help)
      ->type_name("LIST");
}

// Fills options the command line left unset from a flat JSON object.
void apply_config(CLI::App& sub, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("--config", "cannot open " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw CLI::ValidationError("--config", e.what());
  }
  if (!j.is_object()) {
    throw CLI::ValidationError("--config", "expected a flat JSON object");
  }
  for (const auto& [key, value] : j.items()) {
    CLI::Option* opt = nullptr;
    try {
      opt = sub.get_option("--" + key);
    } catch (const CLI::OptionNotFound&) {
      throw CLI::ValidationError("--config", "unknown key '" + key + "'");
    }
    if (opt->count() > 0 || key == "config") continue;
    std::vector<std::string> tokens;
    const auto text = [](const nlohmann::json& v) {
      if (v.is_string()) return v.get<std::string>();
      if (v.is_number_float()) return format_real(v.get<double>());
      return v.dump();
    };
    if (value.is_array()) {
      std::string joined;
      for (const auto& v : value) {
        if (!joined.empty()) joined += ',';
        joined += text(v);
      }
      // --only takes repeated values; lists take one comma-joined value
      if (key == "only") {
        for (const auto& v : value) tokens.push_back(text(v));
      } else {
        tokens.push_back(joined);
      }
    } else {
      tokens.push_back(text(value));
    }
    for (auto& t : tokens) opt->add_result(t);
    opt->run_callback();
  }
}

lnlab::ProblemSpec problem_from(const Config& c, double default_tau) {
  lnlab::ProblemSpec spec;
  spec.n = c.n;
  spec.k = c.k == 0 ? 1 : c.k;
  spec.tau = c.tau < 0 ? default_tau : c.tau;
  if (c.domain == "ball") {
    spec.domain = lnlab::Ball{c.radius};
  } else {
    spec.domain = lnlab::Annulus{c.inner, c.outer};
  }
  spec.rhs.coefficients = c.rhs;
  spec.grid = c.grid;
  return spec;
}

void ensure_dir(const std::string& dir) {
  if (!dir.empty()) fs::create_directories(dir);
}

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream os(path);
  if (!os) throw lnlab::Error("cannot write " + path.string());
  body(os);
}

int cmd_cone(const Config& c) {
  const double tau = c.tau < 0 ? 1.0 : c.tau;
  const int k_lo = c.k == 0 ? 1 : c.k;
  const int k_hi = c.k == 0 ? c.n : c.k;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  std::cout << "n,k,tau,mu_plus,contains_e1,f_e\n";
  for (int k = k_lo; k <= k_hi; ++k) {
    const lnlab::ConeSpec cone{c.n, k, tau};
    cone.validate();
    const double mu = lnlab::mu_plus(cone);
    const bool e1 = lnlab::contains_ray_e1(cone);
    const double fe = lnlab::f_eval(cone, lnlab::Spectrum::ones(c.n));
    std::cout << c.n << ',' << k << ',' << format_real(tau) << ','
              << format_real(mu) << ',' << (e1 ? "true" : "false") << ','
              << format_real(fe) << '\n';
    rows.push_back({{"n", c.n}, {"k", k}, {"tau", tau}, {"mu_plus", mu},
                    {"contains_e1", e1}, {"f_e", fe}});
  }
  if (!c.out.empty()) {
    ensure_dir(c.out);
    write_file(fs::path(c.out) / "cone.json",
               [&](std::ostream& os) { lnlab::write_json(os, rows); });
  }
  return 0;
}

int cmd_solve(const Config& c) {
  const auto spec = problem_from(c, 0.9);
  spec.validate();
  auto schedule = c.delta_schedule;
  if (schedule.empty()) schedule = lnlab::geometric_schedule(0.1, 1e-4);
  lnlab::TauSchedule ts;
  if (!c.tau_schedule.empty()) ts.step = c.tau_schedule[0];
  if (c.tau_schedule.size() > 1) ts.min_step = c.tau_schedule[1];
  if (!(ts.step > 0.0 && ts.step <= 1.0 && ts.min_step > 0.0)) {
    throw lnlab::InvalidArgument("tau schedule needs 0 < step <= 1, min > 0");
  }
  const std::string out = c.out.empty() ? "lnlab_out" : c.out;
  ensure_dir(out);

  const auto sweep = lnlab::continuation_delta(spec, schedule, ts);
  for (std::size_t i = 0; i < sweep.reports.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "profile_%02zu.csv", i);
    write_file(fs::path(out) / name, [&](std::ostream& os) {
      lnlab::write_solution_csv(os, sweep.reports[i], spec);
    });
  }
  nlohmann::ordered_json report;
  report["problem"] = lnlab::to_json(spec);
  report["tau_schedule"] = {{"step", ts.step}, {"min_step", ts.min_step}};
  report["sweep"] = lnlab::to_json(sweep);
  if (!sweep.reports.empty()) {
    report["final"] = lnlab::to_json(sweep.reports.back());
  }
  write_file(fs::path(out) / "report.json",
             [&](std::ostream& os) { lnlab::write_json(os, report); });

  bool ok = sweep.completed;
  for (const auto& r : sweep.reports) ok = ok && r.converged;
  for (std::size_t i = 0; i < sweep.reports.size(); ++i) {
    const auto& r = sweep.reports[i];
    std::cout << "delta=" << format_real(sweep.deltas[i])
              << " residual=" << format_real(r.residual_sup)
              << " margin=" << format_real(r.admissibility_margin_min)
              << " slope=" << format_real(r.boundary_slope)
              << " newton=" << r.newton_iterations << '\n';
  }
  if (!ok) {
    std::cerr << "solve failed: "
              << (sweep.failure.empty() ? "not converged" : sweep.failure)
              << '\n';
    return kExitNumerical;
  }
  return 0;
}

int cmd_verify(const Config& c) {
  lnlab::AcceptanceOptions opts;
  opts.only = c.only;
  opts.seed = c.seed;
  lnlab::testing::sigma_perturbation = c.mutate_sigma;
  const auto results = lnlab::run_acceptance(opts);
  lnlab::testing::sigma_perturbation = 0.0;
  lnlab::print_acceptance(std::cout, results);
  if (!c.out.empty()) {
    ensure_dir(c.out);
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const auto& r : results) {
      // runtimes are left out so repeated runs give identical files
      j.push_back({{"id", r.id},
                   {"group", r.group},
                   {"title", r.title},
                   {"passed", r.passed},
                   {"measured", r.measured},
                   {"expected", r.expected}});
    }
    write_file(fs::path(c.out) / "verify.json",
               [&](std::ostream& os) { lnlab::write_json(os, j); });
  }
  bool all = true;
  for (const auto& r : results) all = all && r.passed;
  return all ? 0 : kExitNumerical;
}

void add_problem_options(CLI::App& sub, Config& c) {
  sub.add_option("--n", c.n, "dimension")->check(CLI::Range(3, 64));
  sub.add_option("--k", c.k, "cone index, 1 <= k <= n")
      ->check(CLI::Range(1, 64));
  sub.add_option("--tau", c.tau, "deformation parameter")
      ->check(CLI::Range(0.0, 1.0));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Radial sigma_k Loewner-Nirenberg lab"};
  app.require_subcommand(1);
  Config c;

  auto* cone = app.add_subcommand("cone", "cone constants mu_plus, e1, f(e)");
  add_problem_options(*cone, c);
  cone->add_option("--out", c.out, "output directory for cone.json");
  cone->add_option("--config", c.config, "flat JSON file of flag values");

  auto* solve = app.add_subcommand("solve", "tau and delta continuation");
  add_problem_options(*solve, c);
  solve->add_option("--domain", c.domain, "ball or annulus")
      ->check(CLI::IsMember({"ball", "annulus"}));
  solve->add_option("--radius", c.radius, "ball radius")
      ->check(CLI::PositiveNumber);
  solve->add_option("--inner", c.inner, "annulus inner radius")
      ->check(CLI::PositiveNumber);
  solve->add_option("--outer", c.outer, "annulus outer radius")
      ->check(CLI::PositiveNumber);
  solve->add_option("--grid", c.grid, "number of cells")
      ->check(CLI::Range(8, 1000000));
  list_option(*solve, "--delta-schedule", c.delta_schedule,
              "decreasing boundary values (default 0.1 halving to 1e-4)");
  list_option(*solve, "--tau-schedule", c.tau_schedule,
              "tau step[,minimum step]");
  list_option(*solve, "--rhs", c.rhs, "polynomial coefficients of psi(r)");
  solve->add_option("--out", c.out, "output directory (default lnlab_out)");
  solve->add_option("--config", c.config, "flat JSON file of flag values");

  auto* verify = app.add_subcommand("verify", "run the acceptance criteria");
  verify->add_option("--only", c.only, "criterion groups to run")
      ->delimiter(',')
      ->check(CLI::IsMember(lnlab::acceptance_groups()));
  verify->add_option("--seed", c.seed, "seed for randomized suites");
  verify->add_option("--mutate-sigma", c.mutate_sigma,
                     "relative error injected into sigma_k (mutation check)");
  verify->add_option("--out", c.out, "output directory for verify.json");
  verify->add_option("--config", c.config, "flat JSON file of flag values");

  try {
    app.parse(argc, argv);
    for (auto* sub : {cone, solve, verify}) {
      if (sub->parsed() && !c.config.empty()) apply_config(*sub, c.config);
    }
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (cone->parsed()) return cmd_cone(c);
    if (solve->parsed()) return cmd_solve(c);
    return cmd_verify(c);
  } catch (const lnlab::InvalidArgument& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
}
