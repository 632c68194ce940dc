// cgd-opt: benchmark runner for the constrained-gradient-descent family.
//
//   cgd-opt run --function matyas --optimizer gd,cgd-fd --alpha 0.01
//               --lambda 10 --iters 40 --seeds 0..19 --out runs/matyas
//   cgd-opt table1 --seeds 0..49 --out runs/table1
//   cgd-opt qn-suite --seeds 0..19 --out runs/qn
//   cgd-opt check --function all
//
// Exit codes: 0 success, 1 numeric failure (or failed check), 2 usage error.

#include "cgd/error.hpp"
#include "cgd/experiment.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

namespace {

using namespace cgd;
namespace ex = cgd::experiment;

constexpr int kUsageError = 2;

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    out.push_back(text.substr(pos, comma - pos));
    pos = comma + 1;
  }
  return out;
}

struct RunArgs {
  std::string function;
  std::string optimizers;
  double alpha = 0.01;
  std::string lambda = "0";
  int iters = 40;
  int threshold = -1;
  double fd_step = OptimizerConfig{}.fd_step;
  double grad_tol = 0.0;
  std::string seeds = "0";
  std::string x0;
  std::string format = "csv";
  std::string out;
};

int do_run(const RunArgs& a) {
  ex::ExperimentSpec spec;
  spec.function = a.function;
  spec.seeds = ex::parse_seeds(a.seeds);
  spec.format = ex::parse_format(a.format);
  spec.out_dir = a.out;
  if (!a.x0.empty()) spec.x0_override = ex::parse_vector(a.x0);
  for (const auto& name : split(a.optimizers)) {
    OptimizerConfig c;
    c.method = parse_method(name);
    c.alpha = a.alpha;
    c.lambda = LambdaSetting::parse(a.lambda);
    c.iters = a.iters;
    if (a.threshold >= 0) c.threshold = a.threshold;
    c.fd_step = a.fd_step;
    c.grad_tol = a.grad_tol;
    spec.optimizers.push_back(c);
  }
  const auto result = ex::run_experiment(spec);
  // Without --out the summary JSON owns stdout.
  std::FILE* human = a.out.empty() ? stderr : stdout;
  for (const auto& s : result.improvements) {
    std::fprintf(human, "%-9s mean improvement %8.3f%%  median %8.3f%%",
                 std::string(to_string(s.method)).c_str(), s.mean, s.median);
    if (s.published_reference) std::fprintf(human, "  (published %.2f%%)", *s.published_reference);
    std::fprintf(human, "\n");
  }
  for (const auto& r : result.runs) {
    if (r.trace.terminated_by == Termination::nonfinite) {
      std::fprintf(stderr, "%s seed %llu: %s\n", std::string(to_string(r.method)).c_str(),
                   static_cast<unsigned long long>(r.seed), r.trace.diagnostic.c_str());
    }
  }
  if (a.out.empty()) std::cout << result.summary_json;
  return result.exit_code;
}

int do_table1(const std::string& seeds, const std::string& out, double fd_step) {
  const auto result = ex::table1_suite(ex::parse_seeds(seeds), out, fd_step);
  std::printf("%-24s %-14s %6s %10s %10s %9s %8s %16s\n", "function", "lambda",
              "alpha", "gd%", "cgd-fd%", "dominance", "mean", "published");
  for (const auto& r : result.rows) {
    std::printf("%-24s %-14s %6.3g %10.3f %10.3f %9.2f %8s %7.2f -> %.2f\n",
                r.function.c_str(), r.published.lambda.label().c_str(),
                r.published.alpha, r.gd_mean, r.cgd_fd_mean, r.dominance_fraction,
                r.mean_dominates() ? "cgd-fd" : "gd", r.published.gd_improvement,
                r.published.cgd_fd_improvement);
  }
  return result.exit_code;
}

int do_qn_suite(const std::string& seeds, const std::string& out) {
  const auto result = ex::qn_suite(ex::parse_seeds(seeds), out);
  std::printf("%-10s %-9s %16s %16s\n", "function", "method", "median f_T", "mean f_T");
  for (const auto& s : result.series) {
    std::printf("%-10s %-9s %16.8g %16.8g\n", s.function.c_str(),
                std::string(to_string(s.method)).c_str(), s.median_final, s.mean_final);
  }
  for (const auto& [fn, gap] : result.cgd_variant_gap) {
    std::printf("%s: median max |f(cgd-dfp) - f(cgd-bfgs)| = %.3g\n", fn.c_str(), gap);
  }
  return result.exit_code;
}

int do_check(const std::string& function, int points) {
  std::vector<const functions::TestFunction*> targets;
  if (function == "all") {
    for (const auto& fn : functions::registry()) targets.push_back(&fn);
  } else {
    targets.push_back(&functions::lookup(function));
  }
  bool ok = true;
  for (const auto* fn : targets) {
    const auto r = ex::check_function(*fn, points);
    std::printf("%-24s gradient %.2e %s", r.function.c_str(), r.max_gradient_error,
                r.gradient_ok() ? "ok" : "FAIL");
    if (r.has_hessian) {
      std::printf("  hessian sym %.1e fd %.2e %s", r.max_hessian_asymmetry,
                  r.max_hessian_fd_error, r.hessian_ok() ? "ok" : "FAIL");
    } else {
      std::printf("  hessian n/a");
    }
    if (r.minimum_on_boundary) {
      std::printf("  minimum on boundary\n");
    } else {
      std::printf("  minimum |g| %.1e eig %.2e %s\n", r.minimum_grad_norm,
                  r.minimum_min_eigenvalue, r.minimum_ok() ? "ok" : "FAIL");
    }
    ok = ok && r.passed();
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constrained gradient descent benchmark runner"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run optimizers on one function");
  run_cmd->add_option("--function", run.function, "Registered function name")->required();
  run_cmd->add_option("--optimizer", run.optimizers,
                      "Comma-separated: gd,cgd,cgd-fd,cgd-dfp,cgd-bfgs,dfp,bfgs")
      ->required();
  run_cmd->add_option("--alpha", run.alpha, "Constant step size");
  run_cmd->add_option("--lambda", run.lambda, "Constant 'f' or linear schedule 'a:b'");
  run_cmd->add_option("--iters", run.iters, "Iterations T (gradient budget for cgd-fd)");
  run_cmd->add_option("--threshold", run.threshold, "CGD-FD stopping threshold b (default T/4)");
  run_cmd->add_option("--fd-step", run.fd_step, "CGD-FD probe step r");
  run_cmd->add_option("--grad-tol", run.grad_tol, "Stop once |grad f| <= tol (0 disables)");
  run_cmd->add_option("--seeds", run.seeds, "Seed list or range, e.g. 0..19");
  run_cmd->add_option("--x0", run.x0, "Comma-separated start point (overrides sampling)");
  run_cmd->add_option("--format", run.format, "Trace format: csv or json");
  run_cmd->add_option("--out", run.out, "Output directory");

  std::string t1_seeds = "0..49", t1_out;
  double t1_fd_step = OptimizerConfig{}.fd_step;
  auto* t1_cmd = app.add_subcommand("table1", "First-step improvement, GD vs CGD-FD");
  t1_cmd->add_option("--seeds", t1_seeds, "Seed list or range");
  t1_cmd->add_option("--out", t1_out, "Output directory");
  t1_cmd->add_option("--fd-step", t1_fd_step, "CGD-FD probe step r");

  std::string qn_seeds = "0..19", qn_out;
  auto* qn_cmd = app.add_subcommand("qn-suite", "CGD-QN versus DFP/BFGS");
  qn_cmd->add_option("--seeds", qn_seeds, "Seed list or range");
  qn_cmd->add_option("--out", qn_out, "Output directory");

  std::string check_fn;
  int check_points = 50;
  auto* check_cmd = app.add_subcommand("check", "Validate gradients and Hessians");
  check_cmd->add_option("--function", check_fn, "Function name or 'all'")->required();
  check_cmd->add_option("--points", check_points, "Number of seeded sample points");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    if (*run_cmd) return do_run(run);
    if (*t1_cmd) return do_table1(t1_seeds, t1_out, t1_fd_step);
    if (*qn_cmd) return do_qn_suite(qn_seeds, qn_out);
    if (*check_cmd) return do_check(check_fn, check_points);
  } catch (const InputError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsageError;
  } catch (const CapabilityError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsageError;
  } catch (const NumericError& e) {
    std::fprintf(stderr, "numeric failure: %s\n", e.what());
    return 1;
  }
  return kUsageError;
}
