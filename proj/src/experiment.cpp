#include "cgd/experiment.hpp"

#include "cgd/error.hpp"
#include "cgd/penalty.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

namespace cgd::experiment {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

std::uint64_t parse_u64(std::string_view text) {
  const std::string t = trim(text);
  if (t.empty() || t.find_first_not_of("0123456789") != std::string::npos) {
    throw InputError("invalid seed '" + t + "'");
  }
  return std::stoull(t);
}

json vector_json(const Vector& v) {
  json out = json::array();
  for (double x : v) out.push_back(x);
  return out;
}

json lambda_json(const LambdaSetting& l) {
  return {{"kind", l.kind == ScheduleKind::constant ? "constant" : "linear"},
          {"start", l.start},
          {"end", l.end},
          {"label", l.label()}};
}

json config_json(const OptimizerConfig& c) {
  return {{"method", std::string(to_string(c.method))},
          {"alpha", c.alpha},
          {"lambda", lambda_json(c.lambda)},
          {"iters", c.iters},
          {"threshold", c.resolved_threshold()},
          {"fd_step", c.fd_step},
          {"grad_tol", c.grad_tol}};
}

// NaN is not valid JSON; emit null instead.
json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double initial_f(const Trace& t) {
  return t.records.empty() ? std::numeric_limits<double>::quiet_NaN() : t.records.front().f;
}

double final_f(const Trace& t) {
  return t.records.empty() ? std::numeric_limits<double>::quiet_NaN() : t.records.back().f;
}

std::string trace_file_name(const std::string& function, Method m,
                            std::uint64_t seed, OutputFormat fmt) {
  return function + "__" + std::string(to_string(m)) + "__seed" +
         std::to_string(seed) + (fmt == OutputFormat::csv ? ".csv" : ".json");
}

int resolve_threads(int requested) {
  return requested > 0 ? requested : thread_cap();
}

}  // namespace

OutputFormat parse_format(std::string_view text) {
  if (text == "csv") return OutputFormat::csv;
  if (text == "json") return OutputFormat::json;
  throw InputError("unknown format '" + std::string(text) + "'");
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::uint64_t> parse_seeds(std::string_view text) {
  std::vector<std::uint64_t> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    const std::string_view item = text.substr(pos, comma - pos);
    const auto dots = item.find("..");
    if (dots == std::string_view::npos) {
      out.push_back(parse_u64(item));
    } else {
      const auto lo = parse_u64(item.substr(0, dots));
      const auto hi = parse_u64(item.substr(dots + 2));
      if (hi < lo) throw InputError("empty seed range '" + std::string(item) + "'");
      for (auto s = lo; s <= hi; ++s) out.push_back(s);
    }
    pos = comma + 1;
  }
  if (out.empty()) throw InputError("no seeds given");
  return out;
}

Vector parse_vector(std::string_view text) {
  std::vector<double> values;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    const std::string item = trim(text.substr(pos, comma - pos));
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (item.empty() || end != item.c_str() + item.size()) {
      throw InputError("invalid number '" + item + "' in vector");
    }
    values.push_back(v);
    pos = comma + 1;
  }
  Vector out(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) {
    out(static_cast<Eigen::Index>(i)) = values[i];
  }
  require_finite(out, "x0");
  return out;
}

int thread_cap() {
  if (const char* env = std::getenv("CGD_OPT_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t)>& fn) {
  const auto workers = static_cast<std::size_t>(
      std::clamp<long>(threads, 1, static_cast<long>(std::max<std::size_t>(count, 1))));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

void write_file_atomic(const fs::path& path, std::string_view body) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(body.data(), static_cast<std::streamsize>(body.size()));
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string trace_csv(const Trace& trace, double f_star) {
  std::string out(kTraceCsvHeader);
  out += '\n';
  for (const auto& r : trace.records) {
    out += std::to_string(r.k);
    out += ',';
    out += std::to_string(r.grad_evals);
    out += ',';
    out += format_double(r.f - f_star);
    out += ',';
    out += format_double(r.grad_norm);
    out += ',';
    out += to_string(r.direction);
    out += ',';
    out += format_double(r.lambda);
    out += '\n';
  }
  return out;
}

std::string trace_json(const Trace& trace, double f_star) {
  json records = json::array();
  for (const auto& r : trace.records) {
    records.push_back({{"k", r.k},
                       {"grad_evals", r.grad_evals},
                       {"f_minus_fstar", r.f - f_star},
                       {"grad_norm", r.grad_norm},
                       {"direction", std::string(to_string(r.direction))},
                       {"lambda", r.lambda},
                       {"x", vector_json(r.x)},
                       {"qn_update_skipped", r.qn_update_skipped}});
  }
  json out = {{"terminated_by", std::string(to_string(trace.terminated_by))},
              {"diagnostic", trace.diagnostic},
              {"evals",
               {{"grad", trace.evals.grad_evals},
                {"value", trace.evals.value_evals},
                {"hessian", trace.evals.hessian_evals}}},
              {"qn_skipped_updates", trace.qn_skipped_updates},
              {"records", std::move(records)}};
  return out.dump(2) + "\n";
}

double first_step_improvement(const Trace& trace) {
  if (trace.records.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  const double f0 = trace.records[0].f;
  const double f1 = trace.records[1].f;
  return (f0 - f1) / f0 * 100.0;
}

bool is_monotone(const Trace& trace) {
  for (std::size_t k = 0; k + 1 < trace.records.size(); ++k) {
    if (trace.records[k + 1].f > trace.records[k].f) return false;
  }
  return true;
}

double mean(const std::vector<double>& v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  const functions::TestFunction& fn = functions::lookup(spec.function);
  const Objective& obj = fn.objective;
  if (spec.optimizers.empty()) throw InputError("no optimizers given");
  if (spec.seeds.empty()) throw InputError("no seeds given");
  for (const auto& c : spec.optimizers) {
    c.validate();
    if (c.method == Method::cgd && !obj.has_hessian()) {
      throw CapabilityError(fn.name +
                            " has no analytic Hessian; use cgd-fd or a "
                            "quasi-Newton variant instead");
    }
  }
  if (spec.x0_override && spec.x0_override->size() != obj.dim()) {
    throw InputError("x0 has dimension " + std::to_string(spec.x0_override->size()) +
                     ", expected " + std::to_string(obj.dim()));
  }
  if (!spec.out_dir.empty()) fs::create_directories(spec.out_dir);

  ExperimentResult result;
  result.f_star = obj.optimal_value();
  const std::size_t n_seeds = spec.seeds.size();
  result.runs.resize(spec.optimizers.size() * n_seeds);

  parallel_for(result.runs.size(), resolve_threads(spec.threads), [&](std::size_t i) {
    const OptimizerConfig& config = spec.optimizers[i / n_seeds];
    const std::uint64_t seed = spec.seeds[i % n_seeds];
    RunResult& run = result.runs[i];
    run.method = config.method;
    run.seed = seed;
    run.x0 = spec.x0_override ? *spec.x0_override : functions::sample_x0(obj, seed);
    run.trace = optimize(obj, config, run.x0);
    run.improvement = first_step_improvement(run.trace);
    run.monotone = is_monotone(run.trace);
    run.diverged = run.trace.terminated_by == Termination::nonfinite ||
                   final_f(run.trace) > initial_f(run.trace);
    if (!spec.out_dir.empty()) {
      run.file = trace_file_name(fn.name, config.method, seed, spec.format);
      write_file_atomic(spec.out_dir / run.file,
                        spec.format == OutputFormat::csv
                            ? trace_csv(run.trace, result.f_star)
                            : trace_json(run.trace, result.f_star));
    }
  });

  json runs = json::array();
  for (const auto& run : result.runs) {
    if (run.trace.terminated_by == Termination::nonfinite) result.exit_code = 1;
    runs.push_back({{"method", std::string(to_string(run.method))},
                    {"seed", run.seed},
                    {"x0", vector_json(run.x0)},
                    {"improvement_pct", number_or_null(run.improvement)},
                    {"f_initial", number_or_null(initial_f(run.trace))},
                    {"f_final", number_or_null(final_f(run.trace))},
                    {"iterations", run.trace.records.empty() ? 0 : run.trace.records.back().k},
                    {"grad_evals", run.trace.evals.grad_evals},
                    {"terminated_by", std::string(to_string(run.trace.terminated_by))},
                    {"monotone", run.monotone},
                    {"diverged", run.diverged},
                    {"diagnostic", run.trace.diagnostic},
                    {"file", run.file}});
  }

  json improvements = json::array();
  for (std::size_t o = 0; o < spec.optimizers.size(); ++o) {
    ImprovementSummary s;
    s.method = spec.optimizers[o].method;
    std::vector<double> values;
    for (std::size_t j = 0; j < n_seeds; ++j) {
      const double v = result.runs[o * n_seeds + j].improvement;
      if (std::isfinite(v)) values.push_back(v);
    }
    s.runs = static_cast<int>(values.size());
    s.mean = mean(values);
    s.median = median(values);
    if (fn.table1) {
      if (s.method == Method::gd) s.published_reference = fn.table1->gd_improvement;
      if (s.method == Method::cgd_fd) s.published_reference = fn.table1->cgd_fd_improvement;
    }
    improvements.push_back(
        {{"method", std::string(to_string(s.method))},
         {"mean_pct", number_or_null(s.mean)},
         {"median_pct", number_or_null(s.median)},
         {"runs", s.runs},
         {"published_pct",
          s.published_reference ? json(*s.published_reference) : json(nullptr)}});
    result.improvements.push_back(s);
  }

  json configs = json::array();
  for (const auto& c : spec.optimizers) configs.push_back(config_json(c));
  json seeds = json::array();
  for (auto s : spec.seeds) seeds.push_back(s);
  json summary = {
      {"function", fn.name},
      {"dim", obj.dim()},
      {"f_star", result.f_star},
      {"format", spec.format == OutputFormat::csv ? "csv" : "json"},
      {"seeds", std::move(seeds)},
      {"x0_override", spec.x0_override ? vector_json(*spec.x0_override) : json(nullptr)},
      {"configs", std::move(configs)},
      {"improvement", std::move(improvements)},
      {"runs", std::move(runs)},
      {"exit_code", result.exit_code}};
  result.summary_json = summary.dump(2) + "\n";
  if (!spec.out_dir.empty()) {
    write_file_atomic(spec.out_dir / "summary.json", result.summary_json);
  }
  return result;
}

Table1Result table1_suite(const std::vector<std::uint64_t>& seeds,
                          const fs::path& out_dir, double fd_step) {
  Table1Result result;
  json rows = json::array();
  std::string csv =
      "function,n,lambda,alpha,gd_mean_pct,cgd_fd_mean_pct,gd_median_pct,"
      "cgd_fd_median_pct,dominance_fraction,mean_dominates,policy_met,"
      "published_gd_pct,published_cgd_fd_pct\n";
  for (const auto& fn : functions::registry()) {
    if (!fn.table1) continue;
    const functions::Table1Row& row = *fn.table1;
    OptimizerConfig base;
    base.alpha = row.alpha;
    base.lambda = row.lambda;
    base.iters = kSuiteBudget;
    base.threshold = kSuiteBudget / 4;
    base.fd_step = fd_step;
    OptimizerConfig gd = base;
    gd.method = Method::gd;
    OptimizerConfig fd = base;
    fd.method = Method::cgd_fd;

    ExperimentSpec spec;
    spec.function = fn.name;
    spec.optimizers = {gd, fd};
    spec.seeds = seeds;
    if (!out_dir.empty()) spec.out_dir = out_dir / "traces" / fn.name;
    const ExperimentResult run = run_experiment(spec);
    result.exit_code = std::max(result.exit_code, run.exit_code);

    Table1RowResult r;
    r.function = fn.name;
    r.dim = fn.objective.dim();
    r.published = row;
    std::vector<double> gd_values, fd_values;
    int wins = 0;
    for (std::size_t j = 0; j < seeds.size(); ++j) {
      const double a = run.runs[j].improvement;
      const double b = run.runs[seeds.size() + j].improvement;
      gd_values.push_back(a);
      fd_values.push_back(b);
      if (b > a) ++wins;
    }
    r.gd_mean = mean(gd_values);
    r.cgd_fd_mean = mean(fd_values);
    r.gd_median = median(gd_values);
    r.cgd_fd_median = median(fd_values);
    r.dominance_fraction = static_cast<double>(wins) / static_cast<double>(seeds.size());
    result.rows.push_back(r);

    csv += fn.name + "," + std::to_string(r.dim) + ",\"" + row.lambda.label() +
           "\"," + format_double(row.alpha) + "," + format_double(r.gd_mean) + "," +
           format_double(r.cgd_fd_mean) + "," + format_double(r.gd_median) + "," +
           format_double(r.cgd_fd_median) + "," + format_double(r.dominance_fraction) +
           "," + (r.mean_dominates() ? "true" : "false") + "," +
           (r.policy_met() ? "true" : "false") + "," +
           format_double(row.gd_improvement) + "," +
           format_double(row.cgd_fd_improvement) + "\n";
    rows.push_back({{"function", fn.name},
                    {"n", r.dim},
                    {"lambda", lambda_json(row.lambda)},
                    {"alpha", row.alpha},
                    {"iters", kSuiteBudget},
                    {"threshold", kSuiteBudget / 4},
                    {"fd_step", fd_step},
                    {"gd_mean_pct", number_or_null(r.gd_mean)},
                    {"cgd_fd_mean_pct", number_or_null(r.cgd_fd_mean)},
                    {"gd_median_pct", number_or_null(r.gd_median)},
                    {"cgd_fd_median_pct", number_or_null(r.cgd_fd_median)},
                    {"dominance_fraction", r.dominance_fraction},
                    {"mean_dominates", r.mean_dominates()},
                    {"policy_met", r.policy_met()},
                    {"published_gd_pct", row.gd_improvement},
                    {"published_cgd_fd_pct", row.cgd_fd_improvement}});
  }
  if (!out_dir.empty()) {
    json seeds_json = json::array();
    for (auto s : seeds) seeds_json.push_back(s);
    json summary = {{"rows", std::move(rows)},
                    {"seeds", std::move(seeds_json)},
                    {"policy",
                     {{"dominance_threshold", kDominancePolicy},
                      {"note", "harness policy, not a claim about the method"}}},
                    {"exit_code", result.exit_code}};
    write_file_atomic(out_dir / "table1.json", summary.dump(2) + "\n");
    write_file_atomic(out_dir / "table1.csv", csv);
  }
  return result;
}

const std::vector<QnSetting>& qn_settings() {
  static const std::vector<QnSetting> settings = {
      {"zakharov", 1e-4, LambdaSetting::constant(0.003)},
      {"drop-wave", 0.01, LambdaSetting::constant(0.1)},
      {"eggholder", 2.0, LambdaSetting::constant(0.1)},
  };
  return settings;
}

const QnSeriesResult& QnSuiteResult::find(std::string_view function,
                                          Method method) const {
  for (const auto& s : series) {
    if (s.function == function && s.method == method) return s;
  }
  throw InputError("no series for " + std::string(function) + "/" +
                   std::string(to_string(method)));
}

QnSuiteResult qn_suite(const std::vector<std::uint64_t>& seeds,
                       const fs::path& out_dir) {
  static constexpr Method kMethods[] = {Method::dfp, Method::bfgs, Method::cgd_dfp,
                                        Method::cgd_bfgs};
  QnSuiteResult result;
  json functions_json = json::array();
  std::string csv = "function,method,median_final_f,mean_final_f,runs\n";
  for (const QnSetting& setting : qn_settings()) {
    ExperimentSpec spec;
    spec.function = setting.function;
    for (Method m : kMethods) {
      OptimizerConfig c;
      c.method = m;
      c.alpha = setting.alpha;
      c.lambda = setting.lambda;
      c.iters = kSuiteBudget;
      spec.optimizers.push_back(c);
    }
    spec.seeds = seeds;
    if (!out_dir.empty()) spec.out_dir = out_dir / "traces" / setting.function;
    const ExperimentResult run = run_experiment(spec);
    result.exit_code = std::max(result.exit_code, run.exit_code);

    json series_json = json::array();
    const std::size_t n = seeds.size();
    for (std::size_t o = 0; o < std::size(kMethods); ++o) {
      QnSeriesResult s;
      s.function = setting.function;
      s.method = kMethods[o];
      for (std::size_t j = 0; j < n; ++j) {
        s.final_values.push_back(final_f(run.runs[o * n + j].trace));
      }
      s.median_final = median(s.final_values);
      s.mean_final = mean(s.final_values);
      csv += s.function + "," + std::string(to_string(s.method)) + "," +
             format_double(s.median_final) + "," + format_double(s.mean_final) +
             "," + std::to_string(n) + "\n";
      series_json.push_back({{"method", std::string(to_string(s.method))},
                             {"median_final_f", number_or_null(s.median_final)},
                             {"mean_final_f", number_or_null(s.mean_final)},
                             {"final_f", s.final_values}});
      result.series.push_back(std::move(s));
    }

    // cgd-dfp is optimizer index 2, cgd-bfgs index 3.
    std::vector<double> gaps;
    for (std::size_t j = 0; j < n; ++j) {
      const auto& a = run.runs[2 * n + j].trace.records;
      const auto& b = run.runs[3 * n + j].trace.records;
      double gap = 0.0;
      for (std::size_t k = 0; k < std::min(a.size(), b.size()); ++k) {
        gap = std::max(gap, std::abs(a[k].f - b[k].f));
      }
      gaps.push_back(gap);
    }
    const double gap_median = median(gaps);
    result.cgd_variant_gap.emplace_back(setting.function, gap_median);
    functions_json.push_back({{"function", setting.function},
                              {"alpha", setting.alpha},
                              {"lambda", lambda_json(setting.lambda)},
                              {"iters", kSuiteBudget},
                              {"f_star", run.f_star},
                              {"series", std::move(series_json)},
                              {"cgd_dfp_vs_cgd_bfgs_median_max_gap",
                               number_or_null(gap_median)}});
  }
  if (!out_dir.empty()) {
    json seeds_json = json::array();
    for (auto s : seeds) seeds_json.push_back(s);
    json summary = {{"functions", std::move(functions_json)},
                    {"seeds", std::move(seeds_json)},
                    {"exit_code", result.exit_code}};
    write_file_atomic(out_dir / "qn_suite.json", summary.dump(2) + "\n");
    write_file_atomic(out_dir / "qn_suite.csv", csv);
  }
  return result;
}

CheckReport check_function(const functions::TestFunction& fn, int points,
                           std::uint64_t seed) {
  const Objective& obj = fn.objective;
  CheckReport report;
  report.function = fn.name;
  report.points = points;
  report.has_hessian = obj.has_hessian();
  for (int i = 0; i < points; ++i) {
    const Vector x = functions::sample_x0(obj, seed + static_cast<std::uint64_t>(i));
    const double scale = std::max(1.0, x.cwiseAbs().maxCoeff());
    report.max_gradient_error =
        std::max(report.max_gradient_error, fd_gradient_check(obj, x, 1e-6 * scale));
    if (report.has_hessian) {
      const Matrix h = obj.hessian(x);
      const double size = std::max(1.0, h.cwiseAbs().maxCoeff());
      report.max_hessian_asymmetry = std::max(
          report.max_hessian_asymmetry,
          (h - h.transpose()).cwiseAbs().maxCoeff() / size);
      const Matrix h_fd = fd_hessian(obj, x, 1e-5 * scale);
      report.max_hessian_fd_error = std::max(
          report.max_hessian_fd_error, (h - h_fd).cwiseAbs().maxCoeff() / size);
    }
  }
  if (const auto& min = obj.known_minimum()) {
    report.minimum_on_boundary = min->on_boundary;
    report.minimum_grad_norm = obj.gradient(min->x).norm();
    const Matrix h = obj.has_hessian() ? obj.hessian(min->x) : fd_hessian(obj, min->x, 1e-5);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (h + h.transpose()),
                                              Eigen::EigenvaluesOnly);
    report.minimum_min_eigenvalue = eig.eigenvalues().minCoeff();
  }
  return report;
}

}  // namespace cgd::experiment
