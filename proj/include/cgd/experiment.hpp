#pragma once

#include "cgd/functions.hpp"
#include "cgd/optimizers.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cgd::experiment {

enum class OutputFormat { csv, json };
OutputFormat parse_format(std::string_view text);

/// Header of every CSV trace file.
inline constexpr std::string_view kTraceCsvHeader =
    "k,grad_evals,f_minus_fstar,grad_norm,direction,lambda";

/// Fraction of seeds on which CGD-FD must beat GD for a Table-1 row to meet
/// the harness policy. Reported, not a property of the method.
inline constexpr double kDominancePolicy = 0.8;

// ---- formatting and parsing ------------------------------------------------

/// "%.17g"; identical inputs always give identical text.
std::string format_double(double v);

/// Seeds from "0..19", "3", or comma-separated mixes such as "0,4,10..12".
std::vector<std::uint64_t> parse_seeds(std::string_view text);

/// Comma-separated floats.
Vector parse_vector(std::string_view text);

/// Worker count: CGD_OPT_THREADS when set to a positive integer, else the
/// hardware concurrency.
int thread_cap();

/// Runs fn(0) .. fn(count-1) on at most `threads` workers. The first
/// exception thrown by any task is rethrown after all workers join.
void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t)>& fn);

/// Writes through a temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view body);

std::string trace_csv(const Trace& trace, double f_star);
std::string trace_json(const Trace& trace, double f_star);

/// (f(x₀) − f(x₁)) / f(x₀) · 100; NaN when the run never left x₀.
double first_step_improvement(const Trace& trace);

/// True when f never increases along the trace.
bool is_monotone(const Trace& trace);

double mean(const std::vector<double>& v);
double median(std::vector<double> v);

// ---- run ------------------------------------------------------------------

struct ExperimentSpec {
  std::string function;
  /// One config per optimizer; all share each seed's x0.
  std::vector<OptimizerConfig> optimizers;
  std::vector<std::uint64_t> seeds;
  std::optional<Vector> x0_override;
  OutputFormat format = OutputFormat::csv;
  /// Empty path: nothing is written.
  std::filesystem::path out_dir;
  int threads = 0;  // 0 → thread_cap()
};

struct RunResult {
  Method method = Method::gd;
  std::uint64_t seed = 0;
  Vector x0;
  Trace trace;
  double improvement = 0.0;
  bool monotone = true;
  bool diverged = false;
  std::string file;
};

struct ImprovementSummary {
  Method method = Method::gd;
  double mean = 0.0;
  double median = 0.0;
  int runs = 0;
  std::optional<double> published_reference;
};

struct ExperimentResult {
  std::vector<RunResult> runs;  // optimizer-major, then seed
  std::vector<ImprovementSummary> improvements;
  double f_star = 0.0;
  int exit_code = 0;  // 0 ok, 1 numeric failure in at least one run
  std::string summary_json;
};

/// Throws InputError for unknown functions, invalid configs or an x0 of the
/// wrong dimension.
ExperimentResult run_experiment(const ExperimentSpec& spec);

// ---- suites ---------------------------------------------------------------

inline constexpr int kSuiteBudget = 40;

struct Table1RowResult {
  std::string function;
  int dim = 0;
  functions::Table1Row published;
  double gd_mean = 0.0;
  double cgd_fd_mean = 0.0;
  double gd_median = 0.0;
  double cgd_fd_median = 0.0;
  /// Share of seeds where CGD-FD's improvement exceeds GD's.
  double dominance_fraction = 0.0;
  [[nodiscard]] bool mean_dominates() const { return cgd_fd_mean > gd_mean; }
  [[nodiscard]] bool policy_met() const {
    return dominance_fraction >= kDominancePolicy;
  }
};

struct Table1Result {
  std::vector<Table1RowResult> rows;
  int exit_code = 0;
};

/// Every Table-1 row with its published (λ, α), T = 40, b = T/4, GD versus
/// CGD-FD from paired seeded starts. Writes table1.csv, table1.json and
/// per-run traces under out_dir when it is non-empty.
Table1Result table1_suite(const std::vector<std::uint64_t>& seeds,
                          const std::filesystem::path& out_dir,
                          double fd_step = OptimizerConfig{}.fd_step);

/// Step size and penalty used for one quasi-Newton comparison.
struct QnSetting {
  std::string function;
  double alpha = 0.0;
  LambdaSetting lambda;
};
const std::vector<QnSetting>& qn_settings();

struct QnSeriesResult {
  std::string function;
  Method method = Method::bfgs;
  std::vector<double> final_values;  // one per seed
  double median_final = 0.0;
  double mean_final = 0.0;
};

struct QnSuiteResult {
  std::vector<QnSeriesResult> series;  // 3 functions x 4 optimizers
  /// Per function: median over seeds of the largest per-step |f| gap between
  /// cgd-dfp and cgd-bfgs.
  std::vector<std::pair<std::string, double>> cgd_variant_gap;
  int exit_code = 0;

  [[nodiscard]] const QnSeriesResult& find(std::string_view function,
                                           Method method) const;
};

/// dfp, bfgs, cgd-dfp, cgd-bfgs on Zakharov, Drop-Wave and EggHolder for
/// T = 40 iterations.
QnSuiteResult qn_suite(const std::vector<std::uint64_t>& seeds,
                       const std::filesystem::path& out_dir);

// ---- check ----------------------------------------------------------------

struct CheckReport {
  std::string function;
  int points = 0;
  double max_gradient_error = 0.0;
  bool has_hessian = false;
  double max_hessian_asymmetry = 0.0;
  double max_hessian_fd_error = 0.0;
  double minimum_grad_norm = 0.0;
  double minimum_min_eigenvalue = 0.0;
  bool minimum_on_boundary = false;

  static constexpr double kGradientTol = 1e-5;
  static constexpr double kHessianTol = 1e-4;
  static constexpr double kMinimumGradTol = 1e-6;
  static constexpr double kEigenFloor = -1e-6;

  [[nodiscard]] bool gradient_ok() const { return max_gradient_error <= kGradientTol; }
  [[nodiscard]] bool hessian_ok() const {
    return !has_hessian ||
           (max_hessian_asymmetry <= 1e-12 && max_hessian_fd_error <= kHessianTol);
  }
  [[nodiscard]] bool minimum_ok() const {
    return minimum_on_boundary || (minimum_grad_norm <= kMinimumGradTol &&
                                   minimum_min_eigenvalue >= kEigenFloor);
  }
  [[nodiscard]] bool passed() const {
    return gradient_ok() && hessian_ok() && minimum_ok();
  }
};

/// Gradient and Hessian validation at `points` seeded domain samples plus
/// first/second-order checks at the known minimum.
CheckReport check_function(const functions::TestFunction& fn, int points = 50,
                           std::uint64_t seed = 0);

}  // namespace cgd::experiment
