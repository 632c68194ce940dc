#pragma once

#include "cgd/objective.hpp"
#include "cgd/quasi_newton.hpp"
#include "cgd/schedule.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cgd {

enum class Method { gd, cgd, cgd_fd, cgd_dfp, cgd_bfgs, dfp, bfgs };

/// "gd", "cgd", "cgd-fd", "cgd-dfp", "cgd-bfgs", "dfp", "bfgs".
std::string_view to_string(Method m);
/// Throws InputError for unknown names.
Method parse_method(std::string_view name);

/// Which direction carried the iterate from x_k to x_{k+1}.
enum class DirectionKind {
  cgd,                ///< −(I + 2λB)∇f passed the descent check
  steepest_fallback,  ///< CGD direction rejected (or unaffordable), −∇f used
  steepest,           ///< plain gradient descent
  quasi_newton,       ///< −G∇f of a vanilla DFP/BFGS run
  none,               ///< terminal record, no step taken
};
std::string_view to_string(DirectionKind k);

enum class Termination { budget, iterations, grad_tol, nonfinite };
std::string_view to_string(Termination t);

struct OptimizerConfig {
  Method method = Method::gd;
  double alpha = 0.01;
  LambdaSetting lambda = LambdaSetting::constant(0.0);
  /// Iteration cap T; for cgd-fd also the gradient-evaluation budget.
  int iters = 40;
  /// CGD-FD stopping threshold b. Defaults to T/4.
  std::optional<int> threshold;
  /// CGD-FD probe step r.
  double fd_step = 1e-4;
  /// Early exit once ‖∇f_k‖ ≤ grad_tol; 0 disables.
  double grad_tol = 0.0;

  [[nodiscard]] int resolved_threshold() const {
    return threshold.value_or(iters / 4);
  }
  [[nodiscard]] LambdaSchedule schedule() const { return {lambda, iters}; }
  /// Throws InputError on α ≤ 0, T < 1, b outside [0, T], r ≤ 0, ...
  void validate() const;
};

struct IterateRecord {
  int k = 0;
  Vector x;
  double f = 0.0;
  double grad_norm = 0.0;
  DirectionKind direction = DirectionKind::none;
  /// λ_k used for the step out of x_k (0 for baselines and the last record).
  double lambda = 0.0;
  /// Gradient evaluations charged before arriving at x_k.
  std::int64_t grad_evals = 0;
  /// Set when the quasi-Newton update after this step was skipped.
  bool qn_update_skipped = false;
};

struct Trace {
  std::vector<IterateRecord> records;
  Termination terminated_by = Termination::iterations;
  Vector final_x;
  EvalCounter evals;
  int qn_skipped_updates = 0;
  /// Non-empty when the run aborted on a non-finite value.
  std::string diagnostic;
};

struct Direction {
  Vector p;
  DirectionKind kind = DirectionKind::cgd;
};

/// ∇fᵀp < 0, with the right-hand side widened by a few ulps of ‖∇f‖² so
/// that a direction which is zero up to rounding does not count as descent.
bool is_descent(const Vector& grad, const Vector& p);

/// Exact-Hessian CGD direction with steepest-descent fallback. Charges one
/// gradient and one Hessian evaluation.
Direction cgd_direction(MeteredObjective& obj, const Vector& x, double lambda);

/// Finite-difference CGD direction −[(1−ν)∇f + ν∇f(x + r∇f)], ν = 2λ/r,
/// with the same fallback. Always charges two gradient evaluations.
Direction cgd_fd_direction(MeteredObjective& obj, const Vector& x,
                           double lambda, double r);

Trace run_cgd(const Objective& obj, const OptimizerConfig& config,
              const Vector& x0);
Trace run_cgd_fd(const Objective& obj, const OptimizerConfig& config,
                 const Vector& x0);
Trace run_cgd_qn(const Objective& obj, const OptimizerConfig& config,
                 const Vector& x0);
/// gd, dfp and bfgs.
Trace run_baseline(const Objective& obj, const OptimizerConfig& config,
                   const Vector& x0);

/// Dispatches on config.method.
Trace optimize(const Objective& obj, const OptimizerConfig& config,
               const Vector& x0);

}  // namespace cgd
