#include "cgd/optimizers.hpp"

#include "cgd/error.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <utility>

namespace cgd {
namespace {

constexpr double kDescentSlack = 16.0 * std::numeric_limits<double>::epsilon();

constexpr std::array<std::pair<Method, std::string_view>, 7> kMethodNames{{
    {Method::gd, "gd"},
    {Method::cgd, "cgd"},
    {Method::cgd_fd, "cgd-fd"},
    {Method::cgd_dfp, "cgd-dfp"},
    {Method::cgd_bfgs, "cgd-bfgs"},
    {Method::dfp, "dfp"},
    {Method::bfgs, "bfgs"},
}};

void check_start(const Objective& obj, const Vector& x0) {
  if (x0.size() != obj.dim()) {
    throw InputError(obj.name() + ": x0 has dimension " +
                     std::to_string(x0.size()) + ", expected " +
                     std::to_string(obj.dim()));
  }
  require_finite(x0, "x0");
}

void require_method(const OptimizerConfig& config,
                    std::initializer_list<Method> allowed,
                    std::string_view runner) {
  for (Method m : allowed) {
    if (config.method == m) return;
  }
  throw InputError(std::string(runner) + " cannot run method '" +
                   std::string(to_string(config.method)) + "'");
}

// Builds a Trace while enforcing the finite-values policy.
class TraceWriter {
 public:
  explicit TraceWriter(const Objective& obj) : obj_(obj) {}

  // Appends the record for x_k. Returns false (and marks the trace as
  // aborted) when f(x_k) or the gradient norm is not finite.
  bool push(int k, const Vector& x, double grad_norm, DirectionKind kind,
            double lambda, std::int64_t grad_evals, bool skipped = false) {
    const double f = obj_.value(x);
    if (!std::isfinite(f) || !std::isfinite(grad_norm)) {
      abort(k, "non-finite objective value or gradient at the iterate");
      return false;
    }
    trace_.records.push_back(
        {k, x, f, grad_norm, kind, lambda, grad_evals, skipped});
    trace_.final_x = x;
    return true;
  }

  // Terminal record; the gradient norm is recomputed without metering when
  // the caller has not already paid for it.
  void finish(int k, const Vector& x, const Vector* grad,
              std::int64_t grad_evals, Termination why) {
    const double gn = grad ? grad->norm() : obj_.gradient(x).norm();
    if (push(k, x, gn, DirectionKind::none, 0.0, grad_evals)) {
      trace_.terminated_by = why;
    }
  }

  void abort(int k, std::string_view what) {
    trace_.terminated_by = Termination::nonfinite;
    trace_.diagnostic = "iteration " + std::to_string(k) + ": " + std::string(what);
  }

  Trace take(const MeteredObjective& m) {
    trace_.evals = m.counter();
    return std::move(trace_);
  }

  Trace& trace() { return trace_; }

 private:
  const Objective& obj_;
  Trace trace_;
};

Direction exact_cgd_direction(const Vector& grad, const Matrix& hessian,
                              double lambda) {
  Vector p = -(grad + 2.0 * lambda * (hessian * grad));
  if (is_descent(grad, p)) return {std::move(p), DirectionKind::cgd};
  return {-grad, DirectionKind::steepest_fallback};
}

QuasiNewtonVariant variant_of(Method m) {
  return (m == Method::cgd_dfp || m == Method::dfp) ? QuasiNewtonVariant::dfp
                                                    : QuasiNewtonVariant::bfgs;
}

// Shared driver for methods that evaluate one fresh gradient per iteration
// and choose a direction from it (gd, cgd).
template <typename ChooseDirection>
Trace run_first_order(const Objective& obj, const OptimizerConfig& config,
                      const Vector& x0, ChooseDirection choose) {
  MeteredObjective m(obj);
  TraceWriter out(obj);
  const LambdaSchedule schedule = config.schedule();
  Vector x = x0;
  for (int k = 0; k < config.iters; ++k) {
    const std::int64_t evals = m.counter().grad_evals;
    const Vector g = m.gradient(x);
    if (!g.allFinite()) {
      out.abort(k, "non-finite gradient");
      return out.take(m);
    }
    if (config.grad_tol > 0.0 && g.norm() <= config.grad_tol) {
      out.finish(k, x, &g, evals, Termination::grad_tol);
      return out.take(m);
    }
    const double lambda = schedule.at(k);
    Direction d = choose(m, x, g, lambda);
    const double recorded_lambda =
        d.kind == DirectionKind::steepest ? 0.0 : lambda;
    if (!out.push(k, x, g.norm(), d.kind, recorded_lambda, evals)) {
      return out.take(m);
    }
    Vector next = x + config.alpha * d.p;
    if (!next.allFinite()) {
      out.abort(k, "non-finite iterate");
      return out.take(m);
    }
    x = std::move(next);
  }
  out.finish(config.iters, x, nullptr, m.counter().grad_evals,
             Termination::iterations);
  return out.take(m);
}

}  // namespace

std::string_view to_string(Method m) {
  for (const auto& [method, name] : kMethodNames) {
    if (method == m) return name;
  }
  return "?";
}

Method parse_method(std::string_view name) {
  for (const auto& [method, text] : kMethodNames) {
    if (text == name) return method;
  }
  throw InputError("unknown optimizer '" + std::string(name) + "'");
}

std::string_view to_string(DirectionKind k) {
  switch (k) {
    case DirectionKind::cgd: return "cgd";
    case DirectionKind::steepest_fallback: return "steepest_fallback";
    case DirectionKind::steepest: return "steepest";
    case DirectionKind::quasi_newton: return "quasi_newton";
    case DirectionKind::none: return "none";
  }
  return "?";
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::budget: return "budget";
    case Termination::iterations: return "iterations";
    case Termination::grad_tol: return "grad_tol";
    case Termination::nonfinite: return "nonfinite";
  }
  return "?";
}

void OptimizerConfig::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw InputError("alpha must be positive and finite");
  }
  if (iters < 1) throw InputError("iters must be >= 1");
  (void)schedule();  // validates λ endpoints
  const int b = resolved_threshold();
  if (b < 0 || b > iters) throw InputError("threshold b must lie in [0, T]");
  if (method == Method::cgd_fd && (!(fd_step > 0.0) || !std::isfinite(fd_step))) {
    throw InputError("fd step r must be positive");
  }
  if (!(grad_tol >= 0.0)) throw InputError("grad_tol must be >= 0");
}

bool is_descent(const Vector& grad, const Vector& p) {
  return grad.dot(p) < -kDescentSlack * grad.squaredNorm();
}

Direction cgd_direction(MeteredObjective& obj, const Vector& x, double lambda) {
  if (!obj.objective().has_hessian()) {
    throw CapabilityError(obj.objective().name() +
                          " has no analytic Hessian; use cgd-fd instead");
  }
  require_finite(x, "x");
  const Vector g = obj.gradient(x);
  const Matrix h = obj.hessian(x);
  return exact_cgd_direction(g, h, lambda);
}

Direction cgd_fd_direction(MeteredObjective& obj, const Vector& x,
                           double lambda, double r) {
  if (!(r > 0.0)) throw InputError("fd step r must be positive");
  require_finite(x, "x");
  const Vector g = obj.gradient(x);
  const Vector probe = obj.gradient(x + r * g);
  const double nu = 2.0 * lambda / r;
  Vector p = -((1.0 - nu) * g + nu * probe);
  if (!p.allFinite()) {
    throw NumericError(obj.objective().name() +
                       ": finite-difference direction is not finite");
  }
  if (is_descent(g, p)) return {std::move(p), DirectionKind::cgd};
  return {-g, DirectionKind::steepest_fallback};
}

Trace run_cgd(const Objective& obj, const OptimizerConfig& config,
              const Vector& x0) {
  require_method(config, {Method::cgd}, "run_cgd");
  config.validate();
  check_start(obj, x0);
  if (!obj.has_hessian()) {
    throw CapabilityError(obj.name() +
                          " has no analytic Hessian; use cgd-fd instead");
  }
  return run_first_order(
      obj, config, x0,
      [](MeteredObjective& m, const Vector& x, const Vector& g, double lambda) {
        return exact_cgd_direction(g, m.hessian(x), lambda);
      });
}

Trace run_cgd_fd(const Objective& obj, const OptimizerConfig& config,
                 const Vector& x0) {
  require_method(config, {Method::cgd_fd}, "run_cgd_fd");
  config.validate();
  check_start(obj, x0);

  MeteredObjective m(obj);
  TraceWriter out(obj);
  const LambdaSchedule schedule = config.schedule();
  const int budget = config.iters;
  const int threshold = config.resolved_threshold();
  const double r = config.fd_step;

  bool use_cgd = true;
  std::int64_t spent = 0;  // the budget counter c
  Vector x = x0;
  for (int k = 0; k < config.iters; ++k) {
    if (spent >= budget) {
      out.finish(k, x, nullptr, spent, Termination::budget);
      return out.take(m);
    }
    const Vector g = m.gradient(x);
    if (!g.allFinite()) {
      out.abort(k, "non-finite gradient");
      return out.take(m);
    }
    if (config.grad_tol > 0.0 && g.norm() <= config.grad_tol) {
      out.finish(k, x, &g, spent, Termination::grad_tol);
      return out.take(m);
    }
    const double lambda = schedule.at(k);

    Vector p;
    DirectionKind kind;
    std::int64_t cost;
    if (use_cgd && spent + 2 <= budget) {
      const Vector probe = m.gradient(x + r * g);
      const double nu = 2.0 * lambda / r;
      p = -((1.0 - nu) * g + nu * probe);
      cost = 2;
      if (p.allFinite() && is_descent(g, p)) {
        kind = DirectionKind::cgd;
      } else {
        p = -g;
        kind = DirectionKind::steepest_fallback;
        use_cgd = false;
      }
    } else {
      // Either CGD was switched off, or a 2-cost step would overrun the
      // budget by one.
      p = -g;
      kind = use_cgd ? DirectionKind::steepest_fallback : DirectionKind::steepest;
      cost = 1;
    }
    const double recorded_lambda = kind == DirectionKind::steepest ? 0.0 : lambda;
    if (!out.push(k, x, g.norm(), kind, recorded_lambda, spent)) {
      return out.take(m);
    }
    spent += cost;

    Vector next = x + config.alpha * p;
    if (!next.allFinite()) {
      out.abort(k, "non-finite iterate");
      return out.take(m);
    }
    x = std::move(next);
    if (k >= threshold) use_cgd = false;
  }
  out.finish(config.iters, x, nullptr, spent,
             spent >= budget ? Termination::budget : Termination::iterations);
  return out.take(m);
}

namespace {

Trace run_quasi_newton(const Objective& obj, const OptimizerConfig& config,
                       const Vector& x0) {
  config.validate();
  check_start(obj, x0);
  const bool penalized =
      config.method == Method::cgd_dfp || config.method == Method::cgd_bfgs;
  const QuasiNewtonVariant variant = variant_of(config.method);

  MeteredObjective m(obj);
  TraceWriter out(obj);
  const LambdaSchedule schedule = config.schedule();
  // Penalized runs carry the Hessian approximation G̃; vanilla runs carry
  // the inverse approximation G.
  QuasiNewtonState state(obj.dim());

  Vector x = x0;
  Vector g = m.gradient(x);
  for (int k = 0; k < config.iters; ++k) {
    if (!g.allFinite()) {
      out.abort(k, "non-finite gradient");
      return out.take(m);
    }
    if (config.grad_tol > 0.0 && g.norm() <= config.grad_tol) {
      out.finish(k, x, &g, k, Termination::grad_tol);
      return out.take(m);
    }
    double lambda = 0.0;
    Direction d;
    if (penalized) {
      lambda = schedule.at(k);
      Vector p = -(g + 2.0 * lambda * (state.approx * g));
      d = is_descent(g, p) ? Direction{std::move(p), DirectionKind::cgd}
                           : Direction{-g, DirectionKind::steepest_fallback};
    } else {
      d = {-(state.approx * g), DirectionKind::quasi_newton};
    }

    Vector next = x + config.alpha * d.p;
    if (!next.allFinite()) {
      out.push(k, x, g.norm(), d.kind, lambda, k);
      out.abort(k, "non-finite iterate");
      return out.take(m);
    }
    Vector g_next = m.gradient(next);
    Vector s = next - x;
    Vector y = g_next - g;
    QuasiNewtonUpdate upd =
        g_next.allFinite()
            ? (penalized ? qn_hessian_update(state.approx, s, y, variant)
                         : qn_inverse_update(state.approx, s, y, variant))
            : QuasiNewtonUpdate{state.approx, false};
    if (upd.applied) {
      state.approx = std::move(upd.matrix);
      state.last_s = std::move(s);
      state.last_y = std::move(y);
    } else {
      ++state.skipped_updates;
    }
    if (!out.push(k, x, g.norm(), d.kind, lambda, k, !upd.applied)) {
      return out.take(m);
    }
    x = std::move(next);
    g = std::move(g_next);
  }
  if (!g.allFinite()) {
    out.abort(config.iters, "non-finite gradient");
  } else {
    out.finish(config.iters, x, &g, config.iters, Termination::iterations);
  }
  out.trace().qn_skipped_updates = state.skipped_updates;
  return out.take(m);
}

}  // namespace

Trace run_cgd_qn(const Objective& obj, const OptimizerConfig& config,
                 const Vector& x0) {
  require_method(config, {Method::cgd_dfp, Method::cgd_bfgs}, "run_cgd_qn");
  return run_quasi_newton(obj, config, x0);
}

Trace run_baseline(const Objective& obj, const OptimizerConfig& config,
                   const Vector& x0) {
  require_method(config, {Method::gd, Method::dfp, Method::bfgs},
                 "run_baseline");
  if (config.method != Method::gd) return run_quasi_newton(obj, config, x0);
  config.validate();
  check_start(obj, x0);
  return run_first_order(
      obj, config, x0,
      [](MeteredObjective&, const Vector&, const Vector& g, double) {
        return Direction{-g, DirectionKind::steepest};
      });
}

Trace optimize(const Objective& obj, const OptimizerConfig& config,
               const Vector& x0) {
  switch (config.method) {
    case Method::gd:
    case Method::dfp:
    case Method::bfgs:
      return run_baseline(obj, config, x0);
    case Method::cgd:
      return run_cgd(obj, config, x0);
    case Method::cgd_fd:
      return run_cgd_fd(obj, config, x0);
    case Method::cgd_dfp:
    case Method::cgd_bfgs:
      return run_cgd_qn(obj, config, x0);
  }
  throw InputError("unknown method");
}

}  // namespace cgd
