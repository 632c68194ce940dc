#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace cgd {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Throws InputError unless every component of `x` is finite.
void require_finite(const Vector& x, std::string_view what);

/// Per-coordinate sampling box [lo, hi].
struct Box {
  Vector lo;
  Vector hi;

  [[nodiscard]] bool contains(const Vector& x) const;
};

struct KnownMinimum {
  Vector x;
  double value = 0.0;
  // Minimizers attained on the edge of the sampling box need not have a
  // vanishing gradient.
  bool on_boundary = false;
};

struct EvalCounter {
  std::int64_t grad_evals = 0;
  std::int64_t value_evals = 0;
  std::int64_t hessian_evals = 0;

  friend bool operator==(const EvalCounter&, const EvalCounter&) = default;
};

/// A pure, twice-differentiable function bundle. Evaluations are
/// deterministic and safe to call concurrently; metering lives in
/// MeteredObjective.
class Objective {
 public:
  using ValueFn = std::function<double(const Vector&)>;
  using GradientFn = std::function<Vector(const Vector&)>;
  using HessianFn = std::function<Matrix(const Vector&)>;

  /// `hessian` may be empty. Throws InputError on an inconsistent box or
  /// minimum.
  Objective(std::string name, int dim, ValueFn value, GradientFn gradient,
            HessianFn hessian, Box domain,
            std::optional<KnownMinimum> minimum = std::nullopt);

  [[nodiscard]] const std::string& name() const { return name_; }
  [[nodiscard]] int dim() const { return dim_; }
  [[nodiscard]] bool has_hessian() const { return static_cast<bool>(hessian_); }
  [[nodiscard]] const Box& domain() const { return domain_; }
  [[nodiscard]] const std::optional<KnownMinimum>& known_minimum() const {
    return minimum_;
  }
  /// f* when known, else 0.
  [[nodiscard]] double optimal_value() const {
    return minimum_ ? minimum_->value : 0.0;
  }

  [[nodiscard]] double value(const Vector& x) const;
  [[nodiscard]] Vector gradient(const Vector& x) const;
  /// Throws CapabilityError when no analytic Hessian is attached.
  [[nodiscard]] Matrix hessian(const Vector& x) const;

 private:
  void check_dim(const Vector& x) const;

  std::string name_;
  int dim_;
  ValueFn value_;
  GradientFn gradient_;
  HessianFn hessian_;
  Box domain_;
  std::optional<KnownMinimum> minimum_;
};

/// Counting proxy around an Objective. One instance per optimizer run.
class MeteredObjective {
 public:
  explicit MeteredObjective(const Objective& objective) : objective_(&objective) {}

  double value(const Vector& x);
  Vector gradient(const Vector& x);
  Matrix hessian(const Vector& x);

  [[nodiscard]] const Objective& objective() const { return *objective_; }
  [[nodiscard]] const EvalCounter& counter() const { return counter_; }

 private:
  const Objective* objective_;
  EvalCounter counter_;
};

}  // namespace cgd
