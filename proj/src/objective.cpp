#include "cgd/objective.hpp"

#include "cgd/error.hpp"

#include <utility>

namespace cgd {

void require_finite(const Vector& x, std::string_view what) {
  if (!x.allFinite()) {
    throw InputError(std::string(what) + " has non-finite components");
  }
}

bool Box::contains(const Vector& x) const {
  if (x.size() != lo.size()) return false;
  return ((x.array() >= lo.array()) && (x.array() <= hi.array())).all();
}

Objective::Objective(std::string name, int dim, ValueFn value,
                     GradientFn gradient, HessianFn hessian, Box domain,
                     std::optional<KnownMinimum> minimum)
    : name_(std::move(name)),
      dim_(dim),
      value_(std::move(value)),
      gradient_(std::move(gradient)),
      hessian_(std::move(hessian)),
      domain_(std::move(domain)),
      minimum_(std::move(minimum)) {
  if (dim_ < 1) throw InputError(name_ + ": dimension must be positive");
  if (!value_ || !gradient_) {
    throw InputError(name_ + ": value and gradient are required");
  }
  if (domain_.lo.size() != dim_ || domain_.hi.size() != dim_) {
    throw InputError(name_ + ": domain box does not match dimension");
  }
  if ((domain_.lo.array() > domain_.hi.array()).any()) {
    throw InputError(name_ + ": domain box has lo > hi");
  }
  if (minimum_ && minimum_->x.size() != dim_) {
    throw InputError(name_ + ": known minimum does not match dimension");
  }
}

void Objective::check_dim(const Vector& x) const {
  if (x.size() != dim_) {
    throw InputError(name_ + ": expected dimension " + std::to_string(dim_) +
                     ", got " + std::to_string(x.size()));
  }
}

double Objective::value(const Vector& x) const {
  check_dim(x);
  return value_(x);
}

Vector Objective::gradient(const Vector& x) const {
  check_dim(x);
  return gradient_(x);
}

Matrix Objective::hessian(const Vector& x) const {
  check_dim(x);
  if (!hessian_) {
    throw CapabilityError(name_ +
                          " has no analytic Hessian; use cgd-fd or a "
                          "quasi-Newton variant instead");
  }
  return hessian_(x);
}

double MeteredObjective::value(const Vector& x) {
  double v = objective_->value(x);
  ++counter_.value_evals;
  return v;
}

Vector MeteredObjective::gradient(const Vector& x) {
  Vector g = objective_->gradient(x);
  ++counter_.grad_evals;
  return g;
}

Matrix MeteredObjective::hessian(const Vector& x) {
  Matrix h = objective_->hessian(x);
  ++counter_.hessian_evals;
  return h;
}

}  // namespace cgd
