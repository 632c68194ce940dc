#include "cgd/penalty.hpp"

#include "cgd/error.hpp"

#include <algorithm>
#include <cmath>

namespace cgd {
namespace {

void check_lambda(double lambda) {
  if (!std::isfinite(lambda) || lambda < 0.0) {
    throw InputError("lambda must be finite and non-negative");
  }
}

}  // namespace

double penalized_value(MeteredObjective& obj, const Vector& x, double lambda) {
  require_finite(x, "x");
  check_lambda(lambda);
  const double f = obj.value(x);
  const Vector g = obj.gradient(x);
  const double result = f + lambda * g.squaredNorm();
  if (!std::isfinite(result)) {
    throw NumericError(obj.objective().name() +
                       ": penalized value is not finite");
  }
  return result;
}

Vector penalized_gradient(MeteredObjective& obj, const Vector& x,
                          double lambda) {
  require_finite(x, "x");
  check_lambda(lambda);
  if (!obj.objective().has_hessian()) {
    throw CapabilityError(obj.objective().name() +
                          " has no analytic Hessian; use cgd-fd instead");
  }
  const Vector g = obj.gradient(x);
  const Matrix h = obj.hessian(x);
  Vector result = g + 2.0 * lambda * (h * g);
  if (!result.allFinite()) {
    throw NumericError(obj.objective().name() +
                       ": penalized gradient is not finite");
  }
  return result;
}

double fd_gradient_check(const Objective& obj, const Vector& x, double h) {
  if (!(h > 0.0)) throw InputError("finite-difference step must be positive");
  require_finite(x, "x");
  const Vector g = obj.gradient(x);
  double worst = 0.0;
  Vector probe = x;
  for (int i = 0; i < x.size(); ++i) {
    probe(i) = x(i) + h;
    const double up = obj.value(probe);
    probe(i) = x(i) - h;
    const double down = obj.value(probe);
    probe(i) = x(i);
    const double fd = (up - down) / (2.0 * h);
    const double err = std::abs(g(i) - fd) / std::max(1.0, std::abs(g(i)));
    worst = std::max(worst, err);
  }
  return worst;
}

Matrix fd_hessian(const Objective& obj, const Vector& x, double h) {
  if (!(h > 0.0)) throw InputError("finite-difference step must be positive");
  const auto n = x.size();
  Matrix out(n, n);
  Vector probe = x;
  for (Eigen::Index j = 0; j < n; ++j) {
    probe(j) = x(j) + h;
    const Vector up = obj.gradient(probe);
    probe(j) = x(j) - h;
    const Vector down = obj.gradient(probe);
    probe(j) = x(j);
    out.col(j) = (up - down) / (2.0 * h);
  }
  return 0.5 * (out + out.transpose());
}

}  // namespace cgd
