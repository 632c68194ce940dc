#pragma once

#include "cgd/objective.hpp"

namespace cgd {

/// g(x) = f(x) + λ‖∇f(x)‖². Charges one value and one gradient evaluation.
/// Throws InputError on a bad x or negative λ, NumericError if g overflows.
double penalized_value(MeteredObjective& obj, const Vector& x, double lambda);

/// ∇g(x) = (I + 2λH(x))∇f(x). Charges one gradient and one Hessian
/// evaluation; throws CapabilityError when the objective has no Hessian.
Vector penalized_gradient(MeteredObjective& obj, const Vector& x,
                          double lambda);

/// Largest per-coordinate discrepancy between the analytic gradient and a
/// central difference with step h. The error is relative to |∂_i f| when
/// that exceeds 1 and absolute otherwise.
double fd_gradient_check(const Objective& obj, const Vector& x, double h);

/// Symmetrized central-difference Jacobian of the gradient.
Matrix fd_hessian(const Objective& obj, const Vector& x, double h);

}  // namespace cgd
