#pragma once

#include "cgd/objective.hpp"

#include <string_view>

namespace cgd {

enum class QuasiNewtonVariant { dfp, bfgs };

std::string_view to_string(QuasiNewtonVariant v);

/// Result of a rank-two update. When the curvature condition fails the
/// input matrix is returned unchanged with `applied == false`.
struct QuasiNewtonUpdate {
  Matrix matrix;
  bool applied = false;
};

/// yᵀs > tol·‖s‖‖y‖ with a small relative tolerance; also rejects s = 0.
bool curvature_condition(const Vector& s, const Vector& y);

/// Inverse-Hessian update G → G' satisfying G'y = s.
///   DFP:  G + ssᵀ/(yᵀs) − Gyyᵀ G/(yᵀGy)
///   BFGS: (I − syᵀ/(yᵀs)) G (I − ysᵀ/(yᵀs)) + ssᵀ/(yᵀs)
QuasiNewtonUpdate qn_inverse_update(const Matrix& g, const Vector& s,
                                    const Vector& y, QuasiNewtonVariant v);

/// Direct Hessian-approximation update G̃ → G̃' satisfying G̃'s = y. Each
/// variant is the Sherman–Morrison–Woodbury inverse of the matching
/// qn_inverse_update.
///   DFP:  (I − ysᵀ/(yᵀs)) G̃ (I − syᵀ/(yᵀs)) + yyᵀ/(yᵀs)
///   BFGS: G̃ + yyᵀ/(yᵀs) − G̃ssᵀG̃/(sᵀG̃s)
QuasiNewtonUpdate qn_hessian_update(const Matrix& g_tilde, const Vector& s,
                                    const Vector& y, QuasiNewtonVariant v);

/// Running approximation for one optimizer run, starting from the identity.
struct QuasiNewtonState {
  explicit QuasiNewtonState(int n)
      : approx(Matrix::Identity(n, n)), last_s(Vector::Zero(n)),
        last_y(Vector::Zero(n)) {}

  Matrix approx;
  Vector last_s;
  Vector last_y;
  int skipped_updates = 0;
};

}  // namespace cgd
