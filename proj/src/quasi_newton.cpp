#include "cgd/quasi_newton.hpp"

#include "cgd/error.hpp"

namespace cgd {
namespace {

constexpr double kCurvatureTolerance = 1e-12;

void check_shapes(const Matrix& m, const Vector& s, const Vector& y) {
  if (m.rows() != m.cols() || m.rows() != s.size() || s.size() != y.size()) {
    throw InputError("quasi-Newton update: inconsistent dimensions");
  }
}

// (I − a bᵀ/ρ) M (I − b aᵀ/ρ) + a aᵀ/ρ, the form shared by inverse BFGS
// (a = s, b = y) and direct DFP (a = y, b = s).
Matrix projected_update(const Matrix& m, const Vector& a, const Vector& b,
                        double rho) {
  const auto n = m.rows();
  const Matrix left = Matrix::Identity(n, n) - (a * b.transpose()) / rho;
  Matrix out = left * m * left.transpose() + (a * a.transpose()) / rho;
  return 0.5 * (out + out.transpose());
}

// M + a aᵀ/(aᵀb) − M b bᵀ M/(bᵀMb), shared by inverse DFP (a = s, b = y)
// and direct BFGS (a = y, b = s).
Matrix rank_two_update(const Matrix& m, const Vector& a, const Vector& b,
                       double rho) {
  const Vector mb = m * b;
  const double bmb = b.dot(mb);
  Matrix out = m + (a * a.transpose()) / rho - (mb * mb.transpose()) / bmb;
  return 0.5 * (out + out.transpose());
}

}  // namespace

std::string_view to_string(QuasiNewtonVariant v) {
  return v == QuasiNewtonVariant::dfp ? "dfp" : "bfgs";
}

bool curvature_condition(const Vector& s, const Vector& y) {
  const double ys = y.dot(s);
  return ys > kCurvatureTolerance * s.norm() * y.norm() && ys > 0.0;
}

QuasiNewtonUpdate qn_inverse_update(const Matrix& g, const Vector& s,
                                    const Vector& y, QuasiNewtonVariant v) {
  check_shapes(g, s, y);
  if (!curvature_condition(s, y)) return {g, false};
  const double rho = y.dot(s);
  if (v == QuasiNewtonVariant::dfp) return {rank_two_update(g, s, y, rho), true};
  return {projected_update(g, s, y, rho), true};
}

QuasiNewtonUpdate qn_hessian_update(const Matrix& g_tilde, const Vector& s,
                                    const Vector& y, QuasiNewtonVariant v) {
  check_shapes(g_tilde, s, y);
  if (!curvature_condition(s, y)) return {g_tilde, false};
  const double rho = y.dot(s);
  if (v == QuasiNewtonVariant::dfp) {
    return {projected_update(g_tilde, y, s, rho), true};
  }
  return {rank_two_update(g_tilde, y, s, rho), true};
}

}  // namespace cgd
