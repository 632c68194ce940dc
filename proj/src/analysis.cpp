#include "cgd/analysis.hpp"

#include "cgd/error.hpp"
#include "cgd/functions.hpp"
#include "cgd/penalty.hpp"

#include <algorithm>
#include <cmath>

namespace cgd::analysis {
namespace {

constexpr double kGapFloor = 1e-14;

void require_positive(double v, std::string_view what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw InputError(std::string(what) + " must be positive and finite");
  }
}

}  // namespace

std::string_view to_string(StationaryKind k) {
  switch (k) {
    case StationaryKind::true_stationary: return "true_stationary";
    case StationaryKind::fictitious: return "fictitious";
    case StationaryKind::not_stationary: return "not_stationary";
  }
  return "?";
}

StationaryVerdict classify_stationary(const Objective& obj, const Vector& x,
                                      double lambda, double tol_g,
                                      double tol_e) {
  if (!(lambda >= 0.0)) throw InputError("lambda must be non-negative");
  require_finite(x, "x");
  const Vector g = obj.gradient(x);
  StationaryVerdict v;
  v.grad_norm = g.norm();
  if (v.grad_norm <= tol_g) {
    v.kind = StationaryKind::true_stationary;
    return v;
  }
  if (lambda == 0.0) {
    v.kind = StationaryKind::not_stationary;
    return v;
  }
  const Matrix h = obj.hessian(x);
  v.eigen_residual = (h * g + g / (2.0 * lambda)).norm() / v.grad_norm;
  v.kind = v.eigen_residual <= tol_e ? StationaryKind::fictitious
                                     : StationaryKind::not_stationary;
  return v;
}

double RateEnvelope::bound(int k, double initial_gap) const {
  return std::pow(rho, k) * initial_gap;
}

RateEnvelope theorem1_envelope(double smoothness, double pl_constant,
                               double lambda) {
  require_positive(smoothness, "L");
  require_positive(pl_constant, "mu");
  if (pl_constant > smoothness) throw InputError("mu must not exceed L");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw InputError("lambda must be non-negative");
  }
  const double scale = 1.0 + 2.0 * lambda * smoothness;
  const double denom = smoothness * scale * scale;
  RateEnvelope e;
  e.smoothness = smoothness;
  e.pl_constant = pl_constant;
  e.lambda = lambda;
  e.alpha_max = 2.0 / denom;
  e.alpha_star = 1.0 / denom;
  e.rho = 1.0 - pl_constant / denom;
  return e;
}

QuadraticRate quadratic_rate(double l, double L, double lambda) {
  require_positive(l, "l");
  require_positive(L, "L");
  if (l > L) throw InputError("l must not exceed L");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw InputError("lambda must be non-negative");
  }
  const double top = (1.0 + 2.0 * lambda * L) * L;
  const double bottom = (1.0 + 2.0 * lambda * l) * l;
  QuadraticRate r;
  r.l = l;
  r.L = L;
  r.lambda = lambda;
  r.alpha_opt = 2.0 / (top + bottom);
  r.kappa = top / bottom;
  r.factor = (top - bottom) / (top + bottom);
  return r;
}

double pl_constant_quadratic(const Matrix& q) {
  if (q.rows() != q.cols() || q.rows() == 0) {
    throw InputError("Q must be a non-empty square matrix");
  }
  if (!q.isApprox(q.transpose(), 1e-12)) throw InputError("Q must be symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(q, Eigen::EigenvaluesOnly);
  const double mu = eig.eigenvalues().minCoeff();
  if (!(mu > 0.0)) throw InputError("Q must be positive definite");
  return mu;
}

double empirical_rate(const Trace& trace, double f_star) {
  if (trace.records.empty()) throw InputError("empty trace");
  double worst = 0.0;
  for (std::size_t k = 0; k + 1 < trace.records.size(); ++k) {
    const double gap = trace.records[k].f - f_star;
    if (gap < kGapFloor) continue;
    worst = std::max(worst, (trace.records[k + 1].f - f_star) / gap);
  }
  return worst;
}

double estimate_smoothness(const Objective& obj, int samples,
                           std::uint64_t seed) {
  if (samples < 1) throw InputError("samples must be >= 1");
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const Vector x = functions::sample_x0(obj, seed + static_cast<std::uint64_t>(i));
    const Matrix h = obj.has_hessian() ? obj.hessian(x) : fd_hessian(obj, x, 1e-5);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (h + h.transpose()),
                                              Eigen::EigenvaluesOnly);
    worst = std::max(worst, eig.eigenvalues().cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace cgd::analysis
