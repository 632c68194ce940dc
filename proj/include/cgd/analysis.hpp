#pragma once

#include "cgd/objective.hpp"
#include "cgd/optimizers.hpp"

#include <cstdint>
#include <string_view>

namespace cgd::analysis {

enum class StationaryKind { true_stationary, fictitious, not_stationary };
std::string_view to_string(StationaryKind k);

struct StationaryVerdict {
  StationaryKind kind = StationaryKind::not_stationary;
  double grad_norm = 0.0;
  /// ‖H∇f + ∇f/(2λ)‖ / ‖∇f‖; zero when ∇f vanishes or λ = 0.
  double eigen_residual = 0.0;
};

inline constexpr double kDefaultGradTol = 1e-8;
inline constexpr double kDefaultEigenTol = 1e-6;

/// Stationary points of the penalized objective are either stationary for f
/// or have ∇f as an eigenvector of H with eigenvalue −1/(2λ). This tells the
/// two apart at `x`. Requires an analytic Hessian.
StationaryVerdict classify_stationary(const Objective& obj, const Vector& x,
                                      double lambda,
                                      double tol_g = kDefaultGradTol,
                                      double tol_e = kDefaultEigenTol);

/// Step-size window and linear rate for constant-step CGD. Valid for convex,
/// L-smooth objectives satisfying the μ-PL inequality; nothing is claimed
/// outside that class.
struct RateEnvelope {
  double smoothness = 0.0;  // L
  double pl_constant = 0.0;  // μ
  double lambda = 0.0;
  double alpha_max = 0.0;   // 2 / (L (1 + 2λL)²)
  double alpha_star = 0.0;  // 1 / (L (1 + 2λL)²)
  double rho = 0.0;         // 1 − μ / (L (1 + 2λL)²)
  static constexpr std::string_view kAssumptions =
      "convex, L-smooth, mu-PL objectives only";

  /// ρ^k (f0 − f*).
  [[nodiscard]] double bound(int k, double initial_gap) const;
};

RateEnvelope theorem1_envelope(double smoothness, double pl_constant,
                               double lambda);

/// Contraction of ‖x_k − x*‖ for CGD on ½xᵀQx − bᵀx with extreme eigenvalues
/// l ≤ L.
struct QuadraticRate {
  double l = 0.0;
  double L = 0.0;
  double lambda = 0.0;
  double alpha_opt = 0.0;  // 2 / ((1+2λL)L + (1+2λl)l)
  double kappa = 0.0;      // (1+2λL)L / ((1+2λl)l)
  double factor = 0.0;     // (κ−1)/(κ+1)
};

QuadraticRate quadratic_rate(double l, double L, double lambda);

/// Smallest eigenvalue of a symmetric positive-definite Q, which is the PL
/// constant of ½xᵀQx − bᵀx.
double pl_constant_quadratic(const Matrix& q);

/// max_k (f_{k+1} − f*) / (f_k − f*) over the trace, skipping steps where
/// f_k − f* < 1e-14. Returns 0 if every step is skipped.
double empirical_rate(const Trace& trace, double f_star);

/// Largest Hessian spectral norm over seeded samples from the domain box.
/// Uses finite differences of the gradient when no analytic Hessian exists.
double estimate_smoothness(const Objective& obj, int samples = 1000,
                           std::uint64_t seed = 0);

}  // namespace cgd::analysis
