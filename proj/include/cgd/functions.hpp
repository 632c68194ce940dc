#pragma once

#include "cgd/objective.hpp"
#include "cgd/schedule.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cgd::functions {

/// Published first-step comparison for one benchmark: the (λ, α) pair
/// and the GD / CGD-FD improvements (in %) reported with it.
struct Table1Row {
  LambdaSetting lambda;
  double alpha = 0.0;
  double gd_improvement = 0.0;
  double cgd_fd_improvement = 0.0;
};

struct TestFunction {
  std::string name;
  Objective objective;
  std::optional<Table1Row> table1;
};

// Individual constructors. Parametric ones take the dimension.

/// f(x) = ½ xᵀ diag(q) x − bᵀx on the box [-box, box]^n.
Objective quadratic(const Vector& q_diagonal, const Vector& b,
                    double box = 10.0, std::string name = "quadratic");
/// Dense-Q version; Q must be symmetric positive definite.
Objective quadratic(const Matrix& q, const Vector& b, double box = 10.0,
                    std::string name = "quadratic");
Objective rotated_hyper_ellipsoid(int n);
Objective levy(int n);
Objective branin();
Objective griewank(int n);
Objective matyas();
Objective zakharov(int n);
Objective drop_wave();
Objective eggholder();

/// The nine registered benchmarks in a fixed order.
const std::vector<TestFunction>& registry();

/// Looks up by lowercase hyphenated name ("quadratic-n10" is accepted as an
/// alias of "quadratic"). Throws InputError for unknown names.
const TestFunction& lookup(std::string_view name);

/// Uniform sample from the objective's domain box, deterministic in seed.
Vector sample_x0(const Objective& obj, std::uint64_t seed);
inline Vector sample_x0(const TestFunction& fn, std::uint64_t seed) {
  return sample_x0(fn.objective, seed);
}

}  // namespace cgd::functions
