#pragma once

#include "cgd/functions.hpp"
#include "cgd/objective.hpp"

#include <cmath>
#include <numbers>

namespace fixtures {

using cgd::Matrix;
using cgd::Vector;

inline Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

// f(x) = x1^2 + 2 x2^2
inline cgd::Objective bowl() {
  return cgd::functions::quadratic(vec({2.0, 4.0}), Vector::Zero(2), 10.0, "bowl");
}

// f(x) = sin(x1)
inline cgd::Objective sine() {
  return cgd::Objective(
      "sine", 1, [](const Vector& x) { return std::sin(x(0)); },
      [](const Vector& x) { return vec({std::cos(x(0))}); },
      [](const Vector& x) {
        Matrix h(1, 1);
        h(0, 0) = -std::sin(x(0));
        return h;
      },
      cgd::Box{vec({-10.0}), vec({10.0})});
}

inline cgd::Objective constant(int n, double c) {
  return cgd::Objective(
      "constant", n, [c](const Vector&) { return c; },
      [n](const Vector&) { return Vector(Vector::Zero(n)); },
      [n](const Vector&) { return Matrix(Matrix::Zero(n, n)); },
      cgd::Box{Vector::Constant(n, -1.0), Vector::Constant(n, 1.0)});
}

// Same quadratic with no Hessian attached.
inline cgd::Objective bowl_without_hessian() {
  return cgd::Objective(
      "bowl-nohess", 2,
      [](const Vector& x) { return x(0) * x(0) + 2.0 * x(1) * x(1); },
      [](const Vector& x) { return vec({2.0 * x(0), 4.0 * x(1)}); }, nullptr,
      cgd::Box{Vector::Constant(2, -10.0), Vector::Constant(2, 10.0)});
}

inline constexpr double kPi = std::numbers::pi;

}  // namespace fixtures
