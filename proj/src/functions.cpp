#include "cgd/functions.hpp"

#include "cgd/error.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace cgd::functions {
namespace {

using std::numbers::pi;

Box uniform_box(int n, double lo, double hi) {
  return {Vector::Constant(n, lo), Vector::Constant(n, hi)};
}

KnownMinimum at_origin(int n, double value = 0.0) {
  return {Vector::Zero(n), value, false};
}

void require_dim(int n, int min_n, std::string_view name) {
  if (n < min_n) {
    throw InputError(std::string(name) + ": dimension must be >= " +
                     std::to_string(min_n));
  }
}

// One-dimensional piece of the Levy sum, with first and second derivatives
// in w.
struct Piece {
  double v = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;

  Piece& operator+=(const Piece& o) {
    v += o.v;
    d1 += o.d1;
    d2 += o.d2;
    return *this;
  }
};

// sin²(πw)
Piece levy_head(double w) {
  const double s = std::sin(pi * w);
  return {s * s, pi * std::sin(2.0 * pi * w),
          2.0 * pi * pi * std::cos(2.0 * pi * w)};
}

// (w-1)² [1 + 10 sin²(πw + 1)]
Piece levy_body(double w) {
  const double u = (w - 1.0) * (w - 1.0);
  const double du = 2.0 * (w - 1.0);
  const double s = std::sin(pi * w + 1.0);
  const double v = 1.0 + 10.0 * s * s;
  const double dv = 10.0 * pi * std::sin(2.0 * (pi * w + 1.0));
  const double ddv = 20.0 * pi * pi * std::cos(2.0 * (pi * w + 1.0));
  return {u * v, du * v + u * dv, 2.0 * v + 2.0 * du * dv + u * ddv};
}

// (w-1)² [1 + sin²(2πw)]
Piece levy_tail(double w) {
  const double u = (w - 1.0) * (w - 1.0);
  const double du = 2.0 * (w - 1.0);
  const double s = std::sin(2.0 * pi * w);
  const double v = 1.0 + s * s;
  const double dv = 2.0 * pi * std::sin(4.0 * pi * w);
  const double ddv = 8.0 * pi * pi * std::cos(4.0 * pi * w);
  return {u * v, du * v + u * dv, 2.0 * v + 2.0 * du * dv + u * ddv};
}

// Levy is separable in w_i = 1 + (x_i - 1)/4, so the Hessian is diagonal.
std::vector<Piece> levy_pieces(const Vector& x) {
  const auto n = x.size();
  std::vector<Piece> out(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const double w = 1.0 + (x(i) - 1.0) / 4.0;
    Piece p;
    if (i == 0) p += levy_head(w);
    if (i < n - 1) p += levy_body(w);
    if (i == n - 1) p += levy_tail(w);
    out[static_cast<std::size_t>(i)] = p;
  }
  return out;
}

// Branin constants.
constexpr double kBraninA = 1.0;
const double kBraninB = 5.1 / (4.0 * pi * pi);
const double kBraninC = 5.0 / pi;
constexpr double kBraninR = 6.0;
constexpr double kBraninS = 10.0;
const double kBraninT = 1.0 / (8.0 * pi);

// Products of cos(x_j / sqrt(j+1)) over all j except the listed indices.
double griewank_cos_product(const Vector& x, Eigen::Index skip_a,
                            Eigen::Index skip_b) {
  double prod = 1.0;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    if (j == skip_a || j == skip_b) continue;
    prod *= std::cos(x(j) / std::sqrt(static_cast<double>(j + 1)));
  }
  return prod;
}

Vector zakharov_weights(Eigen::Index n) {
  Vector c(n);
  for (Eigen::Index i = 0; i < n; ++i) c(i) = 0.5 * static_cast<double>(i + 1);
  return c;
}

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

// Shared terms for EggHolder: a = x2 + x1/2 + 47, b = x1 - x2 - 47.
struct EggTerms {
  double sa, ca, da;  // sin√|a|, cos√|a|, d√|a|/da
  double sb, cb, db;
};

EggTerms egg_terms(const Vector& x) {
  const double a = x(1) + 0.5 * x(0) + 47.0;
  const double b = x(0) - x(1) - 47.0;
  const double ra = std::sqrt(std::abs(a));
  const double rb = std::sqrt(std::abs(b));
  return {std::sin(ra), std::cos(ra), sign(a) / (2.0 * ra),
          std::sin(rb), std::cos(rb), sign(b) / (2.0 * rb)};
}

std::vector<TestFunction> build_registry() {
  std::vector<TestFunction> out;
  Vector q(10);
  for (int i = 0; i < 10; ++i) q(i) = i + 1.0;
  out.push_back({"quadratic", quadratic(q, Vector::Zero(10)),
                 Table1Row{LambdaSetting::constant(0.4), 0.01, 18.89, 97.91}});
  out.push_back({"rotated-hyper-ellipsoid", rotated_hyper_ellipsoid(5),
                 Table1Row{LambdaSetting::constant(0.5), 0.01, 15.94, 82.76}});
  out.push_back({"levy", levy(2),
                 Table1Row{LambdaSetting::linear(0.01, 0.1), 0.05, 23.73,
                           63.21}});
  out.push_back({"branin", branin(),
                 Table1Row{LambdaSetting::constant(0.07), 0.01, 37.53, 87.07}});
  out.push_back({"griewank", griewank(2),
                 Table1Row{LambdaSetting::constant(40.0), 0.01, 0.01, 0.08}});
  out.push_back({"matyas", matyas(),
                 Table1Row{LambdaSetting::constant(10.0), 0.01, 1.83, 34.40}});
  out.push_back({"zakharov", zakharov(2), std::nullopt});
  out.push_back({"drop-wave", drop_wave(), std::nullopt});
  out.push_back({"eggholder", eggholder(), std::nullopt});
  return out;
}

}  // namespace

Objective quadratic(const Vector& q_diagonal, const Vector& b, double box,
                    std::string name) {
  if (q_diagonal.size() != b.size()) {
    throw InputError("quadratic: Q and b sizes differ");
  }
  return quadratic(Matrix(q_diagonal.asDiagonal()), b, box, std::move(name));
}

Objective quadratic(const Matrix& q, const Vector& b, double box,
                    std::string name) {
  const auto n = static_cast<int>(b.size());
  if (q.rows() != n || q.cols() != n) {
    throw InputError("quadratic: Q must be n x n");
  }
  if (!q.isApprox(q.transpose(), 1e-12)) {
    throw InputError("quadratic: Q must be symmetric");
  }
  Eigen::LLT<Matrix> llt(q);
  if (llt.info() != Eigen::Success) {
    throw InputError("quadratic: Q must be positive definite");
  }
  const Vector x_star = llt.solve(b);
  const double f_star = -0.5 * b.dot(x_star);
  return Objective(
      std::move(name), n,
      [q, b](const Vector& x) { return 0.5 * x.dot(q * x) - b.dot(x); },
      [q, b](const Vector& x) -> Vector { return q * x - b; },
      [q](const Vector&) -> Matrix { return q; }, uniform_box(n, -box, box),
      KnownMinimum{x_star, f_star, false});
}

Objective rotated_hyper_ellipsoid(int n) {
  require_dim(n, 1, "rotated-hyper-ellipsoid");
  // Σ_i Σ_{j≤i} x_j² = Σ_j (n − j) x_j² with 0-based j.
  Vector weights(n);
  for (int j = 0; j < n; ++j) weights(j) = static_cast<double>(n - j);
  return Objective(
      "rotated-hyper-ellipsoid", n,
      [](const Vector& x) {
        double total = 0.0;
        double inner = 0.0;
        for (Eigen::Index i = 0; i < x.size(); ++i) {
          inner += x(i) * x(i);
          total += inner;
        }
        return total;
      },
      [weights](const Vector& x) -> Vector {
        return 2.0 * weights.cwiseProduct(x);
      },
      [weights](const Vector&) -> Matrix {
        return Matrix((2.0 * weights).asDiagonal());
      },
      uniform_box(n, -65.536, 65.536), at_origin(n));
}

Objective levy(int n) {
  require_dim(n, 1, "levy");
  return Objective(
      "levy", n,
      [](const Vector& x) {
        double v = 0.0;
        for (const Piece& p : levy_pieces(x)) v += p.v;
        return v;
      },
      [](const Vector& x) -> Vector {
        const auto pieces = levy_pieces(x);
        Vector g(x.size());
        for (Eigen::Index i = 0; i < x.size(); ++i) {
          g(i) = pieces[static_cast<std::size_t>(i)].d1 / 4.0;
        }
        return g;
      },
      [](const Vector& x) -> Matrix {
        const auto pieces = levy_pieces(x);
        Matrix h = Matrix::Zero(x.size(), x.size());
        for (Eigen::Index i = 0; i < x.size(); ++i) {
          h(i, i) = pieces[static_cast<std::size_t>(i)].d2 / 16.0;
        }
        return h;
      },
      uniform_box(n, -10.0, 10.0), KnownMinimum{Vector::Ones(n), 0.0, false});
}

Objective branin() {
  auto residual = [](const Vector& x) {
    return x(1) - kBraninB * x(0) * x(0) + kBraninC * x(0) - kBraninR;
  };
  Box box{Vector(2), Vector(2)};
  box.lo << -5.0, 0.0;
  box.hi << 10.0, 15.0;
  Vector x_star(2);
  x_star << pi, 2.275;
  return Objective(
      "branin", 2,
      [residual](const Vector& x) {
        const double q = residual(x);
        return kBraninA * q * q + kBraninS * (1.0 - kBraninT) * std::cos(x(0)) +
               kBraninS;
      },
      [residual](const Vector& x) -> Vector {
        const double q = residual(x);
        const double dq = -2.0 * kBraninB * x(0) + kBraninC;
        Vector g(2);
        g << 2.0 * kBraninA * q * dq -
                 kBraninS * (1.0 - kBraninT) * std::sin(x(0)),
            2.0 * kBraninA * q;
        return g;
      },
      [residual](const Vector& x) -> Matrix {
        const double q = residual(x);
        const double dq = -2.0 * kBraninB * x(0) + kBraninC;
        Matrix h(2, 2);
        h(0, 0) = 2.0 * kBraninA * (dq * dq - 2.0 * kBraninB * q) -
                  kBraninS * (1.0 - kBraninT) * std::cos(x(0));
        h(0, 1) = h(1, 0) = 2.0 * kBraninA * dq;
        h(1, 1) = 2.0 * kBraninA;
        return h;
      },
      box, KnownMinimum{x_star, kBraninS * kBraninT, false});
}

Objective griewank(int n) {
  require_dim(n, 1, "griewank");
  auto root = [](Eigen::Index i) { return std::sqrt(static_cast<double>(i + 1)); };
  return Objective(
      "griewank", n,
      [](const Vector& x) {
        return x.squaredNorm() / 4000.0 - griewank_cos_product(x, -1, -1) + 1.0;
      },
      [root](const Vector& x) -> Vector {
        Vector g(x.size());
        for (Eigen::Index i = 0; i < x.size(); ++i) {
          g(i) = x(i) / 2000.0 + std::sin(x(i) / root(i)) / root(i) *
                                     griewank_cos_product(x, i, -1);
        }
        return g;
      },
      [root](const Vector& x) -> Matrix {
        const auto m = x.size();
        Matrix h(m, m);
        for (Eigen::Index i = 0; i < m; ++i) {
          h(i, i) = 1.0 / 2000.0 + std::cos(x(i) / root(i)) /
                                       static_cast<double>(i + 1) *
                                       griewank_cos_product(x, i, -1);
          for (Eigen::Index j = i + 1; j < m; ++j) {
            h(i, j) = h(j, i) = -std::sin(x(i) / root(i)) / root(i) *
                                std::sin(x(j) / root(j)) / root(j) *
                                griewank_cos_product(x, i, j);
          }
        }
        return h;
      },
      uniform_box(n, -600.0, 600.0), at_origin(n));
}

Objective matyas() {
  Matrix h(2, 2);
  h << 0.52, -0.48, -0.48, 0.52;
  return Objective(
      "matyas", 2,
      [](const Vector& x) {
        return 0.26 * (x(0) * x(0) + x(1) * x(1)) - 0.48 * x(0) * x(1);
      },
      [](const Vector& x) -> Vector {
        Vector g(2);
        g << 0.52 * x(0) - 0.48 * x(1), 0.52 * x(1) - 0.48 * x(0);
        return g;
      },
      [h](const Vector&) -> Matrix { return h; }, uniform_box(2, -10.0, 10.0),
      at_origin(2));
}

Objective zakharov(int n) {
  require_dim(n, 1, "zakharov");
  const Vector c = zakharov_weights(n);
  return Objective(
      "zakharov", n,
      [c](const Vector& x) {
        const double s = c.dot(x);
        const double s2 = s * s;
        return x.squaredNorm() + s2 + s2 * s2;
      },
      [c](const Vector& x) -> Vector {
        const double s = c.dot(x);
        return 2.0 * x + (2.0 * s + 4.0 * s * s * s) * c;
      },
      [c](const Vector& x) -> Matrix {
        const double s = c.dot(x);
        const auto m = x.size();
        return 2.0 * Matrix::Identity(m, m) +
               (2.0 + 12.0 * s * s) * (c * c.transpose());
      },
      uniform_box(n, -5.0, 10.0), at_origin(n));
}

Objective drop_wave() {
  return Objective(
      "drop-wave", 2,
      [](const Vector& x) {
        const double r2 = x.squaredNorm();
        return -(1.0 + std::cos(12.0 * std::sqrt(r2))) / (0.5 * r2 + 2.0);
      },
      [](const Vector& x) -> Vector {
        // grad = (N + 12 sin(12r)/r · D) / D² · x with N = 1 + cos(12r),
        // D = r²/2 + 2; sin(12r)/r → 12 at the origin.
        const double r2 = x.squaredNorm();
        const double r = std::sqrt(r2);
        const double num = 1.0 + std::cos(12.0 * r);
        const double den = 0.5 * r2 + 2.0;
        const double sinc = r > 0.0 ? std::sin(12.0 * r) / r : 12.0;
        return ((num + 12.0 * sinc * den) / (den * den)) * x;
      },
      {}, uniform_box(2, -5.12, 5.12), at_origin(2, -1.0));
}

Objective eggholder() {
  auto value = [](const Vector& x) {
    const double a = x(1) + 0.5 * x(0) + 47.0;
    const double b = x(0) - x(1) - 47.0;
    return -(x(1) + 47.0) * std::sin(std::sqrt(std::abs(a))) -
           x(0) * std::sin(std::sqrt(std::abs(b)));
  };
  Vector x_star(2);
  x_star << 512.0, 404.2319;
  const double f_star = value(x_star);
  return Objective(
      "eggholder", 2, value,
      [](const Vector& x) -> Vector {
        const EggTerms t = egg_terms(x);
        const double pa = (x(1) + 47.0) * t.ca * t.da;
        const double pb = x(0) * t.cb * t.db;
        Vector g(2);
        g << -0.5 * pa - t.sb - pb, -t.sa - pa + pb;
        return g;
      },
      {}, uniform_box(2, -512.0, 512.0), KnownMinimum{x_star, f_star, true});
}

const std::vector<TestFunction>& registry() {
  static const std::vector<TestFunction> fns = build_registry();
  return fns;
}

const TestFunction& lookup(std::string_view name) {
  if (name == "quadratic-n10") name = "quadratic";
  for (const auto& fn : registry()) {
    if (fn.name == name) return fn;
  }
  throw InputError("unknown function '" + std::string(name) + "'");
}

Vector sample_x0(const Objective& obj, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Box& box = obj.domain();
  Vector x(obj.dim());
  for (int i = 0; i < obj.dim(); ++i) {
    x(i) = box.lo(i) + unit(rng) * (box.hi(i) - box.lo(i));
  }
  return x;
}

}  // namespace cgd::functions
