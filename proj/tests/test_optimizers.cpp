#include "cgd/analysis.hpp"
#include "cgd/error.hpp"
#include "cgd/experiment.hpp"
#include "cgd/functions.hpp"
#include "cgd/optimizers.hpp"
#include "cgd/penalty.hpp"
#include "fixtures.hpp"

#include <doctest.h>

#include <random>

using namespace cgd;
using fixtures::kPi;
using fixtures::vec;

namespace {

OptimizerConfig config(Method m, double alpha, double lambda, int iters) {
  OptimizerConfig c;
  c.method = m;
  c.alpha = alpha;
  c.lambda = LambdaSetting::constant(lambda);
  c.iters = iters;
  return c;
}

int count_kind(const Trace& t, DirectionKind kind) {
  int n = 0;
  for (const auto& r : t.records) n += r.direction == kind;
  return n;
}

}  // namespace

TEST_CASE("cgd direction on the bowl") {
  const auto f = fixtures::bowl();
  MeteredObjective m(f);
  const auto d = cgd_direction(m, vec({1, 1}), 0.4);
  CHECK(d.kind == DirectionKind::cgd);
  CHECK(d.p(0) == doctest::Approx(-5.2));
  CHECK(d.p(1) == doctest::Approx(-16.8));
  CHECK(vec({2, 4}).dot(d.p) == doctest::Approx(-77.6));
  CHECK(m.counter().grad_evals == 1);
  CHECK(m.counter().hessian_evals == 1);
}

TEST_CASE("cgd direction falls back at a fictitious point") {
  const auto f = fixtures::sine();
  MeteredObjective m(f);
  const auto d = cgd_direction(m, vec({kPi / 6}), 1.0);
  CHECK(d.kind == DirectionKind::steepest_fallback);
  CHECK(d.p(0) == doctest::Approx(-std::sqrt(3.0) / 2));
}

TEST_CASE("cgd direction with zero lambda") {
  const auto f = functions::lookup("levy").objective;
  MeteredObjective m(f);
  const Vector x = vec({0.3, 2.2});
  const auto d = cgd_direction(m, x, 0.0);
  CHECK(d.kind == DirectionKind::cgd);
  CHECK(d.p == -f.gradient(x));
}

TEST_CASE("cgd requires a Hessian") {
  const auto f = fixtures::bowl_without_hessian();
  MeteredObjective m(f);
  CHECK_THROWS_AS(cgd_direction(m, vec({1, 1}), 0.4), CapabilityError);
  CHECK_THROWS_AS(run_cgd(f, config(Method::cgd, 0.01, 0.4, 5), vec({1, 1})),
                  CapabilityError);
}

TEST_CASE("one cgd step and one gd step on the bowl") {
  const auto f = fixtures::bowl();
  const auto c = run_cgd(f, config(Method::cgd, 0.05, 0.4, 1), vec({1, 1}));
  REQUIRE(c.records.size() == 2);
  CHECK(c.records[1].x(0) == doctest::Approx(0.74));
  CHECK(c.records[1].x(1) == doctest::Approx(0.16));
  const auto g = run_baseline(f, config(Method::gd, 0.05, 0.0, 1), vec({1, 1}));
  CHECK(g.records[1].x(0) == doctest::Approx(0.9));
  CHECK(g.records[1].x(1) == doctest::Approx(0.8));
}

TEST_CASE("cgd-fd direction is exact on the bowl") {
  const auto f = fixtures::bowl();
  MeteredObjective m(f);
  const auto d = cgd_fd_direction(m, vec({1, 1}), 0.4, 0.01);
  CHECK(d.kind == DirectionKind::cgd);
  CHECK(std::abs(d.p(0) + 5.2) < 1e-12);
  CHECK(std::abs(d.p(1) + 16.8) < 1e-12);
  CHECK(m.counter().grad_evals == 2);

  MeteredObjective m0(f);
  const auto z = cgd_fd_direction(m0, vec({1, 1}), 0.0, 0.01);
  CHECK(z.p == -vec({2, 4}));
  CHECK(m0.counter().grad_evals == 2);
}

TEST_CASE("cgd-fd direction approximates cgd on griewank") {
  const auto& fn = functions::lookup("griewank");
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Vector x = functions::sample_x0(fn, seed);
    MeteredObjective m(fn.objective);
    const Vector exact = -penalized_gradient(m, x, 40.0);
    const auto fd = cgd_fd_direction(m, x, 40.0, 0.01);
    if (fd.kind == DirectionKind::cgd) {
      CHECK((fd.p - exact).norm() / exact.norm() <= 0.05);
    } else {
      CHECK_FALSE(is_descent(fn.objective.gradient(x), exact));
    }
  }
}

TEST_CASE("cgd-fd budget with T=40 and b=10") {
  const auto& fn = functions::lookup("quadratic");
  auto c = config(Method::cgd_fd, 0.01, 0.4, 40);
  c.threshold = 10;
  const auto t = run_cgd_fd(fn.objective, c, functions::sample_x0(fn, 0));
  // The threshold is applied after the step, so iterations 0..b take CGD steps.
  CHECK(count_kind(t, DirectionKind::cgd) == 11);
  CHECK(count_kind(t, DirectionKind::steepest) == 18);
  CHECK(t.evals.grad_evals == 40);
  CHECK(t.terminated_by == Termination::budget);
  CHECK(t.records.back().k == 29);
  for (const auto& r : t.records) CHECK(r.grad_evals <= 40);
}

TEST_CASE("cgd-fd latches off after a failed check at k=0") {
  const auto f = fixtures::sine();
  auto c = config(Method::cgd_fd, 0.01, 1.0, 10);
  c.threshold = 10;
  const auto t = run_cgd_fd(f, c, vec({kPi / 6}));
  REQUIRE(t.records.size() >= 2);
  CHECK(t.records[0].direction == DirectionKind::steepest_fallback);
  CHECK(t.records[1].grad_evals == 2);
  for (std::size_t k = 1; k + 1 < t.records.size(); ++k) {
    CHECK(t.records[k].direction == DirectionKind::steepest);
  }
  CHECK(t.evals.grad_evals <= 10);
}

TEST_CASE("cgd-fd refuses a two-cost step with one evaluation left") {
  auto c = config(Method::cgd_fd, 0.01, 0.4, 5);
  c.threshold = 5;
  const auto t = run_cgd_fd(fixtures::bowl(), c, vec({1, 1}));
  REQUIRE(t.records.size() == 4);
  CHECK(t.records[0].direction == DirectionKind::cgd);
  CHECK(t.records[1].direction == DirectionKind::cgd);
  CHECK(t.records[2].direction == DirectionKind::steepest_fallback);
  CHECK(t.evals.grad_evals == 5);
  CHECK(t.terminated_by == Termination::budget);
}

TEST_CASE("cgd-qn first step is rescaled gd") {
  const auto& fn = functions::lookup("zakharov");
  const Vector x0 = functions::sample_x0(fn, 3);
  const Vector g0 = fn.objective.gradient(x0);
  for (Method m : {Method::cgd_dfp, Method::cgd_bfgs}) {
    const auto t = run_cgd_qn(fn.objective, config(m, 1e-4, 0.3, 1), x0);
    const Vector expected = x0 - 1e-4 * (1 + 2 * 0.3) * g0;
    CHECK((t.records[1].x - expected).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(t.evals.grad_evals == 2);
  }
}

TEST_CASE("cgd-qn charges one gradient per iteration") {
  const auto& fn = functions::lookup("drop-wave");
  const auto t = run_cgd_qn(fn.objective, config(Method::cgd_bfgs, 0.01, 0.1, 40),
                            functions::sample_x0(fn, 1));
  // x0 plus one reused gradient per step.
  CHECK(t.evals.grad_evals == 41);
  CHECK(t.evals.hessian_evals == 0);
  CHECK(t.records.size() == 41);
}

TEST_CASE("quasi-newton baselines start with a gradient step") {
  const auto f = fixtures::bowl();
  for (Method m : {Method::dfp, Method::bfgs}) {
    const auto t = run_baseline(f, config(m, 0.05, 0.0, 3), vec({1, 1}));
    CHECK(t.records[1].x(0) == doctest::Approx(0.9));
    CHECK(t.records[1].x(1) == doctest::Approx(0.8));
    CHECK(t.records[0].direction == DirectionKind::quasi_newton);
  }
}

TEST_CASE("zero lambda reproduces gradient descent") {
  const auto& fn = functions::lookup("branin");
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Vector x0 = functions::sample_x0(fn, seed);
    const auto gd = run_baseline(fn.objective, config(Method::gd, 0.01, 0.0, 40), x0);
    for (Method m : {Method::cgd, Method::cgd_dfp, Method::cgd_bfgs, Method::cgd_fd}) {
      auto c = config(m, 0.01, 0.0, 40);
      if (m == Method::cgd_fd) {
        c.iters = 80;
        c.threshold = 80;
      }
      const auto t = optimize(fn.objective, c, x0);
      REQUIRE(t.records.size() >= 41);
      for (std::size_t k = 0; k < 41; ++k) {
        CHECK((t.records[k].x - gd.records[k].x).cwiseAbs().maxCoeff() <= 1e-12);
      }
    }
  }
}

TEST_CASE("gd stops on gradient tolerance on matyas") {
  auto c = config(Method::gd, 1.0, 0.0, 5000);
  c.grad_tol = 1e-10;
  const auto t = run_baseline(functions::lookup("matyas").objective, c, vec({1, 1}));
  CHECK(t.terminated_by == Termination::grad_tol);
  CHECK(t.records.back().grad_norm <= 1e-10);
}

TEST_CASE("divergence is reported as nonfinite") {
  const auto t = run_cgd(fixtures::bowl(), config(Method::cgd, 10.0, 10.0, 500), vec({1, 1}));
  CHECK(t.terminated_by == Termination::nonfinite);
  CHECK_FALSE(t.diagnostic.empty());
  for (const auto& r : t.records) CHECK(std::isfinite(r.f));
}

TEST_CASE("config validation") {
  const auto f = fixtures::bowl();
  CHECK_THROWS_AS(optimize(f, config(Method::gd, 0.0, 0.0, 5), vec({1, 1})), InputError);
  CHECK_THROWS_AS(optimize(f, config(Method::gd, 0.1, 0.0, 0), vec({1, 1})), InputError);
  auto c = config(Method::cgd_fd, 0.1, 0.1, 10);
  c.threshold = 11;
  CHECK_THROWS_AS(optimize(f, c, vec({1, 1})), InputError);
  c.threshold = 5;
  c.fd_step = 0.0;
  CHECK_THROWS_AS(optimize(f, c, vec({1, 1})), InputError);
  CHECK_THROWS_AS(run_cgd_qn(f, config(Method::gd, 0.1, 0.0, 5), vec({1, 1})),
                  InputError);
  CHECK_THROWS_AS(optimize(f, config(Method::gd, 0.1, 0.0, 5), vec({1})), InputError);
  CHECK(parse_method("cgd-bfgs") == Method::cgd_bfgs);
  CHECK_THROWS_AS(parse_method("newton"), InputError);
}

TEST_CASE("cgd stays under the rate envelope on the bowl") {
  const auto env = analysis::theorem1_envelope(4.0, 2.0, 0.4);
  const auto t = run_cgd(fixtures::bowl(), config(Method::cgd, env.alpha_star, 0.4, 200),
                         vec({1, 1}));
  const double gap0 = t.records[0].f;
  for (const auto& r : t.records) {
    CHECK(r.f <= env.bound(r.k, gap0) * (1 + 1e-9));
  }
}

TEST_CASE("property: descent safety") {
  for (const auto& fn : functions::registry()) {
    CAPTURE(fn.name);
    const double alpha = fn.table1 ? fn.table1->alpha : 1e-4;
    for (Method m : {Method::cgd, Method::cgd_fd, Method::cgd_bfgs, Method::cgd_dfp}) {
      if (m == Method::cgd && !fn.objective.has_hessian()) continue;
      for (std::uint64_t seed = 0; seed < 5; ++seed) {
        auto c = config(m, alpha, 0.5, 40);
        const auto t = optimize(fn.objective, c, functions::sample_x0(fn, seed));
        for (std::size_t k = 0; k + 1 < t.records.size(); ++k) {
          const auto& r = t.records[k];
          const Vector g = fn.objective.gradient(r.x);
          const Vector step = t.records[k + 1].x - r.x;
          if (r.direction == DirectionKind::cgd) {
            CHECK(g.dot(step) < 0);
          } else if (r.direction == DirectionKind::steepest_fallback) {
            CHECK((step + alpha * g).norm() <= 1e-12 * std::max(1.0, step.norm()));
          }
        }
      }
    }
  }
}

TEST_CASE("property: monotone decrease on convex quadratics") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> nd;
  std::uniform_real_distribution<double> u(0.05, 0.99);
  for (int trial = 0; trial < 50; ++trial) {
    Matrix a(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) a(i, j) = nd(rng);
    const Matrix q = a * a.transpose() + 0.1 * Matrix::Identity(3, 3);
    const auto f = functions::quadratic(q, Vector::Zero(3));
    const Eigen::SelfAdjointEigenSolver<Matrix> es(q);
    const double lambda = u(rng);
    const auto env = analysis::theorem1_envelope(es.eigenvalues().maxCoeff(),
                                                 es.eigenvalues().minCoeff(), lambda);
    const auto t = run_cgd(f, config(Method::cgd, u(rng) * env.alpha_max, lambda, 100),
                           Vector::Ones(3));
    for (std::size_t k = 0; k + 1 < t.records.size(); ++k) {
      CHECK(t.records[k + 1].f <= t.records[k].f);
    }
  }
}

TEST_CASE("property: cgd-fd never exceeds its budget") {
  std::mt19937_64 rng(23);
  const auto& fn = functions::lookup("levy");
  for (int trial = 0; trial < 300; ++trial) {
    const int iters = 4 + static_cast<int>(rng() % 97);
    auto c = config(Method::cgd_fd, 0.05, 0.05, iters);
    c.threshold = 1 + static_cast<int>(rng() % iters);
    const auto t = run_cgd_fd(fn.objective, c, functions::sample_x0(fn, trial));
    CHECK(t.evals.grad_evals <= iters);
  }
}

TEST_CASE("cgd-bfgs beats bfgs on zakharov for most seeds") {
  const auto& setting = experiment::qn_settings()[0];
  REQUIRE(setting.function == "zakharov");
  const auto& fn = functions::lookup("zakharov");
  int wins = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Vector x0 = functions::sample_x0(fn, seed);
    auto c = config(Method::cgd_bfgs, setting.alpha, 0.0, 40);
    c.lambda = setting.lambda;
    const double cgd_f = run_cgd_qn(fn.objective, c, x0).records.back().f;
    c.method = Method::bfgs;
    const double bfgs_f = run_baseline(fn.objective, c, x0).records.back().f;
    wins += cgd_f <= bfgs_f;
  }
  CHECK(wins > 10);
}
