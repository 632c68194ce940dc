#include "cgd/analysis.hpp"
#include "cgd/error.hpp"
#include "cgd/experiment.hpp"
#include "cgd/functions.hpp"
#include "cgd/optimizers.hpp"
#include "cgd/penalty.hpp"
#include "cgd/quasi_newton.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <variant>

namespace py = pybind11;
using namespace cgd;
namespace ex = cgd::experiment;

namespace {

LambdaSetting to_setting(const std::variant<double, std::string>& lambda) {
  if (const auto* v = std::get_if<double>(&lambda)) return LambdaSetting::constant(*v);
  return LambdaSetting::parse(std::get<std::string>(lambda));
}

const Objective& objective(const std::string& name) {
  return functions::lookup(name).objective;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Constrained gradient descent and benchmark functions";

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<CapabilityError>(m, "CapabilityError", PyExc_RuntimeError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

  // functions
  m.def("function_names", [] {
    std::vector<std::string> names;
    for (const auto& fn : functions::registry()) names.push_back(fn.name);
    return names;
  });
  m.def("dim", [](const std::string& name) { return objective(name).dim(); });
  m.def("value", [](const std::string& name, const Vector& x) {
    return objective(name).value(x);
  });
  m.def("gradient", [](const std::string& name, const Vector& x) {
    return objective(name).gradient(x);
  });
  m.def("hessian", [](const std::string& name, const Vector& x) {
    return objective(name).hessian(x);
  });
  m.def("has_hessian", [](const std::string& name) { return objective(name).has_hessian(); });
  m.def("domain", [](const std::string& name) {
    const auto& box = objective(name).domain();
    return std::pair{Vector(box.lo), Vector(box.hi)};
  });
  m.def("known_minimum", [](const std::string& name) {
    const auto& km = *objective(name).known_minimum();
    return std::pair{Vector(km.x), km.value};
  });
  m.def("sample_x0", [](const std::string& name, std::uint64_t seed) {
    return functions::sample_x0(functions::lookup(name), seed);
  });
  m.def("table1_row", [](const std::string& name) -> py::object {
    const auto& row = functions::lookup(name).table1;
    if (!row) return py::none();
    py::dict d;
    d["lambda"] = row->lambda.label();
    d["alpha"] = row->alpha;
    d["gd_improvement"] = row->gd_improvement;
    d["cgd_fd_improvement"] = row->cgd_fd_improvement;
    return d;
  });

  // penalty and schedules
  m.def("penalized_value", [](const std::string& name, const Vector& x, double lambda) {
    MeteredObjective mo(objective(name));
    return penalized_value(mo, x, lambda);
  });
  m.def("penalized_gradient", [](const std::string& name, const Vector& x, double lambda) {
    MeteredObjective mo(objective(name));
    return penalized_gradient(mo, x, lambda);
  });
  m.def("fd_gradient_check", [](const std::string& name, const Vector& x, double h) {
    return fd_gradient_check(objective(name), x, h);
  });
  m.def("lambda_schedule",
        [](const std::variant<double, std::string>& lambda, int length) {
          const LambdaSchedule s(to_setting(lambda), length);
          std::vector<double> out;
          for (int k = 0; k < length; ++k) out.push_back(s.at(k));
          return out;
        });

  // optimizers
  py::class_<IterateRecord>(m, "IterateRecord")
      .def_readonly("k", &IterateRecord::k)
      .def_readonly("x", &IterateRecord::x)
      .def_readonly("f", &IterateRecord::f)
      .def_readonly("grad_norm", &IterateRecord::grad_norm)
      .def_property_readonly("direction",
                             [](const IterateRecord& r) { return std::string(to_string(r.direction)); })
      .def_readonly("lambda_", &IterateRecord::lambda)
      .def_readonly("grad_evals", &IterateRecord::grad_evals);

  py::class_<Trace>(m, "Trace")
      .def_readonly("records", &Trace::records)
      .def_readonly("final_x", &Trace::final_x)
      .def_property_readonly("terminated_by",
                             [](const Trace& t) { return std::string(to_string(t.terminated_by)); })
      .def_property_readonly("grad_evals", [](const Trace& t) { return t.evals.grad_evals; })
      .def_property_readonly("hessian_evals", [](const Trace& t) { return t.evals.hessian_evals; })
      .def_readonly("qn_skipped_updates", &Trace::qn_skipped_updates)
      .def_readonly("diagnostic", &Trace::diagnostic)
      .def_property_readonly("f", [](const Trace& t) {
        std::vector<double> f;
        for (const auto& r : t.records) f.push_back(r.f);
        return f;
      });

  m.def(
      "optimize",
      [](const std::string& name, const std::string& method, double alpha,
         const std::variant<double, std::string>& lambda, int iters,
         std::optional<int> threshold, double fd_step, double grad_tol,
         std::optional<Vector> x0, std::uint64_t seed) {
        OptimizerConfig c;
        c.method = parse_method(method);
        c.alpha = alpha;
        c.lambda = to_setting(lambda);
        c.iters = iters;
        c.threshold = threshold;
        c.fd_step = fd_step;
        c.grad_tol = grad_tol;
        const auto& fn = functions::lookup(name);
        const Vector start = x0 ? *x0 : functions::sample_x0(fn, seed);
        py::gil_scoped_release release;
        return optimize(fn.objective, c, start);
      },
      py::arg("function"), py::arg("method"), py::arg("alpha") = 0.01,
      py::arg("lambda_") = 0.0, py::arg("iters") = 40, py::arg("threshold") = py::none(),
      py::arg("fd_step") = OptimizerConfig{}.fd_step, py::arg("grad_tol") = 0.0,
      py::arg("x0") = py::none(), py::arg("seed") = 0);

  // quasi-Newton updates
  auto variant = [](const std::string& v) {
    if (v == "dfp") return QuasiNewtonVariant::dfp;
    if (v == "bfgs") return QuasiNewtonVariant::bfgs;
    throw InputError("unknown quasi-Newton variant '" + v + "'");
  };
  m.def("qn_inverse_update", [variant](const Matrix& g, const Vector& s, const Vector& y,
                                       const std::string& v) {
    const auto u = qn_inverse_update(g, s, y, variant(v));
    return std::pair{u.matrix, u.applied};
  });
  m.def("qn_hessian_update", [variant](const Matrix& g, const Vector& s, const Vector& y,
                                       const std::string& v) {
    const auto u = qn_hessian_update(g, s, y, variant(v));
    return std::pair{u.matrix, u.applied};
  });

  // analysis
  m.def("classify_stationary", [](const std::string& name, const Vector& x, double lambda) {
    return std::string(analysis::to_string(
        analysis::classify_stationary(objective(name), x, lambda).kind));
  });
  m.def("theorem1_envelope", [](double L, double mu, double lambda) {
    const auto e = analysis::theorem1_envelope(L, mu, lambda);
    py::dict d;
    d["alpha_max"] = e.alpha_max;
    d["alpha_star"] = e.alpha_star;
    d["rho"] = e.rho;
    return d;
  });
  m.def("quadratic_rate", [](double l, double L, double lambda) {
    const auto r = analysis::quadratic_rate(l, L, lambda);
    py::dict d;
    d["alpha_opt"] = r.alpha_opt;
    d["kappa"] = r.kappa;
    d["factor"] = r.factor;
    return d;
  });

  // experiment suites
  m.def(
      "table1_suite",
      [](const std::string& seeds, const std::filesystem::path& out_dir) {
        const auto r = ex::table1_suite(ex::parse_seeds(seeds), out_dir);
        py::list rows;
        for (const auto& row : r.rows) {
          py::dict d;
          d["function"] = row.function;
          d["gd_mean"] = row.gd_mean;
          d["cgd_fd_mean"] = row.cgd_fd_mean;
          d["dominance_fraction"] = row.dominance_fraction;
          rows.append(d);
        }
        return rows;
      },
      py::arg("seeds") = "0..49", py::arg("out_dir") = std::filesystem::path{});
  m.def(
      "qn_suite",
      [](const std::string& seeds, const std::filesystem::path& out_dir) {
        const auto r = ex::qn_suite(ex::parse_seeds(seeds), out_dir);
        py::dict d;
        for (const auto& s : r.series) {
          d[py::str(s.function + "/" + std::string(to_string(s.method)))] = s.median_final;
        }
        return d;
      },
      py::arg("seeds") = "0..19", py::arg("out_dir") = std::filesystem::path{});
  m.def("check_function", [](const std::string& name, int points) {
    return ex::check_function(functions::lookup(name), points).passed();
  }, py::arg("function"), py::arg("points") = 50);
}
