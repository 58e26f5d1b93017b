#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gridconc/admittance.hpp"
#include "gridconc/bounds.hpp"
#include "gridconc/experiments.hpp"
#include "gridconc/lcpf.hpp"
#include "gridconc/manifold.hpp"

namespace py = pybind11;
using namespace gridconc;

namespace {

using Pairs = std::vector<std::pair<std::size_t, std::size_t>>;

Pairs edge_pairs(const Topology& t) {
  Pairs out;
  for (const auto& e : t.edges()) out.emplace_back(e.from, e.to);
  return out;
}

std::vector<LineAdmittance> to_lines(const Eigen::VectorXcd& w) {
  std::vector<LineAdmittance> out(static_cast<std::size_t>(w.size()));
  for (Eigen::Index l = 0; l < w.size(); ++l) out[l] = {w(l).real(), w(l).imag()};
  return out;
}

ContingencyModel to_model(const std::vector<double>& probs, const Eigen::VectorXcd& y) {
  return {probs, std::vector<Complex>(y.data(), y.data() + y.size())};
}

BlockConvention to_convention(const std::string& name) {
  if (name == "lifted") return BlockConvention::lifted;
  if (name == "jacobian") return BlockConvention::jacobian;
  throw py::value_error("convention must be 'lifted' or 'jacobian'");
}

py::object cell_to_py(const Cell& c) {
  return std::visit(
      [](const auto& v) -> py::object {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return py::none();
        } else {
          return py::cast(v);
        }
      },
      c);
}

}  // namespace

PYBIND11_MODULE(gridconc, m) {
  m.doc() = "Matrix concentration bounds for random power grids";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<Topology>(m, "Topology")
      .def(py::init([](std::size_t n, const Pairs& edges, std::optional<std::size_t> reference) {
             std::vector<Edge> e;
             for (const auto& [i, j] : edges) e.push_back({i, j});
             return Topology(n, std::move(e), reference);
           }),
           py::arg("n"), py::arg("edges"), py::arg("reference") = py::none())
      .def_static("path", &Topology::path)
      .def_static("complete", &Topology::complete)
      .def_static("star", &Topology::star)
      .def_property_readonly("num_nodes", &Topology::num_nodes)
      .def_property_readonly("num_edges", &Topology::num_edges)
      .def_property_readonly("edges", &edge_pairs)
      .def_property_readonly("reference", &Topology::reference)
      .def("with_reference", &Topology::with_reference)
      .def("incidence", [](const Topology& t, bool reduced) { return incidence_matrix(t, reduced).matrix; },
           py::arg("reduced") = false)
      .def("laplacian", &laplacian)
      .def("degrees", &degrees)
      .def("max_degree", &max_degree)
      .def("is_connected", &is_connected)
      .def("is_tree", &is_tree)
      .def("__repr__", [](const Topology& t) {
        return "Topology(n=" + std::to_string(t.num_nodes()) + ", m=" + std::to_string(t.num_edges()) + ")";
      });

  m.def("sample_er_topology", [](std::size_t n, double p, std::uint64_t seed) {
    Rng rng(seed);
    return sample_er_topology(n, p, rng);
  }, py::arg("n"), py::arg("p"), py::arg("seed"));
  m.def("sample_random_tree", [](std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    return sample_random_tree(n, rng);
  }, py::arg("n"), py::arg("seed"));

  m.def("operator_norm", py::overload_cast<const DenseMatrix&>(&operator_norm));
  m.def("intrinsic_dimension", py::overload_cast<const DenseMatrix&, bool>(&intrinsic_dimension),
        py::arg("m"), py::arg("psd") = true);
  m.def("psd_dominates", py::overload_cast<const DenseMatrix&, const DenseMatrix&, double>(&psd_dominates),
        py::arg("a"), py::arg("b"), py::arg("tol") = 0.0);
  m.def("kron", py::overload_cast<const DenseMatrix&, const DenseMatrix&>(&kron));

  m.def("elementary_laplacian", &elementary_laplacian, py::arg("i"), py::arg("j"), py::arg("n"));
  m.def("assemble_admittance", [](const Topology& t, const Eigen::VectorXcd& w) {
    return assemble_admittance(t, to_lines(w)).matrix();
  }, py::arg("topology"), py::arg("weights"));
  m.def("lift_real", [](const Topology& t, const Eigen::VectorXcd& w) {
    return lift_real(assemble_admittance(t, to_lines(w)));
  }, py::arg("topology"), py::arg("weights"));
  m.def("elementary_jacobian",
        [](double g, double b, std::size_t i, std::size_t j, std::size_t n, const std::string& convention) {
          return elementary_jacobian(g, b, i, j, n, to_convention(convention));
        },
        py::arg("g"), py::arg("b"), py::arg("i"), py::arg("j"), py::arg("n"), py::arg("convention") = "lifted");

  py::class_<BoundReport>(m, "BoundReport")
      .def_property_readonly("kind", [](const BoundReport& r) { return to_string(r.kind); })
      .def_readonly("value", &BoundReport::value)
      .def_readonly("valid", &BoundReport::valid)
      .def_readonly("degenerate", &BoundReport::degenerate)
      .def_readonly("notes", &BoundReport::notes)
      .def_readonly("inputs", &BoundReport::inputs)
      .def("clamped", &BoundReport::clamped)
      .def("__repr__", [](const BoundReport& r) {
        return "BoundReport(" + to_string(r.kind) + ", value=" + format_double(r.value) + ")";
      });

  py::class_<CriticalityProfile>(m, "CriticalityProfile")
      .def_readonly("c", &CriticalityProfile::c)
      .def_readonly("d", &CriticalityProfile::d)
      .def_readonly("delta_c", &CriticalityProfile::delta_c)
      .def_readonly("d_bar", &CriticalityProfile::d_bar)
      .def_readonly("variance_norm", &CriticalityProfile::variance_norm)
      .def_readonly("degenerate", &CriticalityProfile::degenerate)
      .def("variance_intdim", &CriticalityProfile::variance_intdim);

  m.def("contingency_factors", [](const Topology& t, const std::vector<double>& probs, const Eigen::VectorXcd& y) {
    return contingency_factors(t, to_model(probs, y));
  }, py::arg("topology"), py::arg("probs"), py::arg("admittances"));
  m.def("thm1_expectation_bound", &thm1_expectation_bound, py::arg("n"), py::arg("max_degree"));
  m.def("degree_norm_bound", &degree_norm_bound, py::arg("max_degree"), py::arg("max_weight") = 1.0);
  m.def("thm2_tail_bound", &thm2_tail_bound, py::arg("t"), py::arg("profile"));
  m.def("thm2_tail_threshold", &thm2_tail_threshold, py::arg("profile"));
  m.def("thm2_expectation_bound", [](const CriticalityProfile& p, std::optional<double> constant) {
    if (constant) return thm2_expectation_bound(p, WithConstant{*constant});
    return thm2_expectation_bound(p, ExplicitForm{});
  }, py::arg("profile"), py::arg("constant") = py::none());
  m.def("bernstein_tail", &bernstein_tail, py::arg("t"), py::arg("dim"), py::arg("big_r"), py::arg("nu"));
  m.def("lcpf_tail_bound", &lcpf_tail_bound, py::arg("t"), py::arg("n"), py::arg("delta"));
  m.def("lcpf_expectation_bound", &lcpf_expectation_bound, py::arg("n"), py::arg("delta"));
  m.def("lcpf_variance_envelope", [](const Topology& t, const std::string& mode, double delta) {
    VarianceEnvelope env;
    if (mode == "sphere") {
      env = lcpf_variance_envelope(t, SphereEnvelope{});
    } else if (mode == "bounded") {
      env = lcpf_variance_envelope(t, BoundedEnvelope{delta});
    } else {
      throw py::value_error("mode must be 'sphere' or 'bounded'");
    }
    return py::make_tuple(env.matrix, env.nu, env.nu_cap);
  }, py::arg("topology"), py::arg("mode") = "sphere", py::arg("delta") = 0.0);

  m.def("flat_start_jacobian", [](const Topology& t, const Eigen::VectorXcd& w, bool reduced) {
    const auto jac = flat_start_jacobian(t, to_lines(w), reduced);
    return py::make_tuple(jac.g_matrix, jac.b_matrix, jac.f);
  }, py::arg("topology"), py::arg("weights"), py::arg("reduced") = false);
  m.def("invert_tree_lcpf", [](const Topology& t, const Eigen::VectorXcd& w) {
    const auto lines = to_lines(w);
    const auto inv = invert_tree_lcpf(flat_start_jacobian(t, lines, true), t, lines);
    return py::make_tuple(inv.r_matrix, inv.x_matrix);
  }, py::arg("topology"), py::arg("weights"));
  m.def("lcpf_solve",
        [](const Topology& t, const Eigen::VectorXcd& w, const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
          const auto lines = to_lines(w);
          const auto sol = lcpf_solve(flat_start_jacobian(t, lines, true), t, lines, p, q);
          return py::make_tuple(sol.epsilon, sol.theta);
        },
        py::arg("topology"), py::arg("weights"), py::arg("p"), py::arg("q"));

  m.def("power_flow_map", [](const Topology& t, const Eigen::VectorXcd& w, const ComplexVector& u) {
    return power_flow_map(assemble_admittance(t, to_lines(w)), u);
  }, py::arg("topology"), py::arg("weights"), py::arg("u"));
  m.def("tangent_residual",
        [](const Topology& t, const Eigen::VectorXcd& w, const ComplexVector& u, const ComplexVector& h) {
          const auto y = assemble_admittance(t, to_lines(w));
          return tangent_residual(y, TangentStep{ManifoldPoint(y, u), h});
        },
        py::arg("topology"), py::arg("weights"), py::arg("u"), py::arg("h"));
  m.def("distance_bound", [](const ComplexVector& h, double y_norm, const std::string& mode) {
    if (mode != "holder" && mode != "crude") throw py::value_error("mode must be 'holder' or 'crude'");
    return distance_bound(h, y_norm, mode == "holder" ? DistanceMode::holder : DistanceMode::crude);
  }, py::arg("h"), py::arg("y_norm"), py::arg("mode") = "holder");
  m.def("expected_distance_bound", &expected_distance_bound, py::arg("h"), py::arg("source"));

  m.def("run_experiment", [](const std::string& config_json) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(config_json);
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError(e.what());
    }
    ExperimentResult r;
    {
      py::gil_scoped_release release;
      r = run_experiment(config_from_json(j));
    }
    py::list rows;
    for (const auto& row : r.table.rows()) {
      py::list out;
      for (const auto& c : row) out.append(cell_to_py(c));
      rows.append(out);
    }
    py::dict d;
    d["columns"] = r.table.columns();
    d["rows"] = rows;
    d["checked"] = r.checked;
    d["violations"] = r.violations;
    d["passed"] = r.passed();
    d["messages"] = r.messages;
    return d;
  }, py::arg("config_json"), "Runs an experiment from its JSON config; returns the table and check counts.");
}
