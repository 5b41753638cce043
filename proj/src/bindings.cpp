#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sqcrys/io.hpp"
#include "sqcrys/suites.hpp"

namespace py = pybind11;
using namespace sqcrys;

namespace {

using Points = std::vector<std::pair<double, double>>;

Configuration config(const Points& pts) {
  Configuration X;
  for (auto [x, y] : pts) X.points.push_back({x, y});
  return X;
}

Points points(const Configuration& X) {
  Points out;
  for (auto p : X.points) out.emplace_back(p.x, p.y);
  return out;
}

std::optional<double> energy(const Energy& e) {
  if (!e.feasible()) return std::nullopt;
  return e.value();
}

// structured results travel as JSON text, decoded on the python side
std::string dump(const json& j) { return j.dump(); }

}  // namespace

PYBIND11_MODULE(_sqcrys, m) {
  m.doc() = "square-lattice crystallization toolkit";

  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_RuntimeError);
  py::register_exception<ConstructionError>(m, "ConstructionError", PyExc_RuntimeError);

  py::class_<Potential>(m, "Potential")
      .def("value", [](const Potential& p, double r) { return energy(p.value(r)); })
      .def("evaluate",
           [](const Potential& p, double r) -> std::optional<std::tuple<double, double, double, double>> {
             Evaluation e = p.evaluate(r);
             if (!e.feasible) return std::nullopt;
             return std::make_tuple(e.value, e.d1, e.d2_left, e.d2_right);
           })
      .def("W", [](const Potential& p, double s) { return p.w(s).w; })
      .def_property_readonly("kind", [](const Potential& p) { return std::string(to_string(p.kind())); })
      .def_property_readonly("support_radius", &Potential::support_radius)
      .def("set_alphas",
           [](Potential& p, double alpha_prime, double alpha, double alpha_pp) {
             p.set_params({alpha_prime, alpha, alpha_pp});
           })
      .def("to_json", [](const Potential& p) { return dump(to_json(p)); });

  m.def("preset", &potential_preset, py::arg("name"));
  m.def("potential_from_json", [](const std::string& s) { return potential_from_json(json::parse(s)); });
  m.def("hard_square", &build_hard_square, py::arg("r_max"));
  m.def(
      "exv3",
      [](double q, double p, double r1, double r2, double r3, double alpha_pp, double C, bool truncated) {
        ExV3Params e{q, p, r1, r2, r3, alpha_pp, C,
                     truncated ? ExV3Params::Tail::Truncated : ExV3Params::Tail::Decaying};
        return build_exv3(e);
      },
      py::arg("q") = 30.0, py::arg("p") = 6.0, py::arg("r1") = 1.0, py::arg("r2") = 1.2, py::arg("r3") = kSqrt2,
      py::arg("alpha_pp") = 0.09, py::arg("C") = 1.0, py::arg("truncated") = false);
  m.def("hermite_well", &build_hermite_well, py::arg("w1"), py::arg("dw1"), py::arg("ddw1"), py::arg("w2"),
        py::arg("dw2"), py::arg("ddw2"), py::arg("cutoff") = 2.0);
  m.def("check_conditions", [](const Potential& p) { return dump(to_json(check_conditions(p, ConditionConstants{}))); });
  m.def(
      "resum",
      [](const Potential& p, const std::string& mode, double tail_tol) {
        for (ResumMode k : {ResumMode::Vtilde, ResumMode::Vstar, ResumMode::VstarStar, ResumMode::DeltaBarSq})
          if (mode == to_string(k)) return resum(p, k, tail_tol);
        throw ParameterError("unknown resummation mode " + mode);
      },
      py::arg("pot"), py::arg("mode") = "Vstar", py::arg("tail_tol") = 1e-9);

  m.def("total_energy", [](const Potential& p, const Points& x) { return energy(total_energy(p, config(x))); });
  m.def("four_point_energy", [](const Potential& p, const Points& x) {
    if (x.size() != 4) throw ParameterError("four points required");
    Configuration X = config(x);
    return energy(four_point_energy(p, canonicalize_quadrilateral({X.points[0], X.points[1], X.points[2], X.points[3]})));
  });
  m.def("e4_spectrum", [](const Potential& p) {
    json a = json::array();
    for (const auto& e : e4_spectrum_at_square(p)) a.push_back(to_json(e));
    return dump(a);
  });
  m.def("lattice_energy_per_point",
        [](const Potential& p, double t, double tol) { return energy(lattice_energy_per_point(p, t, tol)); },
        py::arg("pot"), py::arg("t"), py::arg("tail_tol") = 1e-12);
  m.def("optimal_scale", [](const Potential& p) { return dump(to_json(optimal_scale(p))); });

  m.def("count_representations", &count_representations);
  m.def("m_of_r", &m_of_r, py::arg("r2"));
  m.def("f_map", [](long long a, long long b) {
    IVec v = f_map({a, b});
    return std::make_pair(v.a, v.b);
  });
  m.def("verify_cover", [](double R, int box) { return dump(to_json(verify_cover(build_decomposition(R), R, box))); },
        py::arg("R"), py::arg("box") = -1);
  m.def("d_tilde", [](double R) { return build_decomposition(R).scales(); });

  m.def("bond_graph", [](const Points& x, double alpha, double alpha_pp) {
    return dump(to_json(build_bond_graph(config(x), alpha, alpha_pp)));
  });
  m.def("embed", [](const Points& x, double alpha, double alpha_pp) {
    Configuration X = config(x);
    BondGraph G = build_bond_graph(X, alpha, alpha_pp);
    std::map<int, std::pair<long long, long long>> out;
    for (const auto& [l, v] : embed_region(G, X, chart_region(G))) out[l] = {v.a, v.b};
    return out;
  });
  m.def("affine_distortion", [](const Points& x, double alpha, double alpha_pp) {
    Configuration X = config(x);
    BondGraph G = build_bond_graph(X, alpha, alpha_pp);
    AffineMap u = build_affine_map(DiscreteChart::from_embedding(embed_region(G, X, chart_region(G))), X);
    return std::make_tuple(u.sup_distortion, u.edge_deformation, u.L_empirical);
  });
  m.def("perturbed_lattice", [](int n, double noise, double theta, std::uint64_t seed) {
    return points(perturbed_lattice(n, noise, theta, seed).X);
  });

  m.def("hard_minimize", [](const Potential& p, int N) { return dump(to_json(hard_minimize(p, N))); });
  m.def(
      "multi_start",
      [](const Potential& p, int N, int restarts, std::uint64_t seed) {
        MultiStartOptions o;
        o.restarts = restarts;
        o.seed = seed;
        return dump(to_json(multi_start(p, N, o)));
      },
      py::arg("pot"), py::arg("N"), py::arg("restarts") = 20, py::arg("seed") = 1);
  m.def("local_minimize", [](const Potential& p, const Points& x) { return dump(to_json(local_minimize(p, config(x)))); });
  m.def("lattice_candidate", [](int N, double t) { return points(lattice_candidate(N, t)); });
}
