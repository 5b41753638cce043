#include "sqcrys/io.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace sqcrys {

json num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

double num_from(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw ParameterError("expected a number, got " + j.dump());
}

namespace {

json params_json(const DeformationParams& p) {
  return {{"alpha_prime", p.alpha_prime}, {"alpha", p.alpha}, {"alpha_pp", p.alpha_pp}};
}

DeformationParams params_from(const json& j) {
  DeformationParams p;
  p.alpha_prime = j.value("alpha_prime", p.alpha_prime);
  p.alpha = j.value("alpha", p.alpha);
  p.alpha_pp = j.value("alpha_pp", p.alpha_pp);
  return p;
}

json segment_json(const Segment& s) {
  if (s.type == Segment::Type::Power) return {{"type", "power"}, {"coef", s.coef}, {"shift", s.shift}, {"expo", s.expo}};
  return {{"type", "poly"}, {"shift", s.shift}, {"coeffs", s.coeffs}};
}

Segment segment_from(const json& j) {
  const auto t = j.at("type").get<std::string>();
  if (t == "power") return Segment::power(j.at("coef"), j.at("shift"), j.at("expo"));
  if (t == "poly") return Segment::poly(j.value("shift", 0.0), j.at("coeffs").get<std::vector<double>>());
  throw ParameterError("unknown segment type " + t);
}

json range_json(const Range& r) {
  if (r.type == Range::Type::Finite) return {{"type", "finite"}, {"cutoff", num(r.cutoff)}};
  return {{"type", "decaying"}, {"eps", num(r.eps)}, {"p", num(r.p)}};
}

Range range_from(const json& j) {
  const auto t = j.at("type").get<std::string>();
  if (t == "finite") return Range::finite(num_from(j.at("cutoff")));
  if (t == "decaying") return Range::decaying(num_from(j.at("eps")), num_from(j.at("p")));
  throw ParameterError("unknown range type " + t);
}

ResumMode mode_from(const std::string& s) {
  for (ResumMode m : {ResumMode::Vtilde, ResumMode::Vstar, ResumMode::VstarStar, ResumMode::DeltaBarSq})
    if (s == to_string(m)) return m;
  throw ParameterError("unknown resummation mode " + s);
}

}  // namespace

json to_json(const Potential& pot) {
  json j;
  j["kind"] = to_string(pot.kind());
  j["params"] = params_json(pot.params());
  switch (pot.kind()) {
    case PotentialKind::HardWell:
      j["r_max"] = pot.r_max();
      break;
    case PotentialKind::PiecewiseSmooth: {
      j["knots"] = pot.knots();
      json segs = json::array();
      for (const auto& s : pot.segments()) segs.push_back(segment_json(s));
      j["segments"] = segs;
      j["range"] = range_json(pot.range());
      j["hard_core"] = pot.hard_core_radius();
      j["normalization"] = pot.normalization();
      break;
    }
    case PotentialKind::Resummed: {
      const ResumData& rd = *pot.resum_data();
      j["mode"] = to_string(rd.mode);
      j["base"] = to_json(*rd.base);
      j["tail_tol"] = rd.tail_tol;
      j["c_pot_eps"] = rd.c_pot_eps;
      j["t_min"] = rd.t_min;
      break;
    }
  }
  return j;
}

Potential potential_from_json(const json& j) {
  if (j.is_string()) return potential_preset(j.get<std::string>());
  if (!j.is_object()) throw ParameterError("potential spec must be an object or a preset name");
  Potential pot;
  if (j.contains("builder")) {
    const auto b = j.at("builder").get<std::string>();
    if (b == "hard_square") {
      pot = build_hard_square(j.value("r_max", kSqrt2));
    } else if (b == "exv3") {
      ExV3Params p;
      p.q = j.value("q", p.q);
      p.p = j.value("p", p.p);
      p.r1 = j.value("r1", p.r1);
      p.r2 = j.value("r2", p.r2);
      p.r3 = j.value("r3", p.r3);
      p.alpha_pp = j.value("alpha_pp", p.alpha_pp);
      p.C = j.value("C", p.C);
      const auto tail = j.value("tail", std::string("decaying"));
      if (tail == "truncated") p.tail = ExV3Params::Tail::Truncated;
      else if (tail != "decaying") throw ParameterError("exv3 tail must be decaying or truncated");
      pot = build_exv3(p);
    } else if (b == "hermite") {
      pot = build_hermite_well(j.at("w1"), j.at("dw1"), j.at("ddw1"), j.at("w2"), j.at("dw2"), j.at("ddw2"),
                               j.value("cutoff", 2.0));
    } else {
      throw ParameterError("unknown builder " + b);
    }
  } else {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "HardWell") {
      pot = Potential::hard_well(j.at("r_max"));
    } else if (kind == "PiecewiseSmooth") {
      std::vector<Segment> segs;
      for (const auto& s : j.at("segments")) segs.push_back(segment_from(s));
      pot = Potential::piecewise(j.at("knots").get<std::vector<double>>(), segs, range_from(j.at("range")),
                                 j.value("hard_core", 0.0), j.value("normalization", 1.0));
    } else if (kind == "Resummed") {
      Potential base = potential_from_json(j.at("base"));
      return resum(base, mode_from(j.at("mode")), j.at("tail_tol"), j.value("c_pot_eps", 1.0),
                   j.value("t_min", -1.0));
    } else {
      throw ParameterError("unknown potential kind " + kind);
    }
  }
  if (j.contains("params")) pot.set_params(params_from(j.at("params")));
  return pot;
}

Potential potential_preset(const std::string& name) {
  if (name == "hard-sqrt2") return build_hard_square(kSqrt2);
  if (name == "exv3" || name == "exv3-truncated") {
    ExV3Params p;
    if (name == "exv3-truncated") p.tail = ExV3Params::Tail::Truncated;
    Potential v = build_exv3(p);
    v.set_params({0.01, 0.07, 0.09});
    return v;
  }
  throw ParameterError("unknown potential preset " + name);
}

json to_json(const Configuration& X) {
  json pts = json::array();
  for (const auto& p : X.points) pts.push_back({p.x, p.y});
  return {{"points", pts}};
}

Configuration configuration_from_json(const json& j) {
  Configuration X;
  const json& pts = j.is_array() ? j : j.at("points");
  for (const auto& p : pts) X.points.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
  return X;
}

std::string configuration_to_csv(const Configuration& X) {
  std::ostringstream os;
  os.precision(17);
  os << "x,y\n";
  for (const auto& p : X.points) os << p.x << ',' << p.y << '\n';
  return os.str();
}

Configuration configuration_from_csv(const std::string& text) {
  Configuration X;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    double x, y;
    if (std::sscanf(line.c_str(), "%lf,%lf", &x, &y) == 2) X.points.push_back({x, y});
  }
  return X;
}

json to_json(const ConditionReport& r) {
  json a = json::array();
  for (const auto& v : r.verdicts)
    a.push_back({{"id", v.id},
                 {"status", to_string(v.status)},
                 {"margin", num(v.margin)},
                 {"witness", num(v.witness)},
                 {"residual", num(v.residual)},
                 {"method", v.method}});
  return {{"conditions", a}};
}

json to_json(const SpectrumEntry& e) {
  json v = json::array();
  for (const auto& p : e.vector) v.push_back({p.x, p.y});
  return {{"label", e.label}, {"eigenvalue", num(e.eigenvalue)}, {"eigenvalue_neg", num(e.eigenvalue_neg)},
          {"one_sided", e.one_sided}, {"vector", v}};
}

json to_json(const ScaleResult& s) {
  return {{"t", s.t}, {"energy", num(s.energy)}, {"at_boundary", s.at_boundary},
          {"above_one_minus_alpha", s.above_one_minus_alpha}};
}

json to_json(const RunResult& r) {
  json pe = json::array();
  for (const auto& e : r.point_energies) pe.push_back(num(e.value_or_inf()));
  return {{"configuration", to_json(r.best)},
          {"energy", num(r.energy.value_or_inf())},
          {"point_energies", pe},
          {"graph",
           {{"boundary_count", r.graph.boundary_count},
            {"degree_histogram", r.graph.degree_histogram},
            {"min_distance", num(r.graph.min_distance)},
            {"min_distance_ok", r.graph.min_distance_ok}}},
          {"trace",
           {{"restarts", r.restarts},
            {"iterations", r.iterations},
            {"converged", r.converged},
            {"converged_runs", r.converged_runs},
            {"grad_norm", num(r.grad_norm)},
            {"best_restart", r.best_restart}}},
          {"seed", r.seed},
          {"bonds", r.bonds},
          {"max_degree", r.max_degree},
          {"degree_certificate", r.degree_certificate}};
}

json to_json(const BoundsRow& r) {
  return {{"N", r.N},
          {"E_best", r.E_best},
          {"E_lat", r.E_lat},
          {"bulk", r.bulk},
          {"excess_best", r.excess_best},
          {"excess_lat", r.excess_lat},
          {"boundary_count", r.boundary_count},
          {"certified", r.certified},
          {"certificate", r.certificate},
          {"lower_bound_holds", r.lower_bound_holds},
          {"interior_points", r.interior_points}};
}

std::string bounds_csv(const std::vector<BoundsRow>& rows) {
  std::ostringstream os;
  os.precision(17);
  os << "N,E_best,E_lat,excess_best,excess_lat,boundary_count\n";
  for (const auto& r : rows)
    os << r.N << ',' << r.E_best << ',' << r.E_lat << ',' << r.excess_best << ',' << r.excess_lat << ','
       << r.boundary_count << '\n';
  return os.str();
}

json to_json(const CoverVerdict& v) {
  json j{{"verdict", v.exact && v.squares_ok ? "exact" : "failed"},
         {"exact", v.exact},
         {"points_checked", v.points_checked},
         {"failure_count", v.failure_count},
         {"squares_ok", v.squares_ok},
         {"edges_checked", v.edges_checked},
         {"bad_edge_count", v.bad_edge_count}};
  if (v.first_failure) j["first_failure"] = {v.first_failure->a, v.first_failure->b};
  if (v.first_bad_edge)
    j["first_bad_edge"] = {{v.first_bad_edge->first.a, v.first_bad_edge->first.b},
                           {v.first_bad_edge->second.a, v.first_bad_edge->second.b}};
  return j;
}

std::string decomposition_csv(const SublatticeDecomposition& dec) {
  std::ostringstream os;
  os << "r2,generator_x,generator_y,partner_x,partner_y,m\n";
  for (const auto& e : dec.entries)
    os << e.r2 << ',' << e.gen.a << ',' << e.gen.b << ',' << e.partner.a << ',' << e.partner.b << ','
       << dec.m(e.r2) << '\n';
  return os.str();
}

json to_json(const BondGraph& G) {
  json edges = json::array(), longs = json::array();
  for (const auto& e : G.edges) edges.push_back({e.p, e.q, e.distance});
  for (const auto& e : G.long_edges) longs.push_back({e.p, e.q, e.distance});
  return {{"alpha", G.alpha},
          {"alpha_pp", G.alpha_pp},
          {"n", G.n},
          {"edges", edges},
          {"long_edges", longs},
          {"boundary", G.boundary_labels()},
          {"min_distance", num(G.min_distance)},
          {"min_distance_ok", G.min_distance_ok},
          {"max_neighborhood", G.max_neighborhood},
          {"degree_bound_ok", G.degree_bound_ok}};
}

json to_json(const RigidityVerdict& v) {
  const char* k = v.kind == RigidityVerdict::Kind::Square           ? "square"
                  : v.kind == RigidityVerdict::Kind::NotConstrained ? "not_constrained"
                                                                    : "violation";
  return {{"kind", k}, {"side", v.side}, {"deformation", v.deformation}, {"constant", num(v.constant)},
          {"p", v.p}, {"q", v.q}};
}

json to_json(const AngleBounds& b) {
  return {{"analytic_min", num(b.analytic_min)}, {"analytic_max", num(b.analytic_max)},
          {"numeric_min", num(b.numeric_min)}, {"numeric_max", num(b.numeric_max)}};
}

json to_json(const JohnVerdict& v) {
  return {{"holds", v.holds}, {"hypothesis_holds", v.hypothesis_holds}, {"delta", v.delta},
          {"alpha", v.alpha}, {"margin", v.margin}, {"sup_distortion", v.sup_distortion}};
}

json to_json(const InequalityReport& r) {
  return {{"inequality", r.inequality}, {"lhs", num(r.lhs)}, {"rhs", num(r.rhs)}, {"margin", num(r.margin)},
          {"empirical_constant", num(r.empirical_constant)}, {"holds", r.holds}};
}

std::uint64_t spec_hash(const json& spec) {
  const std::string s = spec.dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace sqcrys
