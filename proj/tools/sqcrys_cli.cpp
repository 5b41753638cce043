#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "sqcrys/io.hpp"
#include "sqcrys/suites.hpp"

using namespace sqcrys;
namespace fs = std::filesystem;

namespace {

constexpr const char* kVersion = "0.1.0";

struct Common {
  std::uint64_t seed = 1;
  double tol = 1e-8;
  std::string out;
  std::string format = "json";
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--seed", c.seed, "random seed");
  sub->add_option("--tol", c.tol, "numerical tolerance");
  sub->add_option("--out", c.out, "output file (stdout if absent)");
  sub->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json potential_spec(const std::string& name) {
  if (name.empty()) throw ParameterError("a potential is required (--potential or --file)");
  if (fs::exists(name)) return json::parse(read_file(name));
  return name;
}

Configuration load_config(const std::string& path) {
  const std::string text = read_file(path);
  if (path.size() > 4 && path.substr(path.size() - 4) == ".csv") return configuration_from_csv(text);
  json j = json::parse(text);
  if (j.contains("result") && j["result"].contains("configuration")) return configuration_from_json(j["result"]["configuration"]);
  if (j.contains("configuration")) return configuration_from_json(j["configuration"]);
  return configuration_from_json(j);
}

ConditionConstants parse_constants(const std::string& s) {
  ConditionConstants k;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos) throw ParameterError("constants: expected key=value, got " + item);
    const std::string key = item.substr(0, eq);
    const double v = std::stod(item.substr(eq + 1));
    if (key == "c") k.c = v;
    else if (key == "cp") k.c_prime = v;
    else if (key == "cpp") k.c_pp = v;
    else if (key == "K") k.K = v;
    else if (key == "eps") k.eps = v;
    else if (key == "p") k.p = v;
    else if (key == "C4") k.C4 = v;
    else throw ParameterError("constants: unknown key " + key);
  }
  return k;
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(std::stoi(item));
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream o(path);
  if (!o) throw ParameterError("cannot write " + path);
  o << text;
}

struct Emitter {
  Common& c;
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

  void operator()(json spec, const json& result, const std::string& csv = {}) const {
    spec["seed"] = c.seed;
    spec["tol"] = c.tol;
    spec["format"] = c.format;
    const std::string h = hex64(spec_hash(spec));
    if (c.format == "csv" && !csv.empty()) {
      write_text(c.out, "# spec_hash=" + h + "\n" + csv);
    } else {
      json doc{{"spec", spec}, {"spec_hash", h}, {"result", result}};
      write_text(c.out, doc.dump(2) + "\n");
    }
    if (!c.out.empty()) {
      const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      json meta{{"version", kVersion}, {"seed", c.seed}, {"spec_hash", h}, {"wall_time_s", wall},
                {"command", spec.value("command", "")}};
      write_text(c.out + ".meta.json", meta.dump(2) + "\n");
    }
  }
};

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"square-lattice crystallization toolkit"};
  app.require_subcommand(1);
  Common c;
  std::string pot_name, config_path, constants, n_list, mode = "Vstar", dir, region_spec = "interior";
  double alpha = -1, alpha_pp = -1, t = -1, tail_tol = 1e-9, r_max = kSqrt2, radius = 20, noise = 0.01, theta = 0.3,
         perturbation = 0.05;
  int N = 9, restarts = 20, box = -1, n = 13;
  long long samples_a = 1000000, samples_b = 100000;
  bool verify = false, e4 = false;
  ExV3Params ex;
  std::string tail = "decaying";
  int taylor = 10000;

  auto pot_opts = [&](CLI::App* s) {
    s->add_option("--potential,--file", pot_name, "preset name (hard-sqrt2, exv3, exv3-truncated) or JSON file");
  };
  auto alpha_opts = [&](CLI::App* s) {
    s->add_option("--alpha", alpha, "bond tolerance alpha");
    s->add_option("--alpha-pp", alpha_pp, "long-edge tolerance alpha''");
  };

  auto* check = app.add_subcommand("check-potential", "check conditions (0)-(6')");
  pot_opts(check);
  check->add_option("--constants", constants, "c=..,cp=..,cpp=..,K=..,eps=..,p=..");
  auto* build = app.add_subcommand("build-potential", "fit an exV3 potential");
  build->add_option("--q", ex.q);
  build->add_option("--p", ex.p);
  build->add_option("--r1", ex.r1);
  build->add_option("--r2", ex.r2);
  build->add_option("--r3", ex.r3);
  build->add_option("--alpha-pp", ex.alpha_pp);
  build->add_option("--C", ex.C);
  build->add_option("--tail", tail)->check(CLI::IsMember({"decaying", "truncated"}));
  auto* energy = app.add_subcommand("energy", "total or four-point energy of a configuration");
  pot_opts(energy);
  energy->add_option("--config", config_path)->required();
  energy->add_flag("--e4", e4, "four-point energy of a 4-point configuration");
  auto* spectrum = app.add_subcommand("spectrum", "E4 Hessian spectrum at the reference square");
  pot_opts(spectrum);
  auto* scale = app.add_subcommand("optimal-scale", "minimize the lattice energy per point over t");
  pot_opts(scale);
  scale->add_option("--tail-tol", tail_tol);
  auto* minimize = app.add_subcommand("minimize", "multi-start local minimization");
  pot_opts(minimize);
  minimize->add_option("--N", N);
  minimize->add_option("--restarts", restarts);
  minimize->add_option("--perturbation", perturbation);
  minimize->add_option("--config", config_path, "start configuration (single local run)");
  auto* hard = app.add_subcommand("hard-minimize", "bond-count maximization for the hard well");
  hard->add_option("--N", n_list, "comma-separated N")->required();
  hard->add_option("--r-max", r_max);
  auto* bounds = app.add_subcommand("crystal-bounds", "energy bounds table over N");
  pot_opts(bounds);
  bounds->add_option("--N", n_list)->required();
  alpha_opts(bounds);
  bounds->add_option("--restarts", restarts);
  auto* graph = app.add_subcommand("graph", "bond graph and boundary");
  graph->add_option("--config", config_path)->required();
  alpha_opts(graph);
  auto* embed = app.add_subcommand("embed", "discrete chart and piecewise affine map");
  embed->add_option("--config", config_path)->required();
  alpha_opts(embed);
  embed->add_option("--region", region_spec, "'interior' or comma-separated labels");
  auto* rigid = app.add_subcommand("rigidity-suite", "quadrilateral rigidity fuzzing and angle bounds");
  rigid->add_option("--samples-a", samples_a);
  rigid->add_option("--samples-b", samples_b);
  alpha_opts(rigid);
  auto* decomp = app.add_subcommand("lattice-decomp", "sublattice decomposition");
  decomp->add_option("--radius", radius);
  decomp->add_flag("--verify", verify);
  decomp->add_option("--box", box, "square-multiplicity box (default: none)");
  auto* dist = app.add_subcommand("distortion-suite", "John, quadratic, cardinality and Taylor-area checks");
  pot_opts(dist);
  dist->add_option("--n", n, "patch size");
  dist->add_option("--noise", noise);
  dist->add_option("--theta", theta);
  dist->add_option("--taylor-samples", taylor);
  alpha_opts(dist);
  auto* rs = app.add_subcommand("resum", "resummed potential and the square identity");
  pot_opts(rs);
  rs->add_option("--mode", mode)->check(CLI::IsMember({"Vtilde", "Vstar", "VstarStar", "DeltaBarSq"}));
  rs->add_option("--tail-tol", tail_tol);
  rs->add_option("--t", t, "lattice scale (default: optimal)");
  auto* report = app.add_subcommand("render-report", "aggregate run files into tables");
  report->add_option("--dir", dir)->required();

  for (auto* s : app.get_subcommands({})) add_common(s, c);

  CLI11_PARSE(app, argc, argv);
  Emitter emit{c};

  try {
    auto with_alpha = [&](Potential p) {
      if (alpha > 0 || alpha_pp > 0) {
        DeformationParams d = p.params();
        if (alpha > 0) d.alpha = alpha;
        if (alpha_pp > 0) d.alpha_pp = alpha_pp;
        if (d.alpha_prime >= d.alpha) d.alpha_prime = d.alpha / 2;
        p.set_params(d);
      }
      return p;
    };
    if (check->parsed()) {
      json ps = potential_spec(pot_name);
      Potential p = potential_from_json(ps);
      auto rep = check_conditions(p, parse_constants(constants));
      emit({{"command", "check-potential"}, {"potential", ps}, {"constants", constants}}, to_json(rep));
    } else if (build->parsed()) {
      ex.tail = tail == "truncated" ? ExV3Params::Tail::Truncated : ExV3Params::Tail::Decaying;
      ExV3Coefficients co;
      Potential p = build_exv3(ex, &co);
      json res{{"potential", to_json(p)},
               {"coefficients", {{"a1", co.a1}, {"a2", co.a2}, {"a3", co.a3}, {"a4", co.a4}, {"s0", co.s0}, {"s3", co.s3}}}};
      emit({{"command", "build-potential"}, {"q", ex.q}, {"p", ex.p}, {"r1", ex.r1}, {"r2", ex.r2}, {"r3", ex.r3},
            {"alpha_pp", ex.alpha_pp}, {"C", ex.C}, {"tail", tail}},
           res);
    } else if (energy->parsed()) {
      json ps = potential_spec(pot_name);
      Potential p = potential_from_json(ps);
      Configuration X = load_config(config_path);
      json res;
      if (e4) {
        if (X.size() != 4) throw ParameterError("--e4 needs exactly 4 points");
        Quadrilateral Q = canonicalize_quadrilateral({X.points[0], X.points[1], X.points[2], X.points[3]});
        res["E4"] = num(four_point_energy(p, Q).value_or_inf());
        res["order"] = Q.order;
      }
      res["total"] = num(total_energy(p, X).value_or_inf());
      json pe = json::array();
      for (const auto& e : point_energies(p, X)) pe.push_back(num(e.value_or_inf()));
      res["point_energies"] = pe;
      emit({{"command", "energy"}, {"potential", ps}, {"config", to_json(X)}, {"e4", e4}}, res);
    } else if (spectrum->parsed()) {
      json ps = potential_spec(pot_name);
      Potential p = potential_from_json(ps);
      json arr = json::array();
      std::string csv = "label,eigenvalue,eigenvalue_neg,one_sided\n";
      for (const auto& e : e4_spectrum_at_square(p)) {
        arr.push_back(to_json(e));
        csv += e.label + "," + fmt(e.eigenvalue) + "," + fmt(e.eigenvalue_neg) + "," + (e.one_sided ? "1" : "0") + "\n";
      }
      WValue w1 = p.w(1.0), w2 = p.w(2.0);
      json res{{"spectrum", arr}, {"W1", {{"d1", w1.d1_left}, {"d2_left", w1.d2_left}, {"d2_right", w1.d2_right}}},
               {"W2", {{"d1", w2.d1_left}, {"d2_left", w2.d2_left}, {"d2_right", w2.d2_right}}}};
      emit({{"command", "spectrum"}, {"potential", ps}}, res, csv);
    } else if (scale->parsed()) {
      json ps = potential_spec(pot_name);
      Potential p = potential_from_json(ps);
      emit({{"command", "optimal-scale"}, {"potential", ps}, {"tail_tol", tail_tol}},
           to_json(optimal_scale(p, 0.6, 2.0, c.tol, tail_tol)));
    } else if (minimize->parsed()) {
      json ps = potential_spec(pot_name);
      Potential p = potential_from_json(ps);
      RunResult r;
      json spec{{"command", "minimize"}, {"potential", ps}};
      MinimizeOptions mo;
      mo.tol = c.tol;
      if (!config_path.empty()) {
        Configuration X = load_config(config_path);
        spec["config"] = to_json(X);
        r = local_minimize(p, X, mo);
      } else {
        MultiStartOptions ms;
        ms.restarts = restarts;
        ms.seed = c.seed;
        ms.perturbation = perturbation;
        ms.local = mo;
        spec["N"] = N;
        spec["restarts"] = restarts;
        spec["perturbation"] = perturbation;
        r = multi_start(p, N, ms);
      }
      emit(spec, to_json(r), configuration_to_csv(r.best));
    } else if (hard->parsed()) {
      Potential p = build_hard_square(r_max);
      json arr = json::array();
      std::string csv = "N,energy,bonds,max_degree,degree_certificate,lower_bound\n";
      for (int k : parse_int_list(n_list)) {
        RunResult r = hard_minimize(p, k);
        json j = to_json(r);
        j["N"] = k;
        j["lower_bound"] = -4 * k;
        arr.push_back(j);
        csv += std::to_string(k) + "," + fmt(r.energy.value()) + "," + std::to_string(r.bonds) + "," +
               std::to_string(r.max_degree) + "," + (r.degree_certificate ? "1" : "0") + "," + std::to_string(-4 * k) + "\n";
      }
      emit({{"command", "hard-minimize"}, {"N", n_list}, {"r_max", r_max}}, {{"runs", arr}}, csv);
    } else if (bounds->parsed()) {
      json ps = potential_spec(pot_name);
      Potential p = with_alpha(potential_from_json(ps));
      BoundsOptions bo;
      bo.search.restarts = restarts;
      bo.search.seed = c.seed;
      auto rows = crystal_bounds_report(p, parse_int_list(n_list), bo);
      json arr = json::array();
      for (const auto& r : rows) arr.push_back(to_json(r));
      emit({{"command", "crystal-bounds"}, {"potential", ps}, {"N", n_list}, {"alpha", alpha}, {"restarts", restarts}},
           {{"rows", arr}}, bounds_csv(rows));
    } else if (graph->parsed()) {
      Configuration X = load_config(config_path);
      const double a = alpha > 0 ? alpha : 0.05, app_ = alpha_pp > 0 ? alpha_pp : 0.09;
      BondGraph G = build_bond_graph(X, a, app_);
      emit({{"command", "graph"}, {"config", to_json(X)}, {"alpha", a}, {"alpha_pp", app_}}, to_json(G));
    } else if (embed->parsed()) {
      Configuration X = load_config(config_path);
      const double a = alpha > 0 ? alpha : 0.05, app_ = alpha_pp > 0 ? alpha_pp : 0.09;
      BondGraph G = build_bond_graph(X, a, app_);
      std::vector<int> region = region_spec == "interior" ? chart_region(G) : parse_int_list(region_spec);
      auto phi = embed_region(G, X, region);
      auto chart = DiscreteChart::from_embedding(phi);
      AffineMap u = build_affine_map(chart, X);
      json ph = json::array();
      std::string csv = "label,a,b\n";
      for (const auto& [l, v] : u.chart.phi) {
        ph.push_back({l, v.a, v.b});
        csv += std::to_string(l) + "," + std::to_string(v.a) + "," + std::to_string(v.b) + "\n";
      }
      json res{{"phi", ph},
               {"triangles", u.tri.triangles.size()},
               {"sup_distortion", u.sup_distortion},
               {"edge_deformation", u.edge_deformation},
               {"L_empirical", u.L_empirical},
               {"orientation_flipped", u.orientation_flipped}};
      emit({{"command", "embed"}, {"config", to_json(X)}, {"alpha", a}, {"alpha_pp", app_}, {"region", region_spec}},
           res, csv);
    } else if (rigid->parsed()) {
      const double a = alpha > 0 ? alpha : 0.02;
      auto r = rigidity_fuzz(samples_a, samples_b, a, c.seed, c.tol > 0 ? std::min(c.tol, 1e-9) : 1e-9);
      json angles;
      for (auto [name, k] : {std::pair{"i", AngleCase::i}, {"ii", AngleCase::ii}, {"iii", AngleCase::iii}, {"iv", AngleCase::iv}})
        angles[name] = {{"alpha_0", to_json(triangle_angle_bounds(k, 0.0))}, {"alpha", to_json(triangle_angle_bounds(k, a))}};
      json res{{"square_rigidity",
                {{"samples", r.samples_a}, {"premise", r.premise_a}, {"counterexamples", r.counterexamples_a},
                 {"max_deviation", r.max_square_deviation_a}}},
               {"deformation",
                {{"samples", r.samples_b}, {"complete", r.complete_b}, {"violations", r.violations_b},
                 {"max_constant", r.max_constant_b}}},
               {"angles", angles}};
      emit({{"command", "rigidity-suite"}, {"samples_a", samples_a}, {"samples_b", samples_b}, {"alpha", a}}, res);
    } else if (decomp->parsed()) {
      auto dec = build_decomposition(radius);
      json res{{"entries", dec.entries.size()}, {"scales", dec.scales()}};
      if (verify) res["cover"] = to_json(verify_cover(dec, radius, box));
      emit({{"command", "lattice-decomp"}, {"radius", radius}, {"verify", verify}, {"box", box}}, res,
           decomposition_csv(dec));
    } else if (dist->parsed()) {
      json ps = pot_name.empty() ? json("exv3-truncated") : potential_spec(pot_name);
      Potential p = potential_from_json(ps);
      const double a = alpha > 0 ? alpha : 0.05;
      auto F = perturbed_lattice(n, noise, theta, c.seed);
      DistortionOptions o;
      o.taylor_samples = taylor;
      o.seed = c.seed;
      auto r = distortion_suite(p, F, a, o);
      json card = json::array();
      for (const auto& x : r.cardinality) card.push_back(to_json(x));
      json res{{"john", {{"pairs", r.john_pairs}, {"contained", r.john_contained}, {"pass", r.john_pass},
                         {"hypothesis", r.john_hypothesis}, {"max_delta", r.john_max_delta}}},
               {"quadratic", {{"checks", r.quadratic_checks}, {"pass", r.quadratic_pass},
                              {"max_constant", r.quadratic_max_constant}}},
               {"cardinality", card},
               {"taylor", {{"samples", r.taylor_samples}, {"pass", r.taylor_pass},
                           {"max_constant", r.taylor_max_constant}, {"literal_failures", r.taylor_literal_fail}}},
               {"sup_distortion", r.sup_distortion},
               {"L_empirical", r.L_empirical}};
      emit({{"command", "distortion-suite"}, {"potential", ps}, {"n", n}, {"noise", noise}, {"theta", theta},
            {"alpha", a}, {"taylor_samples", taylor}},
           res);
    } else if (rs->parsed()) {
      json ps = potential_spec(pot_name);
      Potential p = potential_from_json(ps);
      ResumMode m = ResumMode::Vstar;
      for (ResumMode k : {ResumMode::Vtilde, ResumMode::Vstar, ResumMode::VstarStar, ResumMode::DeltaBarSq})
        if (mode == to_string(k)) m = k;
      ScaleResult sr = optimal_scale(p, 0.6, 2.0, 1e-8, std::min(tail_tol, 1e-10));
      const double tt = t > 0 ? t : sr.t;
      Potential R = resum(p, m, tail_tol);
      Quadrilateral Q;
      auto sq = reference_square();
      for (int i = 0; i < 4; ++i) Q.x[i] = sq[i] * tt;
      Q = canonicalize_quadrilateral(Q.x);
      const double e4v = four_point_energy(R, Q).value_or_inf();
      const double bulk = lattice_energy_per_point(p, tt, tail_tol).value_or_inf();
      json res{{"t", tt}, {"E4_resummed", num(e4v)}, {"lattice_energy", num(bulk)}, {"difference", num(e4v - bulk)},
               {"scales_used", R.resum_data()->scales.size()}, {"t_min", R.resum_data()->t_min}};
      emit({{"command", "resum"}, {"potential", ps}, {"mode", mode}, {"tail_tol", tail_tol}, {"t", t}}, res);
    } else if (report->parsed()) {
      json runs = json::array(), problems = json::array();
      std::string series = "sqrtN,excess_best,excess_lat\n", eig = "file,label,eigenvalue\n";
      std::vector<fs::path> files;
      if (fs::is_directory(dir))
        for (const auto& e : fs::directory_iterator(dir))
          if (e.path().extension() == ".json" && e.path().string().find(".meta.") == std::string::npos)
            files.push_back(e.path());
      std::sort(files.begin(), files.end());
      for (const auto& f : files) {
        json doc;
        try {
          doc = json::parse(read_file(f.string()));
        } catch (const std::exception& ex2) {
          problems.push_back({{"file", f.filename().string()}, {"error", ex2.what()}});
          continue;
        }
        if (!doc.contains("spec") || !doc.contains("result")) {
          problems.push_back({{"file", f.filename().string()}, {"error", "not a run file"}});
          continue;
        }
        const std::string cmd = doc["spec"].value("command", "");
        runs.push_back({{"file", f.filename().string()}, {"command", cmd}, {"spec_hash", doc.value("spec_hash", "")}});
        if (cmd == "crystal-bounds")
          for (const auto& r : doc["result"]["rows"])
            series += fmt(std::sqrt(r["N"].get<double>())) + "," + fmt(r["excess_best"].get<double>()) + "," +
                      fmt(r["excess_lat"].get<double>()) + "\n";
        if (cmd == "spectrum")
          for (const auto& e : doc["result"]["spectrum"])
            eig += f.filename().string() + "," + e["label"].get<std::string>() + "," +
                   fmt(num_from(e["eigenvalue"])) + "\n";
      }
      json res{{"runs", runs}, {"problems", problems}, {"excess_series_csv", series}, {"spectrum_csv", eig}};
      if (files.empty()) res["warning"] = "no run files found";
      if (files.empty()) std::cerr << "warning: no run files in " << dir << "\n";
      emit({{"command", "render-report"}, {"dir", dir}}, res, series);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
