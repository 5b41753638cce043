#include "sqcrys/minimizer.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

namespace sqcrys {

namespace {

double sup_norm(const std::vector<Vec2>& g) {
  double m = 0;
  for (const auto& v : g) m = std::max({m, std::abs(v.x), std::abs(v.y)});
  return m;
}

double sq_norm(const std::vector<Vec2>& g) {
  double s = 0;
  for (const auto& v : g) s += norm2(v);
  return s;
}

void fill_summary(const Potential& pot, RunResult& r, double alpha) {
  if (r.best.size() >= 2) {
    r.energy = total_energy(pot, r.best);
    r.point_energies = point_energies(pot, r.best);
  } else {
    r.energy = Energy(0.0);
    r.point_energies.assign(r.best.size(), Energy(0.0));
  }
  const auto& prm = pot.params();
  double a = alpha >= 0 ? alpha : prm.alpha;
  if (r.best.size() >= 2) {
    BondGraph G = build_bond_graph(r.best, a, std::max(prm.alpha_pp, a + 1e-9));
    r.graph = summarize_graph(G);
  } else {
    r.graph = GraphSummary{};
    r.graph.boundary_count = static_cast<int>(r.best.size());
    r.graph.degree_histogram.assign(1, static_cast<int>(r.best.size()));
  }
}

}  // namespace

GraphSummary summarize_graph(const BondGraph& G) {
  GraphSummary s;
  s.boundary_count = static_cast<int>(G.boundary_labels().size());
  for (int p = 0; p < G.n; ++p) {
    size_t d = G.neighbors[p].size();
    if (s.degree_histogram.size() <= d) s.degree_histogram.resize(d + 1, 0);
    ++s.degree_histogram[d];
  }
  s.min_distance = G.min_distance;
  s.min_distance_ok = G.min_distance_ok;
  return s;
}

RunResult local_minimize(const Potential& pot, const Configuration& X0, const MinimizeOptions& opt) {
  if (pot.kind() == PotentialKind::HardWell) throw PreconditionError("local_minimize needs a smooth potential");
  const auto& W = opt.weights;
  if (!W.w.empty() && W.n != static_cast<int>(X0.size())) throw ParameterError("pair weights size mismatch");
  std::vector<Vec2> x = X0.points;
  Energy E0 = weighted_energy(pot, x, W);
  if (!E0.feasible()) throw DomainError("infeasible starting configuration");
  double E = E0.value();
  auto g = weighted_gradient(pot, x, W);
  double gn = sup_norm(g);
  RunResult res;
  double lambda = 1e-2 / std::max(1.0, gn);
  int it = 0;
  while (gn >= opt.tol && it < opt.max_iter) {
    const double g2 = sq_norm(g);
    bool accepted = false;
    std::vector<Vec2> xn(x.size()), gnew;
    double En = E;
    for (int tries = 0; tries < 80; ++tries) {
      for (size_t i = 0; i < x.size(); ++i) xn[i] = x[i] - g[i] * lambda;
      Energy e = weighted_energy(pot, xn, W);
      if (e.feasible()) {
        En = e.value();
        if (En <= E - 1e-4 * lambda * g2) {
          accepted = true;
        } else if (En <= E + 1e-15 * std::max(1.0, std::abs(E))) {
          // rounding floor: accept when the gradient shrinks
          gnew = weighted_gradient(pot, xn, W);
          accepted = sup_norm(gnew) < gn;
        }
        if (accepted) break;
      }
      lambda *= 0.5;
    }
    if (!accepted) break;
    if (gnew.empty()) gnew = weighted_gradient(pot, xn, W);
    double ss = 0, sy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
      Vec2 s = xn[i] - x[i], y = gnew[i] - g[i];
      ss += norm2(s);
      sy += dot(s, y);
    }
    lambda = sy > 0 ? ss / sy : 2 * lambda;
    lambda = std::clamp(lambda, 1e-12, 1e3);
    x.swap(xn);
    g.swap(gnew);
    E = En;
    gn = sup_norm(g);
    ++it;
  }
  res.best.points = x;
  res.iterations = it;
  res.grad_norm = gn;
  res.converged = gn < opt.tol;
  res.converged_runs = res.converged ? 1 : 0;
  res.restarts = 1;
  res.best_restart = 0;
  fill_summary(pot, res, opt.alpha);
  return res;
}

Configuration lattice_candidate(int N, double t, Vec2 c) {
  if (N < 0) throw ParameterError("N must be non-negative");
  Configuration X;
  if (N == 0) return X;
  long long R = static_cast<long long>(std::ceil(std::sqrt(static_cast<double>(N)))) + 3;
  std::vector<IVec> pts;
  for (long long a = -R; a <= R; ++a)
    for (long long b = -R; b <= R; ++b) pts.push_back({a, b});
  // doubled coordinates keep half-integer centres exact
  const long long cx = std::llround(2 * c.x), cy = std::llround(2 * c.y);
  auto key = [&](IVec p) { return (2 * p.a - cx) * (2 * p.a - cx) + (2 * p.b - cy) * (2 * p.b - cy); };
  std::sort(pts.begin(), pts.end(), [&](IVec p, IVec q) {
    long long np = key(p), nq = key(q);
    return np != nq ? np < nq : p < q;
  });
  for (int i = 0; i < N; ++i) X.points.push_back({t * pts[i].a, t * pts[i].b});
  return X;
}

Configuration lattice_candidate(const Potential& pot, int N) { return lattice_candidate(N, optimal_scale(pot).t); }

RunResult multi_start(const Potential& pot, int N, const MultiStartOptions& opt) {
  if (N < 2) throw ParameterError("multi_start needs N >= 2");
  const double t = opt.scale ? *opt.scale : optimal_scale(pot).t;
  const Configuration base = lattice_candidate(N, t);
  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double core = pot.hard_core_radius();

  auto feasible = [&](const Configuration& X) { return total_energy(pot, X).feasible(); };
  auto random_packing = [&]() {
    Configuration X;
    double L = t * (std::sqrt(static_cast<double>(N)) + 1.0);
    int fails = 0;
    while (static_cast<int>(X.size()) < N) {
      Vec2 p{L * unif(rng), L * unif(rng)};
      bool ok = true;
      for (const auto& q : X.points)
        if (norm(p - q) < std::max(0.9 * t, core * 1.001)) { ok = false; break; }
      if (ok) X.points.push_back(p);
      else if (++fails > 2000) { L *= 1.1; fails = 0; }
    }
    return X;
  };

  RunResult best;
  bool have = false;
  int total_iter = 0, conv = 0;
  for (int k = 0; k < std::max(1, opt.restarts); ++k) {
    Configuration X0;
    if (k == 0) {
      X0 = base;
    } else if (k == 1) {
      X0 = lattice_candidate(N, t, {0.5, 0.5});
    } else if (k == 2) {
      X0 = lattice_candidate(N, t, {0.5, 0.0});
    } else if (k % 2 == 1) {
      for (int tries = 0; tries < 100; ++tries) {
        X0 = base;
        for (auto& p : X0.points) p += Vec2{gauss(rng), gauss(rng)} * (opt.perturbation * t);
        if (feasible(X0)) break;
      }
    } else {
      X0 = random_packing();
    }
    if (!feasible(X0)) continue;
    RunResult r = local_minimize(pot, X0, opt.local);
    total_iter += r.iterations;
    conv += r.converged;
    if (!have || r.energy < best.energy) {
      best = std::move(r);
      best.best_restart = k;
      have = true;
    }
  }
  if (!have) throw Error("multi_start: no feasible start");
  best.restarts = std::max(1, opt.restarts);
  best.iterations = total_iter;
  best.converged_runs = conv;
  best.seed = opt.seed;
  return best;
}

long long count_bonds(const Potential& pot, const Configuration& X, int* max_degree) {
  const double lo = pot.hard_core_radius(), hi = pot.r_max();
  std::vector<int> deg(X.size(), 0);
  long long b = 0;
  for (size_t i = 0; i < X.size(); ++i)
    for (size_t j = i + 1; j < X.size(); ++j) {
      double d = norm(X.points[i] - X.points[j]);
      if (d >= lo && d <= hi) { ++b; ++deg[i]; ++deg[j]; }
    }
  if (max_degree) *max_degree = deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
  return b;
}

namespace {

struct LatticeBonds {
  std::vector<IVec> offsets;  // lattice vectors at bond distance
  explicit LatticeBonds(double rmax) {
    long long R = static_cast<long long>(std::floor(rmax)) + 1;
    for (long long a = -R; a <= R; ++a)
      for (long long b = -R; b <= R; ++b) {
        long long n = a * a + b * b;
        if (n >= 1 && static_cast<double>(n) <= rmax * rmax * (1 + 1e-12)) offsets.push_back({a, b});
      }
  }
  int degree(const std::set<IVec>& S, IVec c) const {
    int d = 0;
    for (IVec o : offsets) d += S.count(IVec{c.a + o.a, c.b + o.b});
    return d;
  }
  long long bonds(const std::set<IVec>& S) const {
    long long b = 0;
    for (IVec c : S) b += degree(S, c);
    return b / 2;
  }
};

// Redelmeier enumeration of lattice animals connected through bond offsets
struct Animals {
  const LatticeBonds& lb;
  int N;
  int off;
  int W;
  std::vector<char> reached, inpoly;
  std::vector<IVec> poly, best_poly;
  long long best = -1;

  Animals(const LatticeBonds& l, int n) : lb(l), N(n) {
    long long reach = 0;
    for (IVec o : lb.offsets) reach = std::max({reach, std::abs(o.a), std::abs(o.b)});
    off = static_cast<int>(reach * n + 1);
    W = 2 * off + 1;
    reached.assign(static_cast<size_t>(W) * W, 0);
    inpoly.assign(static_cast<size_t>(W) * W, 0);
  }
  size_t id(IVec c) const { return static_cast<size_t>(c.a + off) * W + static_cast<size_t>(c.b + off); }
  static bool allowed(IVec c) { return c.b > 0 || (c.b == 0 && c.a >= 0); }

  void rec(std::vector<IVec> untried, int size, long long bonds) {
    while (!untried.empty()) {
      IVec c = untried.back();
      untried.pop_back();
      long long b = bonds;
      for (IVec o : lb.offsets) {
        IVec nb{c.a + o.a, c.b + o.b};
        if (std::abs(nb.a) <= off && std::abs(nb.b) <= off && inpoly[id(nb)]) ++b;
      }
      poly.push_back(c);
      inpoly[id(c)] = 1;
      if (size + 1 == N) {
        if (b > best) { best = b; best_poly = poly; }
      } else {
        std::vector<IVec> fresh;
        for (IVec o : lb.offsets) {
          IVec nb{c.a + o.a, c.b + o.b};
          if (!allowed(nb) || std::abs(nb.a) > off || std::abs(nb.b) > off || reached[id(nb)]) continue;
          reached[id(nb)] = 1;
          fresh.push_back(nb);
        }
        std::vector<IVec> next = untried;
        next.insert(next.end(), fresh.begin(), fresh.end());
        rec(std::move(next), size + 1, b);
        for (IVec nb : fresh) reached[id(nb)] = 0;
      }
      inpoly[id(c)] = 0;
      poly.pop_back();
    }
  }

  std::vector<IVec> run() {
    reached[id({0, 0})] = 1;
    rec({IVec{0, 0}}, 0, 0);
    return best_poly;
  }
};

std::set<IVec> relocate(const LatticeBonds& lb, std::set<IVec> S, int max_sweeps) {
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool improved = false;
    std::vector<std::pair<int, IVec>> order;
    for (IVec c : S) order.push_back({lb.degree(S, c), c});
    std::sort(order.begin(), order.end());
    for (auto [d, c] : order) {
      if (!S.count(c)) continue;
      S.erase(c);
      int dcur = lb.degree(S, c);
      IVec best_site = c;
      int best_deg = dcur;
      std::set<IVec> cand;
      for (IVec q : S)
        for (IVec o : lb.offsets) {
          IVec nb{q.a + o.a, q.b + o.b};
          if (!S.count(nb) && !(nb == c)) cand.insert(nb);
        }
      for (IVec nb : cand) {
        int dn = lb.degree(S, nb);
        if (dn > best_deg) { best_deg = dn; best_site = nb; }
      }
      S.insert(best_site);
      if (!(best_site == c)) improved = true;
    }
    if (!improved) break;
  }
  return S;
}

}  // namespace

RunResult hard_minimize(const Potential& pot, int N, const HardOptions& opt) {
  if (pot.kind() != PotentialKind::HardWell) throw PreconditionError("hard_minimize needs a hard well");
  if (N < 1) throw ParameterError("N must be positive");
  const double core = pot.hard_core_radius();
  const LatticeBonds lb(pot.r_max() / core);
  std::set<IVec> best;
  long long best_b = -1;
  auto consider = [&](const std::set<IVec>& S) {
    long long b = lb.bonds(S);
    if (b > best_b) { best_b = b; best = S; }
  };

  if (N <= opt.exhaustive_max && !lb.offsets.empty()) {
    Animals A(lb, N);
    auto poly = A.run();
    consider(std::set<IVec>(poly.begin(), poly.end()));
  } else {
    Configuration disk = lattice_candidate(N, 1.0);
    std::set<IVec> S;
    for (const auto& p : disk.points) S.insert({std::llround(p.x), std::llround(p.y)});
    consider(S);
    for (int a = 1; a <= N; ++a) {
      int b = (N + a - 1) / a;
      if (b < a) break;
      std::set<IVec> R;
      for (int k = 0; k < N; ++k) R.insert({k % b, k / b});
      consider(R);
    }
    consider(relocate(lb, best, opt.max_sweeps));
    consider(relocate(lb, S, opt.max_sweeps));
  }

  RunResult res;
  for (IVec c : best) res.best.points.push_back({core * c.a, core * c.b});
  res.restarts = 1;
  res.converged = true;
  res.best_restart = 0;
  res.bonds = count_bonds(pot, res.best, &res.max_degree);
  fill_summary(pot, res, -1.0);
  double mind = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < res.best.size(); ++i)
    for (size_t j = i + 1; j < res.best.size(); ++j) mind = std::min(mind, norm(res.best.points[i] - res.best.points[j]));
  res.degree_certificate = res.max_degree <= 8 && (res.best.size() < 2 || mind >= core);
  return res;
}

std::vector<BoundsRow> crystal_bounds_report(const Potential& pot, const std::vector<int>& Ns,
                                             const BoundsOptions& opt) {
  ScaleResult sc = optimal_scale(pot);
  const double bulk = sc.energy;
  bool lb3 = false;
  if (pot.kind() == PotentialKind::PiecewiseSmooth && pot.range().type == Range::Type::Finite) {
    auto rep = check_conditions(pot, ConditionConstants{});
    lb3 = true;
    for (const char* id : {"0", "1", "2", "3", "4", "5", "6"}) lb3 = lb3 && rep.holds(id);
  }
  std::vector<BoundsRow> rows;
  for (int N : Ns) {
    BoundsRow row;
    row.N = N;
    row.bulk = bulk;
    Configuration lat = lattice_candidate(N, sc.t);
    row.E_lat = total_energy(pot, lat).value();
    RunResult best;
    if (pot.kind() == PotentialKind::HardWell) {
      best = hard_minimize(pot, N, opt.hard);
      row.certified = best.degree_certificate && std::abs(bulk + 4.0) < 1e-12;
      row.certificate = row.certified ? "degree" : "none";
    } else {
      if (N >= 2) {
        MultiStartOptions ms = opt.search;
        ms.scale = sc.t;
        best = multi_start(pot, N, ms);
      } else {
        best.best = lat;
        best.energy = total_energy(pot, lat);
      }
      row.certified = lb3;
      row.certificate = lb3 ? "lb3" : "none";
    }
    row.E_best = std::min(best.energy.value(), row.E_lat);
    const double sq = std::sqrt(static_cast<double>(N));
    row.excess_best = (row.E_best - N * bulk) / sq;
    row.excess_lat = (row.E_lat - N * bulk) / sq;
    const auto& prm = pot.params();
    if (N >= 2) {
      BondGraph G = build_bond_graph(lat, prm.alpha, prm.alpha_pp);
      row.boundary_count = static_cast<int>(G.boundary_labels().size());
      const Configuration& B = best.energy < total_energy(pot, lat) ? best.best : lat;
      BondGraph Gb = build_bond_graph(B, prm.alpha, prm.alpha_pp);
      std::vector<bool> has_long(Gb.n, false);
      for (const auto& e : Gb.long_edges) has_long[e.p] = has_long[e.q] = true;
      for (int p = 0; p < Gb.n; ++p) {
        bool ok = !Gb.boundary[p] && !has_long[p];
        for (int q : Gb.neighbors[p]) ok = ok && !Gb.boundary[q];
        row.interior_points += ok;
      }
    } else {
      row.boundary_count = N;
    }
    row.lower_bound_holds = row.E_best >= N * bulk - opt.solver_tol * std::max(1, N);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace sqcrys
