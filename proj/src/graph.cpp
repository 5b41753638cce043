#include "sqcrys/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

namespace sqcrys {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double deg(double rad) { return rad * 180.0 / kPi; }

const std::array<IVec, 8> kRingDirs = {IVec{1, 0}, IVec{1, 1},  IVec{0, 1},  IVec{-1, 1},
                                       IVec{-1, 0}, IVec{-1, -1}, IVec{0, -1}, IVec{1, -1}};

struct UnionFind {
  std::vector<int> p;
  explicit UnionFind(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
  void unite(int a, int b) { p[find(a)] = find(b); }
};

// the eight symmetries of Z^2
IVec apply_sym(int g, IVec v) {
  IVec w = v;
  for (int k = 0; k < (g & 3); ++k) w = iperp(w);
  if (g & 4) w.a = -w.a;
  return w;
}

IVec add(IVec a, IVec b) { return {a.a + b.a, a.b + b.b}; }
IVec sub(IVec a, IVec b) { return {a.a - b.a, a.b - b.b}; }

}  // namespace

bool BondGraph::adjacent(int p, int q) const {
  const auto& v = neighbors[p];
  return std::binary_search(v.begin(), v.end(), q);
}

std::vector<int> BondGraph::boundary_labels() const {
  std::vector<int> out;
  for (int i = 0; i < n; ++i)
    if (boundary[i]) out.push_back(i);
  return out;
}

BondGraph build_bond_graph(const Configuration& X, double alpha, double alpha_pp) {
  if (!(alpha >= 0.0 && alpha < alpha_pp && alpha_pp < (2.0 - kSqrt2) / 4.0))
    throw ParameterError("bond graph: need 0 <= alpha < alpha'' < (2-sqrt2)/4");
  BondGraph G;
  G.alpha = alpha;
  G.alpha_pp = alpha_pp;
  G.n = static_cast<int>(X.size());
  G.neighbors.assign(G.n, {});
  G.min_distance = std::numeric_limits<double>::infinity();
  const double lo = 1.0 - alpha, hi = kSqrt2 + alpha, hi2 = kSqrt2 + alpha_pp;
  for (int i = 0; i < G.n; ++i)
    for (int j = i + 1; j < G.n; ++j) {
      const double d = norm(X.points[i] - X.points[j]);
      G.min_distance = std::min(G.min_distance, d);
      if (d > lo && d < hi) {
        G.edges.push_back({i, j, d});
        G.neighbors[i].push_back(j);
        G.neighbors[j].push_back(i);
      } else if (d >= hi && d < hi2) {
        G.long_edges.push_back({i, j, d});
      }
    }
  G.boundary.assign(G.n, false);
  for (int i = 0; i < G.n; ++i) {
    std::sort(G.neighbors[i].begin(), G.neighbors[i].end());
    const int k = G.neighborhood_size(i);
    G.boundary[i] = k != 9;
    G.max_neighborhood = std::max(G.max_neighborhood, k);
  }
  G.min_distance_ok = G.n < 2 || G.min_distance > lo;
  G.degree_bound_ok = G.max_neighborhood <= 9;
  return G;
}

MinDistanceVerdict min_distance_check(const Configuration& X, double r_min) {
  MinDistanceVerdict v;
  v.r_min = r_min;
  v.min_distance = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < X.size(); ++i)
    for (size_t j = i + 1; j < X.size(); ++j) {
      const double d = norm(X.points[i] - X.points[j]);
      if (d < v.min_distance) {
        v.min_distance = d;
        v.p = static_cast<int>(i);
        v.q = static_cast<int>(j);
      }
    }
  v.holds = v.min_distance > r_min;
  return v;
}

LocalChart local_chart(const BondGraph& G, const Configuration& X, int p, const ChartOptions& opt) {
  if (p < 0 || p >= G.n) throw ParameterError("local_chart: label out of range");
  if (G.neighborhood_size(p) != 9) throw ChartUnavailable("local_chart: point does not have 8 neighbours");
  if (opt.require_interior)
    for (int q : G.neighbors[p])
      if (G.boundary[q]) throw ChartUnavailable("local_chart: neighbourhood meets the boundary");
  const double a = G.alpha;
  const Vec2 c = X.points[p];
  for (int q : G.neighbors[p])
    if (!(norm(X.points[q] - c) > 1.0 - a)) throw ChartUnavailable("local_chart: minimum distance violated");

  std::vector<int> nb = G.neighbors[p];
  std::sort(nb.begin(), nb.end(), [&](int u, int v) {
    const double au = std::atan2(X.points[u].y - c.y, X.points[u].x - c.x);
    const double av = std::atan2(X.points[v].y - c.y, X.points[v].x - c.x);
    if (au != av) return au < av;
    const double ru = norm(X.points[u] - c), rv = norm(X.points[v] - c);
    if (ru != rv) return ru < rv;
    return u < v;
  });
  size_t start = 0;
  for (size_t i = 1; i < nb.size(); ++i) {
    const double ri = norm(X.points[nb[i]] - c), rs = norm(X.points[nb[start]] - c);
    if (ri < rs || (ri == rs && nb[i] < nb[start])) start = i;
  }
  std::rotate(nb.begin(), nb.begin() + static_cast<long>(start), nb.end());

  LocalChart ch;
  ch.center = p;
  ch.phi[p] = {0, 0};
  for (int j = 0; j < 8; ++j) {
    ch.ring[j] = nb[j];
    ch.phi[nb[j]] = kRingDirs[j];
  }
  auto dist = [&](int u, int v) { return norm(X.points[u] - X.points[v]); };
  auto fail = [&](const std::string& what, int u, int v) {
    throw RigidityFailure("local_chart: " + what, u, v, dist(u, v));
  };
  const double scale = a > 0 ? a : 1.0;
  // consecutive ring points are bonds of length 1 + O(a)
  for (int j = 0; j < 8; ++j) {
    int u = ch.ring[j], v = ch.ring[(j + 1) % 8];
    if (!G.adjacent(u, v)) fail("consecutive neighbours not bonded", u, v);
    ch.family_constants[0] = std::max(ch.family_constants[0], std::abs(dist(u, v) - 1.0) / scale);
  }
  for (int j = 0; j < 8; j += 2) {
    int u = ch.ring[j], w = ch.ring[j + 1], v = ch.ring[(j + 2) % 8];
    ch.family_constants[1] = std::max(ch.family_constants[1], std::abs(dist(p, u) - 1.0) / scale);
    ch.family_constants[2] = std::max(ch.family_constants[2], std::abs(dist(p, w) - kSqrt2) / scale);
    if (!(dist(u, v) < kSqrt2 + a)) fail("side neighbours too far apart", u, v);
    ch.family_constants[3] = std::max(ch.family_constants[3], std::abs(dist(u, v) - kSqrt2) / scale);
  }
  for (int f = 0; f < 4; ++f)
    if (ch.family_constants[f] > opt.max_constant) {
      // locate the worst pair of that family for the witness
      int u = p, v = ch.ring[0];
      double worst = -1;
      for (int j = 0; j < 8; ++j) {
        int x = ch.ring[j], y = f == 0 ? ch.ring[(j + 1) % 8] : (f == 3 ? ch.ring[(j + 2) % 8] : p);
        if ((f == 1 && j % 2) || (f == 2 && j % 2 == 0) || (f == 3 && j % 2)) continue;
        double dev = std::abs(dist(x, y) - ((f == 0 || f == 1) ? 1.0 : kSqrt2));
        if (dev > worst) { worst = dev; u = x; v = y; }
      }
      fail("realized constant exceeds the configured bound", u, v);
    }

  std::vector<int> all(nb.begin(), nb.end());
  all.push_back(p);
  for (size_t i = 0; i < all.size(); ++i)
    for (size_t j = i + 1; j < all.size(); ++j) {
      const IVec d = sub(ch.phi[all[i]], ch.phi[all[j]]);
      const double model = std::sqrt(static_cast<double>(inorm2(d)));
      const double delta = std::abs(dist(all[i], all[j]) - model);
      ch.max_delta = std::max(ch.max_delta, delta);
      ch.deformation = std::max(ch.deformation, delta / model);
    }
  for (int j = 0; j < 8; j += 2) {
    std::array<int, 4> sq{p, ch.ring[j], ch.ring[j + 1], ch.ring[(j + 2) % 8]};
    bool all_bonds = true;
    for (int u = 0; u < 4; ++u)
      for (int v = u + 1; v < 4; ++v) all_bonds = all_bonds && G.adjacent(sq[u], sq[v]);
    ch.eps_squares += all_bonds;
  }
  return ch;
}

std::map<int, IVec> embed_region(const BondGraph& G, const Configuration& X, const std::vector<int>& region) {
  if (region.empty()) throw ParameterError("embed_region: empty region");
  std::vector<int> lam = region;
  std::sort(lam.begin(), lam.end());
  lam.erase(std::unique(lam.begin(), lam.end()), lam.end());
  std::vector<bool> in(G.n, false);
  for (int p : lam) {
    if (p < 0 || p >= G.n) throw ParameterError("embed_region: label out of range");
    in[p] = true;
  }
  UnionFind uf(G.n);
  for (const Edge& e : G.edges)
    if (in[e.p] && in[e.q]) uf.unite(e.p, e.q);
  for (int p : lam)
    if (uf.find(p) != uf.find(lam[0])) throw ParameterError("embed_region: region is not path-connected");

  std::map<int, LocalChart> charts;
  for (int p : lam) charts.emplace(p, local_chart(G, X, p));

  std::map<int, IVec> Phi;
  const int seed = lam[0];
  for (const auto& [q, v] : charts.at(seed).phi) Phi[q] = v;
  std::vector<bool> done(G.n, false);
  std::deque<int> queue{seed};
  done[seed] = true;
  while (!queue.empty()) {
    const int q = queue.front();
    queue.pop_front();
    for (int r : G.neighbors[q]) {
      if (!in[r] || done[r]) continue;
      const LocalChart& ch = charts.at(r);
      const IVec base = Phi.at(r);
      int found = -1, bad = -1;
      for (int g = 0; g < 8 && found < 0; ++g) {
        bool ok = true;
        for (const auto& [s, v] : ch.phi) {
          auto it = Phi.find(s);
          if (it == Phi.end()) continue;
          if (!(add(base, apply_sym(g, v)) == it->second)) {
            ok = false;
            if (bad < 0) bad = s;
            break;
          }
        }
        if (ok) found = g;
      }
      if (found < 0) throw EmbeddingConflict("embed_region: overlapping charts disagree", q, r, bad);
      for (const auto& [s, v] : ch.phi) Phi.emplace(s, add(base, apply_sym(found, v)));
      done[r] = true;
      queue.push_back(r);
    }
  }
  std::map<int, IVec> out;
  for (int p : lam) out[p] = Phi.at(p);
  // graph isomorphism onto the image in Z-box
  std::map<IVec, int> inv;
  for (const auto& [p, v] : out) {
    auto [it, fresh] = inv.emplace(v, p);
    if (!fresh) throw EmbeddingConflict("embed_region: two labels share a lattice site", it->second, p, p);
  }
  for (size_t i = 0; i < lam.size(); ++i)
    for (size_t j = i + 1; j < lam.size(); ++j) {
      const long long d2 = inorm2(sub(out[lam[i]], out[lam[j]]));
      const bool lat = d2 == 1 || d2 == 2;
      if (lat != G.adjacent(lam[i], lam[j]))
        throw EmbeddingConflict("embed_region: bond structure not preserved", lam[i], lam[j], lam[j]);
    }
  return out;
}

RigidityVerdict quadrilateral_rigidity_check(const std::array<Vec2, 4>& raw, double alpha, double tol,
                                             double max_constant) {
  RigidityVerdict out;
  double d[4][4];
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) d[i][j] = norm(raw[i] - raw[j]);

  if (alpha == 0.0) {
    Quadrilateral q;
    try {
      q = canonicalize_quadrilateral(raw);
    } catch (const DegeneracyError&) {
      return out;
    }
    for (int i = 0; i < 4; ++i)
      if (q.side(i) < 1.0 - tol) return out;
    for (int i = 0; i < 2; ++i)
      if (q.diagonal(i) > kSqrt2 + tol) return out;
    double dev = 0.0;
    int wp = -1, wq = -1;
    for (int i = 0; i < 4; ++i) {
      double e = std::abs(q.side(i) - 1.0);
      if (e > dev) { dev = e; wp = q.order[i]; wq = q.order[(i + 1) % 4]; }
    }
    for (int i = 0; i < 2; ++i) {
      double e = std::abs(q.diagonal(i) - kSqrt2);
      if (e > dev) { dev = e; wp = q.order[i]; wq = q.order[i + 2]; }
    }
    out.deformation = dev;
    if (dev <= 1e3 * tol + 1e-12) {
      out.kind = RigidityVerdict::Kind::Square;
      out.side = 1.0;
    } else {
      out.kind = RigidityVerdict::Kind::Violation;
      out.p = wp;
      out.q = wq;
    }
    return out;
  }

  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (!(d[i][j] > 1.0 - alpha && d[i][j] < kSqrt2 + alpha)) return out;
  // choose which two disjoint pairs are the diagonals
  const int pairings[3][2][2] = {{{0, 1}, {2, 3}}, {{0, 2}, {1, 3}}, {{0, 3}, {1, 2}}};
  double best = std::numeric_limits<double>::infinity();
  for (const auto& pr : pairings) {
    double beta = 0.0, side = 0.0;
    int wp = -1, wq = -1;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) {
        const bool diag = (pr[0][0] == i && pr[0][1] == j) || (pr[1][0] == i && pr[1][1] == j);
        const double model = diag ? kSqrt2 : 1.0;
        const double b = std::abs(d[i][j] / model - 1.0);
        if (!diag) side += d[i][j] / 4.0;
        if (b > beta) { beta = b; wp = i; wq = j; }
      }
    if (beta < best) {
      best = beta;
      out.side = side;
      out.p = wp;
      out.q = wq;
    }
  }
  out.deformation = best;
  out.constant = best / alpha;
  out.kind = out.constant <= max_constant ? RigidityVerdict::Kind::Square : RigidityVerdict::Kind::Violation;
  if (out.kind == RigidityVerdict::Kind::Square) out.p = out.q = -1;
  return out;
}

namespace {

double angle_opposite(double opp, double s1, double s2) {
  double c = (s1 * s1 + s2 * s2 - opp * opp) / (2.0 * s1 * s2);
  return deg(std::acos(std::clamp(c, -1.0, 1.0)));
}

struct Box {
  double lo[3], hi[3];
};

// extremum of f over a box of side lengths, subject to the strict triangle inequality
template <class F>
std::pair<double, double> box_extrema(const Box& b, F f) {
  double mn = std::numeric_limits<double>::infinity(), mx = -mn;
  std::array<double, 3> amin{}, amax{};
  auto feasible = [](const std::array<double, 3>& s) {
    return s[0] < s[1] + s[2] && s[1] < s[0] + s[2] && s[2] < s[0] + s[1];
  };
  auto visit = [&](const std::array<double, 3>& s) {
    if (!feasible(s)) return;
    double v = f(s);
    if (v < mn) { mn = v; amin = s; }
    if (v > mx) { mx = v; amax = s; }
  };
  const int n = 60;
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j)
      for (int k = 0; k <= n; ++k)
        visit({b.lo[0] + (b.hi[0] - b.lo[0]) * i / n, b.lo[1] + (b.hi[1] - b.lo[1]) * j / n,
               b.lo[2] + (b.hi[2] - b.lo[2]) * k / n});
  // compass refinement around the grid optimum
  for (int dir = 0; dir < 2; ++dir) {
    std::array<double, 3> x = dir ? amax : amin;
    double step = 0.02;
    while (step > 1e-12) {
      bool moved = false;
      for (int c = 0; c < 3; ++c)
        for (double sgn : {-1.0, 1.0}) {
          std::array<double, 3> y = x;
          y[c] = std::clamp(y[c] + sgn * step, b.lo[c], b.hi[c]);
          if (!feasible(y)) continue;
          double fy = f(y), fx = f(x);
          if (dir ? fy > fx : fy < fx) { x = y; moved = true; }
        }
      if (!moved) step /= 2;
    }
    visit(x);
  }
  return {mn, mx};
}

}  // namespace

AngleBounds triangle_angle_bounds(AngleCase c, double alpha) {
  if (!(alpha >= 0.0 && alpha < 0.2)) throw ParameterError("triangle_angle_bounds: alpha out of range");
  AngleBounds out;
  const double lo = 1.0 - alpha, hi = kSqrt2 + alpha;
  // sides: s[0] = a = |x1-x2|, s[1] = b = |x1-x3|, s[2] = c = |x2-x3|
  auto at1 = [](const std::array<double, 3>& s) { return angle_opposite(s[2], s[0], s[1]); };
  auto at2 = [](const std::array<double, 3>& s) { return angle_opposite(s[1], s[0], s[2]); };
  auto at3 = [](const std::array<double, 3>& s) { return angle_opposite(s[0], s[1], s[2]); };
  switch (c) {
    case AngleCase::i: {
      Box b{{lo, lo, hi}, {hi, hi, 2 * hi}};
      out.analytic_min = 60.0;
      out.analytic_max = deg(std::acos((1.0 - alpha) / (2.0 * (kSqrt2 + alpha))));
      out.numeric_min = box_extrema(b, at1).first;
      out.numeric_max = std::max(box_extrema(b, at2).second, box_extrema(b, at3).second);
      break;
    }
    case AngleCase::ii: {
      Box b{{lo, lo, lo}, {hi, hi, hi}};
      const double e = alpha;
      out.analytic_min = deg(std::acos((3.0 + (4.0 * kSqrt2 + 2.0) * e + e * e) / (2.0 * (kSqrt2 + e) * (kSqrt2 + e))));
      out.analytic_max = deg(std::acos((-(4.0 + 2.0 * kSqrt2) * e + e * e) / (2.0 * (1.0 - e) * (1.0 - e))));
      auto r = box_extrema(b, at1);
      out.numeric_min = r.first;
      out.numeric_max = r.second;
      break;
    }
    case AngleCase::iii: {
      Box b{{lo, lo, hi}, {1.0 + alpha, hi, 2 * hi}};
      out.analytic_min = deg(std::acos(std::min(1.0, (1.0 + alpha) / (2.0 * (kSqrt2 + alpha)))));
      out.numeric_min = box_extrema(b, at1).first;
      break;
    }
    case AngleCase::iv: {
      Box b{{lo, lo, lo}, {1.0 + alpha, hi, hi}};
      const double num = (1.0 + alpha) * (1.0 + alpha) + hi * hi - lo * lo;
      out.analytic_min = deg(std::acos(std::min(1.0, num / (2.0 * lo * hi))));
      out.numeric_min = std::min(box_extrema(b, at1).first, box_extrema(b, at2).first);
      break;
    }
  }
  return out;
}

}  // namespace sqcrys
