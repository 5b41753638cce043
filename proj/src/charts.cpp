#include "sqcrys/charts.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <set>

namespace sqcrys {

namespace {

Vec2 to_vec(IVec v) { return {static_cast<double>(v.a), static_cast<double>(v.b)}; }

std::pair<int, int> upair(int a, int b) { return a < b ? std::pair(a, b) : std::pair(b, a); }

struct Dsu {
  std::vector<int> p;
  explicit Dsu(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) { while (p[x] != x) x = p[x] = p[p[x]]; return x; }
  void unite(int a, int b) { p[find(a)] = find(b); }
};

double seg_point_dist(Vec2 p, Vec2 a, Vec2 b) {
  Vec2 d = b - a;
  double l2 = norm2(d);
  double t = l2 > 0 ? std::clamp(dot(p - a, d) / l2, 0.0, 1.0) : 0.0;
  return norm(p - (a + d * t));
}

bool segments_intersect(Vec2 p1, Vec2 p2, Vec2 q1, Vec2 q2) {
  auto orient = [](Vec2 a, Vec2 b, Vec2 c) { return cross(b - a, c - a); };
  double d1 = orient(q1, q2, p1), d2 = orient(q1, q2, p2);
  double d3 = orient(p1, p2, q1), d4 = orient(p1, p2, q2);
  const double e = 1e-14;
  if (((d1 > e && d2 < -e) || (d1 < -e && d2 > e)) && ((d3 > e && d4 < -e) || (d3 < -e && d4 > e))) return true;
  auto on = [&](Vec2 a, Vec2 b, Vec2 c, double d) {
    return std::abs(d) <= e && std::min(a.x, b.x) - e <= c.x && c.x <= std::max(a.x, b.x) + e &&
           std::min(a.y, b.y) - e <= c.y && c.y <= std::max(a.y, b.y) + e;
  };
  return on(q1, q2, p1, d1) || on(q1, q2, p2, d2) || on(p1, p2, q1, d3) || on(p1, p2, q2, d4);
}

bool point_in_convex(const std::vector<Vec2>& hull, Vec2 p) {
  if (hull.size() < 3) return false;
  for (size_t i = 0; i < hull.size(); ++i)
    if (cross(hull[(i + 1) % hull.size()] - hull[i], p - hull[i]) < -1e-12) return false;
  return true;
}

double seg_convex_dist(const std::vector<Vec2>& hull, Vec2 a, Vec2 b) {
  if (point_in_convex(hull, a) || point_in_convex(hull, b)) return 0.0;
  double d = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < hull.size(); ++i) {
    Vec2 h0 = hull[i], h1 = hull[(i + 1) % hull.size()];
    if (segments_intersect(a, b, h0, h1)) return 0.0;
    d = std::min({d, seg_point_dist(h0, a, b), seg_point_dist(a, h0, h1), seg_point_dist(b, h0, h1)});
  }
  return d;
}

}  // namespace

DiscreteChart DiscreteChart::from_embedding(const std::map<int, IVec>& phi) {
  DiscreteChart c;
  c.phi = phi;
  for (const auto& [l, v] : phi) {
    c.labels.push_back(l);
    if (!c.site.emplace(v, l).second) throw DegeneracyError("chart is not injective");
  }
  return c;
}

DiscreteChart DiscreteChart::mirrored() const {
  std::map<int, IVec> m;
  for (const auto& [l, v] : phi) m[l] = IVec{-v.a, v.b};
  DiscreteChart c = from_embedding(m);
  c.flipped = !flipped;
  return c;
}

Triangulation triangulate_chart(const DiscreteChart& chart) {
  Triangulation T;
  const auto& site = chart.site;
  auto has = [&](IVec v) { return site.count(v) > 0; };
  T.vertices = static_cast<int>(site.size());
  if (site.empty()) throw PreconditionError("empty chart");

  std::map<IVec, int> idx;
  for (const auto& [v, l] : site) idx.emplace(v, static_cast<int>(idx.size()));
  Dsu dsu(T.vertices);
  long long amin = site.begin()->first.a, amax = amin, bmin = site.begin()->first.b, bmax = bmin;
  for (const auto& [v, l] : site) {
    amin = std::min(amin, v.a); amax = std::max(amax, v.a);
    bmin = std::min(bmin, v.b); bmax = std::max(bmax, v.b);
    for (IVec d : {IVec{1, 0}, IVec{0, 1}}) {
      IVec w{v.a + d.a, v.b + d.b};
      if (has(w)) { ++T.edges; dsu.unite(idx[v], idx[w]); }
    }
  }
  std::set<int> roots;
  for (int i = 0; i < T.vertices; ++i) roots.insert(dsu.find(i));
  T.components = static_cast<int>(roots.size());

  for (const auto& [v, l] : site) {
    IVec c1{v.a + 1, v.b}, c2{v.a + 1, v.b + 1}, c3{v.a, v.b + 1};
    if (!has(c1) || !has(c2) || !has(c3)) continue;
    ++T.cells;
    int l0 = l, l1 = site.at(c1), l2 = site.at(c2), l3 = site.at(c3);
    int base = static_cast<int>(T.triangles.size());
    if (((v.a + v.b) % 2 + 2) % 2 == 0) {
      T.triangles.push_back({{l0, l1, l2}, {v, c1, c2}});
      T.triangles.push_back({{l0, l2, l3}, {v, c2, c3}});
    } else {
      T.triangles.push_back({{l0, l1, l3}, {v, c1, c3}});
      T.triangles.push_back({{l1, l2, l3}, {c1, c2, c3}});
    }
    T.by_cell[v] = {base, base + 1};
  }

  if (T.components == 1 && T.euler() == 1) return T;

  // flood fill missing cells from outside; crossing only absent lattice edges
  std::set<IVec> seen;
  std::queue<IVec> q;
  IVec start{amin - 1, bmin - 1};
  q.push(start);
  seen.insert(start);
  auto edge_present = [&](IVec a, IVec b) { return has(a) && has(b); };
  while (!q.empty()) {
    IVec c = q.front();
    q.pop();
    // neighbours: right, left, up, down; shared edges
    const std::array<std::pair<IVec, std::pair<IVec, IVec>>, 4> nb{{
        {{c.a + 1, c.b}, {{c.a + 1, c.b}, {c.a + 1, c.b + 1}}},
        {{c.a - 1, c.b}, {{c.a, c.b}, {c.a, c.b + 1}}},
        {{c.a, c.b + 1}, {{c.a, c.b + 1}, {c.a + 1, c.b + 1}}},
        {{c.a, c.b - 1}, {{c.a, c.b}, {c.a + 1, c.b}}},
    }};
    for (const auto& [n, e] : nb) {
      if (n.a < amin - 1 || n.a > amax || n.b < bmin - 1 || n.b > bmax) continue;
      if (T.by_cell.count(n) || seen.count(n)) continue;
      if (edge_present(e.first, e.second)) continue;
      seen.insert(n);
      q.push(n);
    }
  }
  std::optional<IVec> hole;
  for (long long a = amin; a < amax && !hole; ++a)
    for (long long b = bmin; b < bmax; ++b) {
      IVec c{a, b};
      if (!T.by_cell.count(c) && !seen.count(c)) { hole = c; break; }
    }
  throw NotSimplyConnected("chart domain is not simply connected (components " + std::to_string(T.components) +
                               ", euler " + std::to_string(T.euler()) + ")",
                           hole);
}

double dist_so2(const std::array<double, 4>& F) {
  Eigen::Matrix2d M;
  M << F[0], F[1], F[2], F[3];
  Eigen::JacobiSVD<Eigen::Matrix2d> svd(M);
  auto s = svd.singularValues();
  double sg = M.determinant() >= 0 ? 1.0 : -1.0;
  return std::hypot(s(0) - 1.0, s(1) - sg);
}

int AffineMap::locate(Vec2 a) const {
  const double e = 1e-12;
  long long fa = static_cast<long long>(std::floor(a.x)), fb = static_cast<long long>(std::floor(a.y));
  for (long long da : {0LL, -1LL})
    for (long long db : {0LL, -1LL}) {
      auto it = tri.by_cell.find(IVec{fa + da, fb + db});
      if (it == tri.by_cell.end()) continue;
      for (int t : it->second) {
        const auto& c = tri.triangles[t].corners;
        Vec2 p0 = to_vec(c[0]), p1 = to_vec(c[1]), p2 = to_vec(c[2]);
        if (cross(p1 - p0, a - p0) >= -e && cross(p2 - p1, a - p1) >= -e && cross(p0 - p2, a - p2) >= -e) return t;
      }
    }
  return -1;
}

std::optional<Vec2> AffineMap::operator()(Vec2 a) const {
  int t = locate(a);
  if (t < 0) return std::nullopt;
  const auto& F = grad[t];
  Vec2 d = a - to_vec(tri.triangles[t].corners[0]);
  return origin_image[t] + Vec2{F[0] * d.x + F[1] * d.y, F[2] * d.x + F[3] * d.y};
}

AffineMap build_affine_map(const DiscreteChart& chart_in, const Configuration& X) {
  auto build = [&](const DiscreteChart& chart) {
    AffineMap u;
    u.chart = chart;
    u.tri = triangulate_chart(chart);
    for (const auto& t : u.tri.triangles) {
      Vec2 c0 = to_vec(t.corners[0]);
      Vec2 a1 = to_vec(t.corners[1]) - c0, a2 = to_vec(t.corners[2]) - c0;
      Vec2 x0 = X.points.at(t.labels[0]);
      Vec2 b1 = X.points.at(t.labels[1]) - x0, b2 = X.points.at(t.labels[2]) - x0;
      Eigen::Matrix2d A, B;
      A << a1.x, a2.x, a1.y, a2.y;
      B << b1.x, b2.x, b1.y, b2.y;
      if (std::abs(B.determinant()) < 1e-14) throw DegeneracyError("degenerate image triangle");
      Eigen::Matrix2d D = B * A.inverse();
      std::array<double, 4> F{D(0, 0), D(0, 1), D(1, 0), D(1, 1)};
      u.grad.push_back(F);
      u.dist_so2.push_back(dist_so2(F));
      u.origin_image.push_back(x0);
    }
    return u;
  };
  AffineMap u = build(chart_in);
  int negative = 0;
  for (const auto& F : u.grad) negative += (F[0] * F[3] - F[1] * F[2] < 0);
  if (2 * negative > static_cast<int>(u.grad.size())) {
    u = build(chart_in.mirrored());
    u.orientation_flipped = true;
  }
  for (double d : u.dist_so2) u.sup_distortion = std::max(u.sup_distortion, d);
  // bond distortion over chart bonds of length 1 and sqrt2
  for (const auto& [v, l] : u.chart.site)
    for (IVec d : {IVec{1, 0}, IVec{0, 1}, IVec{1, 1}, IVec{1, -1}}) {
      auto it = u.chart.site.find(IVec{v.a + d.a, v.b + d.b});
      if (it == u.chart.site.end()) continue;
      double model = std::sqrt(static_cast<double>(inorm2(d)));
      double dx = norm(X.points.at(l) - X.points.at(it->second));
      u.edge_deformation = std::max(u.edge_deformation, std::abs(dx - model) / model);
    }
  u.L_empirical = u.edge_deformation > 0 ? u.sup_distortion / u.edge_deformation : 0.0;
  return u;
}

JohnVerdict john_check(const AffineMap& u, Vec2 a, Vec2 b, double alpha) {
  if (!(alpha > 0 && alpha < 1)) throw ParameterError("alpha must lie in (0,1)");
  JohnVerdict v;
  v.alpha = alpha;
  double L = norm(b - a);
  auto ua = u(a), ub = u(b);
  if (!ua || !ub) throw PreconditionError("endpoint outside the chart domain");
  if (L == 0.0) {
    v.holds = v.hypothesis_holds = true;
    v.margin = alpha;
    return v;
  }
  double k = (1 + alpha) / (1 - alpha);
  Vec2 m = (a + b) * 0.5, e = (b - a) / L, ep = perp(e);
  double A = 0.5 * k * L, c = 0.5 * L, B = std::sqrt(std::max(0.0, A * A - c * c));
  std::set<int> touched;
  const int n = 64;
  for (double rad : {1.0, 0.75, 0.5, 0.25, 0.0})
    for (int i = 0; i < n; ++i) {
      double th = 2 * M_PI * i / n;
      Vec2 x = m + e * (rad * A * std::cos(th)) + ep * (rad * B * std::sin(th));
      int t = u.locate(x);
      if (t < 0) {
        if (rad == 1.0) throw PreconditionError("ellipse not contained in the chart domain");
        continue;
      }
      touched.insert(t);
      if (rad == 0.0) break;
    }
  for (int t : touched) v.sup_distortion = std::max(v.sup_distortion, u.dist_so2[t]);
  v.hypothesis_holds = v.sup_distortion < alpha;
  v.delta = std::abs(norm(*ua - *ub) - L);
  v.holds = v.delta <= alpha;
  v.margin = alpha - v.delta;
  return v;
}

std::vector<Vec2> convex_hull(std::vector<Vec2> pts) {
  std::sort(pts.begin(), pts.end(), [](Vec2 p, Vec2 q) { return p.x < q.x || (p.x == q.x && p.y < q.y); });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Vec2> h(2 * pts.size());
  size_t k = 0;
  for (size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(h[k - 1] - h[k - 2], pts[i] - h[k - 2]) <= 0) --k;
    h[k++] = pts[i];
  }
  for (size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 1] - h[k - 2], pts[i] - h[k - 2]) <= 0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

bool ellipse_in_convex(const std::vector<Vec2>& hull, Vec2 a, Vec2 b, double alpha) {
  if (hull.size() < 3) return false;
  double L = norm(b - a);
  if (L == 0.0) return point_in_convex(hull, a);
  double k = (1 + alpha) / (1 - alpha);
  Vec2 m = (a + b) * 0.5, e = (b - a) / L, ep = perp(e);
  double A = 0.5 * k * L, c = 0.5 * L, B = std::sqrt(std::max(0.0, A * A - c * c));
  // support function against each edge half-plane
  for (size_t i = 0; i < hull.size(); ++i) {
    Vec2 h0 = hull[i], h1 = hull[(i + 1) % hull.size()];
    Vec2 d = h1 - h0;
    Vec2 nrm = Vec2{d.y, -d.x} / norm(d);  // outward for counterclockwise hull
    double reach = dot(nrm, m) + std::hypot(A * dot(nrm, e), B * dot(nrm, ep));
    if (reach > dot(nrm, h0) + 1e-12) return false;
  }
  return true;
}

std::vector<ScaleSquare> enumerate_scale_squares(const BondGraph& G, const Configuration& X,
                                                 const DiscreteChart& chart, long long r2) {
  if (r2 <= 0 || m_of_r(r2) == 0) throw ParameterError("r^2 is not a sum of two squares");
  std::vector<IVec> gens;
  long long rb = static_cast<long long>(std::sqrt(static_cast<double>(r2))) + 1;
  for (long long x = 1; x <= rb; ++x)
    for (long long y = 0; y <= rb; ++y)
      if (x * x + y * y == r2) gens.push_back({x, y});

  std::vector<Vec2> img;
  for (int l : chart.labels) img.push_back(X.points.at(l));
  auto hull = convex_hull(img);
  const double al = G.alpha;
  const double r = std::sqrt(static_cast<double>(r2));

  std::vector<ScaleSquare> out;
  for (const auto& [c, l0] : chart.site)
    for (IVec v : gens) {
      IVec w = iperp(v);
      std::array<IVec, 4> cs{c, IVec{c.a + v.a, c.b + v.b}, IVec{c.a + v.a + w.a, c.b + v.b + w.b},
                             IVec{c.a + w.a, c.b + w.b}};
      std::array<int, 4> lab{};
      bool ok = true;
      for (int i = 0; i < 4 && ok; ++i) {
        auto it = chart.site.find(cs[i]);
        if (it == chart.site.end()) ok = false; else lab[i] = it->second;
      }
      if (!ok) continue;
      long long lo_a = std::min({cs[0].a, cs[1].a, cs[2].a, cs[3].a}), hi_a = std::max({cs[0].a, cs[1].a, cs[2].a, cs[3].a});
      long long lo_b = std::min({cs[0].b, cs[1].b, cs[2].b, cs[3].b}), hi_b = std::max({cs[0].b, cs[1].b, cs[2].b, cs[3].b});
      for (long long a = lo_a; a <= hi_a && ok; ++a)
        for (long long b = lo_b; b <= hi_b && ok; ++b) {
          long long dx = a - c.a, dy = b - c.b;
          long long pv = dx * v.a + dy * v.b, pw = dx * w.a + dy * w.b;
          if (pv < 0 || pv > r2 || pw < 0 || pw > r2) continue;
          if (!chart.site.count(IVec{a, b})) ok = false;
        }
      if (!ok) continue;
      for (int i = 0; i < 4 && ok; ++i)
        for (int j = i + 1; j < 4 && ok; ++j)
          if (!ellipse_in_convex(hull, X.points[lab[i]], X.points[lab[j]], al)) ok = false;
      if (!ok) continue;
      ScaleSquare s;
      s.labels = lab;
      s.r2 = r2;
      s.origin = c;
      s.v = v;
      for (int i = 0; i < 4; ++i) s.sides[i] = upair(lab[i], lab[(i + 1) % 4]);
      s.diagonals = {upair(lab[0], lab[2]), upair(lab[1], lab[3])};
      double beta = 0.0;
      for (const auto& [p, q] : s.sides) beta = std::max(beta, std::abs(norm(X.points[p] - X.points[q]) / r - 1.0));
      for (const auto& [p, q] : s.diagonals)
        beta = std::max(beta, std::abs(norm(X.points[p] - X.points[q]) / (kSqrt2 * r) - 1.0));
      s.deformation = beta;
      out.push_back(s);
    }
  return out;
}

namespace {

double delta_pair(const Configuration& X, const DiscreteChart& chart, int p, int q) {
  Vec2 dp = to_vec(chart.phi.at(p)) - to_vec(chart.phi.at(q));
  return std::abs(norm(X.points.at(p) - X.points.at(q)) - norm(dp));
}

InequalityReport make_report(std::string name, double lhs, double rhs, double C) {
  InequalityReport r;
  r.inequality = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.margin = rhs - lhs;
  double unit = C > 0 ? rhs / C : 0.0;
  r.empirical_constant = unit > 0 ? lhs / unit : (lhs > 0 ? std::numeric_limits<double>::infinity() : 0.0);
  r.holds = lhs <= rhs * (1 + 1e-12) + 1e-15;
  return r;
}

}  // namespace

InequalityReport quadratic_distortion_check(const BondGraph& G, const Configuration& X, const DiscreteChart& chart,
                                            int a, int b, long long r2, double C6, double radius) {
  if (!chart.phi.count(a) || !chart.phi.count(b)) throw PreconditionError("labels outside the chart");
  IVec d{chart.phi.at(a).a - chart.phi.at(b).a, chart.phi.at(a).b - chart.phi.at(b).b};
  long long n = inorm2(d);
  if (n != r2 && n != 2 * r2) throw PreconditionError("|Phi(a)-Phi(b)| is neither r nor sqrt2 r");
  double r = std::sqrt(static_cast<double>(r2));
  double lhs = std::pow(delta_pair(X, chart, a, b), 2);
  Vec2 xa = X.points[a], xb = X.points[b];
  double S = 0.0;
  for (const auto& e : G.edges) {
    if (!chart.phi.count(e.p) || !chart.phi.count(e.q)) continue;
    double dp = seg_point_dist(X.points[e.p], xa, xb), dq = seg_point_dist(X.points[e.q], xa, xb);
    if (std::min(dp, dq) >= radius) continue;
    S += std::pow(delta_pair(X, chart, e.p, e.q), 2);
  }
  return make_report("quadratic_distortion", lhs, C6 * r * S, C6);
}

namespace {

bool is_dtilde(long long r2) {
  while (r2 % 4 == 0) r2 /= 4;
  return r2 % 2 == 1;
}

}  // namespace

std::vector<InequalityReport> cardinality_bounds_report(const BondGraph& G, const Configuration& X,
                                                        const DiscreteChart& chart, long long r2,
                                                        const CardinalityOptions& opt) {
  const double C7 = opt.C7;
  auto Q1 = enumerate_scale_squares(G, X, chart, 1);
  auto Qr = enumerate_scale_squares(G, X, chart, r2);
  double r = std::sqrt(static_cast<double>(r2));
  double m = static_cast<double>(m_of_r(r2));
  double nb = 0;
  for (bool bd : G.boundary) nb += bd;

  auto area = [&](const ScaleSquare& s) {
    std::array<Vec2, 4> q;
    for (int i = 0; i < 4; ++i) q[i] = X.points[s.labels[i]];
    return shoelace_area(q);
  };
  double A1 = 0, Ar = 0;
  for (const auto& s : Q1) A1 += area(s);
  for (const auto& s : Qr) Ar += area(s);

  std::vector<InequalityReport> out;
  double card = m * Q1.size() - static_cast<double>(Qr.size());
  out.push_back(make_report("card_r_bd.lower", -card, 0.0, C7));
  out.push_back(make_report("card_r_bd.upper", card, C7 * r * r * m * nb, C7));
  double ar = r * r * m * A1 - Ar;
  out.push_back(make_report("area_r_bd.lower", -ar, 0.0, C7));
  out.push_back(make_report("area_r_bd.upper", ar, C7 * r * r * r * r * m * nb, C7));

  // side_r_bd
  std::set<std::pair<int, int>> unit_sides;
  for (const auto& s : Q1)
    for (const auto& e : s.sides) unit_sides.insert(e);
  double side_max = 0;
  for (const auto& s : Qr)
    for (const auto& [a, b] : s.sides) {
      int cnt = 0;
      for (const auto& [p, q] : unit_sides)
        cnt += segments_intersect(X.points[a], X.points[b], X.points[p], X.points[q]);
      side_max = std::max(side_max, static_cast<double>(cnt));
    }
  out.push_back(make_report("side_r_bd", side_max, C7 * r, C7));

  // length_r_bd
  double len_max = 0;
  for (const auto& s : Q1) {
    std::vector<Vec2> pts;
    for (int l : s.labels) pts.push_back(X.points[l]);
    auto hull = convex_hull(pts);
    int cnt = 0;
    for (const auto& t : Qr) {
      bool meets = false;
      for (int i = 0; i < 4 && !meets; ++i)
        for (int j = i + 1; j < 4 && !meets; ++j)
          meets = seg_convex_dist(hull, X.points[t.labels[i]], X.points[t.labels[j]]) <= opt.length_radius;
      cnt += meets;
    }
    len_max = std::max(len_max, static_cast<double>(cnt));
  }
  out.push_back(make_report("length_r_bd", len_max, C7 * r * m, C7));

  if (is_dtilde(r2)) {
    auto Qs = enumerate_scale_squares(G, X, chart, 2 * r2);
    std::set<std::pair<int, int>> sides, diags, sym;
    for (const auto& s : Qs) sides.insert(s.sides.begin(), s.sides.end());
    for (const auto& s : Qr) diags.insert(s.diagonals.begin(), s.diagonals.end());
    std::set_symmetric_difference(sides.begin(), sides.end(), diags.begin(), diags.end(),
                                  std::inserter(sym, sym.begin()));
    out.push_back(make_report("badsides", static_cast<double>(sym.size()), C7 * r * r * nb, C7));
  }
  return out;
}

double shoelace_area(const std::array<Vec2, 4>& q) {
  double s = 0;
  for (int i = 0; i < 4; ++i) s += cross(q[i], q[(i + 1) % 4]);
  return std::abs(0.5 * s);
}

namespace {

double heron(double a, double b, double c) {
  if (a < b) std::swap(a, b);
  if (a < c) std::swap(a, c);
  if (b < c) std::swap(b, c);
  double v = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c));
  return 0.25 * std::sqrt(std::max(0.0, v));
}

}  // namespace

double heron_area(const std::array<Vec2, 4>& q) {
  double s = 0;
  for (int k = 0; k < 4; ++k) {
    Vec2 p0 = q[k], p1 = q[(k + 1) % 4], p2 = q[(k + 2) % 4];
    s += heron(norm(p1 - p0), norm(p2 - p1), norm(p2 - p0));
  }
  return 0.5 * s;
}

RadialFunction RadialFunction::of(const Potential& pot) {
  RadialFunction f;
  auto P = std::make_shared<Potential>(pot);
  f.v = [P](double r) { return P->evaluate(r).value; };
  f.dv = [P](double r) { return P->evaluate(r).d1; };
  f.ddv_abs = [P](double r) {
    auto e = P->evaluate(r);
    return std::max(std::abs(e.d2_left), std::abs(e.d2_right));
  };
  f.knots = pot.knot_radii();
  return f;
}

InequalityReport taylor_area_check(const RadialFunction& v, const std::array<Vec2, 4>& Q, double r, double alpha,
                                   double C8, AreaCoefficient coeff) {
  if (!(r > 0)) throw ParameterError("r must be positive");
  double beta = 0, sum_d2 = 0, sides_v = 0;
  for (int i = 0; i < 4; ++i) {
    double d = norm(Q[(i + 1) % 4] - Q[i]);
    beta = std::max(beta, std::abs(d / r - 1));
    sum_d2 += (d - r) * (d - r);
    sides_v += v.v(d);
  }
  for (int i = 0; i < 2; ++i) {
    double d = norm(Q[i + 2] - Q[i]);
    beta = std::max(beta, std::abs(d / (kSqrt2 * r) - 1));
    sum_d2 += (d - kSqrt2 * r) * (d - kSqrt2 * r);
  }
  if (beta > alpha) throw PreconditionError("quadrilateral is not alpha-close to {0,r}^2");
  double area = heron_area(Q);
  if (!(area > 0)) throw DegeneracyError("degenerate quadrilateral");
  double k = coeff == AreaCoefficient::Corrected ? 2.0 : 1.0;
  double dv = v.dv(r);
  double lhs = std::abs(k * dv / r * (area - r * r) + 4 * v.v(r) - sides_v);
  double sup2 = 0;
  const int n = 400;
  double lo = r * (1 - alpha), hi = r * (1 + alpha);
  for (int i = 0; i <= n; ++i) sup2 = std::max(sup2, v.ddv_abs(lo + (hi - lo) * i / n));
  for (double kr : v.knots)
    if (kr >= lo && kr <= hi) sup2 = std::max(sup2, v.ddv_abs(kr));
  double e = std::abs(dv) / r + sup2;
  return make_report(coeff == AreaCoefficient::Corrected ? "taylor_area" : "taylor_area.literal", lhs,
                     C8 * e * sum_d2, C8);
}

std::vector<std::array<int, 4>> unit_squares(const std::vector<ScaleSquare>& q1) {
  std::vector<std::array<int, 4>> out;
  for (const auto& s : q1) out.push_back(s.labels);
  return out;
}

EdgeClassification classify_edges(const BondGraph& G, const Configuration& X,
                                  const std::vector<std::array<int, 4>>& squares) {
  (void)X;
  EdgeClassification out;
  out.squares = squares;
  std::map<std::pair<int, int>, double> w;
  for (const auto& s : squares) {
    for (int i = 0; i < 4; ++i) w[upair(s[i], s[(i + 1) % 4])] += 0.5;
    w[upair(s[0], s[2])] += 1.0;
    w[upair(s[1], s[3])] += 1.0;
  }
  std::set<std::pair<int, int>> done;
  auto push = [&](int p, int q, bool in_s, bool is_long) {
    auto key = upair(p, q);
    if (!done.insert(key).second) return;
    ClassifiedPair cp;
    cp.p = key.first;
    cp.q = key.second;
    auto it = w.find(key);
    cp.weight = it == w.end() ? 0.0 : it->second;
    const double e = 1e-12;
    if (cp.weight > 1 + e) cp.cls = EdgeClass::Overcovered;
    else if (std::abs(cp.weight - 1) <= e) cp.cls = EdgeClass::Covered;
    else if (std::abs(cp.weight - 0.5) <= e) cp.cls = in_s ? EdgeClass::NC1 : EdgeClass::Overcovered;
    else if (cp.weight <= e) cp.cls = in_s ? EdgeClass::NC2 : (is_long ? EdgeClass::Long : EdgeClass::Outside);
    else cp.cls = EdgeClass::Overcovered;
    out.pairs.push_back(cp);
  };
  for (const auto& e : G.edges) push(e.p, e.q, true, false);
  for (const auto& e : G.long_edges) push(e.p, e.q, false, true);
  for (const auto& [k, v] : w) push(k.first, k.second, false, false);
  return out;
}

int EdgeClassification::count(EdgeClass c) const {
  return static_cast<int>(std::count_if(pairs.begin(), pairs.end(), [c](const auto& p) { return p.cls == c; }));
}

DecompositionIdentity decomposition_identity(const Potential& pot, const Configuration& X,
                                             const EdgeClassification& cls) {
  DecompositionIdentity d;
  Energy tot = total_energy(pot, X);
  if (!tot.feasible()) {
    d.feasible = false;
    return d;
  }
  d.total = tot.value();
  auto V = [&](int p, int q) { return pot.value(norm(X.points[p] - X.points[q])).value(); };
  for (const auto& s : cls.squares) {
    double e = 0;
    for (int i = 0; i < 4; ++i) e += 0.5 * V(s[i], s[(i + 1) % 4]);
    e += V(s[0], s[2]) + V(s[1], s[3]);
    d.squares += e;
  }
  std::set<std::pair<int, int>> listed;
  double listed_v = 0;
  for (const auto& p : cls.pairs) {
    listed.insert({p.p, p.q});
    double v = V(p.p, p.q);
    listed_v += v;
    switch (p.cls) {
      case EdgeClass::NC1: d.nc1 += 0.5 * v; break;
      case EdgeClass::NC2: d.nc2 += v; break;
      case EdgeClass::Covered: break;
      default: d.rest += (1 - p.weight) * v; break;
    }
  }
  // pairs not listed carry weight 0
  d.rest += d.total - listed_v;
  d.residual = std::abs(d.total - (d.squares + d.nc1 + d.nc2 + d.rest));
  return d;
}

const char* to_string(EdgeClass c) {
  switch (c) {
    case EdgeClass::Covered: return "covered";
    case EdgeClass::NC1: return "nc1";
    case EdgeClass::NC2: return "nc2";
    case EdgeClass::Long: return "long";
    case EdgeClass::Outside: return "outside";
    case EdgeClass::Overcovered: return "overcovered";
  }
  return "?";
}

}  // namespace sqcrys
