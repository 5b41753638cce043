#include <doctest.h>

#include <random>

#include "sqcrys/graph.hpp"
#include "sqcrys/suites.hpp"

using namespace sqcrys;

namespace {
Configuration disk(double R) {
  Configuration X;
  for (int a = -10; a <= 10; ++a)
    for (int b = -10; b <= 10; ++b)
      if (a * a + b * b <= R * R) X.points.push_back({double(a), double(b)});
  return X;
}

// Phi equals g(coords) + c for one of the 8 symmetries g
bool matches_up_to_symmetry(const std::map<int, IVec>& phi, const std::map<int, IVec>& coords) {
  for (int s = 0; s < 8; ++s) {
    auto g = [s](IVec v) {
      IVec w = (s & 1) ? IVec{v.b, v.a} : v;
      if (s & 2) w.a = -w.a;
      if (s & 4) w.b = -w.b;
      return w;
    };
    const int l0 = phi.begin()->first;
    IVec c{phi.at(l0).a - g(coords.at(l0)).a, phi.at(l0).b - g(coords.at(l0)).b};
    bool ok = true;
    for (const auto& [l, v] : phi) {
      IVec w = g(coords.at(l));
      ok = ok && v == IVec{w.a + c.a, w.b + c.b};
    }
    if (ok) return true;
  }
  return false;
}
}  // namespace

TEST_SUITE("graph") {

TEST_CASE("exact lattice disk") {
  Configuration X = disk(5);
  BondGraph G = build_bond_graph(X, 0.05, 0.09);
  CHECK(G.degree_bound_ok);
  CHECK(G.min_distance_ok);
  for (int p = 0; p < G.n; ++p) {
    // within sqrt2 of a lattice point outside the set
    bool near_out = false;
    for (int da = -1; da <= 1; ++da)
      for (int db = -1; db <= 1; ++db) {
        Vec2 q = X.points[p] + Vec2{double(da), double(db)};
        near_out = near_out || norm2(q) > 25.0;
      }
    CHECK(G.boundary[p] == near_out);
    if (!G.boundary[p]) CHECK(G.neighborhood_size(p) == 9);
  }
  // symmetric edges
  for (const auto& e : G.edges) {
    CHECK(G.adjacent(e.p, e.q));
    CHECK(G.adjacent(e.q, e.p));
  }
}

TEST_CASE("min distance violation is reported, graph still built") {
  Configuration X{{{0, 0}, {0.5, 0}, {1, 0}, {0, 1}}};
  BondGraph G = build_bond_graph(X, 0.05, 0.09);
  CHECK_FALSE(G.min_distance_ok);
  CHECK(G.n == 4);
  auto v = min_distance_check(Configuration{{{0, 0}, {0.9, 0}, {3, 0}}}, 0.95);
  CHECK_FALSE(v.holds);
  CHECK(v.p == 0);
  CHECK(v.q == 1);
}

TEST_CASE("noise below alpha/2 keeps the edge set") {
  auto F0 = perturbed_lattice(8, 0.0, 0.0, 1);
  auto F1 = perturbed_lattice(8, 0.01, 0.0, 2);
  BondGraph a = build_bond_graph(F0.X, 0.05, 0.09), b = build_bond_graph(F1.X, 0.05, 0.09);
  REQUIRE(a.edges.size() == b.edges.size());
  for (size_t i = 0; i < a.edges.size(); ++i) CHECK(a.edges[i] == b.edges[i]);
}

TEST_CASE("degree bound under the distance premise (fuzz)") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(0, 1);
  const double alpha = 0.06;
  for (int trial = 0; trial < 200; ++trial) {
    Configuration X;
    // random sequential packing in a small box
    for (int k = 0; k < 400 && X.size() < 30; ++k) {
      Vec2 p{4 * U(rng), 4 * U(rng)};
      bool ok = true;
      for (auto q : X.points) ok = ok && norm(p - q) > 1 - alpha;
      if (ok) X.points.push_back(p);
    }
    BondGraph G = build_bond_graph(X, alpha, 0.09);
    CHECK(G.min_distance_ok);
    CHECK(G.max_neighborhood <= 9);
  }
}

TEST_CASE("local chart on the exact lattice") {
  Configuration X = disk(3);
  BondGraph G = build_bond_graph(X, 0.05, 0.09);
  int origin = -1;
  for (int p = 0; p < G.n; ++p)
    if (X.points[p] == Vec2{0, 0}) origin = p;
  LocalChart c = local_chart(G, X, origin);
  CHECK(c.max_delta < 1e-12);
  for (const auto& [l, v] : c.phi) {
    Vec2 d = X.points[l] - X.points[origin];
    // a rotation by a multiple of 90 degrees, possibly mirrored
    CHECK(std::abs(std::abs(d.x) + std::abs(d.y) - (std::abs(v.a) + std::abs(v.b))) < 1e-12);
  }
  // midpoint relations
  for (int j = 1; j < 8; j += 2) {
    IVec a = c.phi.at(c.ring[j - 1]), b = c.phi.at(c.ring[j]), d = c.phi.at(c.ring[(j + 1) % 8]);
    CHECK(b == IVec{a.a + d.a, a.b + d.b});
  }
  CHECK(c.eps_squares == 4);
}

TEST_CASE("local chart on a perturbed lattice") {
  auto F = perturbed_lattice(5, 0.01, 0.2, 4);
  BondGraph G = build_bond_graph(F.X, 0.05, 0.09);
  LocalChart c = local_chart(G, F.X, 12);
  CHECK(c.max_delta / 0.05 <= 5.0);
  std::map<int, IVec> coords;
  for (const auto& [l, v] : c.phi) coords[l] = IVec{l / 5 - 2, l % 5 - 2};
  CHECK(matches_up_to_symmetry(c.phi, coords));
}

TEST_CASE("pushed diagonal neighbour fails rigidity") {
  Configuration X;
  for (int a = -1; a <= 1; ++a)
    for (int b = -1; b <= 1; ++b) X.points.push_back({double(a), double(b)});
  // label 8 is (1,1): push out radially to distance 1.6 from the centre
  X.points[8] = Vec2{1, 1} * (1.6 / kSqrt2);
  BondGraph G = build_bond_graph(X, 0.05, 0.09);
  ChartOptions o;
  o.require_interior = false;
  bool rigid_fail = false, unavailable = false;
  try {
    local_chart(G, X, 4, o);
  } catch (const RigidityFailure& e) {
    rigid_fail = true;
    CHECK((e.p == 8 || e.q == 8));
  } catch (const ChartUnavailable&) {
    unavailable = true;
  }
  CHECK((rigid_fail || unavailable));
}

TEST_CASE("embed_region recovers coordinates") {
  for (double theta : {0.0, 0.3, 1.1}) {
    auto F = perturbed_lattice(9, 0.01, theta, 7, {2.5, -1.0});
    BondGraph G = build_bond_graph(F.X, 0.05, 0.09);
    auto region = chart_region(G);
    REQUIRE_FALSE(region.empty());
    auto phi = embed_region(G, F.X, region);
    std::map<int, IVec> coords;
    for (int l : region) coords[l] = IVec{l / 9, l % 9};
    CHECK(matches_up_to_symmetry(phi, coords));
    // seed normalization
    CHECK(phi.at(region.front()) == IVec{0, 0});
  }
}

TEST_CASE("embed_region is equivariant under relabeling") {
  auto F = perturbed_lattice(8, 0.01, 0.4, 9);
  const int n = static_cast<int>(F.X.size());
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = (i * 37 + 5) % n;  // 37 coprime to 64
  Configuration Y;
  Y.points.resize(n);
  for (int i = 0; i < n; ++i) Y.points[perm[i]] = F.X.points[i];
  BondGraph G = build_bond_graph(F.X, 0.05, 0.09), H = build_bond_graph(Y, 0.05, 0.09);
  auto rx = chart_region(G);
  auto phix = embed_region(G, F.X, rx);
  std::vector<int> ry;
  for (int l : rx) ry.push_back(perm[l]);
  std::sort(ry.begin(), ry.end());
  auto phiy = embed_region(H, Y, ry);
  std::map<int, IVec> pulled;
  for (const auto& [l, v] : phix) pulled[perm[l]] = v;
  CHECK(matches_up_to_symmetry(phiy, pulled));
}

TEST_CASE("seam with a 90 degree mismatch") {
  // left block is Z^2, right block is Z^2 rotated by 90 degrees about a point that breaks the gluing
  Configuration X;
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) X.points.push_back({double(a), double(b)});
  const double c = std::cos(M_PI / 4), s = std::sin(M_PI / 4);
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) X.points.push_back(Vec2{6.0 + c * a - s * b, 2.5 + s * a + c * b});
  BondGraph G = build_bond_graph(X, 0.05, 0.09);
  std::vector<int> all(G.n);
  for (int i = 0; i < G.n; ++i) all[i] = i;
  bool threw = false;
  try {
    embed_region(G, X, all);
  } catch (const Error&) {
    threw = true;
  }
  CHECK(threw);
}

TEST_CASE("rigidity verdicts") {
  auto sq = RigidityVerdict{};
  sq = quadrilateral_rigidity_check({Vec2{0, 0}, {1, 0}, {1, 1}, {0, 1}}, 0.0);
  CHECK(sq.kind == RigidityVerdict::Kind::Square);
  CHECK(sq.side == doctest::Approx(1.0));
  // rhombus with sides 1, diagonals 1.2 and 1.6
  std::array<Vec2, 4> rh{Vec2{-0.8, 0}, {0, -0.6}, {0.8, 0}, {0, 0.6}};
  CHECK(quadrilateral_rigidity_check(rh, 0.0).kind == RigidityVerdict::Kind::NotConstrained);
}

TEST_CASE("angle bounds") {
  auto ii = triangle_angle_bounds(AngleCase::ii, 0.0);
  CHECK(ii.numeric_min == doctest::Approx(std::acos(0.75) * 180 / M_PI).epsilon(1e-4));
  CHECK(ii.numeric_max == doctest::Approx(90.0).epsilon(1e-4));
  auto i = triangle_angle_bounds(AngleCase::i, 0.0);
  CHECK(i.numeric_max == doctest::Approx(std::acos(1 / (2 * kSqrt2)) * 180 / M_PI).epsilon(1e-4));
  auto ii2 = triangle_angle_bounds(AngleCase::ii, 0.02);
  CHECK(std::abs(ii2.numeric_min - ii.numeric_min) < 0.02 * 180);
  CHECK(ii2.numeric_min >= ii2.analytic_min - 1e-9);
}

}
