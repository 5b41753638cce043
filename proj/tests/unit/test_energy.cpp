#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "sqcrys/energy.hpp"

using namespace sqcrys;

namespace {
Configuration grid(int n, double t = 1.0) {
  Configuration X;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) X.points.push_back({i * t, j * t});
  return X;
}
std::array<Vec2, 4> rot(const std::array<Vec2, 4>& v) { return {v[1], v[2], v[3], v[0]}; }
}  // namespace

TEST_SUITE("energy") {

TEST_CASE("total energy of small hard configurations") {
  Potential h = build_hard_square(kSqrt2);
  CHECK(total_energy(h, Configuration{{{0, 0}, {1, 0}}}).value() == -1.0);
  CHECK(total_energy(h, grid(3)).value() == -20.0);
  CHECK(total_energy(h, grid(3)).value() == oracle::pair_sum(h, grid(3).points));
  CHECK_FALSE(total_energy(h, Configuration{{{0, 0}, {0.5, 0}}}).feasible());
  CHECK_FALSE(total_energy(h, Configuration{{{0, 0}, {0, 0}}}).feasible());
}

TEST_CASE("point energies sum to the total") {
  Potential v = build_exv3(ExV3Params{});
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(-0.05, 0.05);
  Configuration X = grid(4, 1.05);
  for (auto& p : X.points) p += Vec2{U(rng), U(rng)};
  double s = 0;
  for (const auto& e : point_energies(v, X)) s += e.value();
  CHECK(s == doctest::Approx(total_energy(v, X).value()).epsilon(1e-12));
  CHECK(total_energy(v, X).value() == doctest::Approx(oracle::pair_sum(v, X.points)).epsilon(1e-12));
}

TEST_CASE("energy is invariant under isometries") {
  Potential v = build_exv3(ExV3Params{});
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(-0.1, 0.1);
  Configuration X = grid(3, 1.02);
  for (auto& p : X.points) p += Vec2{U(rng), U(rng)};
  const double e0 = total_energy(v, X).value();
  const double c = std::cos(0.7), s = std::sin(0.7);
  Configuration Y = X;
  for (auto& p : Y.points) p = Vec2{-(c * p.x - s * p.y) + 3.3, s * p.x + c * p.y - 1.1};
  CHECK(total_energy(v, Y).value() == doctest::Approx(e0).epsilon(1e-12));
}

TEST_CASE("canonical cyclic order") {
  auto Q = canonicalize_quadrilateral({Vec2{0, 0}, {1, 1}, {1, 0}, {0, 1}});
  CHECK(Q.x[0] == Vec2{0, 0});
  CHECK(Q.x[1] == Vec2{1, 0});
  CHECK(Q.x[2] == Vec2{1, 1});
  CHECK(Q.x[3] == Vec2{0, 1});
  auto I = canonicalize_quadrilateral({Vec2{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  CHECK(I.order == std::array<int, 4>{0, 1, 2, 3});
  const double c = std::cos(M_PI / 6), s = std::sin(M_PI / 6);
  std::array<Vec2, 4> raw{Vec2{0, 0}, {1, 1}, {1, 0}, {0, 1}};
  for (auto& p : raw) p = Vec2{c * p.x - s * p.y, s * p.x + c * p.y};
  CHECK(canonicalize_quadrilateral(raw).order == Q.order);
  CHECK_THROWS_AS(canonicalize_quadrilateral({Vec2{0, 0}, {1, 0}, {2, 0}, {3, 0}}), DegeneracyError);
}

TEST_CASE("four point energy fixtures") {
  auto sq = reference_square();
  CHECK(four_point_energy(build_hard_square(kSqrt2), canonicalize_quadrilateral(sq)).value() == -4.0);
  Potential flat = build_hermite_well(-1, 0, 1, -1, 0, 1, 2.0);
  CHECK(four_point_energy(flat, canonicalize_quadrilateral(sq)).value() == doctest::Approx(-4.0));
  std::array<Vec2, 4> big;
  for (int i = 0; i < 4; ++i) big[i] = sq[i] * 3.0;
  CHECK(four_point_energy(flat, canonicalize_quadrilateral(big)).value() == 0.0);
  Potential v = build_exv3(ExV3Params{});
  CHECK(four_point_energy(v, canonicalize_quadrilateral(sq)).value() == doctest::Approx(oracle::e4(v, sq)).epsilon(1e-14));
}

TEST_CASE("four point energy is linear in the potential") {
  Potential a = build_hermite_well(-1, 2, 3, -1, -1, 1);
  Potential b = build_hermite_well(-0.5, 1, 0, -0.7, 0.2, 2);
  Potential ab = build_hermite_well(2 * -1 + 3 * -0.5, 2 * 2 + 3 * 1, 2 * 3 + 0, 2 * -1 + 3 * -0.7, 2 * -1 + 3 * 0.2,
                                    2 * 1 + 3 * 2);
  std::array<Vec2, 4> q{Vec2{0, 0}, {1.02, 0.01}, {1.0, 0.98}, {-0.03, 1.01}};
  auto Q = canonicalize_quadrilateral(q);
  CHECK(four_point_energy(ab, Q).value() ==
        doctest::Approx(2 * four_point_energy(a, Q).value() + 3 * four_point_energy(b, Q).value()).epsilon(1e-12));
}

TEST_CASE("gradient at the square") {
  Potential v = build_hermite_well(-1, 2, 1, -1, 0, 1);
  Quad8 h{};
  h[2] = Vec2{1, 1};
  CHECK(e4_gradient_at_square(v, h) == doctest::Approx(4.0));
  // central differences of the oracle E4
  const double step = 1e-6;
  auto sq = reference_square();
  const double fd = (oracle::e4(v, oracle::shifted(sq, h, step)) - oracle::e4(v, oracle::shifted(sq, h, -step))) / (2 * step);
  CHECK(fd == doctest::Approx(4.0).epsilon(1e-7));
  Quad8 tr{Vec2{0.3, -0.2}, {0.3, -0.2}, {0.3, -0.2}, {0.3, -0.2}};
  CHECK(std::abs(e4_gradient_at_square(v, tr)) < 1e-14);
  CHECK_THROWS_AS(e4_gradient_at_square(build_hard_square(kSqrt2), h), NotDifferentiableError);
  Potential crit = build_hermite_well(-1, 2, 1, -1, -1, 1);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> N;
  for (int k = 0; k < 50; ++k) {
    Quad8 r;
    for (auto& p : r) p = Vec2{N(rng), N(rng)};
    CHECK(std::abs(e4_gradient_at_square(crit, r)) < 1e-12);
  }
}

TEST_CASE("spectrum fixture (0, 20, 28, 0, 12, 16)") {
  Potential v = build_hermite_well(-1, 2, 3, -1, -1, 1);
  auto spec = e4_spectrum_at_square(v);
  const double expect[] = {0, 20, 28, 0, 12, 16};
  REQUIRE(spec.size() == 6);
  auto H = oracle::fd_hessian(v, reference_square());
  for (int i = 0; i < 6; ++i) {
    INFO(spec[i].label);
    CHECK(spec[i].eigenvalue == doctest::Approx(expect[i]).epsilon(1e-12));
    CHECK(std::abs(oracle::rayleigh(H, spec[i].vector) - expect[i]) <= 1e-6 * std::max(1.0, expect[i]));
    // Hessian form reproduces the eigenvalue
    double n2 = 0;
    for (auto p : spec[i].vector) n2 += norm2(p);
    CHECK(e4_hessian_form(v, spec[i].vector, spec[i].vector) == doctest::Approx(expect[i] * n2).epsilon(1e-8));
  }
}

TEST_CASE("alternating mode with one-sided second derivative") {
  // W''_-(1) and W''_+(1) differ across the r1 knot
  ExV3Params p;
  Potential v = build_exv3(p);
  WValue w1 = v.w(1.0);
  Vec2 a{0.6, -0.8};
  Quad8 h{a, -a, a, -a};
  const double got = e4_hessian_form(v, h, h);
  // sides: half weight, ±2 on each; each side contributes (W'' one-sided by sign) * <dh,dq>^2 * 2 + W' * |dh|^2
  double oracle_v = 0;
  auto sq = reference_square();
  for (int i = 0; i < 4; ++i) {
    const int j = (i + 1) % 4;
    Vec2 dh = h[j] - h[i], dq = sq[j] - sq[i];
    const double ip = dot(dh, dq);
    const double d2 = ip > 0 ? w1.d2_right : w1.d2_left;
    oracle_v += 0.5 * (2 * w1.d1_left * norm2(dh) + 4 * d2 * ip * ip);
  }
  CHECK(got == doctest::Approx(oracle_v).epsilon(1e-10));
  CHECK(w1.d2_left != doctest::Approx(w1.d2_right));
}

TEST_CASE("positive-definite test well returns to the square") {
  // W(s) = (s-1)^2 + (s-2)^2 has W'(1)+2W'(2) = -2 + 4 != 0; shift to a critical well
  Potential v = build_hermite_well(1, -2, 4, 1, 1, 4, 2.0);
  for (const auto& e : e4_spectrum_at_square(v))
    if (e.label != "translation" && e.label != "rotation") CHECK(e.eigenvalue > 0);
}

TEST_CASE("lattice energy per point") {
  Potential h = build_hard_square(kSqrt2);
  CHECK(lattice_energy_per_point(h, 1.0).value() == -4.0);
  CHECK(lattice_energy_per_point(h, 1.2).value() == -2.0);
  CHECK(lattice_energy_per_point(h, 1.5).value() == 0.0);
  ExV3Params p;
  p.tail = ExV3Params::Tail::Truncated;
  Potential v = build_exv3(p);
  for (double t : {1.0, 1.05, 1.2}) {
    if (2 * t <= v.support_radius()) continue;
    std::array<Vec2, 4> sq = reference_square();
    for (auto& x : sq) x = x * t;
    CHECK(lattice_energy_per_point(v, t).value() == doctest::Approx(oracle::e4(v, sq)).epsilon(1e-13));
  }
  // shell oracle for the decaying well
  Potential d = build_exv3(ExV3Params{});
  const int R = 300;
  double direct = 0;
  for (int a = -R; a <= R; ++a)
    for (int b = -R; b <= R; ++b)
      if ((a || b) && a * a + b * b <= R * R) direct += 0.5 * d.w(1.01 * 1.01 * (a * a + b * b)).w;
  CHECK(lattice_energy_per_point(d, 1.01, 1e-10).value() == doctest::Approx(direct).epsilon(1e-7));
}

TEST_CASE("optimal scale") {
  auto r = optimal_scale(build_hard_square(kSqrt2));
  CHECK(r.t == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r.energy == -4.0);
  ExV3Params p;
  p.tail = ExV3Params::Tail::Truncated;
  auto s = optimal_scale(build_exv3(p));
  CHECK(s.energy == doctest::Approx(-4.0).epsilon(1e-9));
  CHECK_FALSE(s.at_boundary);
  auto b = optimal_scale(build_hard_square(kSqrt2), 1.2, 1.4);
  CHECK(b.at_boundary);
}

}
