#include <doctest.h>

#include <random>

#include "sqcrys/minimizer.hpp"

using namespace sqcrys;

namespace {
// best bond count over all N-subsets of the k x k grid
long long enumerate_bonds(int N, int k) {
  std::vector<Vec2> g;
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) g.push_back({double(a), double(b)});
  const int M = static_cast<int>(g.size());
  long long best = 0;
  for (unsigned mask = 0; mask < (1u << M); ++mask) {
    if (__builtin_popcount(mask) != N) continue;
    long long bonds = 0;
    for (int i = 0; i < M; ++i)
      if (mask >> i & 1)
        for (int j = i + 1; j < M; ++j)
          if ((mask >> j & 1) && norm2(g[i] - g[j]) <= 2.0 + 1e-12) ++bonds;
    best = std::max(best, bonds);
  }
  return best;
}

Potential truncated() {
  ExV3Params p;
  p.tail = ExV3Params::Tail::Truncated;
  Potential v = build_exv3(p);
  v.set_params({0.01, 0.07, 0.09});
  return v;
}
}  // namespace

TEST_SUITE("minimizer") {

TEST_CASE("hard minimization matches enumeration for small N") {
  Potential h = build_hard_square(kSqrt2);
  CHECK(hard_minimize(h, 1).energy.value() == 0.0);
  for (int N = 2; N <= 8; ++N) {
    INFO("N=" << N);
    auto r = hard_minimize(h, N);
    CHECK(-r.energy.value() == enumerate_bonds(N, 4));
    CHECK(r.degree_certificate);
    CHECK(r.energy.value() >= -4.0 * N);
    CHECK(min_distance_check(r.best, 1.0 - 1e-12).holds);
  }
  CHECK(hard_minimize(h, 3).energy.value() == -3.0);
  CHECK(hard_minimize(h, 9).energy.value() == -20.0);
}

TEST_CASE("hard minimization N = 100") {
  auto r = hard_minimize(build_hard_square(kSqrt2), 100);
  CHECK(r.energy.value() >= -400);
  CHECK(r.energy.value() <= -400 + 8 * 10);
  CHECK(r.degree_certificate);
}

TEST_CASE("local minimization") {
  Potential v = truncated();
  auto sc = optimal_scale(v);
  // two points go to the well
  auto two = local_minimize(v, Configuration{{{0, 0}, {1.3, 0.1}}});
  CHECK(two.converged);
  CHECK(v.value(norm(two.best.points[1] - two.best.points[0])).value() == doctest::Approx(-1.0).epsilon(1e-9));
  // perturbed unit square under E4 weights
  MinimizeOptions o;
  o.weights = PairWeights::four_point();
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> U(-0.03, 0.03);
  Configuration X{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}};
  for (auto& p : X.points) p += Vec2{U(rng), U(rng)};
  auto r = local_minimize(v, X, o);
  CHECK(r.converged);
  for (int i = 0; i < 4; ++i)
    CHECK(norm(r.best.points[(i + 1) % 4] - r.best.points[i]) == doctest::Approx(sc.t).epsilon(1e-6));
  // already minimal: no iterations
  auto again = local_minimize(v, r.best, o);
  CHECK(again.iterations == 0);
  CHECK_THROWS_AS(local_minimize(build_hard_square(kSqrt2), X), PreconditionError);
  CHECK_THROWS_AS(local_minimize(v, Configuration{{{0, 0}, {0, 0}}}), Error);
}

TEST_CASE("multi start finds the 3x3 patch") {
  Potential v = truncated();
  MultiStartOptions o;
  o.restarts = 8;
  auto r = multi_start(v, 9, o);
  CHECK(r.energy.value() == doctest::Approx(-20.0).epsilon(1e-8));
  CHECK(r.graph.degree_histogram.size() > 8);
  CHECK(r.graph.degree_histogram[8] == 1);
  CHECK(r.graph.min_distance_ok);
  auto four = multi_start(v, 4, o);
  auto sq = reference_square();
  CHECK(four.energy.value() <= four_point_energy(v, canonicalize_quadrilateral(sq)).value() + 1e-8);
}

TEST_CASE("multi start is reproducible") {
  Potential v = truncated();
  MultiStartOptions o;
  o.restarts = 4;
  o.seed = 99;
  auto a = multi_start(v, 6, o), b = multi_start(v, 6, o);
  CHECK(a.energy.value() == b.energy.value());
  for (size_t i = 0; i < a.best.size(); ++i) CHECK(a.best.points[i] == b.best.points[i]);
}

TEST_CASE("lattice candidates and bounds table") {
  auto c = lattice_candidate(9, 1.0, {0, 0});
  CHECK(c.size() == 9);
  CHECK(total_energy(build_hard_square(kSqrt2), c).value() == -20.0);
  auto rows = crystal_bounds_report(build_hard_square(kSqrt2), {4, 9, 16, 25, 36});
  REQUIRE(rows.size() == 5);
  CHECK(rows[0].E_best == -6.0);
  for (const auto& r : rows) {
    CHECK(r.certified);
    CHECK(r.certificate == "degree");
    CHECK(r.lower_bound_holds);
    CHECK(r.excess_lat <= 8.0);
  }
  auto lb3 = crystal_bounds_report(truncated(), {4, 9});
  for (const auto& r : lb3) {
    CHECK(r.certificate == "lb3");
    CHECK(r.lower_bound_holds);
  }
}

}
