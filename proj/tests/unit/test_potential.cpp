#include <doctest.h>

#include <random>

#include "sqcrys/potential.hpp"

using namespace sqcrys;

TEST_SUITE("potential") {

TEST_CASE("hard well levels") {
  Potential h = build_hard_square(kSqrt2);
  CHECK_FALSE(h.value(0.5).feasible());
  CHECK(h.value(1.2).value() == -1.0);
  CHECK(h.value(1.0).value() == -1.0);
  CHECK(h.value(kSqrt2).value() == -1.0);
  CHECK(h.value(2.0).value() == 0.0);
  CHECK_THROWS_AS(h.evaluate(0.0), DomainError);
  CHECK_THROWS_AS(h.evaluate(-1.0), DomainError);
  CHECK_FALSE(h.value(0.0).feasible());
}

TEST_CASE("hard well closed at r_max") {
  Potential h = build_hard_square(1.3);
  CHECK(h.value(1.3).value() == -1.0);
  CHECK(h.value(1.3 + 1e-12).value() == 0.0);
  Potential sticky = build_hard_square(1.0);
  CHECK(sticky.value(1.0).value() == -1.0);
  CHECK(sticky.value(1.0 + 1e-12).value() == 0.0);
  CHECK_THROWS_AS(build_hard_square(0.9), ParameterError);
}

TEST_CASE("exV3 flat well and knot matching") {
  ExV3Params p;
  ExV3Coefficients co;
  Potential v = build_exv3(p, &co);
  for (double r : {1.0, 1.1, 1.3, kSqrt2}) {
    Evaluation e = v.evaluate(r);
    CHECK(e.value == doctest::Approx(-p.C).epsilon(1e-12));
    CHECK(std::abs(e.d1) < 1e-10);
  }
  CHECK(co.a1 > 0);
  CHECK(co.a2 > 0);
  CHECK(co.a3 > 0);
  // value and slope continuous across every knot
  for (double s : v.knots()) {
    if (s <= 0) continue;
    WValue l = v.w(s * (1 - 1e-13)), r = v.w(s * (1 + 1e-13));
    CHECK(std::abs(l.w - r.w) < 1e-10);
    CHECK(std::abs(l.d1_left - r.d1_left) < 1e-8);
  }
}

TEST_CASE("exV3 with r1 > 1 and r3 < sqrt2: C1 edges, W'' jump equals 2 a2 and 2 a3") {
  ExV3Params p;
  p.r1 = 1.02;
  p.r3 = 1.38;
  p.r2 = 1.2;
  ExV3Coefficients co;
  Potential v = build_exv3(p, &co);
  WValue w1 = v.w(p.r1 * p.r1), w3 = v.w(p.r3 * p.r3);
  CHECK(std::abs(w1.d1_left - w1.d1_right) < 1e-10);
  CHECK(std::abs(w3.d1_left - w3.d1_right) < 1e-10);
  CHECK(std::abs(w1.d2_left - w1.d2_right) == doctest::Approx(2 * co.a2).epsilon(1e-9));
  CHECK(std::abs(w3.d2_left - w3.d2_right) == doctest::Approx(2 * co.a3).epsilon(1e-9));
}

TEST_CASE("collapsed well does not crash") {
  ExV3Params p;
  p.r1 = p.r2 = p.r3 = 1.0;
  bool ok = true;
  try {
    build_exv3(p);
  } catch (const ConstructionError&) {
  } catch (const ParameterError&) {
  } catch (...) {
    ok = false;
  }
  CHECK(ok);
}

TEST_CASE("derivatives agree with finite differences") {
  Potential v = build_exv3(ExV3Params{});
  for (double r : {0.97, 1.05, 1.5, 1.7, 2.3, 3.1}) {
    const double h = 1e-6;
    const double fd = (v.value(r + h).value() - v.value(r - h).value()) / (2 * h);
    CHECK(v.evaluate(r).d1 == doctest::Approx(fd).epsilon(1e-5));
  }
}

TEST_CASE("hermite well interpolates its data") {
  Potential v = build_hermite_well(-1, 2, 3, -1, -1, 1, 2.0);
  WValue a = v.w(1.0), b = v.w(2.0);
  CHECK(a.w == doctest::Approx(-1));
  CHECK(a.d1_left == doctest::Approx(2));
  CHECK(a.d2_left == doctest::Approx(3));
  CHECK(b.w == doctest::Approx(-1));
  CHECK(b.d1_left == doctest::Approx(-1));
  CHECK(b.d2_left == doctest::Approx(1));
  CHECK(v.value(2.5).value() == 0.0);
}

TEST_CASE("conditions on the hard well") {
  auto rep = check_conditions(build_hard_square(kSqrt2), ConditionConstants{});
  CHECK(rep.holds("0"));
  CHECK(rep.holds("4"));
  CHECK(rep.holds("6"));
  CHECK(rep.at("1").status == ConditionVerdict::Status::NotApplicable);
  CHECK(rep.at("2").status == ConditionVerdict::Status::NotApplicable);
}

TEST_CASE("condition (2) fails with margin |W'(1)+2W'(2)|") {
  Potential v = build_hermite_well(-1, 1, 3, -1, 0, 1, 2.0);
  auto rep = check_conditions(v, ConditionConstants{});
  CHECK(rep.at("2").status == ConditionVerdict::Status::Fails);
  CHECK(std::abs(rep.at("2").residual) == doctest::Approx(1.0));
}

TEST_CASE("truncated exV3 satisfies (0)-(6)") {
  ExV3Params p;
  p.tail = ExV3Params::Tail::Truncated;
  Potential v = build_exv3(p);
  v.set_params({0.01, 0.07, 0.09});
  auto rep = check_conditions(v, ConditionConstants{});
  for (const char* id : {"0", "1", "2", "3", "4", "5", "6"}) {
    INFO("condition " << id);
    CHECK(rep.holds(id));
  }
}

TEST_CASE("decaying exV3 has a summable tail") {
  Potential v = build_exv3(ExV3Params{});
  v.set_params({0.01, 0.07, 0.09});
  auto rep = check_conditions(v, ConditionConstants{});
  CHECK(rep.holds("6'"));
  CHECK(rep.holds("0"));
  CHECK(rep.holds("2"));
}

TEST_CASE("resummation of a finite range potential is empty") {
  ExV3Params p;
  p.tail = ExV3Params::Tail::Truncated;
  Potential v = build_exv3(p);
  v.set_params({0.01, 0.07, 0.09});
  Potential s = resum(v, ResumMode::Vstar, 1e-9);
  for (double r : {0.95, 1.0, 1.2, 1.4, 1.5, 2.0, 3.0}) CHECK(s.value(r).value() == doctest::Approx(v.value(r).value()).epsilon(1e-14));
}

TEST_CASE("DeltaBarSq vanishes at 1 and sqrt2") {
  Potential v = build_exv3(ExV3Params{});
  v.set_params({0.01, 0.07, 0.09});
  Potential d = resum(v, ResumMode::DeltaBarSq, 1e-9);
  CHECK(std::abs(d.value(1.0).value()) < 1e-12);
  CHECK(std::abs(d.value(kSqrt2).value()) < 1e-12);
}

TEST_CASE("divergent tail is rejected") {
  ExV3Params p;
  p.p = 4.0;
  bool threw = false;
  try {
    Potential v = build_exv3(p);
    resum(v, ResumMode::Vstar, 1e-9);
  } catch (const Error&) {
    threw = true;
  }
  CHECK(threw);
}

TEST_CASE("lattice tail bound dominates the exact tail") {
  for (double p : {3.0, 5.0, 6.0}) {
    const double R = 10;
    double exact = 0;
    for (int a = -400; a <= 400; ++a)
      for (int b = -400; b <= 400; ++b) {
        const double r = std::hypot(a, b);
        if (r > R && r <= 400) exact += std::pow(r, -p);
      }
    CHECK(lattice_tail_bound(R, p) >= exact);
  }
}

}

TEST_CASE("Vtilde against direct summation to radius 1000" * doctest::test_suite("potential")) {
  Potential v = build_exv3(ExV3Params{});
  v.set_params({0.01, 0.07, 0.09});
  const long long R = 1000, R2 = R * R;
  std::vector<int> cnt(R2 + 1, 0);
  for (long long a = -R; a <= R; ++a)
    for (long long b = -R; b <= R; ++b)
      if (a * a + b * b <= R2) ++cnt[a * a + b * b];
  Potential vt = resum(v, ResumMode::Vtilde, 1e-11);
  for (double t : {0.98, 1.0, 1.03}) {
    double direct = 0;
    for (long long n = 2; n <= R2; ++n) {
      if (!cnt[n]) continue;
      long long k = n;
      int v2 = 0;
      while (k % 2 == 0) { k /= 2; ++v2; }
      if (v2 % 2) continue;
      direct += cnt[n] / 4.0 * v.w(t * t * n).w;
    }
    CHECK(std::abs(vt.value(t).value() - direct) < 1e-7);
  }
}
