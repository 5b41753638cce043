#include <doctest.h>

#include <set>

#include "sqcrys/common.hpp"
#include "sqcrys/lattice.hpp"

using namespace sqcrys;

namespace {
bool d_tilde_closed_form(long long n) {
  if (count_representations_brute(n) == 0) return false;
  int v = 0;
  while (n % 2 == 0) { n /= 2; ++v; }
  return v % 2 == 0;
}
}  // namespace

TEST_SUITE("lattice") {

TEST_CASE("representation counts") {
  CHECK(count_representations(1) == 4);
  CHECK(count_representations(5) == 8);
  CHECK(count_representations(25) == 12);
  CHECK(count_representations(3) == 0);
  CHECK_THROWS_AS(count_representations(0), ParameterError);
  for (long long n = 1; n <= 3000; ++n) CHECK(count_representations(n) == count_representations_brute(n));
}

TEST_CASE("m(r) and m(sqrt2 r)") {
  CHECK(m_of_r(1) == 1);
  CHECK(m_of_r(5) == 2);
  CHECK(m_of_r(25) == 3);
  for (long long r2 = 1; r2 <= 5000; ++r2) CHECK(m_of_r(r2) == m_of_r(2 * r2));
}

TEST_CASE("Q++ representative and F map") {
  CHECK(qpp_rep({0, 3}) == IVec{3, 0});
  CHECK(qpp_rep({-2, -1}) == IVec{2, 1});
  CHECK(in_qpp(qpp_rep({-1, 4})));
  CHECK(f_map({1, 0}) == IVec{1, 1});
  CHECK(f_map({1, 1}) == IVec{2, 0});
  CHECK(f_map({2, 1}) == IVec{1, 3});
  for (long long a = 1; a <= 12; ++a)
    for (long long b = 0; b <= 12; ++b) {
      IVec v{a, b}, f = f_map(v);
      CHECK(inorm2(f) == 2 * inorm2(v));
      CHECK(in_lattice(f, v));
      CHECK(in_qpp(f));
      auto back = f_inverse(f);
      REQUIRE(back.has_value());
      CHECK(*back == v);
    }
  CHECK_FALSE(f_inverse({1, 0}).has_value());
}

TEST_CASE("D-tilde matches the closed form") {
  auto dec = build_decomposition(40);
  const auto sc = dec.scales();
  std::set<long long> got(sc.begin(), sc.end());
  for (long long n = 1; n <= 1600; ++n) CHECK(got.count(n) == (d_tilde_closed_form(n) ? 1u : 0u));
  CHECK(dec.contains_scale(1));
  CHECK_FALSE(dec.contains_scale(2));
  for (long long r2 : dec.scales()) CHECK(dec.m(r2) == m_of_r(r2));
}

TEST_CASE("orbit of (1,0)") {
  auto dec = build_decomposition(3);
  bool found = false;
  for (const auto& o : dec.orbits)
    if (!o.empty() && o[0] == IVec{1, 0}) {
      found = true;
      REQUIRE(o.size() >= 4);
      CHECK(o[1] == IVec{1, 1});
      CHECK(o[2] == IVec{2, 0});
      CHECK(o[3] == IVec{2, 2});
    }
  CHECK(found);
  CHECK(dec.m(5) == 2);
}

TEST_CASE("cover is exact") {
  auto dec = build_decomposition(20);
  auto v = verify_cover(dec, 20, 10);
  CHECK(v.exact);
  CHECK(v.squares_ok);
  CHECK(v.points_checked > 0);
  // independent: count covering pairs per point directly
  for (long long a = -20; a <= 20; ++a)
    for (long long b = -20; b <= 20; ++b) {
      const long long n = a * a + b * b;
      if (n == 0 || n > 400) continue;
      int hits = 0;
      for (const auto& e : dec.entries) {
        if (n != e.r2 && n != 2 * e.r2) continue;
        hits += in_lattice({a, b}, e.gen);
      }
      CHECK(hits == 1);
    }
  auto c1 = covering_entries(dec, {1, 0});
  REQUIRE(c1.size() == 1);
  CHECK(c1[0].r2 == 1);
  auto c2 = covering_entries(dec, {1, 1});
  REQUIRE(c2.size() == 1);
  CHECK(c2[0].r2 == 1);
}

}
