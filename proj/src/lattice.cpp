#include "sqcrys/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "sqcrys/common.hpp"

namespace sqcrys {

long long count_representations(long long n) {
  if (n <= 0) throw ParameterError("count_representations: n must be positive");
  long long prod = 1;
  long long m = n;
  while (m % 2 == 0) m /= 2;
  for (long long p = 3; p * p <= m; p += 2) {
    if (m % p) continue;
    int e = 0;
    while (m % p == 0) { m /= p; ++e; }
    if (p % 4 == 3) {
      if (e % 2) return 0;
    } else {
      prod *= e + 1;
    }
  }
  if (m > 1) {
    if (m % 4 == 3) return 0;
    prod *= 2;
  }
  return 4 * prod;
}

long long count_representations_brute(long long n) {
  if (n <= 0) throw ParameterError("count_representations: n must be positive");
  long long c = 0;
  long long r = static_cast<long long>(std::sqrt(static_cast<double>(n))) + 1;
  for (long long x = -r; x <= r; ++x)
    for (long long y = -r; y <= r; ++y)
      if (x * x + y * y == n) ++c;
  return c;
}

long long m_of_r(long long r2) { return count_representations(r2) / 4; }

IVec qpp_rep(IVec v) {
  if (v.a == 0 && v.b == 0) throw ParameterError("qpp_rep: zero vector");
  IVec w = v;
  for (int k = 0; k < 4; ++k) {
    if (in_qpp(w)) return w;
    w = iperp(w);
  }
  throw ParameterError("qpp_rep: unreachable");
}

bool in_lattice(IVec a, IVec v) {
  long long n = inorm2(v);
  IVec jv = iperp(v);
  long long c1 = a.a * v.a + a.b * v.b;
  long long c2 = a.a * jv.a + a.b * jv.b;
  return c1 % n == 0 && c2 % n == 0;
}

IVec f_map(IVec v) {
  IVec jv = iperp(v);
  std::optional<IVec> best;
  long long best_n = 0;
  for (long long i = -2; i <= 2; ++i) {
    for (long long j = -2; j <= 2; ++j) {
      IVec w{i * v.a + j * jv.a, i * v.b + j * jv.b};
      if (!in_qpp(w) || w == v) continue;
      long long n = inorm2(w);
      if (!best || n < best_n || (n == best_n && w < *best)) {
        best = w;
        best_n = n;
      }
    }
  }
  return *best;
}

std::optional<IVec> f_inverse(IVec v) {
  if (inorm2(v) % 2) return std::nullopt;
  IVec jv = iperp(v);
  for (int sa : {1, -1}) {
    for (int sb : {1, -1}) {
      long long x = sa * v.a + sb * jv.a;
      long long y = sa * v.b + sb * jv.b;
      if (x % 2 || y % 2) continue;
      IVec w{x / 2, y / 2};
      if (in_qpp(w) && f_map(w) == v) return w;
    }
  }
  return std::nullopt;
}

std::vector<long long> SublatticeDecomposition::scales() const {
  std::vector<long long> out;
  out.reserve(by_r2.size());
  for (const auto& [r2, g] : by_r2) out.push_back(r2);
  return out;
}

long long SublatticeDecomposition::m(long long r2) const {
  auto it = by_r2.find(r2);
  return it == by_r2.end() ? 0 : static_cast<long long>(it->second.size());
}

SublatticeDecomposition build_decomposition(double R) {
  if (R < std::sqrt(2.0) - 1e-12) throw ParameterError("build_decomposition: R must be >= sqrt2");
  SublatticeDecomposition dec;
  dec.radius2 = static_cast<long long>(std::floor(R * R + 1e-9));
  const long long R2 = dec.radius2;
  const long long rr = static_cast<long long>(std::sqrt(static_cast<double>(R2))) + 1;

  std::vector<IVec> roots;
  for (long long a = 1; a <= rr; ++a)
    for (long long b = 0; b <= rr; ++b) {
      IVec v{a, b};
      if (inorm2(v) > R2) continue;
      if (!f_inverse(v)) roots.push_back(v);
    }
  std::sort(roots.begin(), roots.end(), [](IVec x, IVec y) {
    return std::pair(inorm2(x), x) < std::pair(inorm2(y), y);
  });

  for (IVec root : roots) {
    std::vector<IVec> orbit;
    for (IVec v = root; inorm2(v) <= R2; v = f_map(v)) orbit.push_back(v);
    for (size_t k = 0; k < orbit.size(); k += 2) {
      IVec g = orbit[k];
      dec.entries.push_back({inorm2(g), g, f_map(g)});
    }
    dec.orbits.push_back(std::move(orbit));
  }
  std::sort(dec.entries.begin(), dec.entries.end(), [](const DecompEntry& x, const DecompEntry& y) {
    return std::pair(x.r2, x.gen) < std::pair(y.r2, y.gen);
  });
  for (const auto& e : dec.entries) dec.by_r2[e.r2].push_back(e.gen);
  return dec;
}

std::vector<DecompEntry> covering_entries(const SublatticeDecomposition& dec, IVec a) {
  std::vector<DecompEntry> out;
  long long n = inorm2(a);
  for (long long r2 : {n, n % 2 == 0 ? n / 2 : -1}) {
    if (r2 <= 0) continue;
    auto it = dec.by_r2.find(r2);
    if (it == dec.by_r2.end()) continue;
    for (IVec g : it->second)
      if (in_lattice(a, g)) out.push_back({r2, g, f_map(g)});
  }
  return out;
}

namespace {

// squares with side vector d drawn from the decomposition: d generates one of
// its lattices at scale r (as v) or at scale sqrt2 r (as F(v))
int square_count(const SublatticeDecomposition& dec, IVec d) {
  long long n = inorm2(d);
  int c = 0;
  if (auto it = dec.by_r2.find(n); it != dec.by_r2.end())
    for (IVec g : it->second)
      if (in_lattice(d, g)) ++c;
  if (n % 2 == 0)
    if (auto it = dec.by_r2.find(n / 2); it != dec.by_r2.end())
      for (IVec g : it->second) {
        IVec f = f_map(g);
        if (in_lattice(d, f)) ++c;
      }
  return c;
}

}  // namespace

CoverVerdict verify_cover(const SublatticeDecomposition& dec, double R, int box) {
  CoverVerdict out;
  const long long R2 = static_cast<long long>(std::floor(R * R + 1e-9));
  const long long rr = static_cast<long long>(std::sqrt(static_cast<double>(R2))) + 1;
  for (long long x = -rr; x <= rr; ++x)
    for (long long y = -rr; y <= rr; ++y) {
      IVec a{x, y};
      long long n = inorm2(a);
      if (n == 0 || n > R2) continue;
      ++out.points_checked;
      int c = static_cast<int>(covering_entries(dec, a).size());
      if (c != 1 && out.exact) {
        out.exact = false;
        out.first_failure = a;
        out.failure_count = c;
      }
    }
  if (box >= 0) {
    // both squares on either side of {a, b} have side vectors d and Jd
    std::vector<IVec> pts;
    for (long long x = 0; x <= box; ++x)
      for (long long y = 0; y <= box; ++y) pts.push_back({x, y});
    for (size_t i = 0; i < pts.size(); ++i)
      for (size_t j = i + 1; j < pts.size(); ++j) {
        IVec d{pts[j].a - pts[i].a, pts[j].b - pts[i].b};
        ++out.edges_checked;
        int c = 2 * square_count(dec, d);
        if (c != 2) {
          ++out.bad_edge_count;
          if (out.squares_ok) {
            out.squares_ok = false;
            out.first_bad_edge = std::pair(pts[i], pts[j]);
          }
        }
      }
  }
  return out;
}

}  // namespace sqcrys
