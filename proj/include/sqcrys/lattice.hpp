#pragma once

#include <map>
#include <optional>
#include <vector>

namespace sqcrys {

struct IVec {
  long long a = 0;
  long long b = 0;
  constexpr bool operator==(const IVec&) const = default;
  constexpr auto operator<=>(const IVec&) const = default;
};

constexpr long long inorm2(IVec v) { return v.a * v.a + v.b * v.b; }
constexpr IVec iperp(IVec v) { return {-v.b, v.a}; }
constexpr bool in_qpp(IVec v) { return v.a > 0 && v.b >= 0; }

// #{x in Z^2 : |x|^2 = n} by factorization
long long count_representations(long long n);
// same by direct enumeration
long long count_representations_brute(long long n);
// m(r) = count_representations(r^2)/4
long long m_of_r(long long r2);

// unique representative of {v, Jv, -v, -Jv} in Q++ = {a > 0, b >= 0}
IVec qpp_rep(IVec v);
// a in Zv + ZJv
bool in_lattice(IVec a, IVec v);
// shortest vector of Lambda[v] in Q++ other than v
IVec f_map(IVec v);
// preimage under f_map, if any
std::optional<IVec> f_inverse(IVec v);

struct DecompEntry {
  long long r2 = 0;
  IVec gen;
  IVec partner;  // f_map(gen), |partner|^2 = 2 r2
};

struct SublatticeDecomposition {
  long long radius2 = 0;
  std::vector<DecompEntry> entries;           // sorted by (r2, gen)
  std::vector<std::vector<IVec>> orbits;      // maximal F-orbits truncated at radius2, by root
  std::map<long long, std::vector<IVec>> by_r2;

  std::vector<long long> scales() const;      // distinct r2 in D-tilde
  long long m(long long r2) const;
  bool contains_scale(long long r2) const { return by_r2.count(r2) > 0; }
};

SublatticeDecomposition build_decomposition(double R);

struct CoverVerdict {
  bool exact = true;
  long long points_checked = 0;
  std::optional<IVec> first_failure;
  int failure_count = 0;  // multiplicity at first failure
  bool squares_ok = true;
  long long edges_checked = 0;
  std::optional<std::pair<IVec, IVec>> first_bad_edge;
  int bad_edge_count = 0;
};

// covers (0,R] exactly once; square-side multiplicity 2 on {0..box}^2 (box < 0 skips)
CoverVerdict verify_cover(const SublatticeDecomposition& dec, double R, int box = -1);

// lattices of L_r containing a with |a| in {r, sqrt2 r}
std::vector<DecompEntry> covering_entries(const SublatticeDecomposition& dec, IVec a);

}  // namespace sqcrys
