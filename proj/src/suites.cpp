#include "sqcrys/suites.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace sqcrys {

RigidityFuzzResult rigidity_fuzz(long long samples_a, long long samples_b, double alpha, std::uint64_t seed,
                                 double tol, double max_constant) {
  RigidityFuzzResult r;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const auto sq = reference_square();

  auto placed = [&](double scale, double amp) {
    std::array<Vec2, 4> q;
    const double th = 2 * M_PI * U(rng);
    const Vec2 sh{10 * U(rng) - 5, 10 * U(rng) - 5};
    for (int i = 0; i < 4; ++i) {
      Vec2 p = sq[i] * scale;
      Vec2 rp{std::cos(th) * p.x - std::sin(th) * p.y, std::sin(th) * p.x + std::cos(th) * p.y};
      const double rad = amp * std::sqrt(U(rng)), ang = 2 * M_PI * U(rng);
      q[i] = rp + sh + Vec2{rad * std::cos(ang), rad * std::sin(ang)};
    }
    // random labelling
    std::shuffle(q.begin(), q.end(), rng);
    return q;
  };

  for (long long k = 0; k < samples_a; ++k) {
    // noise amplitude log-uniform around the tolerance, scale slightly off 1
    const double amp = std::pow(10.0, -13.0 + 7.0 * U(rng));
    const double scale = 1.0 + (U(rng) - 0.5) * std::pow(10.0, -12.0 + 8.0 * U(rng));
    auto q = placed(scale, amp);
    ++r.samples_a;
    RigidityVerdict v = quadrilateral_rigidity_check(q, 0.0, tol);
    if (v.kind == RigidityVerdict::Kind::NotConstrained) continue;
    ++r.premise_a;
    r.max_square_deviation_a = std::max(r.max_square_deviation_a, v.deformation);
    if (v.kind == RigidityVerdict::Kind::Violation) ++r.counterexamples_a;
  }

  for (long long k = 0; k < samples_b; ++k) {
    const double scale = 1.0 + (2 * U(rng) - 1) * alpha;
    const double amp = 0.2 * U(rng);
    auto q = placed(scale, amp);
    ++r.samples_b;
    bool complete = true;
    for (int i = 0; i < 4 && complete; ++i)
      for (int j = i + 1; j < 4 && complete; ++j) {
        const double d = norm(q[i] - q[j]);
        complete = d > 1.0 - alpha && d < kSqrt2 + alpha;
      }
    if (!complete) continue;
    ++r.complete_b;
    RigidityVerdict v = quadrilateral_rigidity_check(q, alpha, tol, max_constant);
    r.max_constant_b = std::max(r.max_constant_b, v.constant);
    if (v.kind != RigidityVerdict::Kind::Square) ++r.violations_b;
  }
  return r;
}

LatticeFixture perturbed_lattice(int n, double noise, double theta, std::uint64_t seed, Vec2 shift) {
  if (n < 1) throw ParameterError("fixture size must be positive");
  LatticeFixture F;
  F.n = n;
  F.noise = noise;
  F.theta = theta;
  F.shift = shift;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const double c = std::cos(theta), s = std::sin(theta);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double rad = noise * std::sqrt(U(rng)), ang = 2 * M_PI * U(rng);
      Vec2 p{static_cast<double>(i), static_cast<double>(j)};
      F.X.points.push_back(Vec2{c * p.x - s * p.y, s * p.x + c * p.y} + shift +
                           Vec2{rad * std::cos(ang), rad * std::sin(ang)});
    }
  return F;
}

std::vector<int> chart_region(const BondGraph& G) {
  std::vector<int> out;
  for (int p = 0; p < G.n; ++p) {
    if (G.boundary[p] || G.neighborhood_size(p) != 9) continue;
    bool ok = true;
    for (int q : G.neighbors[p]) ok = ok && !G.boundary[q];
    if (ok) out.push_back(p);
  }
  return out;
}

DistortionSuiteResult distortion_suite(const Potential& pot, const LatticeFixture& F, double alpha,
                                       const DistortionOptions& opt) {
  DistortionSuiteResult res;
  const BondGraph G = build_bond_graph(F.X, alpha, pot.params().alpha_pp > alpha ? pot.params().alpha_pp : alpha + 0.01);
  const auto region = chart_region(G);
  const auto chart = DiscreteChart::from_embedding(embed_region(G, F.X, region));
  const AffineMap u = build_affine_map(chart, F.X);
  res.sup_distortion = u.sup_distortion;
  res.L_empirical = u.L_empirical;

  // John: every pair of chart sites
  std::vector<Vec2> sites;
  for (const auto& [v, l] : u.chart.site) sites.push_back({static_cast<double>(v.a), static_cast<double>(v.b)});
  for (size_t i = 0; i < sites.size(); ++i)
    for (size_t j = i + 1; j < sites.size(); ++j) {
      ++res.john_pairs;
      JohnVerdict jv;
      try {
        jv = john_check(u, sites[i], sites[j], opt.john_alpha);
      } catch (const PreconditionError&) {
        continue;
      }
      ++res.john_contained;
      res.john_pass += jv.holds;
      res.john_hypothesis += jv.hypothesis_holds;
      res.john_max_delta = std::max(res.john_max_delta, jv.delta);
    }

  // quadratic distortion on every side and diagonal of Q_r
  for (long long r2 : opt.scales) {
    const auto Q = enumerate_scale_squares(G, F.X, chart, r2);
    for (const auto& s : Q) {
      std::vector<std::pair<int, int>> pairs(s.sides.begin(), s.sides.end());
      pairs.insert(pairs.end(), s.diagonals.begin(), s.diagonals.end());
      for (const auto& [a, b] : pairs) {
        auto rep = quadratic_distortion_check(G, F.X, chart, a, b, r2, opt.C6);
        ++res.quadratic_checks;
        res.quadratic_pass += rep.holds;
        res.quadratic_max_constant = std::max(res.quadratic_max_constant, rep.empirical_constant);
      }
    }
    CardinalityOptions co;
    co.C7 = opt.C7;
    for (auto rep : cardinality_bounds_report(G, F.X, chart, r2, co)) {
      rep.inequality += "@r2=" + std::to_string(r2);
      res.cardinality_pass = res.cardinality_pass && rep.holds;
      res.cardinality.push_back(rep);
    }
  }

  // Taylor-area on sampled deformations of {0,r}^2
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const RadialFunction v = RadialFunction::of(pot);
  const double lo = std::max(pot.hard_core_radius(), 1.0 - pot.params().alpha_pp) + 0.05;
  const double hi = kSqrt2 + 0.05;
  const auto sq = reference_square();
  for (int k = 0; k < opt.taylor_samples; ++k) {
    const double r = lo + (hi - lo) * U(rng);
    const double amp = opt.taylor_alpha * r / 3.0 * U(rng);
    std::array<Vec2, 4> Q;
    for (int i = 0; i < 4; ++i) {
      const double rad = amp * std::sqrt(U(rng)), ang = 2 * M_PI * U(rng);
      Q[i] = sq[i] * r + Vec2{rad * std::cos(ang), rad * std::sin(ang)};
    }
    auto rep = taylor_area_check(v, Q, r, opt.taylor_alpha, opt.C8);
    ++res.taylor_samples;
    res.taylor_pass += rep.holds;
    res.taylor_max_constant = std::max(res.taylor_max_constant, rep.empirical_constant);
    auto lit = taylor_area_check(v, Q, r, opt.taylor_alpha, opt.C8, AreaCoefficient::Literal);
    res.taylor_literal_fail += !lit.holds;
  }
  return res;
}

}  // namespace sqcrys
