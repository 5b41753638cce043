#pragma once

#include <cstdint>
#include <vector>

#include "sqcrys/charts.hpp"

namespace sqcrys {

struct RigidityFuzzResult {
  // sides >= 1, diagonals <= sqrt2 (alpha = 0)
  long long samples_a = 0;
  long long premise_a = 0;
  long long counterexamples_a = 0;
  double max_square_deviation_a = 0.0;
  // (1-alpha, sqrt2+alpha)-complete 4-point graphs
  long long samples_b = 0;
  long long complete_b = 0;
  long long violations_b = 0;
  double max_constant_b = 0.0;
};

RigidityFuzzResult rigidity_fuzz(long long samples_a, long long samples_b, double alpha, std::uint64_t seed,
                                 double tol = 1e-9, double max_constant = 8.0);

struct LatticeFixture {
  Configuration X;
  int n = 0;            // n x n patch, label = i * n + j
  double noise = 0.0;   // displacement radius
  double theta = 0.0;
  Vec2 shift;
};

LatticeFixture perturbed_lattice(int n, double noise, double theta, std::uint64_t seed, Vec2 shift = {});

// labels admitting a local chart (interior points with interior neighbours)
std::vector<int> chart_region(const BondGraph& G);

struct DistortionOptions {
  double john_alpha = 0.1;
  double C6 = 64.0;
  double C7 = 64.0;
  double C8 = 32.0;
  int taylor_samples = 10000;
  double taylor_alpha = 0.05;
  std::vector<long long> scales{1, 2, 4, 5};
  std::uint64_t seed = 1;
};

struct DistortionSuiteResult {
  long long john_pairs = 0;
  long long john_contained = 0;
  long long john_pass = 0;
  long long john_hypothesis = 0;
  double john_max_delta = 0.0;
  long long quadratic_checks = 0;
  long long quadratic_pass = 0;
  double quadratic_max_constant = 0.0;
  std::vector<InequalityReport> cardinality;  // per scale, all inequalities
  bool cardinality_pass = true;
  long long taylor_samples = 0;
  long long taylor_pass = 0;
  double taylor_max_constant = 0.0;
  long long taylor_literal_fail = 0;  // negative control
  double sup_distortion = 0.0;
  double L_empirical = 0.0;
};

DistortionSuiteResult distortion_suite(const Potential& pot, const LatticeFixture& F, double alpha,
                                       const DistortionOptions& opt = {});

}  // namespace sqcrys
