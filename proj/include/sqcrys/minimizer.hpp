#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sqcrys/energy.hpp"
#include "sqcrys/graph.hpp"

namespace sqcrys {

struct GraphSummary {
  int boundary_count = 0;
  std::vector<int> degree_histogram;  // index = #N_alpha(p) without p
  double min_distance = 0.0;
  bool min_distance_ok = true;        // min distance > 1 - alpha
};

struct RunResult {
  Configuration best;
  Energy energy;
  std::vector<Energy> point_energies;
  GraphSummary graph;
  int restarts = 0;
  int iterations = 0;
  int converged_runs = 0;
  bool converged = false;
  double grad_norm = 0.0;  // sup norm
  std::uint64_t seed = 0;
  int best_restart = -1;
  // hard potentials
  long long bonds = 0;
  int max_degree = 0;
  bool degree_certificate = false;  // max degree <= 8 and min distance >= hard core
};

struct MinimizeOptions {
  double tol = 1e-8;
  int max_iter = 20000;
  PairWeights weights;     // empty: all pairs weight one
  double alpha = -1.0;     // bond graph summary; < 0 uses the potential's alpha
};

RunResult local_minimize(const Potential& pot, const Configuration& X0, const MinimizeOptions& opt = {});

struct MultiStartOptions {
  int restarts = 20;
  std::uint64_t seed = 1;
  double perturbation = 0.05;  // relative to the lattice scale
  MinimizeOptions local;
  std::optional<double> scale;  // lattice scale; computed by optimal_scale if absent
};

RunResult multi_start(const Potential& pot, int N, const MultiStartOptions& opt = {});

// first N points of tZ^2 ordered by (|x - c|^2, x, y)
Configuration lattice_candidate(int N, double t, Vec2 c = {0.0, 0.0});
Configuration lattice_candidate(const Potential& pot, int N);

struct HardOptions {
  int max_sweeps = 200;
  int exhaustive_max = 8;
};

RunResult hard_minimize(const Potential& pot, int N, const HardOptions& opt = {});

// pairs at distance in [hard core, r_max]
long long count_bonds(const Potential& pot, const Configuration& X, int* max_degree = nullptr);

struct BoundsRow {
  int N = 0;
  double E_best = 0.0;
  double E_lat = 0.0;
  double bulk = 0.0;          // per-point energy E-bar
  double excess_best = 0.0;   // (E_best - N E-bar)/sqrt N
  double excess_lat = 0.0;
  int boundary_count = 0;     // of the lattice candidate
  bool certified = false;     // lower bound N E-bar proven for this potential
  std::string certificate;    // "degree", "lb3" or "none"
  bool lower_bound_holds = true;
  int interior_points = 0;    // points whose neighbourhood avoids the boundary and long edges
};

struct BoundsOptions {
  MultiStartOptions search;
  HardOptions hard;
  double solver_tol = 1e-7;
};

std::vector<BoundsRow> crystal_bounds_report(const Potential& pot, const std::vector<int>& Ns,
                                             const BoundsOptions& opt = {});

GraphSummary summarize_graph(const BondGraph& G);

}  // namespace sqcrys
