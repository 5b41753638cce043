#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sqcrys/energy.hpp"
#include "sqcrys/lattice.hpp"

namespace sqcrys {

struct Edge {
  int p = 0, q = 0;  // p < q
  double distance = 0.0;
  constexpr auto operator<=>(const Edge& o) const { return std::pair(p, q) <=> std::pair(o.p, o.q); }
  constexpr bool operator==(const Edge& o) const { return p == o.p && q == o.q; }
};

struct BondGraph {
  double alpha = 0.0;
  double alpha_pp = 0.0;
  int n = 0;
  std::vector<Edge> edges;                  // S_alpha, sorted
  std::vector<Edge> long_edges;             // S_{alpha'', alpha}
  std::vector<std::vector<int>> neighbors;  // N_alpha(p) without p, sorted
  std::vector<bool> boundary;               // #N_alpha(p) != 9 (N counts p itself)
  double min_distance = 0.0;
  bool min_distance_ok = true;              // min distance > 1 - alpha
  int max_neighborhood = 0;                 // max #N_alpha(p) including p
  bool degree_bound_ok = true;              // #N_alpha <= 9 everywhere

  bool adjacent(int p, int q) const;
  int neighborhood_size(int p) const { return static_cast<int>(neighbors[p].size()) + 1; }
  std::vector<int> boundary_labels() const;
};

BondGraph build_bond_graph(const Configuration& X, double alpha, double alpha_pp);

struct MinDistanceVerdict {
  bool holds = true;
  double min_distance = 0.0;
  int p = -1, q = -1;
  double r_min = 0.0;
};

MinDistanceVerdict min_distance_check(const Configuration& X, double r_min);

struct ChartUnavailable : Error { using Error::Error; };

struct RigidityFailure : Error {
  RigidityFailure(const std::string& what, int p_, int q_, double d) : Error(what), p(p_), q(q_), distance(d) {}
  int p, q;
  double distance;
};

struct EmbeddingConflict : Error {
  EmbeddingConflict(const std::string& what, int p_, int q_, int r_) : Error(what), p(p_), q(q_), r(r_) {}
  int p, q, r;
};

struct ChartOptions {
  bool require_interior = true;
  double max_constant = 8.0;
};

struct LocalChart {
  int center = 0;
  std::array<int, 8> ring{};                // p_1..p_8 counterclockwise, p_1 nearest
  std::map<int, IVec> phi;                  // label -> {-1,0,1}^2
  double max_delta = 0.0;                   // max over pairs of ||X(a)-X(b)| - |phi(a)-phi(b)||
  double deformation = 0.0;                 // max relative distortion beta
  std::array<double, 4> family_constants{};  // realized O(alpha) constants of the four bound families
  int eps_squares = 0;
};

LocalChart local_chart(const BondGraph& G, const Configuration& X, int p, const ChartOptions& opt = {});

// Phi: Lambda -> Z^2, seed at the origin
std::map<int, IVec> embed_region(const BondGraph& G, const Configuration& X, const std::vector<int>& region);

struct RigidityVerdict {
  enum class Kind { Square, NotConstrained, Violation };
  Kind kind = Kind::NotConstrained;
  double side = 0.0;
  double deformation = 0.0;  // best-fit beta
  double constant = 0.0;     // beta / alpha (C3')
  int p = -1, q = -1;        // witness pair for violations
};

RigidityVerdict quadrilateral_rigidity_check(const std::array<Vec2, 4>& raw, double alpha, double tol = 1e-9,
                                             double max_constant = 8.0);

enum class AngleCase { i, ii, iii, iv };

struct AngleBounds {
  double analytic_min = std::numeric_limits<double>::quiet_NaN();  // degrees
  double analytic_max = std::numeric_limits<double>::quiet_NaN();
  double numeric_min = std::numeric_limits<double>::quiet_NaN();
  double numeric_max = std::numeric_limits<double>::quiet_NaN();
};

AngleBounds triangle_angle_bounds(AngleCase c, double alpha);

}  // namespace sqcrys
