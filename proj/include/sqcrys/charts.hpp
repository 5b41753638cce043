#pragma once

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sqcrys/graph.hpp"

namespace sqcrys {

struct DiscreteChart {
  std::vector<int> labels;       // Lambda, sorted
  std::map<int, IVec> phi;       // Phi
  std::map<IVec, int> site;      // Phi^-1
  bool flipped = false;          // Phi composed with (a,b) -> (-a,b)

  static DiscreteChart from_embedding(const std::map<int, IVec>& phi);
  DiscreteChart mirrored() const;
};

struct NotSimplyConnected : PreconditionError {
  NotSimplyConnected(const std::string& what, std::optional<IVec> w) : PreconditionError(what), hole(w) {}
  std::optional<IVec> hole;  // lower-left corner of an enclosed missing cell
};

struct Triangle {
  std::array<int, 3> labels;
  std::array<IVec, 3> corners;  // counterclockwise in chart space
};

struct Triangulation {
  std::vector<Triangle> triangles;
  std::map<IVec, std::array<int, 2>> by_cell;  // lower-left corner -> triangle indices
  int vertices = 0, edges = 0, cells = 0, components = 0;
  int euler() const { return vertices - edges + cells; }
};

Triangulation triangulate_chart(const DiscreteChart& chart);

struct AffineMap {
  DiscreteChart chart;
  Triangulation tri;
  std::vector<std::array<double, 4>> grad;  // Du per triangle, row-major 2x2
  std::vector<double> dist_so2;
  std::vector<Vec2> origin_image;           // X at corners[0] of each triangle
  double sup_distortion = 0.0;
  double edge_deformation = 0.0;            // max relative bond distortion over Lambda
  double L_empirical = 0.0;
  bool orientation_flipped = false;

  int locate(Vec2 a) const;                 // triangle index or -1
  std::optional<Vec2> operator()(Vec2 a) const;
};

// Frobenius distance of a 2x2 matrix to SO(2)
double dist_so2(const std::array<double, 4>& F);

AffineMap build_affine_map(const DiscreteChart& chart, const Configuration& X);

struct JohnVerdict {
  bool holds = false;
  bool hypothesis_holds = false;
  double delta = 0.0;
  double alpha = 0.0;
  double margin = 0.0;
  double sup_distortion = 0.0;
};

// Ell_a(a,b) = {x : |x-a| + |x-b| <= (1+a)/(1-a) |a-b|}
JohnVerdict john_check(const AffineMap& u, Vec2 a, Vec2 b, double alpha);

struct ScaleSquare {
  std::array<int, 4> labels;   // cyclic order
  long long r2 = 0;
  IVec origin, v;              // Phi(labels[0]) and the side vector
  std::array<std::pair<int, int>, 4> sides;
  std::array<std::pair<int, int>, 2> diagonals;
  double deformation = 0.0;    // realized beta against {0,r}^2
};

std::vector<ScaleSquare> enumerate_scale_squares(const BondGraph& G, const Configuration& X,
                                                 const DiscreteChart& chart, long long r2);

// convex hull (counterclockwise, no collinear points)
std::vector<Vec2> convex_hull(std::vector<Vec2> pts);
bool ellipse_in_convex(const std::vector<Vec2>& hull, Vec2 a, Vec2 b, double alpha);

struct InequalityReport {
  std::string inequality;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  double empirical_constant = 0.0;
  bool holds = false;
};

InequalityReport quadratic_distortion_check(const BondGraph& G, const Configuration& X, const DiscreteChart& chart,
                                            int a, int b, long long r2, double C6 = 64.0, double radius = 4.0);

struct CardinalityOptions {
  double C7 = 64.0;
  double length_radius = 0.0;   // Q_r segments meeting Conv(X(Q1)) within this distance
  double badsides_radius = -1;  // recorded only; < 0 means 4r
};

std::vector<InequalityReport> cardinality_bounds_report(const BondGraph& G, const Configuration& X,
                                                        const DiscreteChart& chart, long long r2,
                                                        const CardinalityOptions& opt = {});

// area of a quadrilateral in cyclic order as half the sum of the four Heron triangle areas
double heron_area(const std::array<Vec2, 4>& q);
double shoelace_area(const std::array<Vec2, 4>& q);

struct RadialFunction {
  std::function<double(double)> v, dv;
  std::function<double(double)> ddv_abs;  // max of the one-sided |v''|
  std::vector<double> knots;              // radii where v'' may jump
  static RadialFunction of(const Potential& pot);
};

enum class AreaCoefficient { Corrected, Literal };

InequalityReport taylor_area_check(const RadialFunction& v, const std::array<Vec2, 4>& Q, double r, double alpha,
                                   double C8 = 32.0, AreaCoefficient coeff = AreaCoefficient::Corrected);

enum class EdgeClass { Covered, NC1, NC2, Long, Outside, Overcovered };

struct ClassifiedPair {
  int p = 0, q = 0;
  double weight = 0.0;  // 1/2 per square with {p,q} as a side, 1 per square with it as a diagonal
  EdgeClass cls = EdgeClass::Outside;
};

struct EdgeClassification {
  std::vector<std::array<int, 4>> squares;
  std::vector<ClassifiedPair> pairs;  // every S_alpha and long edge, plus any other square pair
  int count(EdgeClass c) const;
};

EdgeClassification classify_edges(const BondGraph& G, const Configuration& X,
                                  const std::vector<std::array<int, 4>>& squares);
std::vector<std::array<int, 4>> unit_squares(const std::vector<ScaleSquare>& q1);

struct DecompositionIdentity {
  double total = 0.0;
  double squares = 0.0;
  double nc1 = 0.0;    // 1/2 sum over NC1
  double nc2 = 0.0;    // sum over NC2
  double rest = 0.0;   // long, outside and overcovered pairs with weight (1 - w)
  double residual = 0.0;
  bool feasible = true;
};

DecompositionIdentity decomposition_identity(const Potential& pot, const Configuration& X,
                                             const EdgeClassification& cls);

const char* to_string(EdgeClass c);

}  // namespace sqcrys
