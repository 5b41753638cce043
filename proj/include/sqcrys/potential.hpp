#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sqcrys/common.hpp"

namespace sqcrys {

enum class PotentialKind { HardWell, PiecewiseSmooth, Resummed };
enum class ResumMode { Vtilde, Vstar, VstarStar, DeltaBarSq };

// One closed-form piece of W in the squared-distance variable s.
//   Poly:  sum_k coeffs[k] * (s - shift)^k
//   Power: coef * (s - shift)^expo      (requires s > shift)
struct Segment {
  enum class Type { Poly, Power };
  Type type = Type::Poly;
  double shift = 0.0;
  std::vector<double> coeffs;
  double coef = 0.0;
  double expo = 0.0;

  static Segment constant(double c) { return poly(0.0, {c}); }
  static Segment poly(double shift, std::vector<double> c) {
    Segment s; s.type = Type::Poly; s.shift = shift; s.coeffs = std::move(c); return s;
  }
  static Segment power(double coef, double shift, double expo) {
    Segment s; s.type = Type::Power; s.coef = coef; s.shift = shift; s.expo = expo; return s;
  }

  double value(double s) const;
  double d1(double s) const;
  double d2(double s) const;
  Segment scaled(double f) const;
};

struct Range {
  enum class Type { Finite, Decaying };
  Type type = Type::Finite;
  double cutoff = 0.0;  // Finite: V = 0 for r > cutoff
  double eps = 0.0;     // Decaying: |V|, r|V'|, r^2|V''| < eps r^-p beyond the well
  double p = 0.0;

  static Range finite(double c) { Range r; r.type = Type::Finite; r.cutoff = c; return r; }
  static Range decaying(double e, double p) { Range r; r.type = Type::Decaying; r.eps = e; r.p = p; return r; }
};

struct DeformationParams {
  double alpha_prime = 0.02;
  double alpha = 0.05;
  double alpha_pp = 0.09;
};

// W and its one-sided derivatives at s.
struct WValue {
  bool feasible = true;
  double w = 0.0;
  double d1_left = 0.0, d1_right = 0.0;
  double d2_left = 0.0, d2_right = 0.0;
};

// V and its derivatives at r; at a knot d1/d1_right and d2_left/d2_right are the one-sided limits.
struct Evaluation {
  bool feasible = true;
  double value = 0.0;
  double d1 = 0.0;
  double d1_right = 0.0;
  double d2_left = 0.0;
  double d2_right = 0.0;
};

struct ResumData;

class Potential {
 public:
  PotentialKind kind() const { return kind_; }
  double hard_core_radius() const { return hard_core_; }
  const Range& range() const { return range_; }
  const DeformationParams& params() const { return params_; }
  void set_params(const DeformationParams& p);
  double normalization() const { return normalization_; }

  const std::vector<double>& knots() const { return knots_; }
  const std::vector<Segment>& segments() const { return segments_; }
  double r_max() const { return r_max_; }
  const ResumData* resum_data() const { return resum_.get(); }

  // W(s) = V(sqrt s)
  WValue w(double s) const;
  Evaluation evaluate(double r) const;
  // V(r) as an Energy (infeasible inside the hard core)
  Energy value(double r) const;
  // supremum of the support; +inf for decaying tails
  double support_radius() const;
  // knots mapped to r
  std::vector<double> knot_radii() const;

  static Potential hard_well(double r_max);
  static Potential piecewise(std::vector<double> knots, std::vector<Segment> segments, Range range,
                             double hard_core = 0.0, double normalization = 1.0);
  static Potential resummed(std::shared_ptr<const ResumData> data, DeformationParams params);

 private:
  PotentialKind kind_ = PotentialKind::PiecewiseSmooth;
  double hard_core_ = 0.0;
  Range range_;
  DeformationParams params_;
  double normalization_ = 1.0;
  std::vector<double> knots_;
  std::vector<Segment> segments_;
  double r_max_ = 0.0;
  std::shared_ptr<const ResumData> resum_;
};

// Series data behind a Resummed potential.
struct ResumData {
  ResumMode mode = ResumMode::Vstar;
  std::shared_ptr<const Potential> base;
  double tail_tol = 1e-9;
  double c_pot_eps = 0.0;
  // (|v|^2, m) for the scales of D-tilde beyond 1, increasing
  std::vector<std::pair<long long, int>> scales;
  double t_min = 0.5;
};

Potential build_hard_square(double r_max);

struct ExV3Params {
  enum class Tail { Decaying, Truncated };
  double q = 30.0;
  double p = 6.0;
  double r1 = 1.0;
  double r2 = 1.2;
  double r3 = kSqrt2;
  double alpha_pp = 0.09;
  double C = 1.0;
  Tail tail = Tail::Decaying;
};

struct ExV3Coefficients {
  double a1 = 0, a2 = 0, a3 = 0, a4 = 0;
  double s0 = 0, s3 = 0;
};

Potential build_exv3(const ExV3Params& prm, ExV3Coefficients* coeffs = nullptr);

// Single quintic in s through prescribed W, W', W'' at s = 1 and s = 2; zero beyond r = cutoff.
Potential build_hermite_well(double w1, double dw1, double ddw1, double w2, double dw2, double ddw2,
                             double cutoff = 2.0);

struct ConditionConstants {
  double c = 0.1;
  double c_prime = 0.05;
  double c_pp = 0.01;
  double K = 0.5;
  double eps = std::numeric_limits<double>::quiet_NaN();  // NaN: use the potential's range
  double p = std::numeric_limits<double>::quiet_NaN();
  double C4 = 1.0;
  double r_check = 10.0;
  int grid = 10000;
};

struct ConditionVerdict {
  enum class Status { Holds, Fails, NotApplicable };
  std::string id;
  Status status = Status::NotApplicable;
  double margin = 0.0;
  double witness = std::numeric_limits<double>::quiet_NaN();
  double residual = 0.0;
  std::string method;
};

struct ConditionReport {
  std::vector<ConditionVerdict> verdicts;
  const ConditionVerdict& at(const std::string& id) const;
  bool holds(const std::string& id) const;
};

ConditionReport check_conditions(const Potential& pot, const ConditionConstants& k);

Potential resum(const Potential& pot, ResumMode mode, double tail_tol, double c_pot_eps = 1.0,
                double t_min = -1.0);

// certified bound on sum_{z in Z^2, |z| > R} |z|^-p, p > 2
double lattice_tail_bound(double R, double p);

const char* to_string(ConditionVerdict::Status s);
const char* to_string(PotentialKind k);
const char* to_string(ResumMode m);

}  // namespace sqcrys
