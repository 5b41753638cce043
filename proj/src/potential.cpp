#include "sqcrys/potential.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "sqcrys/lattice.hpp"

namespace sqcrys {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double Segment::value(double s) const {
  const double x = s - shift;
  if (type == Type::Power) return coef * std::pow(x, expo);
  double v = 0.0;
  for (size_t k = coeffs.size(); k-- > 0;) v = v * x + coeffs[k];
  return v;
}

double Segment::d1(double s) const {
  const double x = s - shift;
  if (type == Type::Power) return coef * expo * std::pow(x, expo - 1.0);
  double v = 0.0;
  for (size_t k = coeffs.size(); k-- > 1;) v = v * x + static_cast<double>(k) * coeffs[k];
  return v;
}

double Segment::d2(double s) const {
  const double x = s - shift;
  if (type == Type::Power) return coef * expo * (expo - 1.0) * std::pow(x, expo - 2.0);
  double v = 0.0;
  for (size_t k = coeffs.size(); k-- > 2;) v = v * x + static_cast<double>(k * (k - 1)) * coeffs[k];
  return v;
}

Segment Segment::scaled(double f) const {
  Segment s = *this;
  s.coef *= f;
  for (double& c : s.coeffs) c *= f;
  return s;
}

void Potential::set_params(const DeformationParams& p) {
  if (!(0.0 < p.alpha_prime && p.alpha_prime < p.alpha && p.alpha < p.alpha_pp &&
        p.alpha_pp < (2.0 - kSqrt2) / 4.0))
    throw ParameterError("deformation parameters must satisfy 0 < a' < a < a'' < (2-sqrt2)/4");
  params_ = p;
}

Potential Potential::hard_well(double r_max) {
  if (!(r_max >= 1.0)) throw ParameterError("hard well: r_max must be >= 1");
  Potential v;
  v.kind_ = PotentialKind::HardWell;
  v.hard_core_ = 1.0;
  v.r_max_ = r_max;
  v.range_ = Range::finite(r_max);
  v.knots_ = {1.0, r_max * r_max};
  v.segments_ = {Segment::constant(0.0), Segment::constant(-1.0), Segment::constant(0.0)};
  return v;
}

Potential Potential::piecewise(std::vector<double> knots, std::vector<Segment> segments, Range range,
                               double hard_core, double normalization) {
  if (segments.size() != knots.size() + 1)
    throw ParameterError("piecewise potential: need one more segment than knots");
  for (size_t i = 0; i < knots.size(); ++i) {
    if (!(knots[i] > 0.0)) throw ParameterError("piecewise potential: knots must be positive");
    if (i && !(knots[i] > knots[i - 1])) throw ParameterError("piecewise potential: knots must increase");
  }
  Potential v;
  v.kind_ = PotentialKind::PiecewiseSmooth;
  v.hard_core_ = hard_core;
  v.range_ = range;
  v.knots_ = std::move(knots);
  v.segments_ = std::move(segments);
  v.normalization_ = normalization;
  return v;
}

Potential Potential::resummed(std::shared_ptr<const ResumData> data, DeformationParams params) {
  Potential v;
  v.kind_ = PotentialKind::Resummed;
  v.params_ = params;
  v.hard_core_ = data->base->hard_core_radius();
  v.range_ = data->base->range();
  if (data->mode == ResumMode::VstarStar || data->mode == ResumMode::DeltaBarSq)
    v.range_ = Range::finite(kSqrt2 + params.alpha_pp);
  v.resum_ = std::move(data);
  return v;
}

namespace {

WValue piecewise_w(const std::vector<double>& knots, const std::vector<Segment>& segs, double s) {
  size_t i = std::lower_bound(knots.begin(), knots.end(), s) - knots.begin();
  WValue out;
  const Segment& L = segs[i];
  out.w = L.value(s);
  out.d1_left = out.d1_right = L.d1(s);
  out.d2_left = out.d2_right = L.d2(s);
  if (i < knots.size() && s == knots[i]) {
    const Segment& R = segs[i + 1];
    out.d1_right = R.d1(s);
    out.d2_right = R.d2(s);
  }
  return out;
}

double delta_bar_sq(double r, double alpha, double* d1 = nullptr, double* d2 = nullptr) {
  double c = 0.0;
  if (std::abs(r - 1.0) < alpha) c = 1.0;
  else if (std::abs(r - kSqrt2) < alpha) c = kSqrt2;
  if (c == 0.0) {
    if (d1) *d1 = 0.0;
    if (d2) *d2 = 0.0;
    return 0.0;
  }
  if (d1) *d1 = -2.0 * (c - r);
  if (d2) *d2 = 2.0;
  return (c - r) * (c - r);
}

// number of D-tilde terms needed at scale t, returned as a bound on |v|^2
double resum_norm_cap(const Potential& base, double t, double tail_tol) {
  const Range& rg = base.range();
  if (rg.type == Range::Type::Finite) return (rg.cutoff / t) * (rg.cutoff / t);
  const double r0 = kSqrt2 + base.params().alpha_pp;
  double R = std::max(r0 / t, 2.0);
  // quarter of the full-lattice tail covers the Q++ generators
  while (0.25 * rg.eps * std::pow(t, -rg.p) * lattice_tail_bound(R, rg.p) > tail_tol / 8.0) R *= 1.05;
  return R * R;
}

}  // namespace

WValue Potential::w(double s) const {
  if (!(s > 0.0)) throw DomainError("W: s must be positive");
  if (s < hard_core_ * hard_core_) {
    WValue out;
    out.feasible = false;
    return out;
  }
  if (kind_ == PotentialKind::HardWell) {
    WValue out;
    out.w = s <= r_max_ * r_max_ ? -1.0 : 0.0;
    return out;
  }
  if (kind_ != PotentialKind::Resummed) return piecewise_w(knots_, segments_, s);

  const ResumData& rd = *resum_;
  const double t = std::sqrt(s);
  WValue out;
  if (rd.mode == ResumMode::DeltaBarSq) {
    double d1 = 0, d2 = 0;
    out.w = delta_bar_sq(t, params_.alpha, &d1, &d2);
    // chain rule from r to s
    out.d1_left = out.d1_right = d1 / (2.0 * t);
    out.d2_left = out.d2_right = (d2 - d1 / t) / (4.0 * s);
    return out;
  }
  if (rd.mode == ResumMode::VstarStar && t >= kSqrt2 + params_.alpha_pp) return out;
  if (t < rd.t_min) throw DomainError("resummed potential evaluated below its domain t_min");

  if (rd.mode != ResumMode::Vtilde) out = rd.base->w(s);
  if (!out.feasible) return out;
  const double cap = resum_norm_cap(*rd.base, t, rd.tail_tol);
  for (const auto& [n, m] : rd.scales) {
    if (static_cast<double>(n) > cap) break;
    const double dn = static_cast<double>(n);
    WValue b = rd.base->w(s * dn);
    if (!b.feasible) return b;
    out.w += m * b.w;
    out.d1_left += m * dn * b.d1_left;
    out.d1_right += m * dn * b.d1_right;
    out.d2_left += m * dn * dn * b.d2_left;
    out.d2_right += m * dn * dn * b.d2_right;
  }
  if (rd.mode == ResumMode::VstarStar) {
    double d1 = 0, d2 = 0;
    const double db = delta_bar_sq(t, params_.alpha, &d1, &d2);
    const double g1 = d1 / (2.0 * t), g2 = (d2 - d1 / t) / (4.0 * s);
    out.w -= rd.c_pot_eps * db;
    out.d1_left -= rd.c_pot_eps * g1;
    out.d1_right -= rd.c_pot_eps * g1;
    out.d2_left -= rd.c_pot_eps * g2;
    out.d2_right -= rd.c_pot_eps * g2;
  }
  return out;
}

Evaluation Potential::evaluate(double r) const {
  if (!(r > 0.0)) throw DomainError("evaluate: r must be positive");
  const double s = r * r;
  WValue wv = w(s);
  Evaluation e;
  if (!wv.feasible) {
    e.feasible = false;
    return e;
  }
  e.value = wv.w;
  e.d1 = 2.0 * r * wv.d1_left;
  e.d1_right = 2.0 * r * wv.d1_right;
  e.d2_left = 2.0 * wv.d1_left + 4.0 * s * wv.d2_left;
  e.d2_right = 2.0 * wv.d1_right + 4.0 * s * wv.d2_right;
  return e;
}

Energy Potential::value(double r) const {
  if (r < hard_core_) return Energy::infeasible();
  if (!(r > 0.0)) return Energy::infeasible();
  if (kind_ == PotentialKind::HardWell) return Energy(r <= r_max_ ? -1.0 : 0.0);
  WValue wv = w(r * r);
  if (!wv.feasible) return Energy::infeasible();
  return Energy(wv.w);
}

double Potential::support_radius() const {
  if (range_.type == Range::Type::Finite) return range_.cutoff;
  return kInf;
}

std::vector<double> Potential::knot_radii() const {
  std::vector<double> out;
  for (double k : knots_) out.push_back(std::sqrt(k));
  return out;
}

Potential build_hard_square(double r_max) { return Potential::hard_well(r_max); }

Potential build_exv3(const ExV3Params& prm, ExV3Coefficients* coeffs) {
  const double q = prm.q, p = prm.p, C = prm.C;
  if (!(1.0 <= prm.r1 && prm.r1 <= prm.r2 && prm.r2 <= prm.r3 && prm.r3 <= kSqrt2 + 1e-15))
    throw ParameterError("exV3: need 1 <= r1 <= r2 <= r3 <= sqrt2");
  if (!(q > 0.0)) throw ParameterError("exV3: q must be positive");
  if (!(C > 0.0)) throw ParameterError("exV3: C must be positive");
  if (prm.tail == ExV3Params::Tail::Decaying && !(p > 4.0)) throw ParameterError("exV3: p must exceed 4");
  if (!(prm.alpha_pp > 0.0 && prm.alpha_pp < (2.0 - kSqrt2) / 4.0))
    throw ParameterError("exV3: alpha'' out of range");

  const double s0 = (1.0 - prm.alpha_pp) * (1.0 - prm.alpha_pp);
  const double s3 = (kSqrt2 + prm.alpha_pp) * (kSqrt2 + prm.alpha_pp);
  auto snap = [](double x) {
    const double n = std::round(x);
    return std::abs(x - n) < 1e-14 ? n : x;
  };
  const double r1s = snap(prm.r1 * prm.r1), r2s = snap(prm.r2 * prm.r2), r3s = snap(prm.r3 * prm.r3);

  // value/slope matching at s0: a1 s0^(-q/2) = -C + a2 d0^2, -(q/2) a1 s0^(-q/2-1) = 2 a2 d0
  const double d0 = r1s - s0;
  const double k0 = q * d0 / (4.0 * s0) - 1.0;
  if (!(k0 > 0.0))
    throw ConstructionError("exV3: C1 matching at s0=(1-a'')^2 needs q > 4 s0/(r1^2 - s0); got a1 <= 0");
  const double P = C / k0;
  const double a1 = P * std::pow(s0, q / 2.0);
  const double a2 = q * P / (4.0 * s0 * d0);

  const double d3 = s3 - r3s;
  double a3 = 0.0, a4 = 0.0;
  if (prm.tail == ExV3Params::Tail::Decaying) {
    // tail -a4 (s - r2^2)^(-p/2) matched to -C + a3 (s - r3^2)^2 at s3
    const double e = s3 - r2s;
    const double T = C / (1.0 + p * d3 / (4.0 * e));
    a4 = T * std::pow(e, p / 2.0);
    a3 = p * T / (4.0 * e * d3);
  } else {
    a3 = C / (d3 * d3);
  }
  if (!(a1 > 0 && a2 > 0 && a3 > 0) || (prm.tail == ExV3Params::Tail::Decaying && !(a4 > 0)))
    throw ConstructionError("exV3: matching produced a non-positive coefficient");

  const double f = 1.0 / C;
  std::vector<double> knots{s0, r1s};
  std::vector<Segment> segs{Segment::power(a1 * f, 0.0, -q / 2.0),
                            Segment::poly(r1s, {-1.0, 0.0, a2 * f})};
  if (r3s > r1s) {
    knots.push_back(r3s);
    segs.push_back(Segment::constant(-1.0));
  }
  knots.push_back(s3);
  segs.push_back(Segment::poly(r3s, {-1.0, 0.0, a3 * f}));
  Range range;
  if (prm.tail == ExV3Params::Tail::Decaying) {
    segs.push_back(Segment::power(-a4 * f, r2s, -p / 2.0));
  } else {
    segs.push_back(Segment::constant(0.0));
    range = Range::finite(std::sqrt(s3));
  }
  Potential v = Potential::piecewise(knots, segs, range, 0.0, C);

  if (prm.tail == ExV3Params::Tail::Decaying) {
    // smallest eps with |V|, r|V'|, r^2|V''| <= eps r^-p beyond sqrt2+a'', plus 1%
    double eps = 0.0;
    const double r0 = std::sqrt(s3);
    for (int i = 0; i <= 4000; ++i) {
      const double r = r0 * std::pow(100.0, i / 4000.0);
      Evaluation ev = v.evaluate(r);
      double m = std::max({std::abs(ev.value), r * std::abs(ev.d1), r * r * std::abs(ev.d2_left),
                           r * r * std::abs(ev.d2_right)});
      eps = std::max(eps, m * std::pow(r, p));
    }
    v = Potential::piecewise(knots, segs, Range::decaying(1.01 * eps, p), 0.0, C);
  }
  if (coeffs) *coeffs = {a1 * f, a2 * f, a3 * f, a4 * f, s0, s3};
  return v;
}

Potential build_hermite_well(double w1, double dw1, double ddw1, double w2, double dw2, double ddw2,
                             double cutoff) {
  // quintic in x = s - 1 with c0..c2 fixed by the data at x = 0, c3..c5 from the data at x = 1
  const double c0 = w1, c1 = dw1, c2 = ddw1 / 2.0;
  const double r0 = w2 - (c0 + c1 + c2);
  const double r1 = dw2 - (c1 + 2 * c2);
  const double r2 = ddw2 - 2 * c2;
  // [1 1 1; 3 4 5; 6 12 20] (c3 c4 c5) = (r0 r1 r2)
  const double c3 = 10 * r0 - 4 * r1 + 0.5 * r2;
  const double c4 = -15 * r0 + 7 * r1 - r2;
  const double c5 = 6 * r0 - 3 * r1 + 0.5 * r2;
  const double sc = cutoff * cutoff;
  if (!(sc > 2.0)) throw ParameterError("hermite well: cutoff must exceed sqrt2");
  return Potential::piecewise({sc}, {Segment::poly(1.0, {c0, c1, c2, c3, c4, c5}), Segment::constant(0.0)},
                              Range::finite(cutoff));
}

double lattice_tail_bound(double R, double p) {
  const double c = kSqrt2 / 2.0;
  const double u = R - 2.0 * c;
  if (!(u > 0.0)) return kInf;
  if (!(p > 2.0)) return kInf;
  return 2.0 * M_PI * (std::pow(u, 2.0 - p) / (p - 2.0) + c * std::pow(u, 1.0 - p) / (p - 1.0));
}

Potential resum(const Potential& pot, ResumMode mode, double tail_tol, double c_pot_eps, double t_min) {
  if (!(tail_tol > 0.0)) throw ParameterError("resum: tail_tol must be positive");
  if (pot.kind() == PotentialKind::HardWell && mode != ResumMode::DeltaBarSq)
    throw ParameterError("resum: hard potentials have no derivative data");
  if (pot.range().type == Range::Type::Decaying && !(pot.range().p > 4.0))
    throw DomainError("resum: divergent tail, condition (6') requires p > 4");
  auto data = std::make_shared<ResumData>();
  data->mode = mode;
  data->base = std::make_shared<const Potential>(pot);
  data->tail_tol = tail_tol;
  data->c_pot_eps = c_pot_eps;
  data->t_min = t_min > 0.0 ? t_min : 1.0 - pot.params().alpha_pp;
  if (mode != ResumMode::DeltaBarSq) {
    const double cap = resum_norm_cap(pot, data->t_min, tail_tol);
    SublatticeDecomposition dec = build_decomposition(std::max(std::sqrt(cap) + 1.0, 2.0));
    for (long long r2 : dec.scales())
      if (r2 > 1) data->scales.emplace_back(r2, static_cast<int>(dec.m(r2)));
  }
  return Potential::resummed(std::move(data), pot.params());
}

// ---------------------------------------------------------------------------
// conditions

const ConditionVerdict& ConditionReport::at(const std::string& id) const {
  for (const auto& v : verdicts)
    if (v.id == id) return v;
  throw ParameterError("no verdict for condition " + id);
}

bool ConditionReport::holds(const std::string& id) const {
  return at(id).status == ConditionVerdict::Status::Holds;
}

const char* to_string(ConditionVerdict::Status s) {
  switch (s) {
    case ConditionVerdict::Status::Holds: return "holds";
    case ConditionVerdict::Status::Fails: return "fails";
    default: return "not applicable";
  }
}

const char* to_string(PotentialKind k) {
  switch (k) {
    case PotentialKind::HardWell: return "HardWell";
    case PotentialKind::PiecewiseSmooth: return "PiecewiseSmooth";
    default: return "Resummed";
  }
}

const char* to_string(ResumMode m) {
  switch (m) {
    case ResumMode::Vtilde: return "Vtilde";
    case ResumMode::Vstar: return "Vstar";
    case ResumMode::VstarStar: return "VstarStar";
    default: return "DeltaBarSq";
  }
}

namespace {

struct Sample {
  double r;
  double v;      // +inf when infeasible
  double d1l, d1r, d2l, d2r;
  bool knot;
};

class Scanner {
 public:
  Scanner(const Potential& pot, int grid) : pot_(pot), grid_(grid) {
    lo_dom_ = pot.hard_core_radius();
    if (pot.kind() == PotentialKind::Resummed && pot.resum_data()->mode != ResumMode::DeltaBarSq)
      lo_dom_ = std::max(lo_dom_, pot.resum_data()->t_min);
    knots_ = pot.knot_radii();
  }

  Sample at(double r, bool knot = false) const {
    Sample s{r, kInf, 0, 0, 0, 0, knot};
    if (r < lo_dom_) return s;
    Evaluation e = pot_.evaluate(r);
    if (!e.feasible) return s;
    s.v = e.value;
    s.d1l = e.d1;
    s.d1r = e.d1_right;
    s.d2l = e.d2_left;
    s.d2r = e.d2_right;
    return s;
  }

  // grid of an interval (open ends sampled at cell midpoints) plus the knots inside
  void scan(double lo, double hi, bool closed, const std::function<void(const Sample&)>& fn) const {
    lo = std::max(lo, lo_dom_ > 0 ? lo_dom_ : 1e-3);
    if (!(hi > lo)) return;
    const double h = (hi - lo) / grid_;
    for (int i = 0; i < grid_; ++i) fn(at(lo + (i + 0.5) * h));
    if (closed) {
      fn(at(lo));
      fn(at(hi));
    }
    for (double k : knots_)
      if (k > lo && k < hi) fn(at(k, true));
  }

  double domain_lo() const { return lo_dom_; }

 private:
  const Potential& pot_;
  int grid_;
  double lo_dom_ = 0.0;
  std::vector<double> knots_;
};

ConditionVerdict verdict(const std::string& id, bool ok, double margin, double witness, std::string method) {
  ConditionVerdict v;
  v.id = id;
  v.status = ok && margin > 0.0 ? ConditionVerdict::Status::Holds : ConditionVerdict::Status::Fails;
  v.margin = margin;
  v.witness = witness;
  v.method = std::move(method);
  return v;
}

ConditionVerdict not_applicable(const std::string& id, std::string why) {
  ConditionVerdict v;
  v.id = id;
  v.status = ConditionVerdict::Status::NotApplicable;
  v.method = std::move(why);
  return v;
}

// global minimum of V over (core, r_check] including per-segment stationary points
std::pair<double, double> global_min(const Potential& pot, const Scanner& sc, double r_check, int grid) {
  double best = kInf, where = 0.0;
  auto take = [&](double r) {
    Sample s = sc.at(r);
    if (s.v < best) { best = s.v; where = r; }
  };
  const double lo = std::max(sc.domain_lo(), 1e-3);
  sc.scan(lo, r_check, true, [&](const Sample& s) {
    if (s.v < best) { best = s.v; where = s.r; }
  });
  // refine each segment's stationary points by bisection on V'
  std::vector<double> cuts{lo};
  for (double k : pot.knot_radii())
    if (k > lo && k < r_check) cuts.push_back(k);
  cuts.push_back(r_check);
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i], b = cuts[i + 1];
    const int n = std::max(64, grid / 10);
    double pr = a, pd = 0.0;
    for (int j = 0; j <= n; ++j) {
      double r = a + (b - a) * j / n;
      if (j == 0) r = a + (b - a) * 1e-9;
      if (j == n) r = b - (b - a) * 1e-9;
      Sample s = sc.at(r);
      if (!std::isfinite(s.v)) { pr = r; pd = 0.0; continue; }
      if (j > 0 && pd < 0.0 && s.d1l > 0.0) {
        double x0 = pr, x1 = r;
        for (int it = 0; it < 200; ++it) {
          double xm = 0.5 * (x0 + x1);
          (sc.at(xm).d1l < 0.0 ? x0 : x1) = xm;
        }
        take(0.5 * (x0 + x1));
      }
      pr = r;
      pd = s.d1l;
    }
  }
  if (pot.range().type == Range::Type::Decaying) {
    double tail = -pot.range().eps * std::pow(r_check, -pot.range().p);
    if (tail < best) { best = tail; where = r_check; }
  }
  return {best, where};
}

}  // namespace

ConditionReport check_conditions(const Potential& pot, const ConditionConstants& k) {
  ConditionReport rep;
  const DeformationParams& a = pot.params();
  const Scanner sc(pot, k.grid);
  const double R = std::max(k.r_check, 10.0);
  const bool hard = pot.kind() == PotentialKind::HardWell;
  const std::string grid_note = std::to_string(k.grid) + "-point grid per interval plus knots";

  // (0) min W = -1
  {
    auto [mn, where] = global_min(pot, sc, R, k.grid);
    const double tol = 1e-9;
    rep.verdicts.push_back(verdict("0", true, tol - std::abs(mn + 1.0), where,
                                   "global minimum over (core, R_check] by grid, knots and segment stationary points; margin = 1e-9 - |min+1|"));
    rep.verdicts.back().residual = mn;
  }

  // (1) convex on E_a'' and V''+- >= c on E_a'' minus [1, sqrt2]
  if (hard) {
    rep.verdicts.push_back(not_applicable("1", "not applicable (HardWell)"));
  } else {
    double conv = kInf, conv_at = 0.0, cm = kInf, cm_at = 0.0;
    for (double c : {1.0, kSqrt2}) {
      sc.scan(c - a.alpha_pp, c + a.alpha_pp, false, [&](const Sample& s) {
        if (!std::isfinite(s.v)) { conv = -kInf; conv_at = s.r; return; }
        double m = std::min(s.d2l, s.d2r);
        if (s.knot) m = std::min(m, (s.d1r - s.d1l) * 1e12);  // downward kink is not convex
        if (m < conv) { conv = m; conv_at = s.r; }
        const bool inside = s.r >= 1.0 && s.r <= kSqrt2;
        double mo = kInf;
        if (!inside) mo = std::min(s.d2l, s.d2r);
        else if (s.knot && s.r == 1.0) mo = s.d2l;
        else if (s.knot && s.r == kSqrt2) mo = s.d2r;
        if (mo < cm) { cm = mo; cm_at = s.r; }
      });
    }
    const bool convex = conv >= -1e-9;
    auto v = verdict("1", convex, cm - k.c, convex ? cm_at : conv_at,
                     "one-sided V'' on E_a'' (" + grid_note + "); margin = inf V''+- off [1,sqrt2] - c");
    v.residual = conv;
    rep.verdicts.push_back(v);
  }

  // (2) criticality and the four curvature inequalities
  if (hard) {
    rep.verdicts.push_back(not_applicable("2", "not applicable (HardWell)"));
  } else {
    WValue w1 = pot.w(1.0), w2 = pot.w(2.0);
    const double crit = std::max(std::abs(w1.d1_left + 2 * w2.d1_left), std::abs(w1.d1_right + 2 * w2.d1_right));
    const double A = w1.d2_left + w1.d2_right + 2 * w1.d1_left;
    const double B = w2.d2_left + w2.d2_right;
    const double Cq = w1.d2_left + w1.d2_right;
    const double D = std::min(w1.d2_left + 4 * w2.d2_left, w1.d2_right + 4 * w2.d2_right);
    const double m = std::min({A, B, Cq, D}) - k.C4 * k.c_prime;
    const bool critical = crit <= 1e-10;
    auto v = verdict("2", critical, critical ? m : -crit, 1.0,
                     "analytic one-sided W', W'' at s = 1, 2; residual = |W'(1)+2W'(2)|");
    v.residual = crit;
    rep.verdicts.push_back(v);
  }

  // (3) sup over E_a' of V < -15/16 - c''
  {
    double sup = -kInf, at = 0.0;
    for (double c : {1.0, kSqrt2})
      sc.scan(c - a.alpha_prime, c + a.alpha_prime, false, [&](const Sample& s) {
        if (s.v > sup) { sup = s.v; at = s.r; }
      });
    rep.verdicts.push_back(verdict("3", true, -15.0 / 16.0 - k.c_pp - sup, at,
                                   "sup of V over E_a' (" + grid_note + ")"));
  }

  // (4) V > -1/2 outside (1 - a, sqrt2 + a)
  {
    double inf = kInf, at = 0.0;
    auto f = [&](const Sample& s) {
      if (s.v < inf) { inf = s.v; at = s.r; }
    };
    sc.scan(std::max(pot.hard_core_radius(), 1e-3), 1.0 - a.alpha, true, f);
    sc.scan(kSqrt2 + a.alpha, R, true, f);
    if (pot.range().type == Range::Type::Decaying) inf = std::min(inf, -pot.range().eps * std::pow(R, -pot.range().p));
    rep.verdicts.push_back(verdict("4", true, inf + 0.5, at, "inf of V off (1-a, sqrt2+a) up to R_check, tail by range"));
  }

  // (5) V >= K on r <= 1 - a
  {
    double inf = kInf, at = 0.0;
    sc.scan(std::max(pot.hard_core_radius(), 1e-3), 1.0 - a.alpha, true, [&](const Sample& s) {
      if (s.v < inf) { inf = s.v; at = s.r; }
    });
    std::string how = "inf of V over (core, 1-a]";
    if (!std::isfinite(inf) && inf > 0) how = "vacuous: hard core covers r <= 1-a";
    rep.verdicts.push_back(verdict("5", true, inf - k.K, at, how));
  }

  // (6) V = 0 beyond sqrt2 + a''
  {
    const double r0 = kSqrt2 + a.alpha_pp;
    double sup = 0.0, at = 0.0;
    sc.scan(r0, R, true, [&](const Sample& s) {
      if (std::abs(s.v) > sup) { sup = std::abs(s.v); at = s.r; }
    });
    const bool finite = pot.range().type == Range::Type::Finite && pot.range().cutoff <= r0 * (1.0 + 1e-14);
    auto v = verdict("6", finite && sup <= 1e-12, R - r0, at,
                     "exact zero check on [sqrt2+a'', R_check] and declared cutoff; margin = verified zero length");
    v.residual = pot.range().type == Range::Type::Finite ? pot.range().cutoff : kInf;
    rep.verdicts.push_back(v);
  }

  // (6') V <= 0 beyond 1 and algebraic decay of V, rV', r^2V''
  if (hard) {
    rep.verdicts.push_back(not_applicable("6'", "not applicable (HardWell)"));
  } else {
    double eps = k.eps, p = k.p;
    if (std::isnan(eps)) eps = pot.range().type == Range::Type::Decaying ? pot.range().eps : 0.0;
    if (std::isnan(p)) p = pot.range().type == Range::Type::Decaying ? pot.range().p : 6.0;
    double supv = -kInf, at = 0.0;
    sc.scan(1.0, R, true, [&](const Sample& s) {
      if (s.v > supv) { supv = s.v; at = s.r; }
    });
    const double r0 = kSqrt2 + a.alpha_pp;
    double worst = 0.0, wat = r0;
    for (int i = 0; i <= k.grid; ++i) {
      const double r = r0 * std::pow(10.0 * R / r0, static_cast<double>(i) / k.grid);
      Sample s = sc.at(r);
      double m = std::max({std::abs(s.v), r * std::abs(s.d1l), r * r * std::abs(s.d2l), r * r * std::abs(s.d2r)});
      double ratio = eps > 0 ? m * std::pow(r, p) / eps : (m > 0 ? kInf : 0.0);
      if (ratio > worst) { worst = ratio; wat = r; }
    }
    double margin = std::min(1.0 - worst, supv <= 0.0 ? 1.0 : -supv);
    bool ok = p > 4.0;
    auto v = verdict("6'", ok, margin, supv > 0.0 ? at : wat,
                     "V <= 0 on [1, R_check]; max of |V|, r|V'|, r^2|V''| over eps r^-p on a log grid to 10 R_check");
    v.residual = worst;
    rep.verdicts.push_back(v);
  }
  return rep;
}

}  // namespace sqcrys
