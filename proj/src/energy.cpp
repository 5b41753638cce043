#include "sqcrys/energy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace sqcrys {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Neumaier compensated sum
struct Accum {
  double s = 0.0, c = 0.0;
  void add(double x) {
    double t = s + x;
    if (std::abs(s) >= std::abs(x)) c += (s - t) + x;
    else c += (x - t) + s;
    s = t;
  }
  double get() const { return s + c; }
};

double w_prime(const WValue& v) {
  if (std::abs(v.d1_left - v.d1_right) > 1e-12 * (1.0 + std::abs(v.d1_left)))
    throw NotDifferentiableError("W' is discontinuous at the square's side or diagonal");
  return v.d1_left;
}

void require_smooth(const Potential& pot) {
  if (pot.kind() == PotentialKind::HardWell)
    throw NotDifferentiableError("hard potentials are not differentiable");
}

}  // namespace

Energy total_energy(const Potential& pot, const Configuration& X) {
  const size_t n = X.size();
  if (n < 2) throw ParameterError("total_energy: need at least two points");
  Accum acc;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j) {
      const double r = norm(X.points[i] - X.points[j]);
      Energy e = pot.value(r);
      if (!e.feasible()) return Energy::infeasible();
      acc.add(e.value());
    }
  return Energy(acc.get());
}

std::vector<Energy> point_energies(const Potential& pot, const Configuration& X) {
  const size_t n = X.size();
  std::vector<Energy> out(n, Energy(0.0));
  std::vector<Accum> acc(n);
  std::vector<bool> ok(n, true);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j) {
      Energy e = pot.value(norm(X.points[i] - X.points[j]));
      if (!e.feasible()) {
        ok[i] = ok[j] = false;
        continue;
      }
      acc[i].add(0.5 * e.value());
      acc[j].add(0.5 * e.value());
    }
  for (size_t i = 0; i < n; ++i) out[i] = ok[i] ? Energy(acc[i].get()) : Energy::infeasible();
  return out;
}

Quadrilateral canonicalize_quadrilateral(const std::array<Vec2, 4>& raw) {
  double scale = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      double d = norm(raw[i] - raw[j]);
      if (d == 0.0) throw DegeneracyError("quadrilateral has coincident points");
      scale = std::max(scale, d);
    }
  double area = 0.0;
  for (int j = 1; j < 4; ++j)
    for (int k = j + 1; k < 4; ++k) area = std::max(area, std::abs(cross(raw[j] - raw[0], raw[k] - raw[0])));
  if (area <= 1e-12 * scale * scale) throw DegeneracyError("quadrilateral points are collinear");

  Vec2 c{0, 0};
  for (const auto& p : raw) c += p;
  c = c / 4.0;
  std::array<int, 4> idx{0, 1, 2, 3};
  std::array<double, 4> ang, rad;
  for (int i = 0; i < 4; ++i) {
    ang[i] = std::atan2(raw[i].y - c.y, raw[i].x - c.x);
    rad[i] = norm(raw[i] - c);
  }
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    if (ang[a] != ang[b]) return ang[a] < ang[b];
    if (rad[a] != rad[b]) return rad[a] < rad[b];
    return a < b;
  });
  auto it = std::find(idx.begin(), idx.end(), 0);
  std::rotate(idx.begin(), it, idx.end());
  Quadrilateral q;
  for (int i = 0; i < 4; ++i) {
    q.order[i] = idx[i];
    q.x[i] = raw[idx[i]];
  }
  return q;
}

Energy four_point_energy(const Potential& pot, const Quadrilateral& Q) {
  Energy sides(0.0), diags(0.0);
  for (int i = 0; i < 4; ++i) sides += pot.value(Q.side(i));
  for (int i = 0; i < 2; ++i) diags += pot.value(Q.diagonal(i));
  if (!sides.feasible() || !diags.feasible()) return Energy::infeasible();
  return Energy(0.5 * sides.value() + diags.value());
}

Quad8 reference_square() { return {Vec2{-0.5, -0.5}, Vec2{-0.5, 0.5}, Vec2{0.5, 0.5}, Vec2{0.5, -0.5}}; }

double e4_gradient_at_square(const Potential& pot, const Quad8& h) {
  require_smooth(pot);
  const double g = w_prime(pot.w(1.0)) + 2.0 * w_prime(pot.w(2.0));
  const Vec2 e1{1, 0}, e2{0, 1};
  return g * (dot(h[2] - h[0], e1 + e2) + dot(h[1] - h[3], e2 - e1));
}

double e4_hessian_form(const Potential& pot, const Quad8& h, const Quad8& k) {
  require_smooth(pot);
  const Quad8 q = reference_square();
  const WValue w[2] = {pot.w(1.0), pot.w(2.0)};
  const double w1[2] = {w_prime(w[0]), w_prime(w[1])};
  double out = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 1; j <= 2; ++j) {
      const int m = (i + j) % 4;
      const Vec2 dh = h[i] - h[m], dk = k[i] - k[m], dq = q[i] - q[m];
      const double sh = dot(dh, dq);
      const double w2 = sh >= 0.0 ? w[j - 1].d2_right : w[j - 1].d2_left;
      out += w1[j - 1] * dot(dh, dk) + 2.0 * w2 * sh * dot(dk, dq);
    }
  return out;
}

std::vector<SpectrumEntry> e4_spectrum_at_square(const Potential& pot) {
  require_smooth(pot);
  const Quad8 q = reference_square();
  const WValue a = pot.w(1.0), b = pot.w(2.0);
  const double W1 = w_prime(a), W2 = w_prime(b);
  const bool c2 = std::abs(a.d2_left - a.d2_right) <= 1e-12 * (1.0 + std::abs(a.d2_left)) &&
                  std::abs(b.d2_left - b.d2_right) <= 1e-12 * (1.0 + std::abs(b.d2_left));
  const double A = a.d2_left, B = b.d2_left;
  const Vec2 e1{1, 0};

  std::vector<SpectrumEntry> out;
  auto add = [&](std::string label, Quad8 v, double lam) {
    SpectrumEntry e;
    e.label = std::move(label);
    e.vector = v;
    if (c2) {
      e.eigenvalue = e.eigenvalue_neg = lam;
    } else {
      Quad8 nv;
      double n2 = 0.0;
      for (int i = 0; i < 4; ++i) {
        nv[i] = -v[i];
        n2 += norm2(v[i]);
      }
      e.eigenvalue = e4_hessian_form(pot, v, v) / n2;
      e.eigenvalue_neg = e4_hessian_form(pot, nv, nv) / n2;
      e.one_sided = true;
    }
    out.push_back(std::move(e));
  };
  add("translation", {e1, e1, e1, e1}, 0.0);
  add("alternating", {e1, -e1, e1, -e1}, 4.0 * (W1 + A));
  add("dilation", q, 2 * W1 + 4 * W2 + 4 * A + 16 * B);
  add("rotation", {q[1], q[2], q[3], q[0]}, 2 * W1 + 4 * W2);
  add("diagonal-rotation", {q[3], q[2], q[1], q[0]}, 2 * W1 + 4 * W2 + 4 * A);
  add("diagonal-squeeze", {q[0], q[3], q[2], q[1]}, 2 * W1 + 4 * W2 + 16 * B);
  return out;
}

namespace {

long long lattice_radius2(const Potential& pot, double t, double tail_tol) {
  double R;
  const Range& rg = pot.range();
  if (rg.type == Range::Type::Finite) {
    R = rg.cutoff / t;
  } else {
    if (!(rg.p > 2.0)) throw DomainError("lattice energy: divergent tail");
    if (!(tail_tol > 0.0)) throw ParameterError("lattice energy: tail_tol must be positive");
    R = std::max(2.0, (kSqrt2 + pot.params().alpha_pp) / t);
    while (0.5 * rg.eps * std::pow(t, -rg.p) * lattice_tail_bound(R, rg.p) > tail_tol / 4.0) R *= 1.05;
  }
  return static_cast<long long>(std::floor(R * R));
}

Energy lattice_sum(const Potential& pot, double t, long long R2) {
  const long long rr = static_cast<long long>(std::sqrt(static_cast<double>(R2))) + 1;
  Accum acc;
  // four symmetric copies of {x >= 1, y >= 0}
  for (long long x = 1; x <= rr; ++x)
    for (long long y = 0; y <= rr; ++y) {
      const long long n = x * x + y * y;
      if (n > R2) break;
      Energy e = pot.value(t * std::sqrt(static_cast<double>(n)));
      if (!e.feasible()) return Energy::infeasible();
      acc.add(e.value());
    }
  return Energy(2.0 * acc.get());
}

}  // namespace

Energy lattice_energy_per_point(const Potential& pot, double t, double tail_tol) {
  if (!(t > 0.0)) throw DomainError("lattice energy: t must be positive");
  if (t < pot.hard_core_radius()) return Energy::infeasible();
  return lattice_sum(pot, t, lattice_radius2(pot, t, tail_tol));
}

ScaleResult optimal_scale(const Potential& pot, double t_lo, double t_hi, double tol, double tail_tol) {
  if (!(t_lo > 0.0 && t_hi > t_lo)) throw ParameterError("optimal_scale: bad bracket");
  auto f = [&](double t, double tt) { return lattice_energy_per_point(pot, t, tt).value_or_inf(); };
  const double coarse_tol = std::max(tail_tol, 1e-6);
  const int n = 400;
  std::vector<double> ts(n + 1), fs(n + 1);
  int best = 0;
  for (int i = 0; i <= n; ++i) {
    ts[i] = t_lo + (t_hi - t_lo) * i / n;
    fs[i] = f(ts[i], coarse_tol);
    if (fs[i] < fs[best]) best = i;
  }
  std::vector<std::pair<double, double>> cand{{fs[best], ts[best]}};

  // golden section inside the best grid cell pair, one truncation radius for the whole bracket
  double a = ts[std::max(best - 1, 0)], b = ts[std::min(best + 1, n)];
  const long long R2 = lattice_radius2(pot, std::max(a, 1e-3), coarse_tol);
  auto g = [&](double t) {
    if (t < pot.hard_core_radius()) return std::numeric_limits<double>::infinity();
    return lattice_sum(pot, t, R2).value_or_inf();
  };
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = g(c), fd = g(d);
  while (b - a > tol) {
    if (fc <= fd) {
      b = d; d = c; fd = fc;
      c = b - gr * (b - a);
      fc = g(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + gr * (b - a);
      fd = g(d);
    }
  }
  for (double t : {a, b, 0.5 * (a + b)}) cand.push_back({f(t, coarse_tol), t});
  // kinks of the lattice sum: t = knot radius / |z|
  std::vector<double> radii = pot.knot_radii();
  if (pot.hard_core_radius() > 0) radii.push_back(pot.hard_core_radius());
  for (double rho : radii)
    for (long long m = 1; m <= 50; ++m) {
      const double t = rho / std::sqrt(static_cast<double>(m));
      if (t < t_lo || t > t_hi) continue;
      cand.push_back({f(t, coarse_tol), t});
    }
  double lowest = std::numeric_limits<double>::infinity();
  for (const auto& [v, t] : cand) lowest = std::min(lowest, v);
  // contenders within the coarse error band are compared at the requested tolerance
  std::sort(cand.begin(), cand.end());
  std::vector<double> done;
  double bt = ts[best], bf = std::numeric_limits<double>::infinity();
  for (const auto& [v, t] : cand) {
    if (v > lowest + 4 * coarse_tol) continue;
    bool near = false;
    for (double u : done) near = near || std::abs(u - t) < 1e-6;
    if (near) continue;
    done.push_back(t);
    double w = coarse_tol > tail_tol ? f(t, tail_tol) : v;
    if (w < bf || (w == bf && t < bt)) { bf = w; bt = t; }
  }
  ScaleResult res;
  res.t = bt;
  res.energy = bf;
  res.at_boundary = bt - t_lo < 2 * tol || t_hi - bt < 2 * tol;
  res.above_one_minus_alpha = bt > 1.0 - pot.params().alpha;
  return res;
}

PairWeights PairWeights::four_point() {
  PairWeights p;
  p.n = 4;
  p.w.assign(16, 0.0);
  for (int i = 0; i < 4; ++i) {
    int j = (i + 1) % 4;
    p.w[i * 4 + j] = p.w[j * 4 + i] = 0.5;
  }
  p.w[0 * 4 + 2] = p.w[2 * 4 + 0] = 1.0;
  p.w[1 * 4 + 3] = p.w[3 * 4 + 1] = 1.0;
  return p;
}

Energy weighted_energy(const Potential& pot, const std::vector<Vec2>& x, const PairWeights& wts) {
  Accum acc;
  for (size_t i = 0; i < x.size(); ++i)
    for (size_t j = i + 1; j < x.size(); ++j) {
      const double w = wts(static_cast<int>(i), static_cast<int>(j));
      if (w == 0.0) continue;
      Energy e = pot.value(norm(x[i] - x[j]));
      if (!e.feasible()) return Energy::infeasible();
      acc.add(w * e.value());
    }
  return Energy(acc.get());
}

std::vector<Vec2> weighted_gradient(const Potential& pot, const std::vector<Vec2>& x, const PairWeights& wts) {
  std::vector<Vec2> g(x.size());
  for (size_t i = 0; i < x.size(); ++i)
    for (size_t j = i + 1; j < x.size(); ++j) {
      const double w = wts(static_cast<int>(i), static_cast<int>(j));
      if (w == 0.0) continue;
      const Vec2 d = x[i] - x[j];
      const double s = norm2(d);
      if (!(s > 0.0)) continue;
      WValue v = pot.w(s);
      if (!v.feasible) continue;
      const Vec2 f = d * (2.0 * w * 0.5 * (v.d1_left + v.d1_right));
      g[i] += f;
      g[j] -= f;
    }
  return g;
}

}  // namespace sqcrys
