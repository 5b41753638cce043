#pragma once

#include <array>
#include <string>
#include <vector>

#include "sqcrys/common.hpp"
#include "sqcrys/potential.hpp"

namespace sqcrys {

struct Configuration {
  std::vector<Vec2> points;
  size_t size() const { return points.size(); }
};

struct Quadrilateral {
  std::array<Vec2, 4> x;
  std::array<int, 4> order{0, 1, 2, 3};  // input index of each cyclic position

  double side(int i) const { return norm(x[(i + 1) % 4] - x[i]); }
  double diagonal(int i) const { return norm(x[i + 2] - x[i]); }  // i = 0, 1
};

using Quad8 = std::array<Vec2, 4>;  // perturbation of the four vertices

Energy total_energy(const Potential& pot, const Configuration& X);
// per-point energies E^p = 1/2 sum_{q != p} V(|x_p - x_q|)
std::vector<Energy> point_energies(const Potential& pot, const Configuration& X);

Quadrilateral canonicalize_quadrilateral(const std::array<Vec2, 4>& raw);
Energy four_point_energy(const Potential& pot, const Quadrilateral& Q);

// q = 1/2 ((-1,-1), (-1,1), (1,1), (1,-1))
Quad8 reference_square();

double e4_gradient_at_square(const Potential& pot, const Quad8& h);
double e4_hessian_form(const Potential& pot, const Quad8& h, const Quad8& k);

struct SpectrumEntry {
  std::string label;
  Quad8 vector;
  double eigenvalue = 0.0;      // quadratic form along +vector / |vector|^2
  double eigenvalue_neg = 0.0;  // along -vector (differs only for one-sided W'')
  bool one_sided = false;
};

std::vector<SpectrumEntry> e4_spectrum_at_square(const Potential& pot);

Energy lattice_energy_per_point(const Potential& pot, double t, double tail_tol = 1e-12);

struct ScaleResult {
  double t = 0.0;
  double energy = 0.0;
  bool at_boundary = false;
  bool above_one_minus_alpha = true;
};

ScaleResult optimal_scale(const Potential& pot, double t_lo = 0.6, double t_hi = 2.0, double tol = 1e-8,
                          double tail_tol = 1e-10);

// E = sum_{i<j} w_ij W(|x_i - x_j|^2) and its gradient; weights empty means all ones
struct PairWeights {
  int n = 0;
  std::vector<double> w;  // n*n, symmetric
  double operator()(int i, int j) const { return w.empty() ? 1.0 : w[i * n + j]; }
  // sides 1/2, diagonals 1 in the given cyclic order
  static PairWeights four_point();
};

Energy weighted_energy(const Potential& pot, const std::vector<Vec2>& x, const PairWeights& wts);
std::vector<Vec2> weighted_gradient(const Potential& pot, const std::vector<Vec2>& x, const PairWeights& wts);

}  // namespace sqcrys
