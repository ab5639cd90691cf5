#pragma once

// Independent brute-force references shared by the unit and acceptance tests.

#include "lattice/core.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <map>
#include <random>
#include <vector>

namespace oracle {

using lattice::cplx;
using lattice::LatticePoint;
using lattice::Potential;
using lattice::Rational;
using lattice::RationalPotential;

inline constexpr double kPi = 3.14159265358979323846;

// Dense H restricted to the box [-L, L]^d (Dirichlet), in the given convention.
inline Eigen::MatrixXd box_hamiltonian(const Potential& v, int L, bool centered) {
  const int d = v.dim();
  const auto pts = lattice::box_points(d, L);
  std::map<LatticePoint, int> idx;
  for (int i = 0; i < static_cast<int>(pts.size()); ++i) idx[pts[i]] = i;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(pts.size(), pts.size());
  for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
    h(i, i) = (centered ? 0.0 : d / 2.0) + v(pts[i]);
    for (int j = 0; j < d; ++j)
      for (int s : {-1, 1}) {
        auto it = idx.find(pts[i].shifted(j, s));
        if (it != idx.end()) h(i, it->second) = -0.25;
      }
  }
  return h;
}

// Tr(H^n - H0^n) on a box large enough that no contributing closed walk reaches the boundary.
inline std::vector<double> box_trace_moments(const Potential& v, int nmax, bool centered) {
  const int L = v.max_abs_coord() + nmax + 1;
  const Eigen::MatrixXd h = box_hamiltonian(v, L, centered);
  const Eigen::MatrixXd h0 = box_hamiltonian(Potential(v.dim()), L, centered);
  std::vector<double> out;
  Eigen::MatrixXd a = h, b = h0;
  for (int n = 1; n <= nmax; ++n) {
    out.push_back((a - b).trace());
    a = a * h;
    b = b * h0;
  }
  return out;
}

// Random rational potential with values k/den, |k| <= den, on sites of [-r, r]^d.
inline RationalPotential random_rational(std::mt19937_64& rng, int d, int r, int sites, int den = 8,
                                         int sign = 0) {
  RationalPotential v(d);
  std::uniform_int_distribution<int> c(-r, r), k(sign > 0 ? 1 : -den, sign < 0 ? -1 : den);
  int placed = 0, guard = 0;
  while (placed < sites && guard++ < 1000) {
    std::vector<int> n(d);
    for (auto& x : n) x = c(rng);
    const LatticePoint p(n);
    if (v(p) != 0) continue;
    int val = k(rng);
    if (val == 0) val = 1;
    v.set(p, Rational(val, den));
    ++placed;
  }
  return v;
}

// (2 pi)^{-1} int_0^{2 pi} dx / (a - cos x) = 1 / sqrt(a^2 - 1) for a > 1.
inline double cos_integral(double a) { return 1.0 / std::sqrt(a * a - 1.0); }

// r0(0, lambda) for d = 1 and real lambda > 1: h - lambda = (1 - cos x)/2 - lambda.
inline double r0_1d_origin_above(double lambda) { return -2.0 * cos_integral(2 * lambda - 1); }

// Midpoint-rule torus quadrature of e^{ik.x} / (h(x) - z), d <= 3 (brute force).
inline cplx torus_midpoint(const LatticePoint& k, cplx z, int n) {
  const int d = k.dim();
  std::vector<int> idx(d, 0);
  cplx sum = 0;
  const double h = 2 * kPi / n;
  while (true) {
    double hx = 0, phase = 0;
    for (int j = 0; j < d; ++j) {
      const double x = (idx[j] + 0.5) * h;
      hx += (1 - std::cos(x)) / 2;
      phase += k[j] * x;
    }
    sum += std::polar(1.0, phase) / (hx - z);
    int j = 0;
    while (j < d && ++idx[j] == n) idx[j++] = 0;
    if (j == d) break;
  }
  return sum / std::pow(double(n), d);
}

}  // namespace oracle
