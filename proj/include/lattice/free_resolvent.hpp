#pragma once

#include "lattice/core.hpp"

#include <map>
#include <optional>
#include <vector>

namespace lattice {

enum class Side { off_axis, plus, minus };

// Spectral parameter. lambda is expressed in the given convention.
struct EnergyPoint {
  cplx lambda;
  Side side = Side::off_axis;
  Convention conv = Convention::standard;

  static EnergyPoint off_axis(cplx l, Convention c = Convention::standard) { return {l, Side::off_axis, c}; }
  static EnergyPoint plus(double l, Convention c = Convention::standard) { return {cplx(l, 0), Side::plus, c}; }
  static EnergyPoint minus(double l, Convention c = Convention::standard) { return {cplx(l, 0), Side::minus, c}; }

  // Energy in the standard convention (band [0,d]).
  cplx standard(int d) const { return lambda - convention_shift(conv, d); }
  void validate(int d) const;
};

struct UniformizingCoord {
  cplx z;
  cplx lambda;
};

enum class KernelMethod { series, quadrature, closed_form_1d, boundary_extrapolation, nested };
std::string to_string(KernelMethod m);

cplx lambda_of_z(cplx z);
UniformizingCoord inverse_joukowski(cplx lambda);

inline constexpr int kMaxExactCoefficientOrder = 40;

// c_s(k) for all offsets, exact, by s-fold convolution of the symbol's Fourier coefficients.
std::map<LatticePoint, Rational> cs_coefficients(int d, int s);
// c_s(k) for s = 0..S through the one-dimensional binomial formula (exact).
std::vector<Rational> cs_exact_series(const LatticePoint& k, int S);
// Same coefficients scaled by d^{-s}, in double precision, stable for large s.
std::vector<double> cs_scaled_series(const LatticePoint& k, int S);

struct SeriesResult {
  cplx value;
  int terms;
  double tail_bound;
};

// Sum_s c_s(k) z^{-s-1}; z is a standard-convention energy with |z| > d.
SeriesResult r0_series_detailed(const LatticePoint& k, cplx z, double tail_tol = 1e-14);
inline cplx r0_series(const LatticePoint& k, cplx z) { return r0_series_detailed(k, z).value; }

struct QuadratureResult {
  cplx value;
  double error;
  int grid;
};

// Trapezoidal rule on the torus with a grid-doubling error estimate.
QuadratureResult r0_quadrature(const LatticePoint& k, const EnergyPoint& e, int grid = 256, double tol = 1e-12,
                               int max_grid = 2048);
// Single trapezoid evaluation at a fixed grid; also returns the half-grid value.
std::pair<cplx, cplx> r0_trapezoid(const LatticePoint& k, cplx lambda_std, int grid);

// d = 1 closed form 4 z^{|n|}/(1/z - z), sign checked against quadrature at n = 0.
cplx r0_1d(int n, cplx lambda);
// Same closed form without the quadrature check (used inside nested integrals).
cplx r0_1d_closed(int n, cplx lambda);
// Exact boundary value r0(n, lambda + i0 * sign) for lambda in (0,1).
cplx r0_1d_boundary(int n, double lambda, int sign);

// Iterated integral over one coordinate with the d-1 dimensional kernel inside.
// lambda is a standard-convention energy off [0,d] (or with Im lambda != 0).
cplx r0_nested(const LatticePoint& k, cplx lambda, double tol = 1e-12);

struct BoundaryOptions {
  double eps0 = 1e-2;
  int rungs = 6;
  double max_residual = 1e-8;
  int max_refinements = 6;
  double threshold_clearance = 1e-3;
};

struct BoundaryResult {
  cplx value;
  double residual;
  double eps0;
};

// Richardson extrapolation of r0(k, lambda + i sign eps) to eps = 0 (standard convention).
BoundaryResult r0_boundary_extrapolated(const LatticePoint& k, double lambda, int sign,
                                        const BoundaryOptions& opt = {});
// Boundary value; d = 1 uses the exact limit, d >= 2 the extrapolation.
// Direct d = 2 boundary value; valid up to 1e-12 from the thresholds.
cplx r0_boundary_2d(const LatticePoint& k, double lambda, int sign, double tol = 1e-13);
cplx r0_boundary(const LatticePoint& k, double lambda, int sign, const BoundaryOptions& opt = {});

// Dispatcher picking a route by dimension and distance to the band.
cplx r0(const LatticePoint& k, const EnergyPoint& e);

// Lazily filled table keyed by canonical offsets.
class FreeResolvent {
 public:
  FreeResolvent(int d, EnergyPoint e);
  int dim() const { return d_; }
  const EnergyPoint& energy() const { return e_; }
  cplx operator()(const LatticePoint& k) const;

 private:
  int d_;
  EnergyPoint e_;
  mutable std::map<LatticePoint, cplx> cache_;
};

struct KernelTable {
  cplx z;
  int dim = 0;
  std::map<LatticePoint, cplx> values;
  KernelMethod method = KernelMethod::series;
  std::map<LatticePoint, double> errors;
};

KernelTable build_kernel_table(int d, const std::vector<LatticePoint>& offsets, const EnergyPoint& e,
                               KernelMethod method);

}  // namespace lattice
