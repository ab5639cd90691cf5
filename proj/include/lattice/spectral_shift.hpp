#pragma once

#include "lattice/finite_rank.hpp"

#include <vector>

namespace lattice {

struct SsfOptions {
  double threshold_clearance = 1e-3;
  double eigen_clearance = 1e-3;
  double height = 1.0;     // imaginary part of the horizontal leg
  double eps_band = 1e-4;  // end of the vertical leg before snapping to D(lambda + i0)
  double eps_real = 1e-9;  // end of the vertical leg before snapping to the real D(lambda)
  int min_steps = 16;
  int max_depth = 40;
};

struct SSFProfile {
  std::vector<double> grid;  // increasing, in the profile's convention
  std::vector<double> xi;
  double branch_anchor = 0;  // where arg D is fixed to 0
  Convention conv = Convention::standard;
};

// xi(lambda) = arg D(lambda + i0) / pi, argument tracked continuously from the anchor.
double ssf(const Potential& v, double lambda, Convention conv, const SsfOptions& opt = {});
// All grid points share one tracked horizontal path.
SSFProfile ssf_profile(const Potential& v, std::vector<double> grid, Convention conv, const SsfOptions& opt = {});

// xi(lambda_j + 1e-5) - xi(lambda_j - 1e-5); equals -multiplicity.
double ssf_jump_check(const Potential& v, const EigenvalueRecord& eig, Convention conv);

// F_1..F_5 from the closed forms; centered convention only.
std::vector<Rational> closed_form_moments(const RationalPotential& v, Convention conv = Convention::centered);

struct EigenSideTerm {
  double lambda;
  int multiplicity;
  double edge;  // nearest band edge c_j
};

struct MomentOptions {
  // Also integrate xi over the band (needed for the total integral of xi).
  bool band_integral = true;
  double band_tolerance = 1e-9;
};

struct MomentReport {
  Convention conv = Convention::standard;
  std::vector<Rational> f_closed;  // empty unless centered
  std::vector<Rational> f_walk;
  std::vector<double> e_n;                 // n * int outside the band of xi lambda^{n-1}
  std::vector<double> corrected_sum;       // sum m_j (lambda_j^n - c_j^n)
  std::vector<double> literal_sum;         // sum m_j lambda_j^n
  std::vector<double> corrected_residual;  // |corrected_sum - e_n|
  std::vector<double> literal_residual;    // literal_sum - e_n
  std::vector<EigenSideTerm> eigen_side_terms;
  bool has_band_integral = false;
  double xi_integral = 0;      // int_R xi
  double xi_abs_integral = 0;  // int_R |xi|
  double band_integral_error = 0;
};

MomentReport moment_identity(const Potential& v, int nmax, Convention conv, const MomentOptions& opt = {});

struct EigenBoundsReport {
  int sign = 0;  // +1 for V >= 0, -1 for V <= 0, 0 for V = 0
  double e1 = 0, e3 = 0;
  double trace_v = 0, trace_v3 = 0;  // Tr V and Tr(V^3 + (3d/8) V)
  bool corrected_e1 = false, corrected_e3 = false;
  double literal_sum1 = 0, literal_sum3 = 0;
  bool literal_e1 = false, literal_e3 = false;
};

// Sign-definite V, centered convention.
EigenBoundsReport eigenvalue_bounds_check(const Potential& v, const MomentOptions& opt = {});

}  // namespace lattice
