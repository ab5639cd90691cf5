#pragma once

#include "lattice/free_resolvent.hpp"

#include <map>
#include <string>
#include <vector>

namespace lattice {

// One inequality lhs <= rhs evaluated at a sample.
struct BoundCheck {
  std::string name;
  double lhs = 0;
  double rhs = 0;
  bool pass = false;
};

struct BoundReport {
  std::vector<BoundCheck> checks;
  double calibrated_constant = 0;  // d = 2 log envelope only
  bool all_pass() const;
};

using Weights1D = std::map<int, double>;

double l2_norm(const Weights1D& q);

// ||q1 R0(lambda) q2||_HS for d = 1 (lambda in the standard convention, off [0,1]).
double hs_norm_1d(const Weights1D& q1, const Weights1D& q2, cplx lambda);
// ||rho_a q1 (R0(l) - R0(l1)) rho_a q2||_HS with rho_a(n) = (1+n^2)^{-a/2}.
double hs_difference_1d(const Weights1D& q1, const Weights1D& q2, cplx l, cplx l1, double alpha);

// u(v) = sqrt(v(v-1)); the constants M and N of the pointwise Hoelder estimate.
double holder_m(cplx l, cplx l1);
double holder_n(cplx l, cplx l1);
// max |u'| on the segment [l, l1], sampled.
double holder_u_prime_max(cplx l, cplx l1);

// ||q1 R0 q2||_HS <= ||q1|| ||q2|| / |u(lambda)| on every sample.
BoundReport verify_d1_hs_bound(const std::vector<cplx>& lambdas, const Weights1D& q1, const Weights1D& q2);
// Hoelder estimate of the HS norm for each pair and exponent.
BoundReport verify_d1_holder_bound(const std::vector<std::pair<cplx, cplx>>& pairs, const std::vector<double>& alphas,
                                   const Weights1D& q1, const Weights1D& q2);

// The same HS difference bounded through the pointwise estimate
//   |r0(k,l) - r0(k,l1)| <= min(P, 1/|u(l)| + 1/|u(l1)|),
//   P = |l - l1| (2|k| (1 + U)/|u(l)| + U/(|u(l)||u(l1)|)),  U = max |u'|,
// which is what the splitting z^k/u - z1^k/u1 actually yields.
double holder_corrected_rhs(const Weights1D& q1, const Weights1D& q2, cplx l, cplx l1, double alpha);
BoundReport verify_d1_holder_corrected(const std::vector<std::pair<cplx, cplx>>& pairs,
                                       const std::vector<double>& alphas, const Weights1D& q1, const Weights1D& q2);

// q(n) = q1(n1) q2(n2) on Z^2.
double hs_norm_2d(const Weights1D& q1, const Weights1D& q2, cplx lambda);
double op_norm_2d(const Weights1D& q1, const Weights1D& q2, cplx lambda);
double log_envelope(cplx lambda);

struct LogEnvelopeOptions {
  std::vector<double> thresholds{0.0, 1.0, 2.0};
  std::vector<double> calibration_eps{1e-1, 1e-2};
  std::vector<double> check_eps{1e-1, 1e-2, 1e-3, 1e-4};
  // Extra calibration points away from the thresholds (none by default: a bulk point where the
  // envelope is small would dominate C and make the ladder check vacuous).
  std::vector<cplx> bulk;
};

// Calibrates C = max ratio ||q R0 q||_HS / (||q1||^2 ||q2||^2 |log(l(l-1)(l-2))|) on the calibration set,
// then checks the ladders t + i eps against that fixed C.
BoundReport verify_d2_log_bound(const Weights1D& q1, const Weights1D& q2, const LogEnvelopeOptions& opt = {});

// Runs the default d = 1 or d = 2 verifier on the given samples.
BoundReport verify_default_bounds(int d, const std::vector<cplx>& lambdas, const Weights1D& q1, const Weights1D& q2);

}  // namespace lattice
