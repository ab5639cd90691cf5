#pragma once

// Reconstruction of a finitely supported potential from the analytically continued
// scattering amplitude B(z; theta, theta') along z_N = N + i.

#include "lattice/hp.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace lattice {

using HpPotential = std::map<LatticePoint, hp::real>;

HpPotential to_hp(const Potential& v);
HpPotential to_hp(const RationalPotential& v);
Potential to_potential(int d, const HpPotential& v);

struct ComplexAngleData {
  hp::complex z;
  std::vector<double> theta;        // all components > 0
  std::vector<double> theta_prime;  // all components < 0
  hp::complex value;
};

// zeta_j = 2 arcsin(z theta_j) on the principal branch. Throws ValidationError on a cut.
std::vector<hp::complex> zeta(const hp::complex& z, const std::vector<double>& theta);

// e^{-i zeta_j(z, theta)} = (s - i w)^2 with w = z theta_j, s = sqrt(1 - w^2); no logarithms involved.
std::vector<hp::complex> phase_minus(const hp::complex& z, const std::vector<double>& theta);
// e^{+i zeta_j(z, theta)} = (s + i w)^2.
std::vector<hp::complex> phase_plus(const hp::complex& z, const std::vector<double>& theta);

// Forward model B = a^T V (I + R0(z^2) V)^{-1} b with a_n = e^{-i n.zeta(z,theta)}, b_n = e^{i n.zeta(z,theta')}.
// R0(z^2) comes from the exact series coefficients summed in high precision (|z^2| > d).
class ForwardModel {
 public:
  ForwardModel(int d, int digits);
  int dim() const { return d_; }
  int digits() const { return digits_; }

  struct Result {
    hp::complex value;
    std::vector<hp::complex> gradient;  // dB / dV(n) for the requested sites
  };
  // Call under an hp::Precision guard of at least digits().
  Result evaluate(const HpPotential& v, const hp::complex& z, const std::vector<double>& theta,
                  const std::vector<double>& theta_p, const std::vector<LatticePoint>& grad_sites = {}) const;
  // r0(k, w) by the series; cached per (w, k).
  const hp::complex& r0(const LatticePoint& k, const hp::complex& w) const;

 private:
  int d_, digits_;
  mutable std::map<LatticePoint, std::vector<hp::real>> coeff_;
  mutable std::map<std::pair<std::string, std::string>, std::map<LatticePoint, hp::complex>> cache_;
};

// Data oracle B(z; theta, theta') for a potential, computed at the given precision.
hp::complex synth_forward_B(const HpPotential& v, int d, const hp::complex& z, const std::vector<double>& theta,
                            const std::vector<double>& theta_p, int digits = 60);
hp::complex synth_forward_B(const Potential& v, cplx z, const std::vector<double>& theta,
                            const std::vector<double>& theta_p, int digits = 60);

// Pair (theta, theta') with theta_j theta'_j = t_j, theta in S_+, theta' in S_-.
struct AnglePair {
  std::vector<double> theta, theta_prime, t;
};
// Requires t_j < 0 and sum |t_j| < 1 (d >= 2); d = 1 only admits t = -1. Throws ValidationError otherwise.
AnglePair angle_pair_for(const std::vector<double>& t);

struct SampleDesign {
  int per_axis = 4;
  double t_min = 0.1;  // |t_j| runs geometrically over [t_min, t_max]
  double t_max = 0.6;
};
// Tensor-product points; infeasible ones (sum |t_j| >= 1) are dropped.
std::vector<AnglePair> design_samples(int d, const SampleDesign& design = {});

std::vector<LatticePoint> layer_sites(int d, int m, int p);

using BEvaluator =
    std::function<hp::complex(const hp::complex& z, const std::vector<double>& theta, const std::vector<double>& theta_p)>;

struct ReconstructionConfig {
  int digits = 60;
  std::vector<double> ladder{1024, 2048, 4096, 8192, 16384};
  int fit_order = 3;
  SampleDesign design;
  std::vector<AnglePair> samples;  // overrides design when non-empty
  double condition_limit = 1e12;
  double fit_tolerance = 1e-6;
  // Joint Gauss-Newton refinement of all recovered layers against the forward model after each layer.
  bool refine = true;
  int refine_iterations = 8;
};

struct ReconstructionState {
  int d = 0;
  int m = 0;
  int p = 0;
  HpPotential recovered;  // layers S(n) > p
  int digits = 60;
};

struct LayerFit {
  int p = 0;
  HpPotential values;
  int samples = 0;
  double condition = 0;     // monomial system
  double fit_residual = 0;  // worst polynomial-in-1/N fit residual, relative to max(1, |leading coefficient|)
  double max_imag = 0;      // largest imaginary part of a fitted leading coefficient
  double solve_residual = 0;
  bool fit_ok = true;
};

// Leading coefficient of (2N)^{-4p} * g(N) by a least-squares polynomial fit in 1/N.
hp::complex fit_leading(const std::vector<double>& ladder, const std::vector<hp::complex>& g, int order,
                        double* relative_residual = nullptr);

// Solves sum_{S(n)=p} prod t_j^{2 n_j} V(n) = c(sample) for the layer unknowns.
HpPotential solve_layer_monomials(int d, int m, int p, const std::vector<AnglePair>& samples,
                                  const std::vector<hp::complex>& c, double* condition = nullptr,
                                  double* residual = nullptr);

// One step of the layer recursion. Throws NumericalError when the monomial system is
// ill-conditioned; the fit residual is reported in LayerFit::fit_ok.
LayerFit layer_extract(const ReconstructionState& state, const BEvaluator& b, const std::vector<AnglePair>& samples,
                       const ReconstructionConfig& config);

struct RefineReport {
  int iterations = 0;
  double weighted_residual = 0;  // relative to the data
  double last_step = 0;          // max |update|
};

struct ReconstructionResult {
  Potential potential;
  HpPotential values;
  std::vector<LayerFit> layers;
  std::vector<RefineReport> refinements;  // one per layer when refine is on
  bool complete = false;
  std::string failure;
};

ReconstructionResult reconstruct(const BEvaluator& b, int d, int m, const ReconstructionConfig& config = {});

// Data tables (JSON lines {"z":[re,im],"theta":[...],"theta_prime":[...],"B":[re,im]};
// numbers or decimal strings are accepted, strings keep full precision).
std::vector<ComplexAngleData> read_angle_data(const std::string& path, int digits = 60);
void write_angle_data(const std::string& path, const std::vector<ComplexAngleData>& data, int digits = 60);

// Evaluator backed by a data table; looks records up by (N, theta, theta').
class AngleDataTable {
 public:
  explicit AngleDataTable(std::vector<ComplexAngleData> data);
  BEvaluator evaluator() const;
  std::vector<double> ladder() const;
  std::vector<AnglePair> samples() const;
  int dim() const;

 private:
  std::vector<ComplexAngleData> data_;
};

// Synthesizes the full (samples x ladder) table for a potential.
std::vector<ComplexAngleData> synthesize_table(const HpPotential& v, int d, const ReconstructionConfig& config);

// Evaluator multiplying each value by (1 + eta g) with g a seeded complex normal variate.
BEvaluator with_relative_noise(BEvaluator b, double eta, std::uint64_t seed);

}  // namespace lattice
