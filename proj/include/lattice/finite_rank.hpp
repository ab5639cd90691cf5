#pragma once

#include "lattice/free_resolvent.hpp"

#include <Eigen/Dense>

#include <optional>
#include <vector>

namespace lattice {

struct DressingMatrix {
  std::vector<LatticePoint> support;
  Eigen::MatrixXcd matrix;  // I + R0 V on the declared support
  EnergyPoint energy;
};

// Declared sites of V (entries with value zero included).
std::vector<LatticePoint> declared_support(const Potential& v);

DressingMatrix dressing_matrix(const Potential& v, const EnergyPoint& e);
DressingMatrix dressing_matrix(const Potential& v, const FreeResolvent& r0);
// The other ordering, I + V R0.
Eigen::MatrixXcd dressing_matrix_left(const Potential& v, const FreeResolvent& r0);
// R0 restricted to a list of sites.
Eigen::MatrixXcd free_block(const std::vector<LatticePoint>& sites, const FreeResolvent& r0);

// Resolvent of H0 + V via the finite dressing system.
class FullResolvent {
 public:
  FullResolvent(const Potential& v, const EnergyPoint& e);
  const std::vector<LatticePoint>& support() const { return supp_; }
  // T = V (I + R0 V)^{-1} on the support.
  const Eigen::MatrixXcd& t_matrix() const { return t_; }
  const Eigen::MatrixXcd& r0_block() const { return r0ss_; }
  cplx operator()(const LatticePoint& m, const LatticePoint& n) const;
  cplx determinant() const { return det_; }
  const FreeResolvent& free() const { return r0_; }

 private:
  FreeResolvent r0_;
  std::vector<LatticePoint> supp_;
  Eigen::MatrixXcd r0ss_, t_;
  cplx det_;
};

cplx resolvent_entry(const LatticePoint& m, const LatticePoint& n, const Potential& v, const EnergyPoint& e);
cplx perturbation_determinant(const Potential& v, const EnergyPoint& e);

enum class BandSide { below, above };

struct EigenvalueRecord {
  double lambda;  // in the requested convention
  int multiplicity;
  BandSide side;
  double det_abs = 0;         // |D(lambda)| at the reported root
  int singular_count = 0;     // singular values of the dressing matrix below 1e-8
  bool cluster_flag = false;  // count jump and rank drop disagree
};

struct SpectrumResult {
  std::vector<EigenvalueRecord> eigenvalues;
  // Eigenvalues closer than the resolution limit to a band edge.
  std::vector<std::pair<BandSide, int>> unresolved;
};

struct EigenSearchOptions {
  double tolerance = 1e-11;
  double edge_gap = 1e-6;
  double edge_probe = 1e-9;
};

// Number of eigenvalues of H above lambda (lambda > band) or below lambda
// (lambda < band); lambda in the standard convention.
int eigenvalue_count_beyond(const Potential& v, double lambda_std);

SpectrumResult find_discrete_eigenvalues(const Potential& v, Convention conv, const EigenSearchOptions& opt = {});

struct OracleResult {
  std::vector<double> eigenvalues;     // box [-L, L]^d
  std::vector<double> eigenvalues_2l;  // box [-2L, 2L]^d
  double convergence = 0;              // max difference between matched eigenvalues
};

inline constexpr long kMaxOracleSites = 3'000'000;

OracleResult truncated_diagonalization_oracle(const Potential& v, int L, Convention conv);
// Eigenvalues outside the band for one box size.
std::vector<double> box_eigenvalues_outside_band(const Potential& v, int L, Convention conv);

}  // namespace lattice
