#pragma once

#include "lattice/finite_rank.hpp"

#include <string>
#include <vector>

namespace lattice {

struct SurfacePoint {
  std::vector<double> x;  // point of M_lambda on the torus
  double jac = 0;         // J(sqrt(lambda) theta) = prod 2/sqrt(1 - lambda theta_j^2)
};

// x_j = 2 arcsin(sqrt(lambda) theta_j). Throws if a component leaves the chart.
SurfacePoint surface_point(double lambda, const std::vector<double>& theta);
bool in_chart(double lambda, const std::vector<double>& theta);

// Density of dM/|grad h| with respect to d theta: (sqrt lambda)^{d-2} J / 2.
double surface_density(double lambda, const std::vector<double>& theta);

cplx psi0(const LatticePoint& n, double lambda, const std::vector<double>& theta);

struct SurfaceGrid {
  int dim = 0;
  double lambda = 0;
  std::vector<std::vector<double>> nodes;  // unit vectors
  std::vector<bool> excluded;              // outside the chart, i.e. not on M_lambda
  std::vector<double> dtheta;              // quadrature weights on the sphere
  std::vector<double> weights;             // dtheta * surface density, 0 when excluded
  double coverage = 1;                     // fraction of the sphere measure inside the chart
};

// d = 1: theta = +-1. d = 2: n uniform angles. d = 3: n Gauss-Legendre polar x 2n uniform azimuthal nodes.
SurfaceGrid make_surface_grid(int d, double lambda, int n);
inline int default_grid_size(int d) { return d == 3 ? 32 : 256; }

// int_{M_lambda} dM/|grad h| for d = 2 by the coarea formula: d/dt |{h < t}| at t = lambda.
double surface_measure_coarea_2d(double lambda);

cplx born_amplitude(const Potential& v, double lambda, const std::vector<double>& theta,
                    const std::vector<double>& theta_p);
// Born term minus the remainder built from R(lambda + i0); kernel as a density in (theta, theta').
cplx full_amplitude(const Potential& v, double lambda, const std::vector<double>& theta,
                    const std::vector<double>& theta_p);

struct SMatrixPanel {
  SurfaceGrid grid;
  Eigen::MatrixXcd amplitude;  // kernel A(theta_i, theta_j) on the nodes
  Eigen::MatrixXcd smatrix;    // I - 2 pi i K W with K = A / (w_i w_j) the kernel against dM/|grad h|
  cplx det_s = 1;
  double defect = 0;  // || U*U - I ||_2 with U = W^{1/2} S W^{-1/2}
};

// allow_partial_chart permits excluded nodes (lambda > 1); their weight is zero.
SMatrixPanel s_matrix(const Potential& v, double lambda, const SurfaceGrid& grid, bool allow_partial_chart = false);

// det(I - 2 pi i T Pi) on supp V with T = V (I + R0(lambda + i0) V)^{-1}, Pi = Im R0(lambda + i0) / pi.
cplx det_s(const Potential& v, double lambda);

// Binary dump: "SMAT", u32 d, u32 N, f64 lambda, then N*N complex entries row-major (little-endian).
void write_smat(const std::string& path, const SMatrixPanel& panel);
SMatrixPanel read_smat(const std::string& path);

}  // namespace lattice
