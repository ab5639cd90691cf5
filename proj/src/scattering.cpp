#include "lattice/scattering.hpp"

#include "lattice/io.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <numbers>

namespace lattice {

namespace {

constexpr double kPi = std::numbers::pi;

void check_energy(int d, double lambda) {
  if (!(lambda > 0 && lambda < d)) throw ValidationError("scattering energy must lie inside the band");
}

// Gauss-Legendre nodes and weights on [-1, 1] (Golub-Welsch).
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) j(i, i - 1) = j(i - 1, i) = i / std::sqrt(4.0 * i * i - 1.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    x[i] = es.eigenvalues()(i);
    w[i] = 2 * es.eigenvectors()(0, i) * es.eigenvectors()(0, i);
  }
}

// Support sites of V and the phase vectors a(n) = e^{-i n.x} on them.
Eigen::VectorXcd phases(const std::vector<LatticePoint>& sites, const std::vector<double>& x, double sign) {
  Eigen::VectorXcd a(sites.size());
  for (size_t s = 0; s < sites.size(); ++s) {
    double dot = 0;
    for (size_t j = 0; j < x.size(); ++j) dot += sites[s][static_cast<int>(j)] * x[j];
    a(s) = std::polar(1.0, sign * dot);
  }
  return a;
}

}  // namespace

bool in_chart(double lambda, const std::vector<double>& theta) {
  for (double t : theta)
    if (std::abs(std::sqrt(lambda) * t) >= 1) return false;
  return true;
}

SurfacePoint surface_point(double lambda, const std::vector<double>& theta) {
  if (!(lambda > 0)) throw ValidationError("energy must be positive");
  if (!in_chart(lambda, theta)) throw ValidationError("sqrt(lambda) theta leaves the chart [-1,1]^d");
  SurfacePoint p;
  p.jac = 1;
  for (double t : theta) {
    const double y = std::sqrt(lambda) * t;
    p.x.push_back(2 * std::asin(y));
    p.jac *= 2 / std::sqrt(1 - y * y);
  }
  return p;
}

double surface_density(double lambda, const std::vector<double>& theta) {
  const int d = static_cast<int>(theta.size());
  return std::pow(std::sqrt(lambda), d - 2) * surface_point(lambda, theta).jac / 2;
}

cplx psi0(const LatticePoint& n, double lambda, const std::vector<double>& theta) {
  const int d = static_cast<int>(theta.size());
  if (n.dim() != d) throw ValidationError("dimension mismatch");
  const SurfacePoint p = surface_point(lambda, theta);
  double dot = 0;
  for (int j = 0; j < d; ++j) dot += n[j] * p.x[j];
  return std::pow(2 * kPi, -d / 2.0) * surface_density(lambda, theta) * std::polar(1.0, dot);
}

SurfaceGrid make_surface_grid(int d, double lambda, int n) {
  check_energy(d, lambda);
  SurfaceGrid g;
  g.dim = d;
  g.lambda = lambda;
  if (d == 1) {
    g.nodes = {{1.0}, {-1.0}};
    g.dtheta = {1.0, 1.0};
  } else if (d == 2) {
    if (n < 4) throw ValidationError("grid too small");
    for (int k = 0; k < n; ++k) {
      const double phi = 2 * kPi * k / n;
      g.nodes.push_back({std::cos(phi), std::sin(phi)});
      g.dtheta.push_back(2 * kPi / n);
    }
  } else if (d == 3) {
    if (n < 2) throw ValidationError("grid too small");
    std::vector<double> ct, wt;
    gauss_legendre(n, ct, wt);
    const int m = 2 * n;
    for (int i = 0; i < n; ++i) {
      const double st = std::sqrt(1 - ct[i] * ct[i]);
      for (int k = 0; k < m; ++k) {
        const double phi = 2 * kPi * (k + 0.5) / m;
        g.nodes.push_back({st * std::cos(phi), st * std::sin(phi), ct[i]});
        g.dtheta.push_back(wt[i] * 2 * kPi / m);
      }
    }
  } else {
    throw ValidationError("surface grids exist for d = 1, 2, 3");
  }
  double inside = 0, total = 0;
  for (size_t k = 0; k < g.nodes.size(); ++k) {
    const bool ex = !in_chart(lambda, g.nodes[k]);
    g.excluded.push_back(ex);
    g.weights.push_back(ex ? 0.0 : g.dtheta[k] * surface_density(lambda, g.nodes[k]));
    total += g.dtheta[k];
    if (!ex) inside += g.dtheta[k];
  }
  g.coverage = inside / total;
  return g;
}

double surface_measure_coarea_2d(double t) {
  check_energy(2, t);
  // The x2-section {cos x2 > c}, c = 2 - 2t - cos x1, is a proper arc when cos x1 lies in (1 - 2t, 3 - 2t).
  // Its length 2 acos(c) has t-derivative 4/sqrt((1-c)(1+c)); both factors are written as sine products
  // near the endpoints to avoid cancellation.
  const double up = 1 - 2 * t, dn = 3 - 2 * t;
  const double lo = dn < 1 ? std::acos(dn) : 0.0, hi = up > -1 ? std::acos(up) : kPi;
  auto one_minus_c = [&](double x) {  // cos x - up
    return up > -1 ? 2 * std::sin((hi + x) / 2) * std::sin((hi - x) / 2) : std::cos(x) - up;
  };
  auto one_plus_c = [&](double x) {  // dn - cos x
    return dn < 1 ? 2 * std::sin((x + lo) / 2) * std::sin((x - lo) / 2) : dn - std::cos(x);
  };
  // x = lo + (hi - lo)(1 - cos u)/2 absorbs the inverse square-root endpoint singularities
  auto f = [&](double u) {
    const double x = lo + (hi - lo) * (1 - std::cos(u)) / 2;
    const double jac = (hi - lo) * std::sin(u) / 2;
    const double prod = one_minus_c(x) * one_plus_c(x);
    return prod > 0 ? 4 * jac / std::sqrt(prod) : 0.0;
  };
  return 2 * boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, 0.0, kPi, 15, 1e-12);
}

cplx born_amplitude(const Potential& v, double lambda, const std::vector<double>& theta,
                    const std::vector<double>& theta_p) {
  const int d = v.dim();
  const SurfacePoint p = surface_point(lambda, theta), q = surface_point(lambda, theta_p);
  cplx s = 0;
  for (const auto& [n, x] : v.entries()) {
    double dot = 0;
    for (int j = 0; j < d; ++j) dot += n[j] * (p.x[j] - q.x[j]);
    s += std::polar(x, -dot);
  }
  return std::pow(2 * kPi, -d) * std::pow(lambda, d - 2) / 4 * p.jac * q.jac * s;
}

cplx full_amplitude(const Potential& v, double lambda, const std::vector<double>& theta,
                    const std::vector<double>& theta_p) {
  const int d = v.dim();
  check_energy(d, lambda);
  const auto sites = declared_support(v);
  if (sites.empty()) return 0;
  const FullResolvent fr(v, EnergyPoint::plus(lambda));
  const SurfacePoint p = surface_point(lambda, theta), q = surface_point(lambda, theta_p);
  const Eigen::VectorXcd a = phases(sites, p.x, -1), b = phases(sites, q.x, 1);
  const cplx k0 = std::pow(2 * kPi, -d) * (a.transpose() * fr.t_matrix() * b)(0, 0);
  return surface_density(lambda, theta) * surface_density(lambda, theta_p) * k0;
}

SMatrixPanel s_matrix(const Potential& v, double lambda, const SurfaceGrid& grid, bool allow_partial_chart) {
  const int d = v.dim();
  if (grid.dim != d || grid.lambda != lambda) throw ValidationError("surface grid does not match the energy");
  bool any_excluded = false;
  for (bool e : grid.excluded) any_excluded = any_excluded || e;
  if (any_excluded && !allow_partial_chart) throw ValidationError("grid has nodes outside the chart");
  SMatrixPanel panel;
  panel.grid = grid;
  const int n = static_cast<int>(grid.nodes.size());
  std::vector<int> idx;
  for (int k = 0; k < n; ++k)
    if (!grid.excluded[k]) idx.push_back(k);
  const int m = static_cast<int>(idx.size());
  const auto sites = declared_support(v);

  Eigen::MatrixXcd k0 = Eigen::MatrixXcd::Zero(m, m);
  Eigen::VectorXd dens(m), w(m);
  if (!sites.empty()) {
    const FullResolvent fr(v, EnergyPoint::plus(lambda));
    Eigen::MatrixXcd pa(sites.size(), m), pb(sites.size(), m);
    for (int i = 0; i < m; ++i) {
      const SurfacePoint p = surface_point(lambda, grid.nodes[idx[i]]);
      pa.col(i) = phases(sites, p.x, -1);
      pb.col(i) = phases(sites, p.x, 1);
    }
    k0 = std::pow(2 * kPi, -d) * pa.transpose() * fr.t_matrix() * pb;
  }
  for (int i = 0; i < m; ++i) {
    dens(i) = surface_density(lambda, grid.nodes[idx[i]]);
    w(i) = grid.weights[idx[i]];
  }
  panel.amplitude = dens.asDiagonal() * k0 * dens.asDiagonal();
  const cplx tpi(0, 2 * kPi);
  panel.smatrix = Eigen::MatrixXcd::Identity(m, m) - tpi * k0 * w.asDiagonal();
  panel.det_s = panel.smatrix.determinant();
  const Eigen::VectorXd sw = w.cwiseSqrt();
  const Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(m, m) - tpi * (sw.asDiagonal() * k0 * sw.asDiagonal());
  const Eigen::MatrixXcd e = u.adjoint() * u - Eigen::MatrixXcd::Identity(m, m);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(e, Eigen::EigenvaluesOnly);
  panel.defect = es.eigenvalues().cwiseAbs().maxCoeff();
  return panel;
}

cplx det_s(const Potential& v, double lambda) {
  const int d = v.dim();
  check_energy(d, lambda);
  const auto sites = declared_support(v);
  if (sites.empty()) return 1;
  const FullResolvent fr(v, EnergyPoint::plus(lambda));
  const Eigen::MatrixXd pi_m = fr.r0_block().imag() / kPi;
  const int n = static_cast<int>(sites.size());
  const Eigen::MatrixXcd m =
      Eigen::MatrixXcd::Identity(n, n) - cplx(0, 2 * kPi) * fr.t_matrix() * pi_m.cast<cplx>();
  return m.determinant();
}

void write_smat(const std::string& path, const SMatrixPanel& panel) {
  static_assert(std::endian::native == std::endian::little, "SMAT dumps are written on little-endian hosts");
  std::string buf = "SMAT";
  auto put = [&buf](const void* p, size_t n) { buf.append(static_cast<const char*>(p), n); };
  const std::uint32_t d = panel.grid.dim, n = static_cast<std::uint32_t>(panel.smatrix.rows());
  const double lambda = panel.grid.lambda;
  put(&d, 4);
  put(&n, 4);
  put(&lambda, 8);
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = 0; j < n; ++j) {
      const double re = panel.smatrix(i, j).real(), im = panel.smatrix(i, j).imag();
      put(&re, 8);
      put(&im, 8);
    }
  atomic_write(path, buf);
}

SMatrixPanel read_smat(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path);
  char magic[4];
  std::uint32_t d = 0, n = 0;
  double lambda = 0;
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(&d), 4);
  in.read(reinterpret_cast<char*>(&n), 4);
  in.read(reinterpret_cast<char*>(&lambda), 8);
  if (!in || std::memcmp(magic, "SMAT", 4) != 0) throw ValidationError("not an SMAT file");
  SMatrixPanel p;
  p.grid.dim = static_cast<int>(d);
  p.grid.lambda = lambda;
  p.smatrix.resize(n, n);
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = 0; j < n; ++j) {
      double re = 0, im = 0;
      in.read(reinterpret_cast<char*>(&re), 8);
      in.read(reinterpret_cast<char*>(&im), 8);
      p.smatrix(i, j) = {re, im};
    }
  if (!in) throw ValidationError("truncated SMAT file");
  return p;
}

}  // namespace lattice
