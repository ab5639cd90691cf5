#include "lattice/finite_rank.hpp"

#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <functional>

namespace lattice {

std::vector<LatticePoint> declared_support(const Potential& v) {
  std::vector<LatticePoint> s;
  for (const auto& [n, x] : v.entries()) s.push_back(n);
  return s;
}

Eigen::MatrixXcd free_block(const std::vector<LatticePoint>& sites, const FreeResolvent& r0) {
  const int n = static_cast<int>(sites.size());
  Eigen::MatrixXcd g(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) g(a, b) = g(b, a) = r0(sites[a] - sites[b]);
  return g;
}

DressingMatrix dressing_matrix(const Potential& v, const FreeResolvent& r0) {
  const auto supp = declared_support(v);
  if (supp.empty()) throw ValidationError("dressing matrix needs a nonempty potential");
  Eigen::MatrixXcd m = free_block(supp, r0);
  for (int b = 0; b < m.cols(); ++b) m.col(b) *= v(supp[b]);
  m += Eigen::MatrixXcd::Identity(m.rows(), m.cols());
  return {supp, m, r0.energy()};
}

DressingMatrix dressing_matrix(const Potential& v, const EnergyPoint& e) {
  return dressing_matrix(v, FreeResolvent(v.dim(), e));
}

Eigen::MatrixXcd dressing_matrix_left(const Potential& v, const FreeResolvent& r0) {
  const auto supp = declared_support(v);
  Eigen::MatrixXcd m = free_block(supp, r0);
  for (int a = 0; a < m.rows(); ++a) m.row(a) *= v(supp[a]);
  return m + Eigen::MatrixXcd::Identity(m.rows(), m.cols());
}

FullResolvent::FullResolvent(const Potential& v, const EnergyPoint& e)
    : r0_(v.dim(), e), supp_(declared_support(v)) {
  const int n = static_cast<int>(supp_.size());
  det_ = 1.0;
  if (n == 0) return;
  r0ss_ = free_block(supp_, r0_);
  Eigen::MatrixXcd m = r0ss_;
  Eigen::VectorXcd vd(n);
  for (int b = 0; b < n; ++b) {
    vd(b) = v(supp_[b]);
    m.col(b) *= vd(b);
  }
  m += Eigen::MatrixXcd::Identity(n, n);
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(m);
  det_ = lu.determinant();
  const double scale = m.cwiseAbs().maxCoeff();
  if (std::abs(det_) < 1e-14 * std::pow(scale, n) || lu.rcond() < 1e-14)
    throw NumericalError("dressing matrix is singular (energy is a discrete eigenvalue)");
  // T = V (I + R0 V)^{-1}, symmetric because R0 and V are
  Eigen::MatrixXcd inv = lu.inverse();
  t_ = vd.asDiagonal() * inv;
}

cplx FullResolvent::operator()(const LatticePoint& m, const LatticePoint& n) const {
  cplx r = r0_(m - n);
  const int s = static_cast<int>(supp_.size());
  if (s == 0) return r;
  Eigen::VectorXcd left(s), right(s);
  for (int a = 0; a < s; ++a) {
    left(a) = r0_(m - supp_[a]);
    right(a) = r0_(supp_[a] - n);
  }
  return r - (left.transpose() * t_ * right)(0, 0);
}

cplx resolvent_entry(const LatticePoint& m, const LatticePoint& n, const Potential& v, const EnergyPoint& e) {
  return FullResolvent(v, e)(m, n);
}

cplx perturbation_determinant(const Potential& v, const EnergyPoint& e) {
  if (declared_support(v).empty()) return 1.0;
  return dressing_matrix(v, e).matrix.determinant();
}

// ---------------------------------------------------------------------------
// Eigenvalues by inertia of A(lambda) = V^{-1} + R0(lambda) on the nonzero sites.
// A is increasing in lambda, so its negative index drops by one at every eigenvalue.

namespace {

struct InertiaCounter {
  int d;
  std::vector<LatticePoint> sites;
  Eigen::VectorXd vinv;
  int n_negative_v = 0;

  explicit InertiaCounter(const Potential& v) : d(v.dim()), sites(v.support()) {
    vinv.resize(sites.size());
    for (size_t a = 0; a < sites.size(); ++a) {
      vinv(a) = 1.0 / v(sites[a]);
      if (v(sites[a]) < 0) ++n_negative_v;
    }
  }

  Eigen::MatrixXd a_matrix(double lambda_std) const {
    FreeResolvent r0(d, EnergyPoint::off_axis(lambda_std));
    Eigen::MatrixXd a = free_block(sites, r0).real();
    a.diagonal() += vinv;
    return a;
  }

  int negatives(double lambda_std) const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a_matrix(lambda_std), Eigen::EigenvaluesOnly);
    int c = 0;
    for (int i = 0; i < es.eigenvalues().size(); ++i)
      if (es.eigenvalues()(i) < 0) ++c;
    return c;
  }

  int count(double lambda_std) const {
    if (lambda_std > d) return negatives(lambda_std) - n_negative_v;
    if (lambda_std < 0) return n_negative_v - negatives(lambda_std);
    throw ValidationError("eigenvalue count requested inside the band");
  }
};

}  // namespace

int eigenvalue_count_beyond(const Potential& v, double lambda_std) {
  if (v.support().empty()) return 0;
  return InertiaCounter(v).count(lambda_std);
}

SpectrumResult find_discrete_eigenvalues(const Potential& v, Convention conv, const EigenSearchOptions& opt) {
  SpectrumResult out;
  if (v.support().empty()) return out;
  const int d = v.dim();
  const double shift = convention_shift(conv, d);
  const double window = v.trace_norm() + 1.0;
  InertiaCounter ic(v);

  // roots as (lambda_std, multiplicity) on one side
  auto isolate = [&](double lo, double hi, int nlo, int nhi, bool above) {
    std::vector<std::pair<double, int>> roots;
    // count(l) is N_+(l) above (decreasing in l) or N_-(l) below (increasing in l)
    std::function<void(double, double, int, int)> rec = [&](double a, double b, int na, int nb) {
      if (na == nb) return;
      if (b - a < opt.tolerance) {
        roots.push_back({0.5 * (a + b), std::abs(na - nb)});
        return;
      }
      const double m = 0.5 * (a + b);
      const int nm = ic.count(m);
      rec(a, m, na, nm);
      rec(m, b, nm, nb);
    };
    rec(lo, hi, nlo, nhi);
    (void)above;
    return roots;
  };

  for (BandSide side : {BandSide::above, BandSide::below}) {
    const bool above = side == BandSide::above;
    const double edge = above ? d : 0.0;
    const double dir = above ? 1.0 : -1.0;
    const double near = edge + dir * opt.edge_gap, probe = edge + dir * opt.edge_probe;
    const double far = edge + dir * window;
    const int n_near = ic.count(near), n_far = ic.count(far), n_probe = ic.count(probe);
    if (n_far != 0) throw NumericalError("eigenvalue found beyond the search window");
    if (n_probe != n_near) out.unresolved.push_back({side, n_probe - n_near});
    auto roots = above ? isolate(near, far, n_near, n_far, true) : isolate(far, near, n_far, n_near, false);
    for (auto [lam, mult] : roots) {
      EigenvalueRecord rec{lam + shift, mult, side};
      FreeResolvent r0(d, EnergyPoint::off_axis(lam));
      Eigen::MatrixXcd m = dressing_matrix(v, r0).matrix;
      rec.det_abs = std::abs(m.determinant());
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
      for (int i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) < 1e-8) ++rec.singular_count;
      rec.cluster_flag = rec.singular_count != mult;
      out.eigenvalues.push_back(rec);
    }
  }
  std::sort(out.eigenvalues.begin(), out.eigenvalues.end(),
            [](const auto& a, const auto& b) { return a.lambda < b.lambda; });
  return out;
}

// ---------------------------------------------------------------------------
// Truncated-box oracle.

namespace {

struct Box {
  int d, L, side;
  long n;
  Box(int d_, int L_) : d(d_), L(L_), side(2 * L_ + 1), n(1) {
    for (int j = 0; j < d; ++j) n *= side;
  }
  long index(const LatticePoint& p) const {
    long idx = 0, s = 1;
    for (int j = 0; j < d; ++j) {
      idx += (p[j] + L) * s;
      s *= side;
    }
    return idx;
  }
  // neighbor index or -1 outside the box
  long neighbor(long idx, int j, int step) const {
    long s = 1;
    for (int i = 0; i < j; ++i) s *= side;
    const long c = (idx / s) % side + step;
    if (c < 0 || c >= side) return -1;
    return idx + step * s;
  }
};

std::vector<double> dense_outside(const Potential& v, const Box& box) {
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(box.n, box.n);
  for (long i = 0; i < box.n; ++i) {
    h(i, i) = 0.5 * box.d;
    for (int j = 0; j < box.d; ++j) {
      const long k = box.neighbor(i, j, 1);
      if (k >= 0) h(i, k) = h(k, i) = -0.25;
    }
  }
  for (const auto& [p, x] : v.entries()) h(box.index(p), box.index(p)) += x;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h, Eigen::EigenvaluesOnly);
  std::vector<double> out;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    const double e = es.eigenvalues()(i);
    if (e < 0.0 || e > box.d) out.push_back(e);
  }
  return out;
}

// Counts via inertia of the Schur complement onto the support.
struct SchurCounter {
  const Box& box;
  std::vector<long> supp_idx;
  std::vector<double> supp_v;
  std::vector<long> rest_pos;  // box index -> position in the rest block, or -1
  long nrest = 0;

  SchurCounter(const Potential& v, const Box& b) : box(b), rest_pos(b.n, 0) {
    for (const auto& p : v.support()) {
      supp_idx.push_back(box.index(p));
      supp_v.push_back(v(p));
      rest_pos[box.index(p)] = -1;
    }
    for (long i = 0; i < box.n; ++i)
      if (rest_pos[i] >= 0) rest_pos[i] = nrest++;
  }

  // number of eigenvalues of H_box above lambda (lambda > d) or below lambda (lambda < 0)
  int count(double lambda) const {
    const bool above = lambda > box.d;
    const double sgn = above ? -1.0 : 1.0;  // sgn * (H0 - lambda) is positive definite on the rest
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(nrest * (2 * box.d + 1));
    for (long i = 0; i < box.n; ++i) {
      const long r = rest_pos[i];
      if (r < 0) continue;
      trip.emplace_back(r, r, sgn * (0.5 * box.d - lambda));
      for (int j = 0; j < box.d; ++j)
        for (int st : {-1, 1}) {
          const long k = box.neighbor(i, j, st);
          if (k >= 0 && rest_pos[k] >= 0) trip.emplace_back(r, rest_pos[k], sgn * -0.25);
        }
    }
    Eigen::SparseMatrix<double> a11(nrest, nrest);
    a11.setFromTriplets(trip.begin(), trip.end());
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> chol(a11);
    if (chol.info() != Eigen::Success) throw NumericalError("oracle factorization failed");
    const int s = static_cast<int>(supp_idx.size());
    Eigen::MatrixXd a12 = Eigen::MatrixXd::Zero(nrest, s);
    Eigen::MatrixXd a22 = Eigen::MatrixXd::Zero(s, s);
    for (int a = 0; a < s; ++a) {
      const long i = supp_idx[a];
      a22(a, a) = sgn * (0.5 * box.d + supp_v[a] - lambda);
      for (int j = 0; j < box.d; ++j)
        for (int st : {-1, 1}) {
          const long k = box.neighbor(i, j, st);
          if (k < 0) continue;
          if (rest_pos[k] >= 0) {
            a12(rest_pos[k], a) = sgn * -0.25;
          } else {
            const auto it = std::find(supp_idx.begin(), supp_idx.end(), k);
            a22(a, it - supp_idx.begin()) = sgn * -0.25;
          }
        }
    }
    Eigen::MatrixXd x = chol.solve(a12);
    Eigen::MatrixXd schur = a22 - a12.transpose() * x;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(schur, Eigen::EigenvaluesOnly);
    // sgn*(H - lambda) has the inertia of the Schur complement plus a positive block;
    // eigenvalues beyond lambda are its negative directions
    int c = 0;
    for (int i = 0; i < s; ++i)
      if (es.eigenvalues()(i) < 0) ++c;
    return c;
  }
};

std::vector<double> sparse_outside(const Potential& v, const Box& box) {
  SchurCounter sc(v, box);
  const double window = v.trace_norm() + 1.0;
  std::vector<double> out;
  for (bool above : {false, true}) {
    const double edge = above ? box.d : 0.0, dir = above ? 1.0 : -1.0;
    const double a = edge + dir * 1e-9, b = edge + dir * window;
    std::function<void(double, double, int, int)> rec = [&](double lo, double hi, int nlo, int nhi) {
      if (nlo == nhi) return;
      if (std::abs(hi - lo) < 1e-12) {
        for (int i = 0; i < std::abs(nlo - nhi); ++i) out.push_back(0.5 * (lo + hi));
        return;
      }
      const double m = 0.5 * (lo + hi);
      const int nm = sc.count(m);
      rec(lo, m, nlo, nm);
      rec(m, hi, nm, nhi);
    };
    rec(a, b, sc.count(a), sc.count(b));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<double> box_eigenvalues_outside_band(const Potential& v, int L, Convention conv) {
  const int d = v.dim();
  Box box(d, L);
  if (static_cast<double>(box.n) > kMaxOracleSites) throw ResourceError("oracle box too large for memory guard");
  if (v.max_abs_coord() > L) throw ValidationError("box does not contain the potential support");
  std::vector<double> ev = box.n <= 2000 ? dense_outside(v, box) : sparse_outside(v, box);
  for (double& e : ev) e += convention_shift(conv, d);
  return ev;
}

OracleResult truncated_diagonalization_oracle(const Potential& v, int L, Convention conv) {
  if (L < 50 + v.max_abs_coord()) throw ValidationError("oracle box half-width must be at least 50 plus support radius");
  OracleResult r;
  r.eigenvalues = box_eigenvalues_outside_band(v, L, conv);
  r.eigenvalues_2l = box_eigenvalues_outside_band(v, 2 * L, conv);
  if (r.eigenvalues.size() != r.eigenvalues_2l.size()) {
    r.convergence = INFINITY;
  } else {
    for (size_t i = 0; i < r.eigenvalues.size(); ++i)
      r.convergence = std::max(r.convergence, std::abs(r.eigenvalues[i] - r.eigenvalues_2l[i]));
  }
  return r;
}

}  // namespace lattice
