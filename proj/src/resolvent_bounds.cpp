#include "lattice/resolvent_bounds.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace lattice {

bool BoundReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const BoundCheck& c) { return c.pass; });
}

double l2_norm(const Weights1D& q) {
  double s = 0;
  for (const auto& [n, x] : q) s += x * x;
  return std::sqrt(s);
}

namespace {

void require_off_cut_1d(cplx l) {
  if (l.imag() == 0.0 && l.real() >= 0.0 && l.real() <= 1.0) throw ValidationError("lambda on the d=1 spectrum");
}

// Segment [a, b] avoids [0, 1].
bool segment_off_cut(cplx a, cplx b) {
  if (a.imag() * b.imag() > 0) return true;
  if (a.imag() == b.imag()) {
    if (a.imag() != 0) return true;
    const double lo = std::min(a.real(), b.real()), hi = std::max(a.real(), b.real());
    return hi < 0 || lo > 1;
  }
  const double t = a.imag() / (a.imag() - b.imag());
  const double x = a.real() + t * (b.real() - a.real());
  return x < 0 || x > 1;
}

std::string fmt(cplx l) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "(%.6g%+.6gi)", l.real(), l.imag());
  return buf;
}

// Saturated cases agree to rounding; near thresholds z(lambda) loses about 1e-11 relative.
BoundCheck make(std::string name, double lhs, double rhs, double rel_slack = 1e-10) {
  return {std::move(name), lhs, rhs, lhs <= rhs * (1 + rel_slack) + 1e-300};
}

}  // namespace

double hs_norm_1d(const Weights1D& q1, const Weights1D& q2, cplx lambda) {
  require_off_cut_1d(lambda);
  double s = 0;
  for (const auto& [n, a] : q1)
    for (const auto& [m, b] : q2) s += std::norm(a * r0_1d_closed(n - m, lambda) * b);
  return std::sqrt(s);
}

double hs_difference_1d(const Weights1D& q1, const Weights1D& q2, cplx l, cplx l1, double alpha) {
  require_off_cut_1d(l);
  require_off_cut_1d(l1);
  auto rho = [alpha](int n) { return std::pow(1.0 + double(n) * n, -alpha / 2); };
  double s = 0;
  for (const auto& [n, a] : q1)
    for (const auto& [m, b] : q2)
      s += std::norm(rho(n) * a * (r0_1d_closed(n - m, l) - r0_1d_closed(n - m, l1)) * rho(m) * b);
  return std::sqrt(s);
}

double holder_m(cplx l, cplx l1) {
  auto u = [](cplx v) { return std::sqrt(v * (v - 1.0)); };
  const double mx = holder_u_prime_max(l, l1);
  return (1 + 2 * mx) * (1 + 1 / std::abs(u(l)) + 1 / std::abs(u(l1)));
}

double holder_u_prime_max(cplx l, cplx l1) {
  double mx = 0;
  constexpr int kSamples = 4000;
  for (int i = 0; i <= kSamples; ++i) {
    const cplx v = l + (l1 - l) * (double(i) / kSamples);
    mx = std::max(mx, std::abs(2.0 * v - 1.0) / (2.0 * std::abs(std::sqrt(v * (v - 1.0)))));
  }
  return mx;
}

double holder_n(cplx l, cplx l1) {
  // 1/u on the analytic branch over the cut plane is r0(0, .) up to a global sign
  return std::abs(r0_1d_closed(0, l) - r0_1d_closed(0, l1));
}

BoundReport verify_d1_hs_bound(const std::vector<cplx>& lambdas, const Weights1D& q1, const Weights1D& q2) {
  BoundReport rep;
  const double qq = l2_norm(q1) * l2_norm(q2);
  for (cplx l : lambdas) {
    const double lhs = hs_norm_1d(q1, q2, l);
    const double rhs = qq / std::abs(std::sqrt(l * (l - 1.0)));
    rep.checks.push_back(make("d1_hs lambda=" + fmt(l), lhs, rhs));
  }
  return rep;
}

BoundReport verify_d1_holder_bound(const std::vector<std::pair<cplx, cplx>>& pairs, const std::vector<double>& alphas,
                                   const Weights1D& q1, const Weights1D& q2) {
  BoundReport rep;
  const double qq = l2_norm(q1) * l2_norm(q2);
  for (auto [l, l1] : pairs) {
    if (!segment_off_cut(l, l1)) throw ValidationError("segment between the two energies meets the spectrum");
    const double m = holder_m(l, l1), n = holder_n(l, l1);
    for (double a : alphas) {
      if (a < 0 || a > 1) throw ValidationError("Hoelder exponent must lie in [0,1]");
      const double lhs = hs_difference_1d(q1, q2, l, l1, a);
      const double rhs = std::pow(std::abs(l - l1), a) * std::pow(m, a) * std::pow(n, 1 - a) * qq;
      char buf[32];
      std::snprintf(buf, sizeof buf, " alpha=%.3g", a);
      rep.checks.push_back(make("d1_holder " + fmt(l) + "," + fmt(l1) + buf, lhs, rhs));
    }
  }
  return rep;
}

namespace {

Eigen::MatrixXcd weighted_block_2d(const Weights1D& q1, const Weights1D& q2, cplx lambda) {
  std::vector<LatticePoint> sites;
  std::vector<double> w;
  for (const auto& [a, x] : q1)
    for (const auto& [b, y] : q2) {
      sites.push_back({a, b});
      w.push_back(x * y);
    }
  FreeResolvent r0(2, EnergyPoint::off_axis(lambda));
  const int n = static_cast<int>(sites.size());
  Eigen::MatrixXcd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = w[i] * r0(sites[i] - sites[j]) * w[j];
  return m;
}

}  // namespace

double hs_norm_2d(const Weights1D& q1, const Weights1D& q2, cplx lambda) {
  return weighted_block_2d(q1, q2, lambda).norm();
}

double op_norm_2d(const Weights1D& q1, const Weights1D& q2, cplx lambda) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(weighted_block_2d(q1, q2, lambda));
  return svd.singularValues()(0);
}

double log_envelope(cplx l) { return std::abs(std::log(l * (l - 1.0) * (l - 2.0))); }

BoundReport verify_d2_log_bound(const Weights1D& q1, const Weights1D& q2, const LogEnvelopeOptions& opt) {
  BoundReport rep;
  const double qq = std::pow(l2_norm(q1) * l2_norm(q2), 2);
  auto ratio = [&](cplx l) { return hs_norm_2d(q1, q2, l) / (qq * log_envelope(l)); };
  double c = 0;
  for (double t : opt.thresholds)
    for (double e : opt.calibration_eps) c = std::max(c, ratio(cplx(t, e)));
  for (cplx l : opt.bulk) c = std::max(c, ratio(l));
  rep.calibrated_constant = c;
  for (double t : opt.thresholds)
    for (double e : opt.check_eps) {
      const cplx l(t, e);
      const double lhs = hs_norm_2d(q1, q2, l);
      rep.checks.push_back(make("d2_log lambda=" + fmt(l), lhs, c * qq * log_envelope(l)));
    }
  return rep;
}

double holder_corrected_rhs(const Weights1D& q1, const Weights1D& q2, cplx l, cplx l1, double alpha) {
  const double du = holder_u_prime_max(l, l1);
  const double iu = std::abs(r0_1d_closed(0, l)), iu1 = std::abs(r0_1d_closed(0, l1));  // 1/|u|
  const double dl = std::abs(l - l1);
  auto rho = [alpha](int n) { return std::pow(1.0 + double(n) * n, -alpha / 2); };
  double s = 0;
  for (const auto& [n, a] : q1)
    for (const auto& [m, b] : q2) {
      const double k = std::abs(n - m);
      // both orderings of the splitting are valid; keep the smaller
      const double p = dl * std::min(2 * k * (1 + du) * iu + du * iu * iu1, 2 * k * (1 + du) * iu1 + du * iu * iu1);
      const double bound = std::pow(p, alpha) * std::pow(iu + iu1, 1 - alpha);
      s += std::pow(rho(n) * a * bound * rho(m) * b, 2);
    }
  return std::sqrt(s);
}

BoundReport verify_d1_holder_corrected(const std::vector<std::pair<cplx, cplx>>& pairs,
                                       const std::vector<double>& alphas, const Weights1D& q1, const Weights1D& q2) {
  BoundReport rep;
  for (auto [l, l1] : pairs) {
    if (!segment_off_cut(l, l1)) throw ValidationError("segment between the two energies meets the spectrum");
    for (double a : alphas) {
      char buf[32];
      std::snprintf(buf, sizeof buf, " alpha=%.3g", a);
      rep.checks.push_back(make("d1_holder_corrected " + fmt(l) + "," + fmt(l1) + buf,
                                hs_difference_1d(q1, q2, l, l1, a), holder_corrected_rhs(q1, q2, l, l1, a)));
    }
  }
  return rep;
}

BoundReport verify_default_bounds(int d, const std::vector<cplx>& lambdas, const Weights1D& q1, const Weights1D& q2) {
  if (d == 1) {
    BoundReport rep = verify_d1_hs_bound(lambdas, q1, q2);
    std::vector<std::pair<cplx, cplx>> pairs;
    for (size_t i = 0; i + 1 < lambdas.size(); ++i)
      if (segment_off_cut(lambdas[i], lambdas[i + 1])) pairs.push_back({lambdas[i], lambdas[i + 1]});
    for (const BoundReport& h : {verify_d1_holder_bound(pairs, {0.0, 0.5, 1.0}, q1, q2),
                                 verify_d1_holder_corrected(pairs, {0.0, 0.5, 1.0}, q1, q2)})
      rep.checks.insert(rep.checks.end(), h.checks.begin(), h.checks.end());
    return rep;
  }
  if (d == 2) {
    LogEnvelopeOptions opt;
    if (!lambdas.empty()) opt.bulk = lambdas;
    return verify_d2_log_bound(q1, q2, opt);
  }
  throw ValidationError("estimate verifiers exist for d = 1 and d = 2 only");
}

}  // namespace lattice
