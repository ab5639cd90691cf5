#include "lattice/free_resolvent.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <functional>
#include <cmath>
#include <numbers>

namespace lattice {

namespace {
constexpr double kPi = std::numbers::pi;

bool on_band(cplx lambda_std, int d) {
  return lambda_std.imag() == 0.0 && lambda_std.real() >= 0.0 && lambda_std.real() <= d;
}

double dist_to_band(cplx l, int d) {
  const double x = std::clamp(l.real(), 0.0, double(d));
  return std::abs(l - cplx(x, 0));
}
}  // namespace

std::string to_string(KernelMethod m) {
  switch (m) {
    case KernelMethod::series: return "series";
    case KernelMethod::quadrature: return "quadrature";
    case KernelMethod::closed_form_1d: return "closed-form-1d";
    case KernelMethod::boundary_extrapolation: return "boundary-extrapolation";
    case KernelMethod::nested: return "nested";
  }
  return "?";
}

void EnergyPoint::validate(int d) const {
  const cplx ls = standard(d);
  if (!std::isfinite(ls.real()) || !std::isfinite(ls.imag())) throw ValidationError("energy must be finite");
  if (side == Side::off_axis) {
    if (on_band(ls, d))
      throw ValidationError("energy lies on the spectrum [0,d]; a boundary side (plus/minus) is required");
  } else {
    if (ls.imag() != 0.0) throw ValidationError("boundary energies must be real");
    if (!(ls.real() > 0.0 && ls.real() < d)) throw ValidationError("boundary energy must lie inside the band");
  }
}

// ---------------------------------------------------------------------------

cplx lambda_of_z(cplx z) {
  if (z == cplx(0)) throw ValidationError("lambda_of_z: z = 0");
  return (2.0 - z - 1.0 / z) / 4.0;
}

UniformizingCoord inverse_joukowski(cplx lambda) {
  if (lambda.imag() == 0.0 && lambda.real() >= 0.0 && lambda.real() <= 1.0)
    throw ValidationError("inverse_joukowski: lambda on the cut [0,1]");
  const cplx b = 2.0 - 4.0 * lambda;
  const cplx disc = std::sqrt(b * b - 4.0);
  const cplx q1 = (b + disc) / 2.0, q2 = (b - disc) / 2.0;
  const cplx q = std::abs(q1) >= std::abs(q2) ? q1 : q2;
  const cplx z = 1.0 / q;
  if (!(std::abs(z) < 1.0)) throw NumericalError("inverse_joukowski: no root inside the unit disk");
  const double err = std::abs(lambda_of_z(z) - lambda);
  if (err > 1e-12 * (1.0 + std::abs(lambda))) throw NumericalError("inverse_joukowski: round trip failed");
  return {z, lambda};
}

// ---------------------------------------------------------------------------
// Series coefficients.

std::map<LatticePoint, Rational> cs_coefficients(int d, int s) {
  if (d < 1) throw ValidationError("dimension must be >= 1");
  if (s < 0) throw ValidationError("s must be >= 0");
  if (s > kMaxExactCoefficientOrder) throw ResourceError("cs_coefficients: s exceeds 40");
  std::map<LatticePoint, Rational> cur{{LatticePoint::zero(d), Rational(1)}};
  const Rational half_d(d, 2), quarter(1, 4);
  for (int it = 0; it < s; ++it) {
    std::map<LatticePoint, Rational> nxt;
    for (const auto& [k, c] : cur) {
      nxt[k] += half_d * c;
      for (int j = 0; j < d; ++j) {
        nxt[k.shifted(j, 1)] -= quarter * c;
        nxt[k.shifted(j, -1)] -= quarter * c;
      }
    }
    cur.swap(nxt);
  }
  std::map<LatticePoint, Rational> out;
  for (auto& [k, c] : cur)
    if (c != 0) out[k] = -c;
  return out;
}

static Rational binom_exact(int n, int r) {
  if (r < 0 || r > n) return Rational(0);
  boost::multiprecision::mpz_int b = 1;
  r = std::min(r, n - r);
  for (int i = 1; i <= r; ++i) b = b * (n - r + i) / i;
  return Rational(b);
}

// Coefficient of w^k in h1(w)^t with h1 = 1/2 - (w + 1/w)/4.
static Rational one_dim_coefficient(int t, int k) {
  k = std::abs(k);
  if (k > t) return Rational(0);
  Rational a = binom_exact(2 * t, t + k);
  for (int i = 0; i < t; ++i) a /= 4;
  return (k % 2) ? Rational(-a) : a;
}

std::vector<Rational> cs_exact_series(const LatticePoint& k, int S) {
  const int d = k.dim();
  std::vector<Rational> g(S + 1);
  for (int s = 0; s <= S; ++s) g[s] = one_dim_coefficient(s, k[0]);
  for (int j = 1; j < d; ++j) {
    std::vector<Rational> a(S + 1), ng(S + 1);
    for (int t = 0; t <= S; ++t) a[t] = one_dim_coefficient(t, k[j]);
    for (int s = 0; s <= S; ++s) {
      Rational acc = 0;
      for (int t = 0; t <= s; ++t)
        if (a[t] != 0 && g[s - t] != 0) acc += binom_exact(s, t) * a[t] * g[s - t];
      ng[s] = acc;
    }
    g.swap(ng);
  }
  for (auto& x : g) x = -x;
  return g;
}

std::vector<double> cs_scaled_series(const LatticePoint& k, int S) {
  const int d = k.dim();
  std::vector<double> lf(2 * S + 2, 0.0);
  for (int i = 1; i < static_cast<int>(lf.size()); ++i) lf[i] = lf[i - 1] + std::log(double(i));
  auto a1 = [&](int t, int kk) {
    kk = std::abs(kk);
    if (kk > t) return 0.0;
    const double la = lf[2 * t] - lf[t + kk] - lf[t - kk] - t * std::log(4.0);
    const double v = std::exp(la);
    return (kk % 2) ? -v : v;
  };
  std::vector<double> g(S + 1);
  for (int s = 0; s <= S; ++s) g[s] = a1(s, k[0]);
  for (int j = 2; j <= d; ++j) {
    // binomial pmf with p = 1/j mixes coordinate j into the first j-1
    const double lp = std::log(1.0 / j), lq = std::log(double(j - 1) / j);
    std::vector<double> a(S + 1), ng(S + 1, 0.0);
    for (int t = 0; t <= S; ++t) a[t] = a1(t, k[j - 1]);
    for (int s = 0; s <= S; ++s) {
      double acc = 0.0;
      for (int t = std::abs(k[j - 1]); t <= s; ++t) {
        if (g[s - t] == 0.0) continue;
        const double lpmf = lf[s] - lf[t] - lf[s - t] + t * lp + (s - t) * lq;
        acc += std::exp(lpmf) * a[t] * g[s - t];
      }
      ng[s] = acc;
    }
    g.swap(ng);
  }
  for (auto& x : g) x = -x;
  return g;
}

SeriesResult r0_series_detailed(const LatticePoint& k, cplx z, double tail_tol) {
  const int d = k.dim();
  const double az = std::abs(z);
  if (!(az > d)) throw ValidationError("r0_series: |z| <= d, series does not converge");
  const double q = d / az;
  int S = k.l1_norm();
  auto tail = [&](int s) { return std::pow(q, s + 1) / (az - d); };
  while (tail(S) >= tail_tol) {
    ++S;
    if (S > 6000) throw ResourceError("r0_series: |z| too close to d for the term cap");
  }
  const auto g = cs_scaled_series(k, S);
  const cplx ratio = double(d) / z;
  cplx pw = 1.0 / z, sum = 0.0;
  for (int s = 0; s <= S; ++s) {
    if (s >= k.l1_norm()) sum += g[s] * pw;
    pw *= ratio;
  }
  return {sum, S + 1, tail(S)};
}

// ---------------------------------------------------------------------------
// Torus quadrature. The integrand is even in each coordinate, so the sum runs
// over [0, pi]^d with halved end weights.

std::pair<cplx, cplx> r0_trapezoid(const LatticePoint& k, cplx lambda_std, int grid) {
  const int d = k.dim();
  if (grid < 4 || (grid & (grid - 1))) throw ValidationError("grid must be a power of two >= 4");
  const int M = grid / 2;
  std::vector<std::vector<double>> cosk(d, std::vector<double>(M + 1));
  std::vector<double> s(M + 1), wf(M + 1), wh(M + 1);
  for (int i = 0; i <= M; ++i) {
    const double x = kPi * i / M;
    const double sh = std::sin(x / 2);
    s[i] = sh * sh;
    wf[i] = (i == 0 || i == M) ? 1.0 / grid : 2.0 / grid;
    wh[i] = (i % 2) ? 0.0 : ((i == 0 || i == M) ? 2.0 / grid : 4.0 / grid);
    for (int j = 0; j < d; ++j) cosk[j][i] = std::cos(k[j] * x);
  }
  cplx full = 0, half = 0;
  // recursion over coordinates, innermost loop over the last one
  std::function<void(int, double, double, double, double)> rec = [&](int j, double h, double c, double w1,
                                                                     double w2) {
    if (j == d - 1) {
      for (int i = 0; i <= M; ++i) {
        const cplx f = c * cosk[j][i] / (h + s[i] - lambda_std);
        full += (w1 * wf[i]) * f;
        if (w2 != 0.0 && wh[i] != 0.0) half += (w2 * wh[i]) * f;
      }
      return;
    }
    for (int i = 0; i <= M; ++i) rec(j + 1, h + s[i], c * cosk[j][i], w1 * wf[i], w2 * wh[i]);
  };
  rec(0, 0.0, 1.0, 1.0, 1.0);
  return {full, half};
}

QuadratureResult r0_quadrature(const LatticePoint& k, const EnergyPoint& e, int grid, double tol, int max_grid) {
  const int d = k.dim();
  if (e.side != Side::off_axis) throw ValidationError("r0_quadrature requires an off-axis energy");
  e.validate(d);
  const cplx ls = e.standard(d);
  double last_err = 0;
  for (int g = grid; g <= max_grid; g *= 2) {
    auto [full, half] = r0_trapezoid(k, ls, g);
    last_err = std::abs(full - half);
    if (last_err <= tol * std::max(1.0, std::abs(full))) return {full, last_err, g};
  }
  throw NumericalError("r0_quadrature: grid cap reached with error estimate " + std::to_string(last_err));
}

// ---------------------------------------------------------------------------
// d = 1 closed form.

cplx r0_1d_closed(int n, cplx lambda) {
  const cplx z = inverse_joukowski(lambda).z;
  return 4.0 * std::pow(z, std::abs(n)) / (1.0 / z - z);
}

cplx r0_1d(int n, cplx lambda) {
  const cplx c0 = r0_1d_closed(0, lambda);
  const LatticePoint origin{0};
  int sign = 0;
  for (int g = 64; g <= (1 << 22); g *= 2) {
    auto [full, half] = r0_trapezoid(origin, lambda, g);
    if (std::abs(full - half) < 0.25 * std::abs(c0)) {
      sign = (full * std::conj(c0)).real() >= 0 ? 1 : -1;
      break;
    }
  }
  if (sign == 0) throw NumericalError("r0_1d: quadrature could not pin the sign (energy too close to the cut)");
  return double(sign) * r0_1d_closed(n, lambda);
}

cplx r0_1d_boundary(int n, double lambda, int sign) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw ValidationError("r0_1d_boundary: lambda must lie in (0,1)");
  // half-angle forms keep full relative accuracy next to both thresholds
  const double phi = 2.0 * std::asin(std::sqrt(lambda));
  const cplx z = std::polar(1.0, sign * phi);
  return cplx(0, 2.0 * sign) * std::pow(z, std::abs(n)) / (2.0 * std::sqrt(lambda * (1.0 - lambda)));
}

// ---------------------------------------------------------------------------
// Nested route.

static cplx nested_rec(const std::vector<int>& k, int d, cplx w, double tol) {
  if (d == 1) return r0_1d_closed(k[0], w);
  const int kd = k[d - 1];
  auto f = [&](double x) {
    const double sh = std::sin(x / 2);
    return std::cos(kd * x) * nested_rec(k, d - 1, w - sh * sh, tol);
  };
  // Breakpoints where w - sin^2(x/2) crosses a threshold of the inner band.
  std::vector<double> pts{0.0, kPi};
  for (int t = 0; t <= d - 1; ++t) {
    const double u = w.real() - t;
    if (u > 0.0 && u < 1.0) pts.push_back(2.0 * std::asin(std::sqrt(u)));
  }
  std::sort(pts.begin(), pts.end());
  cplx sum = 0;
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    const double a = pts[i], len = pts[i + 1] - pts[i];
    if (len < 1e-15) continue;
    // smoothstep substitution flattens square-root behaviour at both ends
    auto g = [&](double t) { return f(a + len * t * t * (3 - 2 * t)) * (6 * len * t * (1 - t)); };
    double err = 0;
    sum += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(g, 0.0, 1.0, 8u, tol, &err);
  }
  return sum / kPi;
}

cplx r0_nested(const LatticePoint& k, cplx lambda, double tol) {
  const int d = k.dim();
  if (on_band(lambda, d)) throw ValidationError("r0_nested: energy on the spectrum");
  std::vector<int> ka(k.coords());
  for (int& x : ka) x = std::abs(x);
  return nested_rec(ka, d, lambda, tol);
}

// ---------------------------------------------------------------------------
// Boundary values.

static void check_threshold_clearance(double lambda, int d, double clearance) {
  if (!(lambda > 0.0 && lambda < d)) throw ValidationError("boundary energy must lie inside (0,d)");
  const double r = std::round(lambda);
  if (std::abs(lambda - r) < clearance)
    throw ValidationError("boundary energy within " + std::to_string(clearance) + " of an integer threshold");
}

BoundaryResult r0_boundary_extrapolated(const LatticePoint& k, double lambda, int sign, const BoundaryOptions& opt) {
  const int d = k.dim();
  check_threshold_clearance(lambda, d, opt.threshold_clearance);
  double eps0 = opt.eps0;
  BoundaryResult best{cplx(0), INFINITY, eps0};
  for (int attempt = 0; attempt <= opt.max_refinements; ++attempt, eps0 /= 2) {
    const int n = opt.rungs;
    std::vector<double> x(n);
    std::vector<cplx> p(n);
    for (int j = 0; j < n; ++j) {
      x[j] = eps0 * std::ldexp(1.0, -j);
      p[j] = r0_nested(k, cplx(lambda, sign * x[j]));
    }
    cplx drop_first = 0;
    for (int m = 1; m < n; ++m) {
      for (int i = 0; i + m < n; ++i) p[i] = (x[i] * p[i + 1] - x[i + m] * p[i]) / (x[i] - x[i + m]);
      if (m == n - 2) drop_first = p[1];
    }
    const double res = std::abs(p[0] - drop_first);
    if (res < best.residual) best = {p[0], res, eps0};
    if (res <= opt.max_residual) return best;
  }
  throw NumericalError("r0_boundary: extrapolation residual " + std::to_string(best.residual) + " above tolerance");
}

// d = 2 on the real axis: the inner one-dimensional boundary value is exact, so only the
// outer integral is numerical. Its integrand has inverse square-root peaks at the breakpoints.
cplx r0_boundary_2d(const LatticePoint& k, double lambda, int sign, double tol) {
  check_threshold_clearance(lambda, 2, 1e-12);
  const int k1 = std::abs(k[0]), k2 = std::abs(k[1]);
  auto inner = [&](double mu) -> cplx {
    if (mu > 0.0 && mu < 1.0) return r0_1d_boundary(k1, mu, sign);
    // real energy outside the band: z + 1/z = 2a with |a| > 1
    const double a = 1.0 - 2.0 * mu, q = std::sqrt(a * a - 1.0);
    if (q == 0.0) return 0.0;  // node rounded onto a breakpoint, where the Jacobian vanishes
    const double z = 1.0 / (a + std::copysign(q, a));
    return std::copysign(2.0, a) * std::pow(z, k1) / q;
  };
  auto f = [&](double x) {
    const double sh = std::sin(x / 2);
    return std::cos(k2 * x) * inner(lambda - sh * sh);
  };
  std::vector<double> pts{0.0, kPi};
  for (int t = 0; t <= 1; ++t) {
    const double u = lambda - t;
    if (u > 0.0 && u < 1.0) pts.push_back(2.0 * std::asin(std::sqrt(u)));
  }
  std::sort(pts.begin(), pts.end());
  cplx sum = 0;
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    const double a = pts[i], len = pts[i + 1] - pts[i];
    if (len < 1e-15) continue;
    auto g = [&](double t) { return f(a + len * t * t * (3 - 2 * t)) * (6 * len * t * (1 - t)); };
    double err = 0;
    sum += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(g, 0.0, 1.0, 12u, tol, &err);
  }
  return sum / kPi;
}

cplx r0_boundary(const LatticePoint& k, double lambda, int sign, const BoundaryOptions& opt) {
  if (sign != 1 && sign != -1) throw ValidationError("boundary sign must be +1 or -1");
  if (k.dim() == 1) {
    check_threshold_clearance(lambda, 1, 1e-12);
    return r0_1d_boundary(k[0], lambda, sign);
  }
  if (k.dim() == 2) return r0_boundary_2d(k, lambda, sign);
  return r0_boundary_extrapolated(k, lambda, sign, opt).value;
}

cplx r0(const LatticePoint& k, const EnergyPoint& e) {
  const int d = k.dim();
  e.validate(d);
  const cplx ls = e.standard(d);
  if (e.side != Side::off_axis) return r0_boundary(k, ls.real(), e.side == Side::plus ? 1 : -1);
  if (d == 1) return r0_1d_closed(k[0], ls);
  if (std::abs(ls) >= 2.0 * d) return r0_series(k, ls);
  if (d >= 3 && dist_to_band(ls, d) >= 0.3) return r0_quadrature(k, EnergyPoint::off_axis(ls), 64, 1e-13).value;
  return r0_nested(k, ls);
}

FreeResolvent::FreeResolvent(int d, EnergyPoint e) : d_(d), e_(e) { e_.validate(d); }

cplx FreeResolvent::operator()(const LatticePoint& k) const {
  if (k.dim() != d_) throw ValidationError("offset dimension mismatch");
  const LatticePoint c = k.canonical();
  auto it = cache_.find(c);
  if (it != cache_.end()) return it->second;
  const cplx v = r0(c, e_);
  cache_.emplace(c, v);
  return v;
}

KernelTable build_kernel_table(int d, const std::vector<LatticePoint>& offsets, const EnergyPoint& e,
                               KernelMethod method) {
  e.validate(d);
  KernelTable t;
  t.z = e.lambda;
  t.dim = d;
  t.method = method;
  const cplx ls = e.standard(d);
  std::map<LatticePoint, std::pair<cplx, double>> canon;
  for (const auto& k : offsets) {
    if (k.dim() != d) throw ValidationError("offset dimension mismatch");
    const LatticePoint c = k.canonical();
    if (!canon.count(c)) {
      std::pair<cplx, double> v{0, 0};
      switch (method) {
        case KernelMethod::series: {
          auto r = r0_series_detailed(c, ls);
          v = {r.value, r.tail_bound};
          break;
        }
        case KernelMethod::quadrature: {
          auto r = r0_quadrature(c, EnergyPoint::off_axis(ls));
          v = {r.value, r.error};
          break;
        }
        case KernelMethod::closed_form_1d:
          if (d != 1) throw ValidationError("closed form is only available for d = 1");
          v = {e.side == Side::off_axis ? r0_1d(c[0], ls) : r0_1d_boundary(c[0], ls.real(), e.side == Side::plus ? 1 : -1),
               0.0};
          break;
        case KernelMethod::boundary_extrapolation: {
          if (e.side == Side::off_axis) throw ValidationError("boundary extrapolation needs a plus/minus energy");
          auto r = r0_boundary_extrapolated(c, ls.real(), e.side == Side::plus ? 1 : -1);
          v = {r.value, r.residual};
          break;
        }
        case KernelMethod::nested:
          if (e.side != Side::off_axis) throw ValidationError("nested route needs an off-axis energy");
          v = {r0_nested(c, ls), 0.0};
          break;
      }
      canon[c] = v;
    }
    t.values[k] = canon[c].first;
    t.errors[k] = canon[c].second;
  }
  return t;
}

}  // namespace lattice
