#include "lattice/hp.hpp"

#include <sstream>

namespace lattice::hp {

Precision::Precision(int digits) : old_(real::default_precision()) {
  if (digits < 16) throw ValidationError("precision must be at least 16 digits");
  real::default_precision(static_cast<unsigned>(digits));
}
Precision::~Precision() { real::default_precision(old_); }

complex& complex::operator+=(const complex& o) {
  re += o.re;
  im += o.im;
  return *this;
}
complex& complex::operator-=(const complex& o) {
  re -= o.re;
  im -= o.im;
  return *this;
}
complex& complex::operator*=(const complex& o) {
  real r = re * o.re - im * o.im;
  im = re * o.im + im * o.re;
  re = std::move(r);
  return *this;
}
complex& complex::operator/=(const complex& o) {
  // Smith's algorithm keeps the intermediate quotient bounded.
  if (boost::multiprecision::abs(o.re) >= boost::multiprecision::abs(o.im)) {
    const real r = o.im / o.re, den = o.re + o.im * r;
    real nr = (re + im * r) / den;
    im = (im - re * r) / den;
    re = std::move(nr);
  } else {
    const real r = o.re / o.im, den = o.re * r + o.im;
    real nr = (re * r + im) / den;
    im = (im * r - re) / den;
    re = std::move(nr);
  }
  return *this;
}

complex operator+(complex a, const complex& b) { return a += b; }
complex operator-(complex a, const complex& b) { return a -= b; }
complex operator-(const complex& a) { return {-a.re, -a.im}; }
complex operator*(complex a, const complex& b) { return a *= b; }
complex operator/(complex a, const complex& b) { return a /= b; }
complex operator*(complex a, const real& s) {
  a.re *= s;
  a.im *= s;
  return a;
}
complex conj(const complex& a) { return {a.re, -a.im}; }
real norm(const complex& a) { return a.re * a.re + a.im * a.im; }
real abs(const complex& a) { return boost::multiprecision::hypot(a.re, a.im); }

complex sqrt(const complex& a) {
  if (a.re == 0 && a.im == 0) return {};
  const real m = abs(a);
  real t = boost::multiprecision::sqrt((m + boost::multiprecision::abs(a.re)) / 2);
  if (a.re >= 0) return {t, a.im / (2 * t)};
  real s = a.im < 0 ? real(-t) : t;
  // a.im == +0 on the negative axis lands on the upper side.
  return {boost::multiprecision::abs(a.im) / (2 * t), s};
}

complex log(const complex& a) {
  if (a.re == 0 && a.im == 0) throw NumericalError("log of zero");
  return {boost::multiprecision::log(abs(a)), boost::multiprecision::atan2(a.im, a.re)};
}

complex asin(const complex& w) {
  if (w.im == 0 && boost::multiprecision::abs(w.re) >= 1) throw ValidationError("arcsin evaluated on its branch cut");
  const complex one(real(1));
  const complex s = sqrt(one - w * w);
  const complex iw(-w.im, w.re);
  // (s + i w)(s - i w) = 1; use whichever factor has no cancellation.
  const complex plus = s + iw, minus = s - iw;
  const complex lg = norm(plus) >= norm(minus) ? log(plus) : -log(minus);
  return {lg.im, -lg.re};  // -i log(.)
}

complex pow(complex a, int n) {
  if (n < 0) return complex(real(1)) / pow(std::move(a), -n);
  complex r(real(1));
  while (n) {
    if (n & 1) r *= a;
    a *= a;
    n >>= 1;
  }
  return r;
}

real from_rational(const Rational& q) {
  real n(numerator(q));
  n /= real(denominator(q));
  return n;
}

real pi() { return boost::math::constants::pi<real>(); }

std::string to_string(const real& x, int digits) {
  std::ostringstream os;
  os.precision(digits);
  os << x;
  return os.str();
}

real parse_real(const std::string& s) {
  try {
    return real(s);
  } catch (const std::exception&) {
    throw ValidationError("not a decimal number: " + s);
  }
}

namespace {

Matrix embed(const ComplexMatrix& a) {
  const auto n = a.rows(), m = a.cols();
  Matrix e(2 * n, 2 * m);
  e.topLeftCorner(n, m) = a.re;
  e.topRightCorner(n, m) = -a.im;
  e.bottomLeftCorner(n, m) = a.im;
  e.bottomRightCorner(n, m) = a.re;
  return e;
}

ComplexVector solve_embedded(const Matrix& e, const ComplexVector& b) {
  const auto n = static_cast<Eigen::Index>(b.size());
  Vector rhs(2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    rhs(i) = b[i].re;
    rhs(n + i) = b[i].im;
  }
  Eigen::ColPivHouseholderQR<Matrix> qr(e);
  if (qr.rank() < e.cols()) throw NumericalError("high-precision solve: singular matrix");
  const Vector x = qr.solve(rhs);
  ComplexVector out(n);
  for (Eigen::Index i = 0; i < n; ++i) out[i] = {x(i), x(n + i)};
  return out;
}

}  // namespace

ComplexVector solve(const ComplexMatrix& a, const ComplexVector& b) {
  if (a.rows() != a.cols() || a.rows() != static_cast<Eigen::Index>(b.size()))
    throw ValidationError("solve: dimension mismatch");
  return solve_embedded(embed(a), b);
}

ComplexVector solve_transposed(const ComplexMatrix& a, const ComplexVector& x) {
  ComplexMatrix t;
  t.re = a.re.transpose();
  t.im = a.im.transpose();
  return solve(t, x);
}

LeastSquares least_squares(const Matrix& a, const Vector& b) {
  if (a.rows() < a.cols()) throw ValidationError("least squares: fewer equations than unknowns");
  Vector scale(a.cols());
  Matrix as = a;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    scale(j) = a.col(j).norm();
    if (scale(j) == 0) throw NumericalError("least squares: zero column");
    as.col(j) /= scale(j);
  }
  Eigen::HouseholderQR<Matrix> qr(as);
  LeastSquares out;
  out.x = qr.solve(b);
  for (Eigen::Index j = 0; j < a.cols(); ++j) out.x(j) /= scale(j);
  real lo = boost::multiprecision::abs(qr.matrixQR()(0, 0)), hi = lo;
  for (Eigen::Index j = 1; j < a.cols(); ++j) {
    const real r = boost::multiprecision::abs(qr.matrixQR()(j, j));
    lo = boost::multiprecision::min(lo, r);
    hi = boost::multiprecision::max(hi, r);
  }
  out.condition = lo == 0 ? INFINITY : real(hi / lo).convert_to<double>();
  const real bn = b.norm();
  out.residual = bn == 0 ? 0.0 : real((a * out.x - b).norm() / bn).convert_to<double>();
  return out;
}

}  // namespace lattice::hp
