#pragma once

// High-precision scalars and dense solves for the inverse module.

#include "lattice/core.hpp"

#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/mpfr.hpp>
#include <Eigen/Dense>

#include <string>

namespace lattice::hp {

using real = boost::multiprecision::mpfr_float;
using Matrix = Eigen::Matrix<real, Eigen::Dynamic, Eigen::Dynamic>;
using Vector = Eigen::Matrix<real, Eigen::Dynamic, 1>;

// Sets the default mpfr precision (decimal digits) for the lifetime of the guard.
class Precision {
 public:
  explicit Precision(int digits);
  ~Precision();
  Precision(const Precision&) = delete;
  Precision& operator=(const Precision&) = delete;

 private:
  unsigned old_;
};

struct complex {
  real re, im;
  complex() : re(0), im(0) {}
  complex(real r) : re(std::move(r)), im(0) {}  // NOLINT(google-explicit-constructor)
  complex(real r, real i) : re(std::move(r)), im(std::move(i)) {}
  explicit complex(cplx z) : re(z.real()), im(z.imag()) {}

  complex& operator+=(const complex& o);
  complex& operator-=(const complex& o);
  complex& operator*=(const complex& o);
  complex& operator/=(const complex& o);
  cplx to_double() const { return {re.convert_to<double>(), im.convert_to<double>()}; }
};

complex operator+(complex a, const complex& b);
complex operator-(complex a, const complex& b);
complex operator-(const complex& a);
complex operator*(complex a, const complex& b);
complex operator/(complex a, const complex& b);
complex operator*(complex a, const real& s);
complex conj(const complex& a);
real norm(const complex& a);  // |a|^2
real abs(const complex& a);
// Principal branches (cut of sqrt and log along the negative real axis).
complex sqrt(const complex& a);
complex log(const complex& a);
// Principal arcsin, cuts (-inf,-1] and [1,inf); evaluated without the cancellation of i w + sqrt(1-w^2).
complex asin(const complex& w);
complex pow(complex a, int n);

real from_rational(const Rational& q);
real pi();
// Decimal string with the given number of significant digits.
std::string to_string(const real& x, int digits);
real parse_real(const std::string& s);

// Complex matrices are stored as real and imaginary parts.
struct ComplexMatrix {
  Matrix re, im;
  ComplexMatrix() = default;
  ComplexMatrix(Eigen::Index r, Eigen::Index c) : re(Matrix::Zero(r, c)), im(Matrix::Zero(r, c)) {}
  Eigen::Index rows() const { return re.rows(); }
  Eigen::Index cols() const { return re.cols(); }
  complex get(Eigen::Index i, Eigen::Index j) const { return {re(i, j), im(i, j)}; }
  void set(Eigen::Index i, Eigen::Index j, const complex& v) {
    re(i, j) = v.re;
    im(i, j) = v.im;
  }
};
using ComplexVector = std::vector<complex>;

// a x = b through the real 2n x 2n embedding and a column-pivoted Householder QR.
ComplexVector solve(const ComplexMatrix& a, const ComplexVector& b);
// x^T a for a row vector x (solves a^T y = x).
ComplexVector solve_transposed(const ComplexMatrix& a, const ComplexVector& x);

struct LeastSquares {
  Vector x;
  double condition = 0;   // ratio of extreme |R_ii| after column equilibration
  double residual = 0;    // ||a x - b|| / ||b|| (0 when b = 0)
};
// Real least squares by Householder QR with unit-norm columns.
LeastSquares least_squares(const Matrix& a, const Vector& b);

}  // namespace lattice::hp
