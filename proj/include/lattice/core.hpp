#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace lattice {

using Rational = boost::multiprecision::mpq_rational;
using cplx = std::complex<double>;

// Error classes map onto CLI exit codes 2, 3, 4.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Convention { standard, centered };

std::string to_string(Convention c);
Convention convention_from_string(const std::string& s);

// Scalar added to the standard symbol to obtain the given convention.
inline double convention_shift(Convention c, int d) {
  return c == Convention::centered ? -0.5 * d : 0.0;
}

class LatticePoint {
 public:
  LatticePoint() = default;
  explicit LatticePoint(std::vector<int> coords) : c_(std::move(coords)) {}
  LatticePoint(std::initializer_list<int> coords) : c_(coords) {}
  static LatticePoint zero(int d) { return LatticePoint(std::vector<int>(d, 0)); }

  int dim() const { return static_cast<int>(c_.size()); }
  int operator[](int j) const { return c_[j]; }
  int& operator[](int j) { return c_[j]; }
  const std::vector<int>& coords() const { return c_; }

  int l1_norm() const;
  int coord_sum() const;
  LatticePoint shifted(int j, int step) const;
  // Representative of the orbit under sign flips and coordinate permutations.
  LatticePoint canonical() const;

  LatticePoint operator+(const LatticePoint& o) const;
  LatticePoint operator-(const LatticePoint& o) const;
  LatticePoint operator-() const;
  auto operator<=>(const LatticePoint&) const = default;
  bool operator==(const LatticePoint&) const = default;

  std::string str() const;

 private:
  std::vector<int> c_;
};

// All points with |n|_1 <= r in dimension d.
std::vector<LatticePoint> l1_ball(int d, int r);
// All points of the box [-m, m]^d.
std::vector<LatticePoint> box_points(int d, int m);

class Potential {
 public:
  Potential() = default;
  explicit Potential(int d) : d_(d) {
    if (d < 1) throw ValidationError("dimension must be >= 1");
  }
  Potential(int d, const std::vector<std::pair<LatticePoint, double>>& entries);

  static Potential delta(int d, double c = 1.0) {
    Potential p(d);
    p.set(LatticePoint::zero(d), c);
    return p;
  }

  int dim() const { return d_; }
  void set(const LatticePoint& n, double v);
  double operator()(const LatticePoint& n) const;
  const std::map<LatticePoint, double>& entries() const { return e_; }
  // Sites with nonzero value, sorted.
  std::vector<LatticePoint> support() const;
  bool empty() const { return support().empty(); }
  double trace() const;
  double trace_norm() const;
  double sup_norm() const;
  int max_abs_coord() const;
  Potential scaled(double g) const;
  bool nonnegative() const;
  bool nonpositive() const;

 private:
  int d_ = 0;
  std::map<LatticePoint, double> e_;
};

class RationalPotential {
 public:
  RationalPotential() = default;
  explicit RationalPotential(int d) : d_(d) {
    if (d < 1) throw ValidationError("dimension must be >= 1");
  }
  int dim() const { return d_; }
  void set(const LatticePoint& n, const Rational& v);
  Rational operator()(const LatticePoint& n) const;
  const std::map<LatticePoint, Rational>& entries() const { return e_; }
  std::vector<LatticePoint> support() const;
  Potential to_potential() const;
  // Every finite double is a dyadic rational, so this is exact.
  static RationalPotential from_potential(const Potential& v);

 private:
  int d_ = 0;
  std::map<LatticePoint, Rational> e_;
};

template <class T>
class BasicLatticeFunction {
 public:
  BasicLatticeFunction() = default;
  explicit BasicLatticeFunction(int d) : d_(d) {}
  static BasicLatticeFunction delta(const LatticePoint& n, T value = T(1)) {
    BasicLatticeFunction f(n.dim());
    f.v_[n] = value;
    return f;
  }
  int dim() const { return d_; }
  T operator()(const LatticePoint& n) const {
    auto it = v_.find(n);
    return it == v_.end() ? T(0) : it->second;
  }
  T& at(const LatticePoint& n) { return v_[n]; }
  const std::map<LatticePoint, T>& values() const { return v_; }
  std::map<LatticePoint, T>& values() { return v_; }

 private:
  int d_ = 0;
  std::map<LatticePoint, T> v_;
};

using LatticeFunction = BasicLatticeFunction<cplx>;
using RationalFunction = BasicLatticeFunction<Rational>;

LatticeFunction apply_h0(const LatticeFunction& f, Convention conv);
LatticeFunction apply_h(const LatticeFunction& f, const Potential& v, Convention conv);
RationalFunction apply_h0(const RationalFunction& f, Convention conv);
RationalFunction apply_h(const RationalFunction& f, const RationalPotential& v, Convention conv);

inline constexpr int kMaxWalkMoment = 12;

// F_n = Tr(H^n - H0^n), n = 1..nmax, exactly. radius < 0 means radius = nmax.
std::vector<Rational> walk_trace_moments(const RationalPotential& v, int nmax, Convention conv,
                                         int radius = -1);
// Floating-point version for potentials with non-dyadic values.
std::vector<double> walk_trace_moments_float(const Potential& v, int nmax, Convention conv);

// Sum_n (H0^k)_{nn} V(n)^p over supp V.
Rational trace_h0k_vp(const RationalPotential& v, int k, int p, Convention conv);

}  // namespace lattice
