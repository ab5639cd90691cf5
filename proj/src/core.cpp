#include "lattice/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <set>
#include <sstream>

namespace lattice {

std::string to_string(Convention c) { return c == Convention::centered ? "centered" : "standard"; }

Convention convention_from_string(const std::string& s) {
  if (s == "standard") return Convention::standard;
  if (s == "centered") return Convention::centered;
  throw ValidationError("unknown convention '" + s + "' (expected standard or centered)");
}

int LatticePoint::l1_norm() const {
  int s = 0;
  for (int x : c_) s += std::abs(x);
  return s;
}

int LatticePoint::coord_sum() const {
  int s = 0;
  for (int x : c_) s += x;
  return s;
}

LatticePoint LatticePoint::shifted(int j, int step) const {
  LatticePoint r = *this;
  r.c_[j] += step;
  return r;
}

LatticePoint LatticePoint::canonical() const {
  LatticePoint r = *this;
  for (int& x : r.c_) x = std::abs(x);
  std::sort(r.c_.begin(), r.c_.end());
  return r;
}

static void check_same_dim(const LatticePoint& a, const LatticePoint& b) {
  if (a.dim() != b.dim()) throw ValidationError("lattice point dimension mismatch");
}

LatticePoint LatticePoint::operator+(const LatticePoint& o) const {
  check_same_dim(*this, o);
  LatticePoint r = *this;
  for (int j = 0; j < dim(); ++j) r.c_[j] += o.c_[j];
  return r;
}

LatticePoint LatticePoint::operator-(const LatticePoint& o) const {
  check_same_dim(*this, o);
  LatticePoint r = *this;
  for (int j = 0; j < dim(); ++j) r.c_[j] -= o.c_[j];
  return r;
}

LatticePoint LatticePoint::operator-() const {
  LatticePoint r = *this;
  for (int& x : r.c_) x = -x;
  return r;
}

std::string LatticePoint::str() const {
  std::ostringstream os;
  for (int j = 0; j < dim(); ++j) os << (j ? ";" : "") << c_[j];
  return os.str();
}

static void enumerate_box(int d, int m, const std::function<void(const LatticePoint&)>& fn) {
  std::vector<int> c(d, -m);
  while (true) {
    fn(LatticePoint(c));
    int j = 0;
    while (j < d && c[j] == m) c[j++] = -m;
    if (j == d) break;
    ++c[j];
  }
}

std::vector<LatticePoint> box_points(int d, int m) {
  std::vector<LatticePoint> out;
  enumerate_box(d, m, [&](const LatticePoint& p) { out.push_back(p); });
  return out;
}

std::vector<LatticePoint> l1_ball(int d, int r) {
  std::vector<LatticePoint> out;
  enumerate_box(d, r, [&](const LatticePoint& p) {
    if (p.l1_norm() <= r) out.push_back(p);
  });
  return out;
}

// ---------------------------------------------------------------------------

Potential::Potential(int d, const std::vector<std::pair<LatticePoint, double>>& entries) : Potential(d) {
  for (const auto& [n, v] : entries) {
    if (e_.count(n)) throw ValidationError("duplicate lattice point " + n.str() + " in potential");
    set(n, v);
  }
}

void Potential::set(const LatticePoint& n, double v) {
  if (n.dim() != d_) throw ValidationError("potential entry has wrong dimension");
  if (!std::isfinite(v)) throw ValidationError("potential value must be finite");
  e_[n] = v;
}

double Potential::operator()(const LatticePoint& n) const {
  auto it = e_.find(n);
  return it == e_.end() ? 0.0 : it->second;
}

std::vector<LatticePoint> Potential::support() const {
  std::vector<LatticePoint> s;
  for (const auto& [n, v] : e_)
    if (v != 0.0) s.push_back(n);
  return s;
}

double Potential::trace() const {
  double s = 0;
  for (const auto& [n, v] : e_) s += v;
  return s;
}

double Potential::trace_norm() const {
  double s = 0;
  for (const auto& [n, v] : e_) s += std::abs(v);
  return s;
}

double Potential::sup_norm() const {
  double s = 0;
  for (const auto& [n, v] : e_) s = std::max(s, std::abs(v));
  return s;
}

int Potential::max_abs_coord() const {
  int m = 0;
  for (const auto& [n, v] : e_)
    if (v != 0.0)
      for (int x : n.coords()) m = std::max(m, std::abs(x));
  return m;
}

Potential Potential::scaled(double g) const {
  Potential p(d_);
  for (const auto& [n, v] : e_) p.set(n, g * v);
  return p;
}

bool Potential::nonnegative() const {
  return std::all_of(e_.begin(), e_.end(), [](const auto& kv) { return kv.second >= 0; });
}

bool Potential::nonpositive() const {
  return std::all_of(e_.begin(), e_.end(), [](const auto& kv) { return kv.second <= 0; });
}

void RationalPotential::set(const LatticePoint& n, const Rational& v) {
  if (n.dim() != d_) throw ValidationError("potential entry has wrong dimension");
  e_[n] = v;
}

Rational RationalPotential::operator()(const LatticePoint& n) const {
  auto it = e_.find(n);
  return it == e_.end() ? Rational(0) : it->second;
}

std::vector<LatticePoint> RationalPotential::support() const {
  std::vector<LatticePoint> s;
  for (const auto& [n, v] : e_)
    if (v != 0) s.push_back(n);
  return s;
}

Potential RationalPotential::to_potential() const {
  Potential p(d_);
  for (const auto& [n, v] : e_) p.set(n, v.convert_to<double>());
  return p;
}

RationalPotential RationalPotential::from_potential(const Potential& v) {
  RationalPotential r(v.dim());
  for (const auto& [n, x] : v.entries()) r.set(n, Rational(x));
  return r;
}

// ---------------------------------------------------------------------------

template <class T, class F>
static BasicLatticeFunction<T> stencil(const BasicLatticeFunction<T>& f, Convention conv, const F& pot) {
  const int d = f.dim();
  BasicLatticeFunction<T> out(d);
  const T quarter = T(1) / T(4);
  const T diag = conv == Convention::standard ? T(d) / T(2) : T(0);
  for (const auto& [n, x] : f.values()) {
    if (n.dim() != d) throw ValidationError("lattice function dimension mismatch");
    out.at(n) += (diag + pot(n)) * x;
    for (int j = 0; j < d; ++j) {
      out.at(n.shifted(j, 1)) -= quarter * x;
      out.at(n.shifted(j, -1)) -= quarter * x;
    }
  }
  return out;
}

LatticeFunction apply_h0(const LatticeFunction& f, Convention conv) {
  return stencil(f, conv, [](const LatticePoint&) { return cplx(0); });
}

LatticeFunction apply_h(const LatticeFunction& f, const Potential& v, Convention conv) {
  if (v.dim() != f.dim()) throw ValidationError("potential and function dimensions differ");
  return stencil(f, conv, [&](const LatticePoint& n) { return cplx(v(n)); });
}

RationalFunction apply_h0(const RationalFunction& f, Convention conv) {
  return stencil(f, conv, [](const LatticePoint&) { return Rational(0); });
}

RationalFunction apply_h(const RationalFunction& f, const RationalPotential& v, Convention conv) {
  if (v.dim() != f.dim()) throw ValidationError("potential and function dimensions differ");
  return stencil(f, conv, [&](const LatticePoint& n) { return v(n); });
}

// ---------------------------------------------------------------------------
// Walk traces. H^k delta_m lives in the l1 ball of radius k around m, so each
// diagonal entry is computed on a dense local cube of half-width K = ceil(nmax/2).

namespace {

template <class T>
struct LocalCube {
  int d, K, side;
  std::vector<long> stride;
  explicit LocalCube(int d_, int K_) : d(d_), K(K_), side(2 * K_ + 1), stride(d_) {
    long s = 1;
    for (int j = 0; j < d; ++j) {
      stride[j] = s;
      s *= side;
    }
  }
  long size() const { return stride[d - 1] * side; }
  long center() const {
    long c = 0;
    for (int j = 0; j < d; ++j) c += K * stride[j];
    return c;
  }
};

}  // namespace

template <class T>
static std::vector<std::vector<T>> local_powers(const LocalCube<T>& cube, int kmax, const std::vector<T>& vloc,
                                                const T& diag) {
  const T quarter = T(1) / T(4);
  std::vector<std::vector<T>> pw(kmax + 1, std::vector<T>(cube.size(), T(0)));
  pw[0][cube.center()] = T(1);
  std::vector<int> c(cube.d);
  for (int k = 1; k <= kmax; ++k) {
    const auto& src = pw[k - 1];
    auto& dst = pw[k];
    for (long idx = 0; idx < cube.size(); ++idx) {
      long rem = idx;
      int l1 = 0;
      for (int j = cube.d - 1; j >= 0; --j) {
        c[j] = static_cast<int>(rem / cube.stride[j]) - cube.K;
        rem %= cube.stride[j];
        l1 += std::abs(c[j]);
      }
      if (l1 > k) continue;
      T acc = (diag + vloc[idx]) * src[idx];
      for (int j = 0; j < cube.d; ++j) {
        if (c[j] < cube.K) acc -= quarter * src[idx + cube.stride[j]];
        if (c[j] > -cube.K) acc -= quarter * src[idx - cube.stride[j]];
      }
      dst[idx] = acc;
    }
  }
  return pw;
}

template <class T, class Lookup>
static std::vector<T> walk_moments_impl(int d, const std::vector<LatticePoint>& supp, int nmax, Convention conv,
                                        int radius, const Lookup& vat) {
  if (nmax < 1) throw ValidationError("nmax must be >= 1");
  if (nmax > kMaxWalkMoment) throw ResourceError("walk trace order exceeds cap of 12");
  if (radius < 0) radius = nmax;
  const int K = (nmax + 1) / 2;
  LocalCube<T> cube(d, K);
  const T diag = conv == Convention::standard ? T(d) / T(2) : T(0);

  auto moments_at = [&](const std::vector<T>& vloc) {
    auto pw = local_powers(cube, K, vloc, diag);
    std::vector<T> m(nmax + 1, T(0));
    for (int n = 1; n <= nmax; ++n) {
      const int a = n / 2, b = n - a;
      T s = T(0);
      for (long i = 0; i < cube.size(); ++i)
        if (pw[a][i] != T(0)) s += pw[a][i] * pw[b][i];
      m[n] = s;
    }
    return m;
  };

  const std::vector<T> zero_pot(cube.size(), T(0));
  const std::vector<T> free_diag = moments_at(zero_pot);

  std::set<LatticePoint> region;
  const auto ball = l1_ball(d, radius);
  for (const auto& s : supp)
    for (const auto& o : ball) region.insert(s + o);

  std::vector<T> total(nmax + 1, T(0));
  std::vector<T> vloc(cube.size());
  for (const auto& m : region) {
    bool any = false;
    for (long idx = 0; idx < cube.size(); ++idx) {
      long rem = idx;
      std::vector<int> g(d);
      for (int j = d - 1; j >= 0; --j) {
        g[j] = m[j] + static_cast<int>(rem / cube.stride[j]) - K;
        rem %= cube.stride[j];
      }
      vloc[idx] = vat(LatticePoint(std::move(g)));
      if (vloc[idx] != T(0)) any = true;
    }
    if (!any) continue;  // H and H0 agree on the whole cube
    auto mm = moments_at(vloc);
    for (int n = 1; n <= nmax; ++n) total[n] += mm[n] - free_diag[n];
  }
  return std::vector<T>(total.begin() + 1, total.end());
}

std::vector<Rational> walk_trace_moments(const RationalPotential& v, int nmax, Convention conv, int radius) {
  return walk_moments_impl<Rational>(v.dim(), v.support(), nmax, conv, radius,
                                     [&](const LatticePoint& p) { return v(p); });
}

std::vector<double> walk_trace_moments_float(const Potential& v, int nmax, Convention conv) {
  return walk_moments_impl<double>(v.dim(), v.support(), nmax, conv, -1,
                                   [&](const LatticePoint& p) { return v(p); });
}

Rational trace_h0k_vp(const RationalPotential& v, int k, int p, Convention conv) {
  const int d = v.dim();
  if (k < 0 || k > 2 * kMaxWalkMoment) throw ResourceError("power too large");
  LocalCube<Rational> cube(d, std::max(1, (k + 1) / 2));
  const Rational diag = conv == Convention::standard ? Rational(d, 2) : Rational(0);
  auto pw = local_powers(cube, cube.K, std::vector<Rational>(cube.size(), Rational(0)), diag);
  const int a = k / 2, b = k - a;
  Rational h0kk = 0;
  for (long i = 0; i < cube.size(); ++i) h0kk += pw[a][i] * pw[b][i];
  Rational s = 0;
  for (const auto& [n, x] : v.entries()) {
    Rational xp = 1;
    for (int i = 0; i < p; ++i) xp *= x;
    s += h0kk * xp;
  }
  return s;
}

}  // namespace lattice
