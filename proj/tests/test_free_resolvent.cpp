#include "lattice/free_resolvent.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace lattice;

namespace {
const double kInvSqrt6 = 1.0 / std::sqrt(6.0);
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

LatticePoint random_offset(std::mt19937_64& rng, int d, int max_l1) {
  std::uniform_int_distribution<int> c(-max_l1, max_l1);
  while (true) {
    std::vector<int> n(d);
    for (auto& x : n) x = c(rng);
    LatticePoint p(n);
    if (p.l1_norm() <= max_l1) return p;
  }
}
}  // namespace

TEST_SUITE("free_resolvent") {
  TEST_CASE("uniformizing map values") {
    CHECK(std::abs(lambda_of_z(-1.0) - 1.0) < 1e-15);
    CHECK(std::abs(lambda_of_z(cplx(0, 1)) - 0.5) < 1e-15);
    CHECK(std::abs(lambda_of_z(3 - 2 * std::sqrt(2.0)) + 1.0) < 1e-14);
    CHECK_THROWS_AS(lambda_of_z(0.0), ValidationError);
  }

  TEST_CASE("inverse Joukowski branch") {
    auto u = inverse_joukowski(-1.0);
    CHECK(std::abs(u.z - (3 - 2 * std::sqrt(2.0))) < 1e-14);

    // Small root of z^2 - (2 - 4 lambda) z + 1: z = -1/(4 lambda) - 1/(8 lambda^2) + ...
    auto big = inverse_joukowski(100.0);
    CHECK(std::abs(big.z.real() + 1.0 / 400 + 1.0 / 80000) < 1e-7);
    CHECK(std::abs(big.z) < 1);

    CHECK_THROWS_AS(inverse_joukowski(0.5), ValidationError);
    CHECK_THROWS_AS(inverse_joukowski(0.0), ValidationError);

    // Round trip including lambda = 2 and complex energies.
    for (cplx l : {cplx(2), cplx(-0.3), cplx(0.5, 0.2), cplx(5, -3), cplx(1.0001)}) {
      auto r = inverse_joukowski(l);
      CHECK(std::abs(r.z) < 1);
      CHECK(std::abs(lambda_of_z(r.z) - l) <= 1e-12 * (1 + std::abs(l)));
    }
  }

  TEST_CASE("series coefficients") {
    auto c0 = cs_coefficients(1, 0);
    CHECK(c0.at({0}) == -1);
    for (const auto& [k, v] : c0)
      if (k != LatticePoint{0}) CHECK(v == 0);

    auto c1 = cs_coefficients(1, 1);
    CHECK(c1.at({0}) == Rational(-1, 2));
    CHECK(c1.at({1}) == Rational(1, 4));
    CHECK(c1.at({-1}) == Rational(1, 4));

    for (int d = 1; d <= 3; ++d)
      for (int s = 0; s <= 6; ++s)
        for (const auto& [k, v] : cs_coefficients(d, s)) {
          if (s < k.l1_norm()) CHECK(v == 0);
          CHECK(abs(v) <= Rational(boost::multiprecision::pow(boost::multiprecision::mpz_int(d), s)));
        }
  }

  TEST_CASE("binomial coefficients agree with convolution") {
    for (int d = 1; d <= 3; ++d)
      for (int s = 0; s <= 8; ++s) {
        const auto conv = cs_coefficients(d, s);
        for (const auto& [k, v] : conv) {
          auto series = cs_exact_series(k, s);
          CHECK(series[s] == v);
        }
      }
  }

  TEST_CASE("scaled coefficients are d^{-s} times exact ones") {
    LatticePoint k{2, -1};
    auto ex = cs_exact_series(k, 30);
    auto sc = cs_scaled_series(k, 30);
    // the d = 2 convolution alternates in sign, so the error is absolute, not relative
    for (int s = 0; s <= 30; ++s) {
      const double ref = std::ldexp(ex[s].convert_to<double>(), -s);
      CHECK(std::abs(sc[s] - ref) <= 1e-15);
    }
  }

  TEST_CASE("closed value at lambda = 3, d = 1") {
    CHECK(std::abs(r0_series({0}, 3.0) + kInvSqrt6) < 1e-13);
    CHECK(std::abs(r0_series({0}, 3.0) - oracle::r0_1d_origin_above(3.0)) < 1e-13);
    auto q = r0_quadrature({0}, EnergyPoint::off_axis(3.0));
    CHECK(std::abs(q.value + kInvSqrt6) < 1e-12);
    CHECK(std::abs(r0_1d(0, 3.0) + kInvSqrt6) < 1e-12);
  }

  TEST_CASE("closed form sign below the band") {
    // Residue computation: r0(0, -1) = 2 / sqrt(a^2 - 1) with a = 3, i.e. 1/sqrt(2).
    CHECK(std::abs(r0_1d(0, -1.0) - kInvSqrt2) < 1e-12);
    auto q = r0_quadrature({0}, EnergyPoint::off_axis(-1.0));
    CHECK(std::abs(q.value - kInvSqrt2) < 1e-12);
  }

  TEST_CASE("closed form ratio and magnitude laws") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(-3, 4);
    for (int i = 0; i < 20; ++i) {
      cplx l(u(rng), u(rng) * 0.5);
      if (l.real() > -0.05 && l.real() < 1.05 && std::abs(l.imag()) < 0.05) continue;
      const cplx z = inverse_joukowski(l).z;
      const cplx base = r0_1d(0, l);
      for (int n = -4; n <= 4; ++n) {
        const cplx v = r0_1d(n, l);
        CHECK(std::abs(std::abs(v / base) - std::pow(std::abs(z), std::abs(n))) < 1e-12);
        CHECK(std::abs(std::abs(v) - std::pow(std::abs(z), std::abs(n)) / std::abs(std::sqrt(l * (l - 1.0)))) <
              1e-12);
      }
      auto q = r0_quadrature({3}, EnergyPoint::off_axis(l), 256, 1e-13, 1 << 16);
      CHECK(std::abs(q.value - r0_1d(3, l)) < 1e-11);
    }
  }

  TEST_CASE("exact boundary value inside the 1d band") {
    const cplx v = r0_1d_boundary(0, 0.5, +1);
    CHECK(std::abs(v - cplx(0, 2)) < 1e-13);
    CHECK(std::abs(r0_1d_boundary(0, 0.5, -1) - cplx(0, -2)) < 1e-13);
    // lim eps -> 0 of the closed form off the axis.
    CHECK(std::abs(r0_1d_closed(2, cplx(0.3, 1e-9)) - r0_1d_boundary(2, 0.3, +1)) < 1e-6);
    auto ex = r0_boundary_extrapolated({0}, 0.5, +1);
    CHECK(std::abs(ex.value - cplx(0, 2)) < 1e-7);
  }

  TEST_CASE("2d boundary values are a conjugate pair with positive imaginary part") {
    const cplx p = r0_boundary({0, 0}, 0.5, +1);
    const cplx m = r0_boundary({0, 0}, 0.5, -1);
    CHECK(std::abs(p - std::conj(m)) < 1e-8);
    CHECK(p.imag() > 0);
    for (double l : {0.25, 0.75, 1.3, 1.8}) CHECK(r0_boundary({0, 0}, l, +1).imag() > 0);
    CHECK_THROWS_AS(r0_boundary({0, 0}, 1.0, +1), ValidationError);
  }

  TEST_CASE("direct d=2 boundary values agree with extrapolation from off the axis") {
    for (const LatticePoint& k : {LatticePoint{0, 0}, LatticePoint{2, -1}})
      for (double l : {0.13, 0.5, 0.91, 1.2, 1.77}) {
        const cplx a = r0_boundary_2d(k, l, +1);
        const cplx b = r0_boundary_extrapolated(k, l, +1).value;
        CHECK(std::abs(a - b) < 1e-7);
      }
    // defined right up to the saddle, where the density of states grows like a logarithm
    const cplx a = r0_boundary_2d({0, 0}, 1 - 1e-8, +1), b = r0_boundary_2d({0, 0}, 1 - 1e-9, +1);
    CHECK(std::abs(b.imag() - a.imag() - 2 * std::log(10.0) / oracle::kPi) < 1e-3);
  }

  TEST_CASE("2d boundary value against the complete elliptic integral") {
    // For 0 < l < 1 and d = 2: Im r0(0, l + i0) = pi * DOS = 2 K(sqrt(1 - (1-l)^2)) / pi.
    const double l = 0.5;
    const double kk = std::sqrt(1 - (1 - l) * (1 - l));
    const double ref = 2 * std::comp_ellint_1(kk) / oracle::kPi;
    CHECK(std::abs(r0_boundary({0, 0}, l, +1).imag() - ref) < 1e-7);
  }

  TEST_CASE("series and quadrature agree") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> ang(0, 2 * oracle::kPi), rad(1.05, 2.0);
    for (int d = 1; d <= 3; ++d)
      for (int i = 0; i < 6; ++i) {
        const LatticePoint k = random_offset(rng, d, 6);
        const cplx z = std::polar(2.0 * d * rad(rng), ang(rng));
        auto q = r0_quadrature(k, EnergyPoint::off_axis(z), d == 3 ? 32 : 64, 1e-13);
        CHECK(std::abs(r0_series(k, z) - q.value) < 1e-10);
      }
    // |lambda| = d here, outside the series disk; the nested route stands in for it
    CHECK_THROWS_AS(r0_series({1, 0}, -2.0), ValidationError);
    CHECK(std::abs(r0_nested({1, 0}, -2.0) - r0_quadrature({1, 0}, EnergyPoint::off_axis(-2.0)).value) < 1e-10);
  }

  TEST_CASE("quadrature against an independent midpoint rule") {
    for (const LatticePoint& k : {LatticePoint{0, 0}, LatticePoint{2, 1}}) {
      const cplx l(0.7, 0.8);
      const cplx mid = oracle::torus_midpoint(k, l, 200);
      CHECK(std::abs(r0_quadrature(k, EnergyPoint::off_axis(l)).value - mid) < 1e-10);
    }
  }

  TEST_CASE("grid doubling converges off the band") {
    for (cplx l : {cplx(-0.5), cplx(2.5), cplx(1, 0.5)}) {
      auto [full, half] = r0_trapezoid({1, 1}, l, 128);
      auto [full2, half2] = r0_trapezoid({1, 1}, l, 256);
      (void)half;
      (void)half2;
      CHECK(std::abs(full2 - full) < 1e-12);
    }
  }

  TEST_CASE("kernel symmetries") {
    const auto e = EnergyPoint::off_axis(cplx(2.8, 0.4));
    const cplx a = r0_quadrature({2, -1, 1}, e, 32).value;
    for (const LatticePoint& k : {LatticePoint{-2, 1, -1}, LatticePoint{1, 2, -1}, LatticePoint{-1, 1, 2},
                                  LatticePoint{2, 1, 1}})
      CHECK(std::abs(r0_quadrature(k, e, 32).value - a) < 1e-13);
    CHECK(std::abs(r0_series({3, 1}, 5.0) - r0_series({-3, -1}, 5.0)) < 1e-16);
  }

  TEST_CASE("nested route agrees with quadrature") {
    for (cplx l : {cplx(-0.4), cplx(2.3), cplx(1.2, 0.3)}) {
      const cplx a = r0_nested({1, 0}, l);
      const cplx b = r0_quadrature({1, 0}, EnergyPoint::off_axis(l), 256, 1e-13, 1 << 14).value;
      CHECK(std::abs(a - b) < 1e-9);
    }
  }

  TEST_CASE("validation") {
    CHECK_THROWS_AS(r0_series({0}, 0.9), ValidationError);
    CHECK_THROWS_AS(r0_quadrature({0}, EnergyPoint::off_axis(0.5)), ValidationError);
    CHECK_THROWS_AS(r0_quadrature({0}, EnergyPoint::off_axis(3.0), 100), ValidationError);
    CHECK_THROWS_AS(cs_coefficients(1, 41), ResourceError);
    CHECK_THROWS_AS(EnergyPoint::plus(1.5).validate(1), ValidationError);
  }

  TEST_CASE("kernel tables and conventions") {
    auto e = EnergyPoint::off_axis(cplx(-1.5), Convention::centered);  // standard -1
    auto t = build_kernel_table(1, {{0}, {1}, {-2}}, e, KernelMethod::closed_form_1d);
    CHECK(std::abs(t.values.at({0}) - r0_1d(0, -1.0)) < 1e-14);
    auto q = build_kernel_table(1, {{0}, {1}, {-2}}, e, KernelMethod::quadrature);
    for (const auto& [k, v] : t.values) CHECK(std::abs(v - q.values.at(k)) < 1e-11);
    FreeResolvent r(1, e);
    CHECK(std::abs(r({1}) - r({-1})) < 1e-15);
  }
}
