#include "lattice/resolvent_bounds.hpp"

#include <doctest.h>

#include <cmath>

using namespace lattice;

namespace {
bool any_fail(const BoundReport& r) { return !r.all_pass(); }
}  // namespace

TEST_SUITE("resolvent_bounds") {
  TEST_CASE("single-site weights saturate the d=1 HS bound") {
    const Weights1D q{{0, 1.0}};
    CHECK(std::abs(hs_norm_1d(q, q, -1.0) - 1 / std::sqrt(2.0)) < 1e-14);
    auto rep = verify_d1_hs_bound({-1.0}, q, q);
    REQUIRE(rep.checks.size() == 1);
    CHECK(rep.checks[0].pass);
    CHECK(std::abs(rep.checks[0].lhs - rep.checks[0].rhs) < 1e-14);
  }

  TEST_CASE("d=1 HS bound on a spread of energies and weights") {
    const Weights1D q1{{-2, 0.3}, {0, 1.0}, {3, -0.7}}, q2{{-1, 0.5}, {1, 0.5}, {4, 2.0}};
    std::vector<cplx> ls;
    for (double re : {-3.0, -0.5, -0.01, 0.2, 0.5, 0.9, 1.01, 2.0})
      for (double im : {0.0, 0.05, -0.4})
        if (!(im == 0.0 && re >= 0 && re <= 1)) ls.push_back({re, im});
    CHECK(verify_d1_hs_bound(ls, q1, q2).all_pass());
  }

  TEST_CASE("d=1 HS norm blows up like |lambda|^{-1/2} at the lower threshold") {
    const Weights1D q{{0, 1.0}};
    const double a = hs_norm_1d(q, q, -1e-4), b = hs_norm_1d(q, q, -1e-6);
    CHECK(std::abs(std::log(b / a) / std::log(100.0) - 0.5) < 1e-3);
  }

  TEST_CASE("literal Hoelder estimate fails, corrected estimate holds") {
    const Weights1D q{{-1, 1.0}, {0, 1.0}, {2, 1.0}};
    const std::vector<std::pair<cplx, cplx>> p0{{cplx(0.5, 0.1), cplx(0.6, 0.1)}};
    CHECK(any_fail(verify_d1_holder_bound(p0, {0.0}, q, q)));
    CHECK(verify_d1_holder_corrected(p0, {0.0, 0.5, 1.0}, q, q).all_pass());

    const Weights1D s{{0, 1.0}};
    const std::vector<std::pair<cplx, cplx>> p1{{cplx(-0.01), cplx(-0.001)}};
    CHECK(any_fail(verify_d1_holder_bound(p1, {1.0}, s, s)));
    CHECK(verify_d1_holder_corrected(p1, {0.0, 0.5, 1.0}, s, s).all_pass());
  }

  TEST_CASE("corrected Hoelder estimate on a grid of pairs") {
    const Weights1D q1{{-2, 0.4}, {0, 1.0}, {1, -0.3}}, q2{{0, 1.0}, {3, 0.6}};
    std::vector<std::pair<cplx, cplx>> pairs;
    for (double re : {-2.0, -0.2, 0.3, 0.8, 1.3})
      for (double im : {0.05, 0.5}) pairs.push_back({cplx(re, im), cplx(re + 0.15, im * 1.5)});
    pairs.push_back({cplx(-0.5), cplx(-0.05)});
    pairs.push_back({cplx(1.5), cplx(1.02)});
    CHECK(verify_d1_holder_corrected(pairs, {0.0, 0.25, 0.5, 0.75, 1.0}, q1, q2).all_pass());
  }

  TEST_CASE("Hoelder pairs across the spectrum are rejected") {
    const Weights1D q{{0, 1.0}};
    CHECK_THROWS_AS(verify_d1_holder_bound({{cplx(0.5, 0.1), cplx(0.5, -0.1)}}, {0.5}, q, q), ValidationError);
    CHECK_THROWS_AS(hs_norm_1d(q, q, 0.5), ValidationError);
  }

  TEST_CASE("d=2 HS norm stays under the calibrated log envelope") {
    const Weights1D q{{0, 1.0}, {1, 0.5}};
    auto rep = verify_d2_log_bound(q, q);
    CHECK(rep.calibrated_constant > 0);
    CHECK(rep.checks.size() == 12);
    CHECK(rep.all_pass());
  }

  TEST_CASE("d=2 growth along lambda = 1 + i eps is at most logarithmic") {
    const Weights1D q{{0, 1.0}};
    std::vector<double> h;
    for (double e : {1e-1, 1e-2, 1e-3, 1e-4}) h.push_back(hs_norm_2d(q, q, cplx(1, e)));
    for (size_t i = 1; i < h.size(); ++i) {
      // van Hove saddle: the increment per decade tends to 2 ln(10) / pi
      CHECK(std::abs(h[i] - h[i - 1] - 2 * std::log(10.0) / 3.141592653589793) < 1e-2);
      CHECK(h[i] >= h[i - 1] - 1e-12);
    }
    CHECK(op_norm_2d(q, q, cplx(1, 1e-3)) <= hs_norm_2d(q, q, cplx(1, 1e-3)) + 1e-14);
  }

  TEST_CASE("default verifier dispatch") {
    const Weights1D q{{0, 1.0}};
    auto r1 = verify_default_bounds(1, {-1.0, -0.5, cplx(0.5, 0.3)}, q, q);
    CHECK(!r1.checks.empty());
    CHECK_THROWS_AS(verify_default_bounds(3, {-1.0}, q, q), ValidationError);
  }
}
