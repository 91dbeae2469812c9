// phase-geometry: closed forms vs finite differences, exact identities,
// sigma-bar relations, scale invariance, cross terms, sampling study.
#include <cmath>

#include "doctest.h"
#include "rotwave/phase_geometry.hpp"
#include "rotwave/rng.hpp"

using namespace rotwave::phase;
using rotwave::SplitMix64;

TEST_CASE("lambda and grad_lambda basics") {
  CHECK(lambda({0, 3, 4}) == doctest::Approx(0.8));
  CHECK(lambda({0, 0, 2}) == doctest::Approx(1.0));
  Vec3 g = grad_lambda({0, 0, 2});
  CHECK(std::abs(g[0]) == 0.0);
  CHECK(std::abs(g[1]) == 0.0);
  CHECK(std::abs(g[2]) == 0.0);  // |xi_h|^2 = 0 on the axis
  CHECK_THROWS(lambda({0, 0, 0}));
}

TEST_CASE("phase basics: homogeneity and bounds") {
  // xi = 2 eta: Phi = (1 + mu + nu) Lambda(eta)
  Vec3 eta{0.3, 0.4, 1.2};
  Vec3 xi{0.6, 0.8, 2.4};
  for (int mu : {+1, -1})
    for (int nu : {+1, -1}) {
      PhasePoint p{xi, eta, mu, nu};
      CHECK(phase(p) == doctest::Approx((1.0 + mu + nu) * lambda(eta)).epsilon(1e-14));
      CHECK(std::abs(phase(p)) <= 3.0 + 1e-15);
      // scale invariance
      PhasePoint ps{{3 * xi[0], 3 * xi[1], 3 * xi[2]},
                    {3 * eta[0], 3 * eta[1], 3 * eta[2]},
                    mu,
                    nu};
      CHECK(phase(ps) == doctest::Approx(phase(p)).epsilon(1e-14));
    }
  // all-vertical vectors
  PhasePoint pv{{0, 0, 2}, {0, 0, 1}, +1, +1};
  CHECK(phase(pv) == doctest::Approx(3.0));
}

TEST_CASE("sigma_bar: direct values and symmetry relations") {
  auto s = sigma_bar({1, 0, 0}, {0, 0, 1});
  CHECK(s[0] == doctest::Approx(-1.0));
  CHECK(s[1] == doctest::Approx(0.0));
  // parallel vectors give 0
  auto sp = sigma_bar({2, 4, 6}, {1, 2, 3});
  CHECK(std::abs(sp[0]) < 1e-15);
  CHECK(std::abs(sp[1]) < 1e-15);
  SplitMix64 rng(3);
  for (int t = 0; t < 1000; ++t) {
    Vec3 xi{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
    Vec3 eta{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
    Vec3 zeta{xi[0] - eta[0], xi[1] - eta[1], xi[2] - eta[2]};
    auto s1 = sigma_bar(xi, eta);
    auto s2 = sigma_bar(zeta, eta);
    auto s3 = sigma_bar(xi, zeta);
    for (int a = 0; a < 2; ++a) {
      CHECK(s1[a] == doctest::Approx(s2[a]).epsilon(1e-12));
      CHECK(s1[a] == doctest::Approx(-s3[a]).epsilon(1e-12));
    }
  }
}

TEST_CASE("sigma vanishing point: S_eta Phi = Omega_eta Phi = 0 for parallel xi,eta") {
  PhasePoint p{{2, 4, 6}, {1, 2, 3}, +1, -1};
  FirstOrder f = vf_first_order(p);
  CHECK(std::abs(f.S_eta) < 1e-14);
  CHECK(std::abs(f.Omega_eta) < 1e-14);
}

TEST_CASE("closed forms match finite differences (1000 guarded samples)") {
  auto reports = run_identity_checks(1000, 2024);
  for (const auto& r : reports) {
    INFO(r.identity, " max relerr ", r.max_relerr);
    if (r.identity.rfind("exact_", 0) == 0) {
      CHECK(r.max_relerr < 1e-11);  // analytic route, rounding only
    } else {
      CHECK(r.max_relerr < 1e-5);
    }
  }
}

TEST_CASE("vf magnitude windows") {
  SplitMix64 rng(555);
  double lo1 = 1e300, hi1 = 0, lo2 = 1e300, hi2 = 0;
  int n = 0;
  while (n < 2000) {
    PhasePoint p{{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)},
                 {rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)},
                 +1,
                 +1};
    if (!guarded(p)) continue;
    Vec3 zeta{p.xi[0] - p.eta[0], p.xi[1] - p.eta[1], p.xi[2] - p.eta[2]};
    auto sig = sigma_bar(p.xi, p.eta);
    double signorm = std::hypot(sig[0], sig[1]);
    if (signorm < 1e-8) continue;
    ++n;
    FirstOrder f = vf_first_order(p);
    double zh = std::hypot(zeta[0], zeta[1]);
    double z = std::sqrt(zeta[0] * zeta[0] + zeta[1] * zeta[1] + zeta[2] * zeta[2]);
    double sum = std::abs(f.S_eta) + std::abs(f.Omega_eta);
    double r1 = sum / (zh / (z * z * z) * signorm);
    lo1 = std::min(lo1, r1);
    hi1 = std::max(hi1, r1);
    // dyadic rendering with floor-based sizes
    double p1 = std::floor(std::log2(zh / z));
    double k1 = std::floor(std::log2(z));
    double r2 = sum / (std::exp2(p1 - 2 * k1) * signorm);
    lo2 = std::min(lo2, r2);
    hi2 = std::max(hi2, r2);
  }
  // exact window [1, sqrt(2)] inside the asserted [1/sqrt(2), 2]
  CHECK(lo1 >= 1.0 / std::sqrt(2.0) - 1e-12);
  CHECK(hi1 <= 2.0 + 1e-12);
  // floored-dyadic window [1/4, 2 sqrt(2)] inside [1/8, 4]
  CHECK(lo2 >= 0.125);
  CHECK(hi2 <= 4.0);
  MESSAGE("exact-window ratios [", lo1, ",", hi1, "], dyadic [", lo2, ",", hi2, "]");
}

TEST_CASE("upsilon decomposition identities") {
  // closed-case examples
  ScalarFn f2 = [](const Vec3& x) { return x[0] * x[0] + x[1] * x[1] + x[2] * x[2]; };
  Vec3 x{0.6, -0.8, 1.1};
  CHECK(fd_Upsilon(f2, x) == doctest::Approx(0.0).epsilon(1e-8));
  CHECK(fd_S(f2, x) == doctest::Approx(2 * (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]))
                           .epsilon(1e-8));
  ScalarFn flam = [](const Vec3& v) { return lambda(v); };
  CHECK(fd_S(flam, x) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(fd_Upsilon(flam, x) ==
        doctest::Approx(-sqrt_one_minus_lambda2(x)).epsilon(1e-8));

  auto reports = run_decomposition_checks(1000, 99);
  for (const auto& r : reports) {
    INFO(r.identity, " max relerr ", r.max_relerr);
    CHECK(r.max_relerr < 1e-6);
  }
}

TEST_CASE("cross-term coefficients vs finite differences") {
  auto reports = run_cross_term_checks(1000, 314);
  for (const auto& r : reports) {
    INFO(r.identity, " max relerr ", r.max_relerr);
    if (r.identity == "omega_c2_plus_omega_s2")
      CHECK(r.max_relerr < 1e-12);
    else
      CHECK(r.max_relerr < 1e-5);
  }
  // |GammaS| + |GammaU| <= 2 |xi| / |xi - eta|
  SplitMix64 rng(21);
  int n = 0;
  while (n < 500) {
    PhasePoint p{{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)},
                 {rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)},
                 +1,
                 +1};
    if (!guarded(p)) continue;
    ++n;
    Vec3 zeta{p.xi[0] - p.eta[0], p.xi[1] - p.eta[1], p.xi[2] - p.eta[2]};
    CrossTermCoeffs c = cross_term_coeffs(p.xi, p.eta);
    double nx = std::sqrt(p.xi[0] * p.xi[0] + p.xi[1] * p.xi[1] + p.xi[2] * p.xi[2]);
    double nz = std::sqrt(zeta[0] * zeta[0] + zeta[1] * zeta[1] + zeta[2] * zeta[2]);
    CHECK(std::abs(c.GammaS) + std::abs(c.GammaU) <= 2.0 * nx / nz + 1e-12);
  }
}

TEST_CASE("phase-vs-sigma: rejection example and sampling study") {
  // all-vertical with mu = nu = -1: Phi = -1, q_max = 0, |Phi| = 1 > 1/4
  PhasePoint pv{{0, 0, 2}, {0, 0, 1}, -1, -1};
  CHECK(!phase_sigma_accepts(pv));

  PhaseSigmaStats st = phase_vs_sigma_sample(10000, 7);
  REQUIRE(st.conclusive);
  CHECK(st.accepted >= 10000);
  CHECK(st.min_pmax >= 0.25);
  CHECK(st.min_sigma_ratio >= std::exp2(-6.0));
  MESSAGE("accepted ", st.accepted, "/", st.tried, " min 2^pmax ", st.min_pmax,
          " min sigma ratio ", st.min_sigma_ratio);
}
