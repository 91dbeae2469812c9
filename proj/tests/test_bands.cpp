// dyadic-bands: bump functions, anisotropic projections, B and Sobolev norms.
#include <cmath>

#include "doctest.h"
#include "rotwave/bands.hpp"
#include "rotwave/bump.hpp"
#include "rotwave/rng.hpp"
#include "test_utils.hpp"

using namespace rotwave;
using rotwave::testutil::random_field;

TEST_CASE("chi: support, monotonicity, plateau") {
  CHECK(chi(0.5) == 1.0);
  CHECK(chi(-0.3) == 1.0);
  CHECK(chi(1.0) == 1.0);
  CHECK(chi(2.0) == 0.0);
  CHECK(chi(3.7) == 0.0);
  double prev = 1.0;
  for (double x = 0.0; x <= 2.5; x += 0.01) {
    double v = chi(x);
    CHECK(v <= prev + 1e-15);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    prev = v;
  }
}

TEST_CASE("phi: partition of unity and dyadic telescoping") {
  CHECK(phi(1.0) == doctest::Approx(1.0));
  // sum over three consecutive scales around x=3 is exactly 1
  double s = 0.0;
  for (int k = 0; k <= 2; ++k) s += phi_k(3.0, k);
  CHECK(s == doctest::Approx(1.0).epsilon(1e-14));
  // partition of unity at 1000 random points
  SplitMix64 rng(17);
  for (int t = 0; t < 1000; ++t) {
    double x = std::exp(rng.uniform(-6.0, 6.0)) * (rng.next_below(2) ? 1.0 : -1.0);
    double total = 0.0;
    for (int k = -12; k <= 12; ++k) total += phi_k(x, k);
    CHECK(std::abs(total - 1.0) < 1e-12);
  }
}

TEST_CASE("phi_pm: disjoint half-line supports") {
  SplitMix64 rng(5);
  for (int t = 0; t < 100; ++t) {
    double x = rng.uniform(-4.0, 4.0);
    if (x == 0.0) continue;
    CHECK(phi_pm(x, 0, +1) * phi_pm(x, 0, -1) == 0.0);
  }
  CHECK(phi_pm(1.0, 0, +1) == doctest::Approx(1.0));
  CHECK(phi_pm(-1.0, 0, -1) == doctest::Approx(1.0));
}

TEST_CASE("phibar * phi = phi") {
  SplitMix64 rng(29);
  for (int t = 0; t < 1000; ++t) {
    double x = rng.uniform(-5.0, 5.0);
    CHECK(std::abs(phibar(x) * phi(x) - phi(x)) < 1e-15);
  }
}

TEST_CASE("project_k: support and partition") {
  Grid g(16, 2 * std::numbers::pi);
  SpectralField F(g);
  F.at(0, 0, 2) = cplx(1, 0);  // |xi| = 2 = 2^1
  CHECK((project_k(F, 1) - F).l2_norm() < 1e-15);
  CHECK(project_k(F, 4).l2_norm() == 0.0);  // |xi| = 2^1 well below 2^{4-1}

  SpectralField R = random_field(g, 91, 5);
  R.zero_mean();
  SpectralField sum(g);
  auto [klo, khi] = k_range(g);
  for (int k = klo; k <= khi; ++k) sum += project_k(R, k);
  CHECK((sum - R).l2_norm() / R.l2_norm() < 1e-12);
}

TEST_CASE("band admissibility matches the stated windows") {
  CHECK(band_admissible({0, 0, -9}));   // P ~ 1, Lambda small
  CHECK(band_admissible({3, -9, 0}));   // Lambda ~ 1, P small
  CHECK(!band_admissible({0, -3, -3})); // 2^{2p}+2^q = 1/64 + 1/8 < 1/4
  CHECK(!band_admissible({0, 1, 0}));   // p > 0
  // every grid wavevector with nonzero weight satisfies the constraint
  Grid g(16, 2 * std::numbers::pi);
  for (const BandIndex& b : enumerate_bands(g)) {
    double p2 = std::ldexp(1.0, 2 * b.p), q1 = std::ldexp(1.0, b.q);
    double prod = p2 * q1, mn = std::min(p2, q1);
    CHECK(prod >= mn / 16.0);
    CHECK(prod <= mn * 16.0);
  }
}

TEST_CASE("project_kpq: unit weight at band center, zero for inadmissible") {
  Grid g(16, 2 * std::numbers::pi);
  // xi = (3,0,4): |xi|=5, |xi_h|=3, |xi_3|=4. Weight factors are all phi at
  // arguments inside (1/2,2), nonzero; exact unit weight needs the dyadic
  // center, so test the pointwise formula instead.
  BandIndex b{2, -1, 0};
  auto w = band_weight(b, {3, 0, 4});
  double expect = phi_k(5.0, 2) * phi(std::ldexp(9.0, -2 * (b.p + b.k))) *
                  phi_k(4.0, b.q + b.k);
  CHECK(w == doctest::Approx(expect));
  BandIndex bad{2, -3, -3};
  CHECK(band_weight(bad, {3, 0, 4}) == 0.0);
  SpectralField F = random_field(g, 12, 5);
  CHECK(project_kpq(F, bad).l2_norm() == 0.0);
}

TEST_CASE("project_kpq summation matches the independently summed weight") {
  Grid g(16, 2 * std::numbers::pi);
  SpectralField F = random_field(g, 101, 6);
  F.zero_mean();
  auto bands = enumerate_bands(g);
  // field-level sum over bands at fixed k
  int k = 2;
  SpectralField sum(g);
  for (const BandIndex& b : bands)
    if (b.k == k) sum += project_kpq(F, b);
  // pointwise oracle: direct summation of scalar weights
  double err = 0.0;
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int kk = 0; kk < g.n; ++kk) {
        auto xi = g.xi(i, j, kk);
        double w = 0.0;
        for (const BandIndex& b : bands)
          if (b.k == k) w += band_weight(b, xi);
        err = std::max(err, std::abs(sum.at(i, j, kk) - w * F.at(i, j, kk)));
      }
  CHECK(err < 1e-10);
}

TEST_CASE("fattened projector leaves projected fields unchanged") {
  Grid g(16, 2 * std::numbers::pi);
  SpectralField F = random_field(g, 55, 6);
  BandIndex b{2, 0, -1};
  REQUIRE(band_admissible(b));
  SpectralField pf = project_kpq(F, b);
  SpectralField pff = project_kpq_fat(pf, b);
  CHECK((pff - pf).l2_norm() <= 1e-12 * std::max(1.0, pf.l2_norm()));
}

TEST_CASE("norm_B: single-band field and homogeneity") {
  Grid g(16, 2 * std::numbers::pi);
  SpectralField F = random_field(g, 77, 6);
  BandIndex b{2, -1, 0};
  REQUIRE(band_admissible(b));
  SpectralField pf = project_kpq_fat(project_kpq(F, b), b);
  // For data already localized in one band the sup could a priori see
  // neighboring overlapping bands; the exact statement from the norm
  // definition is the lower bound by this band's term, with equality when a
  // single band dominates. Check the dominant-band identity on pf projected
  // once more (band weight exactly 1 where phibar plateau holds is not
  // guaranteed, so asser the sup >= this band's term and scaling).
  SpectralField single = project_kpq(F, b);
  BNormResult r = norm_B(single);
  double term = std::ldexp(project_kpq(single, b).l2_norm(), -b.p) *
                std::exp2(-0.5 * b.q);
  CHECK(r.value >= term - 1e-12);
  BNormResult r2 = norm_B(cplx(3.0, 0.0) * single);
  CHECK(r2.value == doctest::Approx(3.0 * r.value).epsilon(1e-12));
  CHECK(r2.argmax == r.argmax);
  (void)pf;
}

TEST_CASE("norm_B two-band field vs explicit two-term oracle") {
  Grid g(16, 2 * std::numbers::pi);
  SpectralField F = random_field(g, 210, 6);
  BandIndex b1{1, 0, -2}, b2{3, -1, 0};
  REQUIRE(band_admissible(b1));
  REQUIRE(band_admissible(b2));
  SpectralField two = project_kpq(F, b1) + project_kpq(F, b2);
  BNormResult r = norm_B(two);
  // oracle: explicit evaluation over all bands of the two-band field
  double best = 0.0;
  for (const BandIndex& b : enumerate_bands(g)) {
    double v = std::ldexp(project_kpq(two, b).l2_norm(), -b.p) *
               std::exp2(-0.5 * b.q);
    best = std::max(best, v);
  }
  CHECK(r.value == doctest::Approx(best).epsilon(1e-12));
}

TEST_CASE("Sobolev and H^{-1} norms on single modes") {
  Grid g(16, 2 * std::numbers::pi);
  SpectralField F(g);
  F.at(1, 0, 0) = cplx(2.0, 0.0);  // |xi| = 1
  CHECK(norm_sobolev(F, 1.0) == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-14));
  CHECK(norm_sobolev(F, 0.0) == doctest::Approx(F.l2_norm()).epsilon(1e-14));
  SpectralField H(g);
  H.at(0, 2, 0) = cplx(3.0, 0.0);  // |xi| = 2
  CHECK(norm_Hneg1(H) == doctest::Approx(1.5).epsilon(1e-14));
}

TEST_CASE("fourier_linf_ratio: zero field and finite positive ratios") {
  SData sd{1.0, 2.0, 0.5, 0.25};
  CHECK(fourier_linf_ratio(0.0, {0, 0, 0}, sd) == 0.0);
  double r = fourier_linf_ratio(0.7, {2, -1, 0}, sd);
  CHECK(r > 0.0);
  CHECK(std::isfinite(r));
}
