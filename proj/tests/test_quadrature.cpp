// propagator-solver, continuum path: Gauss-Legendre, Bessel J0, the reduced
// oscillatory integral (sharpness + 3D-quadrature oracle), S/Upsilon on
// profiles, the D norm and the decay study.
#include <cmath>
#include <complex>
#include <numbers>

#include "doctest.h"
#include "rotwave/bands.hpp"
#include "rotwave/quadrature.hpp"
#include "rotwave/rng.hpp"

using namespace rotwave;

namespace {
const double kPi = std::numbers::pi;
using cxd = std::complex<double>;
}  // namespace

TEST_CASE("gauss_legendre: cell measure and polynomial exactness") {
  for (int n : {16, 64, 256}) {
    GaussLegendre gl = gauss_legendre(n, -1.0, 1.0);
    double s = 0.0;
    for (double w : gl.weights) {
      CHECK(w > 0.0);
      s += w;
    }
    CHECK(std::abs(s - 2.0) < 1e-12);
  }
  GaussLegendre gl = gauss_legendre(8, 0.0, 1.0);
  double i5 = 0.0, i15 = 0.0;
  for (int i = 0; i < 8; ++i) {
    i5 += gl.weights[i] * std::pow(gl.nodes[i], 5);
    i15 += gl.weights[i] * std::pow(gl.nodes[i], 15);
  }
  CHECK(i5 == doctest::Approx(1.0 / 6.0).epsilon(1e-13));
  CHECK(i15 == doctest::Approx(1.0 / 16.0).epsilon(1e-13));  // degree 15 on 8 nodes
}

TEST_CASE("bessel_j0: value, ODE residual, integral-definition oracle") {
  CHECK(bessel_j0(0.0) == 1.0);
  // x J0'' + J0' + x J0 = 0 via central differences
  for (double x : {0.7, 3.3, 9.1, 14.0, 22.5}) {
    double h = 1e-3;
    double f0 = bessel_j0(x), fp = bessel_j0(x + h), fm = bessel_j0(x - h);
    double d1 = (fp - fm) / (2 * h);
    double d2 = (fp - 2 * f0 + fm) / (h * h);
    CHECK(std::abs(x * d2 + d1 + x * f0) < 1e-6);
  }
  // J0(x) = (1/2pi) int_0^{2pi} cos(x sin th) dth by periodic trapezoid
  for (double x : {1.0, 5.0, 20.0}) {
    int n = 4096;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += std::cos(x * std::sin(2 * kPi * i / n));
    acc /= n;
    CHECK(std::abs(acc - bessel_j0(x)) < 1e-10);
  }
  // reference values on both sides of the series/asymptotic switch at x = 13
  struct Ref {
    double x, j0;
  };
  const Ref refs[] = {
      {1.0, 0.765197686557966551},      {5.0, -0.177596771314338304},
      {12.999999999, 0.206926102306749759}, {13.000000001, 0.206926102447385863},
      {16.5, -0.19638069293686103},     {25.3, 0.128807221627909525},
      {100.1, 0.0275838733438867749},
  };
  for (const Ref& r : refs) CHECK(std::abs(bessel_j0(r.x) - r.j0) < 1e-12);
}

TEST_CASE("radial sharpness: (e^{itL} f)(0) = sin(t)/t f(0)") {
  QuadratureGrid2D g(256, 1e-3, 8.0, 512);
  RadialProfile f = gaussian_radial_profile(g, 1.0, 0.5);
  cxd f0 = profile_value_at_origin(f);
  REQUIRE(std::abs(f0) > 0.0);
  for (double t : {0.5, 1.0, 5.0, 20.0, 50.0}) {
    cxd I = semigroup_point_eval(f, 0.0, 0.0, t);
    double want = std::sin(t) / t;
    CHECK(std::abs(I - want * f0) / std::abs(f0) < 1e-6);
  }
  CHECK(oscillation_budget_ok(g, 0.0, 0.0, 50.0, 1e-3, 8.0));
  RadialProfile zero(g);
  CHECK(std::abs(semigroup_point_eval(zero, 0.3, 0.2, 2.0)) == 0.0);
}

TEST_CASE("t = 0 point values match a 3D quadrature with explicit theta sum") {
  QuadratureGrid2D g(128, 1e-3, 6.0, 128);
  RadialProfile f(g);
  for (int i = 0; i < g.nr(); ++i)
    for (int j = 0; j < g.nl(); ++j) {
      double r = g.rho.nodes[i], lam = g.lam.nodes[j];
      f.values[g.index(i, j)] =
          std::exp(-r * r) * (1.0 + 0.5 * lam) * (1 - lam * lam);
    }
  SplitMix64 rng(11);
  for (int s = 0; s < 10; ++s) {
    double xt = rng.uniform(0.0, 1.5), z = rng.uniform(-1.5, 1.5);
    cxd got = semigroup_point_eval(f, xt, z, 0.0);
    // direct: (2pi)^{-3} sum over (rho, lam, theta)
    int nth = 128;
    cxd acc(0, 0);
    for (int i = 0; i < g.nr(); ++i) {
      double r = g.rho.nodes[i];
      double wr = g.rho.weights[i] * r * r;
      for (int j = 0; j < g.nl(); ++j) {
        double lam = g.lam.nodes[j], wl = g.lam.weights[j];
        double P = std::sqrt(std::max(0.0, 1.0 - lam * lam));
        cxd th_acc(0, 0);
        for (int m = 0; m < nth; ++m) {
          double th = 2 * kPi * m / nth;
          th_acc += std::polar(1.0, r * P * std::cos(th) * xt + r * lam * z);
        }
        acc += wr * wl * f.values[g.index(i, j)] * th_acc * (2 * kPi / nth);
      }
    }
    acc /= std::pow(2 * kPi, 3);
    CHECK(std::abs(got - acc) / std::max(std::abs(acc), 1e-12) < 1e-8);
  }
}

TEST_CASE("apply_S and apply_Upsilon reproduce analytic derivatives") {
  QuadratureGrid2D g(96, 1e-3, 6.0, 96);
  RadialProfile f(g), want_s(g);
  for (int i = 0; i < g.nr(); ++i)
    for (int j = 0; j < g.nl(); ++j) {
      double r = g.rho.nodes[i], lam = g.lam.nodes[j];
      f.values[g.index(i, j)] = std::exp(-r * r) * lam;
      want_s.values[g.index(i, j)] = -2.0 * r * r * std::exp(-r * r) * lam;
    }
  RadialProfile got_s = apply_S(f);
  double errs = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i)
    errs = std::max(errs, std::abs(got_s.values[i] - want_s.values[i]));
  CHECK(errs < 1e-6);

  // Ups (exp(-r^2) lam) = -sqrt(1-lam^2) exp(-r^2)
  RadialProfile got_u = apply_Upsilon(f);
  double erru = 0.0;
  for (int i = 0; i < g.nr(); ++i)
    for (int j = 0; j < g.nl(); ++j) {
      double r = g.rho.nodes[i], lam = g.lam.nodes[j];
      double want = -std::sqrt(1 - lam * lam) * std::exp(-r * r);
      erru = std::max(erru, std::abs(got_u.values[g.index(i, j)] - want));
    }
  CHECK(erru < 1e-6);
}

TEST_CASE("d_norm: radial profile has no Upsilon part; homogeneity") {
  QuadratureGrid2D g(128, 1e-3, 6.0, 64);
  RadialProfile f = gaussian_radial_profile(g, 1.0, 0.4);
  DNormResult d = d_norm(f);
  CHECK(d.value > 0.0);
  CHECK(d.ups_part < 1e-9 * d.value);
  RadialProfile f3 = f;
  for (auto& v : f3.values) v *= 3.0;
  DNormResult d3 = d_norm(f3);
  CHECK(d3.value == doctest::Approx(3.0 * d.value).epsilon(1e-10));
}

TEST_CASE("d_norm rejects under-resolved profiles") {
  QuadratureGrid2D g(48, 1e-3, 6.0, 48);
  RadialProfile f(g);
  for (int i = 0; i < g.nr(); ++i)
    for (int j = 0; j < g.nl(); ++j)
      f.values[g.index(i, j)] = std::cos(60.0 * g.rho.nodes[i]);
  CHECK_THROWS(d_norm(f));
}

TEST_CASE("fourier L-infinity control ratios stay bounded") {
  QuadratureGrid2D g(96, 1e-3, 6.0, 96);
  BandIndex b{0, -1, 0};
  REQUIRE(band_admissible(b));
  double maxratio = 0.0;
  for (uint64_t seed = 1; seed <= 50; ++seed) {
    RadialProfile f = band_profile(g, b, seed);
    if (f.max_abs() == 0.0) continue;
    SData sd = profile_sdata(f);
    double ratio = fourier_linf_ratio(band_sup_abs(f, b), b, sd);
    CHECK(ratio > 0.0);
    maxratio = std::max(maxratio, ratio);
  }
  CHECK(maxratio < 32.0);
  MESSAGE("max fourier-Linf ratio over 50 profiles: ", maxratio);
  RadialProfile zero(g);
  CHECK(fourier_linf_ratio(band_sup_abs(zero, b), b, profile_sdata(zero)) == 0.0);
}

TEST_CASE("decay study: radial envelope and band-profile slope (quick)") {
  QuadratureGrid2D g(256, 1e-3, 8.0, 512);
  // radial Gaussian at the origin follows |sin t / t|
  RadialProfile fr = gaussian_radial_profile(g, 1.0, 0.4);
  cxd f0 = profile_value_at_origin(fr);
  for (double t : {2.0, 7.0, 30.0}) {
    cxd I = semigroup_point_eval(fr, 0.0, 0.0, t);
    CHECK(std::abs(std::abs(I) - std::abs(std::sin(t) / t) * std::abs(f0)) <
          1e-6 * std::abs(f0));
  }

  BandIndex b{0, -1, 0};
  QuadratureGrid2D gs(768, 1e-3, 2.5, 1024);
  RadialProfile f = band_profile(gs, b, 3);
  std::vector<double> times;
  for (int a = 0; a < 8; ++a) times.push_back(10.0 * std::pow(10.0, a / 7.0));
  DecayCurve c = decay_study(f, b, times, 8);
  CHECK(c.budget_ok);
  CHECK(c.slope > -1.15);
  CHECK(c.slope < -0.85);
  for (const auto& pt : c.points) CHECK(std::isfinite(pt.empirical_constant));
  MESSAGE("decay slope ", c.slope, " const ", c.points.back().empirical_constant);
}

TEST_CASE("semigroup is unitary on the quadrature representation") {
  QuadratureGrid2D g(96, 1e-3, 6.0, 96);
  RadialProfile f = band_profile(g, {0, -1, 0}, 5);
  double n0 = f.l2_norm();
  for (double t : {0.7, 13.0, 80.0}) {
    RadialProfile ft = f;
    for (int i = 0; i < g.nr(); ++i)
      for (int j = 0; j < g.nl(); ++j)
        ft.values[g.index(i, j)] *= std::polar(1.0, t * g.lam.nodes[j]);
    CHECK(std::abs(ft.l2_norm() - n0) / n0 < 1e-10);
  }
}
