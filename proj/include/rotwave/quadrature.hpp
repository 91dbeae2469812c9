// Continuum (R^3) representation of axisymmetric Fourier-side data on a 2D
// Gauss-Legendre grid in (rho, Lambda), used for everything that is
// meaningless on a torus: dispersive decay of e^{i t Lambda}, the D norm
// (which needs S = rho d_rho), and the Fourier-L-infinity control ratios.
//
// Fourier convention on R^3: f(x) = (2pi)^{-3} int f-hat(xi) e^{i xi.x} dxi,
// so for axisymmetric f-hat and x = (xt, 0, z),
//   (e^{i t Lambda} f)(x) = (2pi)^{-2} int e^{i(t Lam + rho Lam z)}
//                            J0(rho sqrt(1-Lam^2) xt) f-hat rho^2 drho dLam.
// L2 norms on profiles carry the theta measure: ||f||^2 = 2pi int |f-hat|^2
// rho^2 drho dLam.
#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "rotwave/bands.hpp"

namespace rotwave {

// Gauss-Legendre nodes and weights on [a, b].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
  double a = -1.0;
  double b = 1.0;
};
GaussLegendre gauss_legendre(int n, double a, double b);

double bessel_j0(double x);  // absolute error < 1e-12 everywhere

struct QuadratureGrid2D {
  GaussLegendre rho;      // on [rho_min, rho_max]
  GaussLegendre lam;      // on [-1, 1]

  QuadratureGrid2D() = default;
  QuadratureGrid2D(int n_rho, double rho_min, double rho_max, int n_lam);

  int nr() const { return static_cast<int>(rho.nodes.size()); }
  int nl() const { return static_cast<int>(lam.nodes.size()); }
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * nl() + j;
  }
};

struct RadialProfile {
  QuadratureGrid2D grid;
  std::vector<std::complex<double>> values;  // f-hat(rho_i, Lambda_j)

  RadialProfile() = default;
  explicit RadialProfile(const QuadratureGrid2D& g)
      : grid(g), values(g.nr() * g.nl(), {0.0, 0.0}) {}

  double l2_norm() const;         // with the 2 pi rho^2 measure
  double max_abs() const;
};

// S = rho d_rho and Ups = -sqrt(1-Lambda^2) d_Lambda via global polynomial
// (barycentric) differentiation on the Gauss-Legendre nodes.
RadialProfile apply_S(const RadialProfile& f);
RadialProfile apply_Upsilon(const RadialProfile& f);

// (e^{i t Lambda} f)(x) at x = (xt, 0, z), xt >= 0.
std::complex<double> semigroup_point_eval(const RadialProfile& f, double xt,
                                          double z, double t);
// Physical-space value at the origin (t = 0 specialization, xt = z = 0).
std::complex<double> profile_value_at_origin(const RadialProfile& f);

// Nodes-per-period resolution check for the oscillatory integral. The check
// counts nodes inside the profile's radial support [rho_lo, rho_hi] (pass the
// grid bounds when unknown) and accounts for the mid-interval thinning of
// Gauss-Legendre nodes.
bool oscillation_budget_ok(const QuadratureGrid2D& g, double xt, double z, double t,
                           double rho_lo, double rho_hi,
                           double min_nodes_per_period = 6.0);
// Radial support [lo, hi] of |f| above 1e-9 of its max.
std::pair<double, double> radial_support(const RadialProfile& f);

// Band weight on the quadrature grid (same bump machinery as the torus side).
RadialProfile apply_band(const RadialProfile& f, const BandIndex& b);
double band_sup_abs(const RadialProfile& f, const BandIndex& b);

struct DNormResult {
  double value = 0.0;
  int arg_a = 0;                  // number of S copies attaining the sup
  double b_part = 0.0;            // B-norm part at arg_a
  double ups_part = 0.0;          // ||Ups S^a f|| part at arg_a
};

// D = max over a in {0..3} of ||S^a f||_B + ||Ups S^a f||_2. Rejects
// profiles whose Legendre-coefficient tails indicate insufficient resolution.
DNormResult d_norm(const RadialProfile& f);

// B norm on the quadrature representation (sup over admissible bands).
BNormResult profile_norm_B(const RadialProfile& f);

// Norm bundle for the Fourier-L-infinity control check.
SData profile_sdata(const RadialProfile& f);

// ---- decay study ---------------------------------------------------------------

struct DecayPoint {
  double t = 0.0;
  double sup = 0.0;                  // sup over the x-sample set of |e^{itL} f|
  double empirical_constant = 0.0;   // sup * t / (2^{3k/2} ||f||_D)
};

struct DecayCurve {
  std::vector<DecayPoint> points;
  double slope = 0.0;       // least-squares slope of log sup vs log t
  double d_norm_value = 0.0;
  bool budget_ok = true;
};

// Profiles for the studies.
RadialProfile gaussian_radial_profile(const QuadratureGrid2D& g, double center,
                                      double width);
// Smooth profile localized in the band (k,p,q), with a deterministic
// Lambda-dependent modulation (seed).
RadialProfile band_profile(const QuadratureGrid2D& g, const BandIndex& b,
                           uint64_t seed);

// sup over stationary-phase x-targets (plus the origin) for each t; the
// x-set scales with t as x = -t grad Lambda(xi*) over in-band points xi*.
DecayCurve decay_study(const RadialProfile& f, const BandIndex& b,
                       const std::vector<double>& times, int n_targets = 64);

}  // namespace rotwave
