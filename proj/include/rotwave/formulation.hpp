// Changes of unknowns for divergence-free fields:
//   u  <->  (a, c)      a-hat = i(xi1 u2 - xi2 u1)/|xi_h|, c-hat = |xi|/|xi_h| u3
//   (a, c) <-> (U+, U-)  U+- = a +- c
//   (U+, U-) <-> profiles  via multiplication by e^{-+ i t Lambda}
// plus axisymmetric data generation and the grid-exact axisymmetry oracle.
//
// Axis modes (xi_h = 0) and the zero mode are excluded by convention: the
// (a,c) change of variables is singular there, all conversions zero them, and
// test data is generated with them absent.
#pragma once

#include <cstdint>

#include "rotwave/grid.hpp"
#include "rotwave/symbols.hpp"

namespace rotwave {

struct ScalarPair {
  SpectralField a;
  SpectralField c;
};

struct DispersivePair {
  SpectralField Uplus;
  SpectralField Uminus;
};

struct ProfilePair {
  SpectralField Pplus;
  SpectralField Pminus;
  double time = 0.0;
};

// Rejects inputs with divergence residual beyond 1e-10.
ScalarPair velocity_to_scalars(const SpectralVectorField& u);
// u = U_a + U_c with U_a = -grad_h-perp |grad_h|^{-1} a,
// U_c^j = Lam |grad_h|^{-1} d_j c (j=1,2), U_c^3 = sqrt(1-Lambda^2) c.
SpectralVectorField scalars_to_velocity(const ScalarPair& s);

DispersivePair to_dispersive(const ScalarPair& s);
ScalarPair from_dispersive(const DispersivePair& d);

ProfilePair to_profiles(const DispersivePair& d, double t);
DispersivePair from_profiles(const ProfilePair& p);

struct ParsevalSplit {
  double lhs = 0.0;     // ||m u||_2^2
  double rhs = 0.0;     // ||m a||_2^2 + ||m c||_2^2
  double relerr = 0.0;
};

// Checks ||m u||^2 = ||m a||^2 + ||m c||^2 for a scalar multiplier m.
ParsevalSplit parseval_split_check(const SpectralVectorField& u, const SymbolFn& m);

// Spectrum parameters for generated data: Gaussian radial envelope centered
// at |xi| ~ k0.
struct Spectrum {
  double k0 = 0.5;
  double width = 0.15;
  double amplitude = 1.0;
};

// Axisymmetric (a,c): a common value is assigned to every grid mode in the
// same (|xi_h|^2, xi3) ring (exact integer squared norms), with Hermitian
// symmetry, axis modes zero, and a smooth |xi_h|^2/|xi|^2 axis taper.
ScalarPair make_axisymmetric_data(const Grid& g, uint64_t seed, const Spectrum& sp);

// (a,c) supported on horizontal frequencies parallel to a single lattice
// direction. Quadratic interactions of such data carry no angular content
// (all horizontal cross products vanish), so the axisymmetric reformulation
// identities hold exactly on the periodic grid. Used by the reformulation
// equivalence oracle. max_mode bounds |m_i| componentwise (alias control).
ScalarPair make_collinear_data(const Grid& g, uint64_t seed, const Spectrum& sp,
                               int max_mode);

// a-only data on a single horizontal ring |xi_h|^2 = ring_sq (all xi3), for
// which the pure-swirl sector of the reformulation is grid-exact.
ScalarPair make_single_ring_swirl_data(const Grid& g, uint64_t seed, int ring_sq,
                                       int max_mode3, double amplitude);

// || R^{-1} o u o R - u ||_2 / ||u||_2 for the exact 90-degree grid rotation
// R about e3. Rejects grids with n % 4 != 0.
double axisymmetry_deviation(const SpectralVectorField& u);
double axisymmetry_deviation(const SpectralField& f);

}  // namespace rotwave
