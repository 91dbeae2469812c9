// Anisotropic Littlewood-Paley machinery: the generalized projections
// P_k and P_{k,p,q}, band admissibility, and the norms built on them
// (B, Sobolev, H^{-1}).
//
// P_{k,p,q} localizes |xi| ~ 2^k, |xi_h|/|xi| ~ 2^p, |xi_3|/|xi| ~ 2^q via
//   phi(2^{-k}|xi|) * phi(2^{-2(p+k)}(xi1^2+xi2^2)) * phi(2^{-q-k} xi3).
#pragma once

#include <optional>
#include <vector>

#include "rotwave/grid.hpp"

namespace rotwave {

struct BandIndex {
  int k = 0;
  int p = 0;  // <= 0
  int q = 0;  // <= 0

  bool operator==(const BandIndex& o) const {
    return k == o.k && p == o.p && q == o.q;
  }
};

// Discrete rendering of the paper-level compatibility of (p,q):
//   2^{2p+q} in [2^-4, 2^4] * min(2^{2p}, 2^q)  and  2^{2p} + 2^q in [1/4, 4].
bool band_admissible(const BandIndex& b);

// Pointwise projection weight of the band at wavevector xi (0 if inadmissible).
double band_weight(const BandIndex& b, const std::array<double, 3>& xi);

SpectralField project_k(const SpectralField& F, int k);
SpectralField project_kpq(const SpectralField& F, const BandIndex& b);
// Fattened variant built from phibar; satisfies P'_{k,p,q} P_{k,p,q} = P_{k,p,q}.
SpectralField project_kpq_fat(const SpectralField& F, const BandIndex& b);

// All admissible bands whose weight can be nonzero somewhere on the grid.
std::vector<BandIndex> enumerate_bands(const Grid& g);
// Range of k for which phi_k(|xi|) can be nonzero on the grid.
std::pair<int, int> k_range(const Grid& g);

struct BNormResult {
  double value = 0.0;
  BandIndex argmax;  // band attaining the sup (valid when value > 0)
};

// sup over admissible (k,p,q) of 2^{-p-q/2} ||P_{k,p,q} F||_2 (F mean-free).
BNormResult norm_B(const SpectralField& F);

// (sum (1+|xi|^2)^s |coeffs|^2)^{1/2}.
double norm_sobolev(const SpectralField& F, double s);
// Weight |xi|^{-2} on nonzero modes (discrete H^{-1} rendering; the zero mode
// is excluded, which is the periodic-box approximation of the R^3 low-
// frequency norm).
double norm_Hneg1(const SpectralField& F);

// Norm bundle computed on the continuum quadrature representation
// (propagator side); consumed by fourier_linf_ratio.
struct SData {
  double l2 = 0.0;     // ||f||_2
  double Sl2 = 0.0;    // ||S f||_2
  double Upsl2 = 0.0;  // ||Ups f||_2
  double UpsSl2 = 0.0; // ||Ups S f||_2
};

// Empirical constant of the Fourier-L-infinity control lemma:
//   sup_band |f-hat| / ( 2^{-3k/2} [ 2^{-p} (||f|| + ||Sf||) + ||Ups f|| + ||Ups S f|| ] ).
// Returns 0 for the zero field.
double fourier_linf_ratio(double band_sup_abs, const BandIndex& b, const SData& s);

}  // namespace rotwave
