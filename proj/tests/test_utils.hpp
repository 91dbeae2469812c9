// Shared helpers for the test suites.
#pragma once

#include <cmath>

#include "rotwave/grid.hpp"
#include "rotwave/rng.hpp"
#include "rotwave/symbols.hpp"

namespace rotwave::testutil {

// Random real field: draw Hermitian spectral data band-limited to |m_i| <= mmax,
// mean-free, Nyquist-free. Deterministic via seed.
inline SpectralField random_field(const Grid& g, uint64_t seed, int mmax) {
  SpectralField F(g);
  SplitMix64 rng(seed);
  for (int mi = -mmax; mi <= mmax; ++mi)
    for (int mj = -mmax; mj <= mmax; ++mj)
      for (int mk = -mmax; mk <= mmax; ++mk) {
        if (mi == 0 && mj == 0 && mk == 0) continue;
        cplx v(rng.uniform(-1, 1), rng.uniform(-1, 1));
        int i = g.unfold(mi), j = g.unfold(mj), k = g.unfold(mk);
        int in = g.unfold(-mi), jn = g.unfold(-mj), kn = g.unfold(-mk);
        F.coeffs[g.index(i, j, k)] += 0.5 * v;
        F.coeffs[g.index(in, jn, kn)] += 0.5 * std::conj(v);
      }
  return F;
}

// Random divergence-free mean-free vector field with axis modes zeroed.
inline SpectralVectorField random_divfree(const Grid& g, uint64_t seed, int mmax) {
  SpectralVectorField u(g);
  for (int a = 0; a < 3; ++a) u.comp[a] = random_field(g, seed + a, mmax);
  for (int a = 0; a < 3; ++a) u.comp[a].zero_axis();
  return leray_project(u);
}

inline double relerr(double got, double want) {
  double denom = std::max(std::abs(want), 1e-300);
  return std::abs(got - want) / denom;
}

}  // namespace rotwave::testutil
