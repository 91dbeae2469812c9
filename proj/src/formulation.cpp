#include "rotwave/formulation.hpp"

#include <cmath>
#include <stdexcept>

#include "rotwave/rng.hpp"
#include "rotwave/symbols.hpp"

namespace rotwave {

ScalarPair velocity_to_scalars(const SpectralVectorField& u) {
  double div = u.divergence_residual();
  if (div > 1e-10)
    throw std::runtime_error("velocity_to_scalars: input not divergence-free");
  const Grid& g = u.grid();
  ScalarPair s{SpectralField(g), SpectralField(g)};
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int k = 0; k < g.n; ++k) {
        std::size_t id = g.index(i, j, k);
        auto xi = g.xi(i, j, k);
        double rh = std::hypot(xi[0], xi[1]);
        if (rh == 0.0) continue;  // axis convention
        double r = std::sqrt(rh * rh + xi[2] * xi[2]);
        cplx u1 = u.comp[0].coeffs[id], u2 = u.comp[1].coeffs[id],
             u3 = u.comp[2].coeffs[id];
        s.a.coeffs[id] = cplx(0, 1) * (xi[0] * u2 - xi[1] * u1) / rh;
        s.c.coeffs[id] = (r / rh) * u3;
      }
  return s;
}

SpectralVectorField scalars_to_velocity(const ScalarPair& s) {
  const Grid& g = s.a.grid;
  SpectralVectorField u(g);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int k = 0; k < g.n; ++k) {
        std::size_t id = g.index(i, j, k);
        auto xi = g.xi(i, j, k);
        double rh = std::hypot(xi[0], xi[1]);
        if (rh == 0.0) continue;
        double r = std::sqrt(rh * rh + xi[2] * xi[2]);
        double lam = xi[2] / r;
        cplx a = s.a.coeffs[id], c = s.c.coeffs[id];
        // U_a = -grad_h-perp |grad_h|^{-1} a: components (i xi2, -i xi1)/|xi_h| * a
        cplx ua1 = cplx(0, xi[1] / rh) * a;
        cplx ua2 = cplx(0, -xi[0] / rh) * a;
        // U_c^j = (i Lambda)(i xi_j)/|xi_h| c = -Lambda xi_j / |xi_h| * c
        cplx uc1 = -lam * xi[0] / rh * c;
        cplx uc2 = -lam * xi[1] / rh * c;
        cplx uc3 = (rh / r) * c;
        u.comp[0].coeffs[id] = ua1 + uc1;
        u.comp[1].coeffs[id] = ua2 + uc2;
        u.comp[2].coeffs[id] = uc3;
      }
  return u;
}

DispersivePair to_dispersive(const ScalarPair& s) {
  return {s.a + s.c, s.a - s.c};
}

ScalarPair from_dispersive(const DispersivePair& d) {
  ScalarPair s{d.Uplus + d.Uminus, d.Uplus - d.Uminus};
  s.a *= 0.5;
  s.c *= 0.5;
  return s;
}

namespace {

SpectralField semigroup_phase(const SpectralField& F, double t, int sign) {
  return apply_symbol(F, [t, sign](const std::array<double, 3>& xi) {
    double lam = lambda_sym(xi);
    return std::polar(1.0, sign * t * lam);
  });
}

}  // namespace

ProfilePair to_profiles(const DispersivePair& d, double t) {
  // U+ profile: e^{-t Lam} U+ = multiply by e^{-i t Lambda}; U-: e^{+i t Lambda}.
  return {semigroup_phase(d.Uplus, t, -1), semigroup_phase(d.Uminus, t, +1), t};
}

DispersivePair from_profiles(const ProfilePair& p) {
  return {semigroup_phase(p.Pplus, p.time, +1), semigroup_phase(p.Pminus, p.time, -1)};
}

ParsevalSplit parseval_split_check(const SpectralVectorField& u, const SymbolFn& m) {
  ScalarPair s = velocity_to_scalars(u);
  SpectralVectorField mu = apply_symbol(u, m);
  SpectralField ma = apply_symbol(s.a, m), mc = apply_symbol(s.c, m);
  ParsevalSplit out;
  double lu = mu.l2_norm(), la = ma.l2_norm(), lc = mc.l2_norm();
  out.lhs = lu * lu;
  out.rhs = la * la + lc * lc;
  double denom = std::max({out.lhs, out.rhs, 1e-300});
  out.relerr = std::abs(out.lhs - out.rhs) / denom;
  return out;
}

namespace {

// Ring value: deterministic function of (seed, |m_h|^2, m3) so enumeration
// order does not matter. Hermitian symmetry couples (rh2, m3) and (rh2, -m3).
cplx ring_value(uint64_t seed, int rh2, int m3, const Spectrum& sp, double xi_norm,
                double xi_h_over_xi) {
  int m3a = std::abs(m3);
  uint64_t key = SplitMix64::mix(seed, (static_cast<uint64_t>(rh2) << 20) |
                                           static_cast<uint64_t>(m3a));
  SplitMix64 g(key);
  double mag = g.next_double();
  double ph = g.uniform(0.0, 2.0 * 3.14159265358979323846);
  double env = std::exp(-0.5 * std::pow((xi_norm - sp.k0) / sp.width, 2));
  // Smooth axis taper: axisymmetric fields built from (a,c) vanish on the
  // vertical axis; P^2 keeps the discrete data consistent with that.
  env *= xi_h_over_xi * xi_h_over_xi;
  cplx v = sp.amplitude * mag * env * std::polar(1.0, ph);
  if (m3 == 0) return cplx(v.real(), 0.0);
  return m3 > 0 ? v : std::conj(v);
}

}  // namespace

ScalarPair make_axisymmetric_data(const Grid& g, uint64_t seed, const Spectrum& sp) {
  ScalarPair s{SpectralField(g), SpectralField(g)};
  const int n = g.n;
  for (int i = 0; i < n; ++i) {
    int mi = g.fold(i);
    if (g.is_nyquist(i)) continue;
    for (int j = 0; j < n; ++j) {
      int mj = g.fold(j);
      if (g.is_nyquist(j)) continue;
      int rh2 = mi * mi + mj * mj;
      if (rh2 == 0) continue;  // axis modes excluded
      for (int k = 0; k < n; ++k) {
        if (g.is_nyquist(k)) continue;
        int mk = g.fold(k);
        auto xi = g.xi(i, j, k);
        double rh = std::hypot(xi[0], xi[1]);
        double r = std::sqrt(rh * rh + xi[2] * xi[2]);
        std::size_t id = g.index(i, j, k);
        s.a.coeffs[id] = ring_value(seed, rh2, mk, sp, r, rh / r);
        s.c.coeffs[id] = ring_value(seed ^ 0x5bf0fb, rh2, mk, sp, r, rh / r);
      }
    }
  }
  return s;
}

ScalarPair make_collinear_data(const Grid& g, uint64_t seed, const Spectrum& sp,
                               int max_mode) {
  ScalarPair s{SpectralField(g), SpectralField(g)};
  // Primitive horizontal direction drawn from a small set.
  static const int dirs[4][2] = {{1, 0}, {0, 1}, {1, 1}, {1, -1}};
  SplitMix64 pick(SplitMix64::mix(seed, 0xd1));
  const int* v = dirs[pick.next_below(4)];
  for (int m = -max_mode; m <= max_mode; ++m) {
    if (m == 0) continue;
    int mi = m * v[0], mj = m * v[1];
    if (std::abs(mi) > max_mode || std::abs(mj) > max_mode) continue;
    for (int mk = -max_mode; mk <= max_mode; ++mk) {
      int i = g.unfold(mi), j = g.unfold(mj), k = g.unfold(mk);
      auto xi = g.xi(i, j, k);
      double rh = std::hypot(xi[0], xi[1]);
      double r = std::sqrt(rh * rh + xi[2] * xi[2]);
      std::size_t id = g.index(i, j, k);
      // Key on the signed line coordinate so Hermitian pairs match:
      // (-m,-mk) must conjugate (m,mk).
      auto value = [&](uint64_t salt) {
        int ms = m, m3 = mk;
        bool flip = (ms < 0) || (ms == 0 && m3 < 0);
        if (flip) { ms = -ms; m3 = -m3; }
        uint64_t key = SplitMix64::mix(seed ^ salt,
                                       (static_cast<uint64_t>(ms) << 24) |
                                           static_cast<uint64_t>(m3 + (1 << 20)));
        SplitMix64 rg(key);
        double mag = rg.next_double();
        double ph = rg.uniform(0.0, 2.0 * 3.14159265358979323846);
        double env = std::exp(-0.5 * std::pow((r - sp.k0) / sp.width, 2));
        cplx val = sp.amplitude * mag * env * std::polar(1.0, ph);
        return flip ? std::conj(val) : val;
      };
      s.a.coeffs[id] = value(0xaa);
      s.c.coeffs[id] = value(0xcc);
    }
  }
  return s;
}

ScalarPair make_single_ring_swirl_data(const Grid& g, uint64_t seed, int ring_sq,
                                       int max_mode3, double amplitude) {
  ScalarPair s{SpectralField(g), SpectralField(g)};
  const int n = g.n;
  int lim = static_cast<int>(std::sqrt(static_cast<double>(ring_sq))) + 1;
  for (int mi = -lim; mi <= lim; ++mi)
    for (int mj = -lim; mj <= lim; ++mj) {
      if (mi * mi + mj * mj != ring_sq) continue;
      for (int mk = -max_mode3; mk <= max_mode3; ++mk) {
        int i = g.unfold(mi), j = g.unfold(mj), k = g.unfold(mk);
        if (g.is_nyquist(i) || g.is_nyquist(j) || g.is_nyquist(k)) continue;
        uint64_t key = SplitMix64::mix(seed, static_cast<uint64_t>(std::abs(mk)));
        SplitMix64 rg(key);
        double mag = rg.next_double();
        double ph = rg.uniform(0.0, 2.0 * 3.14159265358979323846);
        cplx v = amplitude * mag * std::polar(1.0, ph);
        if (mk == 0) v = cplx(v.real(), 0.0);
        if (mk < 0) v = std::conj(v);
        s.a.coeffs[g.index(i, j, k)] = v;
      }
    }
  (void)n;
  return s;
}

namespace {

// v-hat(xi) = R^T u-hat(R xi) for the 90-degree rotation R about e3,
// R(x1,x2,x3) = (-x2, x1, x3).
SpectralVectorField rotate_quarter(const SpectralVectorField& u) {
  const Grid& g = u.grid();
  SpectralVectorField v(g);
  for (int i = 0; i < g.n; ++i) {
    int mi = g.fold(i);
    for (int j = 0; j < g.n; ++j) {
      int mj = g.fold(j);
      for (int k = 0; k < g.n; ++k) {
        // R xi has mode indices (-mj, mi, mk); Nyquist modes are zero anyway.
        if (g.is_nyquist(i) || g.is_nyquist(j)) continue;
        int ri = g.unfold(-mj), rj = g.unfold(mi);
        std::size_t src = g.index(ri, rj, k);
        std::size_t dst = g.index(i, j, k);
        cplx a1 = u.comp[0].coeffs[src], a2 = u.comp[1].coeffs[src],
             a3 = u.comp[2].coeffs[src];
        // R^T (a1,a2,a3) = (a2, -a1, a3)
        v.comp[0].coeffs[dst] = a2;
        v.comp[1].coeffs[dst] = -a1;
        v.comp[2].coeffs[dst] = a3;
      }
    }
  }
  return v;
}

}  // namespace

double axisymmetry_deviation(const SpectralVectorField& u) {
  if (u.grid().n % 4 != 0)
    throw std::runtime_error("axisymmetry_deviation: grid n must be divisible by 4");
  double nu = u.l2_norm();
  if (nu == 0.0) return 0.0;
  SpectralVectorField v = rotate_quarter(u);
  v -= u;
  return v.l2_norm() / nu;
}

double axisymmetry_deviation(const SpectralField& f) {
  const Grid& g = f.grid;
  if (g.n % 4 != 0)
    throw std::runtime_error("axisymmetry_deviation: grid n must be divisible by 4");
  double nf = f.l2_norm();
  if (nf == 0.0) return 0.0;
  double acc = 0.0;
  for (int i = 0; i < g.n; ++i) {
    int mi = g.fold(i);
    for (int j = 0; j < g.n; ++j) {
      int mj = g.fold(j);
      for (int k = 0; k < g.n; ++k) {
        if (g.is_nyquist(i) || g.is_nyquist(j)) continue;
        int ri = g.unfold(-mj), rj = g.unfold(mi);
        acc += std::norm(f.coeffs[g.index(ri, rj, k)] - f.coeffs[g.index(i, j, k)]);
      }
    }
  }
  return std::sqrt(acc) / nf;
}

}  // namespace rotwave
