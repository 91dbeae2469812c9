#include "rotwave/bands.hpp"

#include <array>
#include <cmath>
#include <map>
#include <stdexcept>

#include "rotwave/bump.hpp"

namespace rotwave {

bool band_admissible(const BandIndex& b) {
  if (b.p > 0 || b.q > 0) return false;
  double p2 = std::ldexp(1.0, 2 * b.p);   // 2^{2p}
  double q1 = std::ldexp(1.0, b.q);       // 2^q
  double prod = p2 * q1;                  // 2^{2p+q}
  double mn = std::min(p2, q1);
  if (!(prod >= mn / 16.0 && prod <= mn * 16.0)) return false;
  double s = p2 + q1;
  return s >= 0.25 && s <= 4.0;
}

double band_weight(const BandIndex& b, const std::array<double, 3>& xi) {
  if (!band_admissible(b)) return 0.0;
  double r2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
  if (r2 == 0.0) return 0.0;
  double rh2 = xi[0] * xi[0] + xi[1] * xi[1];
  double w = phi_k(std::sqrt(r2), b.k);
  w *= phi(std::ldexp(rh2, -2 * (b.p + b.k)));
  w *= phi_k(xi[2], b.q + b.k);
  return w;
}

SpectralField project_k(const SpectralField& F, int k) {
  SpectralField out(F.grid);
  const Grid& g = F.grid;
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int kk = 0; kk < g.n; ++kk) {
        std::size_t id = g.index(i, j, kk);
        auto xi = g.xi(i, j, kk);
        double r = std::sqrt(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]);
        out.coeffs[id] = (r > 0.0 ? phi_k(r, k) : 0.0) * F.coeffs[id];
      }
  return out;
}

namespace {

SpectralField project_with(const SpectralField& F, const BandIndex& b, bool fat) {
  SpectralField out(F.grid);
  if (!band_admissible(b)) return out;
  const Grid& g = F.grid;
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int kk = 0; kk < g.n; ++kk) {
        std::size_t id = g.index(i, j, kk);
        auto xi = g.xi(i, j, kk);
        double w;
        if (!fat) {
          w = band_weight(b, xi);
        } else {
          double r2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
          if (r2 == 0.0) { out.coeffs[id] = cplx(0); continue; }
          double rh2 = xi[0] * xi[0] + xi[1] * xi[1];
          w = phibar_k(std::sqrt(r2), b.k);
          w *= phibar(std::ldexp(rh2, -2 * (b.p + b.k)));
          w *= phibar_k(xi[2], b.q + b.k);
        }
        out.coeffs[id] = w * F.coeffs[id];
      }
  return out;
}

}  // namespace

SpectralField project_kpq(const SpectralField& F, const BandIndex& b) {
  return project_with(F, b, false);
}

SpectralField project_kpq_fat(const SpectralField& F, const BandIndex& b) {
  return project_with(F, b, true);
}

std::pair<int, int> k_range(const Grid& g) {
  double kmin_mag = g.dk();                        // smallest nonzero |xi|
  double kmax_mag = std::sqrt(3.0) * g.max_wavenumber();
  // supp phi_k = [2^{k-1}, 2^{k+1}]
  int klo = static_cast<int>(std::floor(std::log2(kmin_mag))) - 1;
  int khi = static_cast<int>(std::ceil(std::log2(kmax_mag))) + 1;
  return {klo, khi};
}

std::vector<BandIndex> enumerate_bands(const Grid& g) {
  auto [klo, khi] = k_range(g);
  // P = |xi_h|/|xi| >= dk / (sqrt(3) max_wavenumber) off the axis; same for q.
  double ratio_min = g.dk() / (std::sqrt(3.0) * g.max_wavenumber());
  int pmin = static_cast<int>(std::floor(std::log2(ratio_min))) - 1;
  std::vector<BandIndex> out;
  for (int k = klo; k <= khi; ++k)
    for (int p = pmin; p <= 0; ++p)
      for (int q = pmin; q <= 0; ++q) {
        BandIndex b{k, p, q};
        if (band_admissible(b)) out.push_back(b);
      }
  return out;
}

namespace {

// Shared accumulation of ||P_{k,p,q} f||^2 over all bands in one pass: each
// point contributes to at most two candidate indices per direction, since
// phi is supported on [1/2, 2].
struct BandAccumulator {
  std::map<std::array<int, 3>, double> sums;

  void add(double rho, double rh2, double x3, double weight_sq) {
    if (rho <= 0.0 || weight_sq == 0.0) return;
    double lk = std::log2(rho);
    int k0 = static_cast<int>(std::floor(lk));
    for (int k = k0; k <= k0 + 1; ++k) {
      double wk = phi_k(rho, k);
      if (wk == 0.0) continue;
      double lp = rh2 > 0.0 ? 0.5 * (std::log2(rh2)) - k : -1e9;
      int p0 = static_cast<int>(std::floor(lp));
      for (int p = p0; p <= p0 + 1; ++p) {
        double wp = phi(std::ldexp(rh2, -2 * (p + k)));
        if (wp == 0.0) continue;
        double lq = x3 != 0.0 ? std::log2(std::abs(x3)) - k : -1e9;
        int q0 = static_cast<int>(std::floor(lq));
        for (int q = q0; q <= q0 + 1; ++q) {
          double wq = phi_k(x3, q + k);
          if (wq == 0.0) continue;
          if (!band_admissible({k, p, q})) continue;
          double w = wk * wp * wq;
          sums[{k, p, q}] += w * w * weight_sq;
        }
      }
    }
  }

  BNormResult result() const {
    BNormResult res;
    for (const auto& [key, s2] : sums) {
      double val = std::ldexp(std::sqrt(s2), -key[1]) * std::exp2(-0.5 * key[2]);
      if (val > res.value) {
        res.value = val;
        res.argmax = {key[0], key[1], key[2]};
      }
    }
    return res;
  }
};

}  // namespace

BNormResult norm_B(const SpectralField& F) {
  const Grid& g = F.grid;
  BandAccumulator acc;
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int k = 0; k < g.n; ++k) {
        double c2 = std::norm(F.coeffs[g.index(i, j, k)]);
        if (c2 == 0.0) continue;
        auto xi = g.xi(i, j, k);
        double rh2 = xi[0] * xi[0] + xi[1] * xi[1];
        double rho = std::sqrt(rh2 + xi[2] * xi[2]);
        acc.add(rho, rh2, xi[2], c2);
      }
  return acc.result();
}

double norm_sobolev(const SpectralField& F, double s) {
  const Grid& g = F.grid;
  double acc = 0.0;
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int k = 0; k < g.n; ++k) {
        auto xi = g.xi(i, j, k);
        double r2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
        acc += std::pow(1.0 + r2, s) * std::norm(F.coeffs[g.index(i, j, k)]);
      }
  return std::sqrt(acc);
}

double norm_Hneg1(const SpectralField& F) {
  const Grid& g = F.grid;
  double acc = 0.0;
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int k = 0; k < g.n; ++k) {
        auto xi = g.xi(i, j, k);
        double r2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
        if (r2 == 0.0) continue;
        acc += std::norm(F.coeffs[g.index(i, j, k)]) / r2;
      }
  return std::sqrt(acc);
}

double fourier_linf_ratio(double band_sup_abs, const BandIndex& b, const SData& s) {
  if (band_sup_abs == 0.0) return 0.0;
  double denom = std::exp2(-1.5 * b.k) *
                 (std::ldexp(s.l2 + s.Sl2, -b.p) + s.Upsl2 + s.UpsSl2);
  if (denom == 0.0) throw std::runtime_error("fourier_linf_ratio: zero denominator");
  return band_sup_abs / denom;
}

}  // namespace rotwave
