#include "rotwave/bump.hpp"

#include <cmath>

namespace rotwave {

namespace {

double h(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

// Smooth step: 1 at t=0 decreasing to 0 at t=1.
double g(double t) {
  if (t <= 0.0) return 1.0;
  if (t >= 1.0) return 0.0;
  double ht = h(t), h1t = h(1.0 - t);
  return h1t / (ht + h1t);
}

double ldexp2(double x, int k) { return std::ldexp(x, k); }

}  // namespace

double chi(double x) {
  double r = std::abs(x);
  if (r <= 1.0) return 1.0;
  if (r >= 2.0) return 0.0;
  return g(r - 1.0);
}

double phi(double x) { return chi(x) - chi(2.0 * x); }

double phi_k(double x, int k) { return phi(ldexp2(x, -k)); }

double phi_pm(double x, int k, int sign) {
  if (sign >= 0) return x >= 0.0 ? phi_k(x, k) : 0.0;
  return x <= 0.0 ? phi_k(x, k) : 0.0;
}

double phibar(double x) { return chi(x / 2.0) - chi(4.0 * x); }

double phibar_k(double x, int k) { return phibar(ldexp2(x, -k)); }

}  // namespace rotwave
