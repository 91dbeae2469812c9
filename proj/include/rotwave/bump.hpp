// Smooth Littlewood-Paley bump functions.
//
//   chi(x): C-infinity, radial, nonincreasing in |x|; 1 on |x|<=1, 0 on |x|>=2,
//           with the smooth step g(t) = h(1-t)/(h(t)+h(1-t)), h(t)=exp(-1/t).
//   phi(x)   = chi(x) - chi(2x): supported on 1/2 <= |x| <= 2, phi(1) = 1,
//              sum_k phi(2^{-k} x) = 1 for x != 0.
//   phibar(x) = chi(x/2) - chi(4x): equals 1 on supp phi, so phibar*phi = phi.
#pragma once

namespace rotwave {

double chi(double x);
double phi(double x);
double phi_k(double x, int k);                  // phi(2^{-k} x)
double phi_pm(double x, int k, int sign);       // phi_k(x) * 1_{sign*x >= 0}
double phibar(double x);
double phibar_k(double x, int k);

}  // namespace rotwave
