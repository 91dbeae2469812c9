// Elementary Fourier multipliers on the periodic grid: the Riesz-type symbol
// family, derivative operators, Leray projection and 2/3-rule dealiasing.
//
// Singular-set conventions (fixed once, used everywhere):
//   Lambda(0) = 0, |xi|^{-1} at xi=0 is 0, and the symbols xi_j/|xi_h| and
//   |xi_h|^{-1} are 0 on the vertical axis xi_h = 0.
#pragma once

#include <array>
#include <functional>

#include "rotwave/grid.hpp"

namespace rotwave {

// ---- pointwise symbol values ------------------------------------------------

double lambda_sym(const std::array<double, 3>& xi);                 // xi3/|xi|
double sqrt_one_minus_lambda2_sym(const std::array<double, 3>& xi); // |xi_h|/|xi|
double riesz_full_sym(const std::array<double, 3>& xi, int i);      // xi_i/|xi|
double riesz_h_sym(const std::array<double, 3>& xi, int j);         // xi_j/|xi_h|
double abs_xi_sym(const std::array<double, 3>& xi);                 // |xi|
double inv_abs_xi_sym(const std::array<double, 3>& xi);             // 1/|xi| (0 at 0)
double inv_abs_xi_h_sym(const std::array<double, 3>& xi);           // 1/|xi_h| (0 on axis)

// ---- field operations --------------------------------------------------------

using SymbolFn = std::function<cplx(const std::array<double, 3>&)>;

// coeffs'(xi) = s(xi) * coeffs(xi).
SpectralField apply_symbol(const SpectralField& F, const SymbolFn& s);
SpectralVectorField apply_symbol(const SpectralVectorField& u, const SymbolFn& s);

// Named derivative operators (exact Fourier-side multiplication).
SpectralField partial(const SpectralField& F, int axis);        // i xi_a
SpectralVectorField gradient(const SpectralField& F);
SpectralField divergence(const SpectralVectorField& u);
SpectralField curl_h(const SpectralVectorField& u);             // d1 u2 - d2 u1
SpectralField abs_grad(const SpectralField& F);                 // |xi|
SpectralField abs_grad_h(const SpectralField& F);               // |xi_h|
SpectralField inv_abs_grad(const SpectralField& F);             // |xi|^{-1}
SpectralField inv_abs_grad_h(const SpectralField& F);           // |xi_h|^{-1}
SpectralField bold_lambda(const SpectralField& F);              // i Lambda(xi)

// Cached per-grid table of Lambda(xi) values (hot paths).
const std::vector<double>& lambda_table(const Grid& g);

// Orthogonal projection onto divergence-free fields; xi=0 passes through.
SpectralVectorField leray_project(const SpectralVectorField& u);

// 2/3-rule: zero coefficients with any |xi_i| > (2/3) * (pi n / L).
SpectralField dealias(const SpectralField& F);
void dealias_in_place(SpectralField& F);
bool inside_dealias_ball(const Grid& g, int i, int j, int k);

}  // namespace rotwave
