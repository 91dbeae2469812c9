// Periodic-box Fourier representation: grid geometry, physical/spectral
// scalar and vector fields, FFT transforms, and the binary snapshot format.
//
// Conventions (used everywhere):
//   f(x) = sum_xi coeffs(xi) e^{i xi.x},  xi = (2pi/L) * integer triple.
//   forward_transform is the inverse DFT scaled by 1/n^3, so a unit cosine
//   has a conjugate pair of coefficients of modulus 1/2.
//   Nyquist planes are zeroed on construction; the zero mode of evolved
//   fields is kept at zero (mean-free).
#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace rotwave {

using cplx = std::complex<double>;

struct Grid {
  int n = 0;          // points per axis, even, >= 8
  double box_length = 0.0;  // L; the box is [0,L)^3

  Grid() = default;
  Grid(int n_, double L_);

  // Signed integer mode number in [-n/2, n/2) for storage index m in [0,n).
  int fold(int m) const { return (m <= n / 2 - 1) ? m : m - n; }
  // Storage index for a signed mode number.
  int unfold(int s) const { return (s >= 0) ? s : s + n; }

  double dk() const;                   // wavenumber spacing 2*pi/L
  double wavenumber(int m) const;      // dk() * fold(m)
  double max_wavenumber() const;       // pi*n/L (Nyquist magnitude)

  std::size_t size() const { return static_cast<std::size_t>(n) * n * n; }
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * n + j) * n + k;
  }
  bool is_nyquist(int m) const { return m == n / 2; }

  // Wavevector of the storage triple (i,j,k).
  std::array<double, 3> xi(int i, int j, int k) const;

  bool operator==(const Grid& o) const {
    return n == o.n && box_length == o.box_length;
  }
};

struct PhysicalField {
  Grid grid;
  std::vector<double> samples;  // n^3, row-major, x1 slowest

  PhysicalField() = default;
  explicit PhysicalField(const Grid& g) : grid(g), samples(g.size(), 0.0) {}

  double l2_norm() const;   // sqrt(mean |f|^2); matches spectral l2 (Parseval)
  double max_abs() const;
};

struct SpectralField {
  Grid grid;
  std::vector<cplx> coeffs;  // n^3, row-major, xi1 slowest, FFT mode order

  SpectralField() = default;
  explicit SpectralField(const Grid& g) : grid(g), coeffs(g.size(), cplx(0)) {}

  cplx& at(int i, int j, int k) { return coeffs[grid.index(i, j, k)]; }
  const cplx& at(int i, int j, int k) const { return coeffs[grid.index(i, j, k)]; }

  double l2_norm() const;         // sqrt(sum |coeffs|^2)
  double max_abs() const;
  double hermitian_defect() const;  // max |c(-xi) - conj(c(xi))| / max|c|

  void zero_nyquist();
  void zero_mean() { coeffs[0] = cplx(0); }
  // Zeroes the vertical-axis modes xi_h = 0 (including the zero mode).
  void zero_axis();

  SpectralField& operator+=(const SpectralField& o);
  SpectralField& operator-=(const SpectralField& o);
  SpectralField& operator*=(cplx a);
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(cplx a, SpectralField f);

struct SpectralVectorField {
  std::array<SpectralField, 3> comp;

  SpectralVectorField() = default;
  explicit SpectralVectorField(const Grid& g)
      : comp{SpectralField(g), SpectralField(g), SpectralField(g)} {}

  const Grid& grid() const { return comp[0].grid; }
  double l2_norm() const;
  // Global relative divergence residual: sqrt(sum |xi.u|^2 / sum |xi|^2|u|^2).
  double divergence_residual() const;

  SpectralVectorField& operator+=(const SpectralVectorField& o);
  SpectralVectorField& operator-=(const SpectralVectorField& o);
  SpectralVectorField& operator*=(cplx a);
};

SpectralVectorField operator-(SpectralVectorField a, const SpectralVectorField& b);

// ---- transforms -----------------------------------------------------------

// Physical -> spectral. Round-trips with inverse_transform to ~1e-15.
SpectralField forward_transform(const PhysicalField& f);

// Spectral -> physical. Rejects fields whose Hermitian defect exceeds 1e-10.
PhysicalField inverse_transform(const SpectralField& F);

// Complex-valued transforms used internally by the pseudo-product pipelines
// (inputs with symbols applied need not be Hermitian).
std::vector<cplx> inverse_transform_complex(const SpectralField& F);
SpectralField forward_transform_complex(const Grid& g, const std::vector<cplx>& phys);

// Real-path transforms (r2c/c2r) for Hermitian fields; no symmetry check.
// Used by the velocity solver where all fields are real.
std::vector<double> inverse_transform_real(const SpectralField& F);
SpectralField forward_transform_real(const Grid& g, const std::vector<double>& phys);

// ---- snapshot format ------------------------------------------------------
// Magic "RWEU", version u32, n u32, L f64, time f64, field count u32, then per
// field a 16-byte ASCII name and n^3 complex coefficients as little-endian
// f64 pairs, row-major (xi1 slowest), standard FFT mode order.

struct Snapshot {
  Grid grid;
  double time = 0.0;
  std::vector<std::pair<std::string, SpectralField>> fields;
};

void write_snapshot(const std::string& path, const Snapshot& s);
Snapshot read_snapshot(const std::string& path);

}  // namespace rotwave
