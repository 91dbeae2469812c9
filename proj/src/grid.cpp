#include "rotwave/grid.hpp"

#include <fftw3.h>

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace rotwave {

Grid::Grid(int n_, double L_) : n(n_), box_length(L_) {
  if (n < 8 || n % 2 != 0) throw std::invalid_argument("Grid: n must be even and >= 8");
  if (!(box_length > 0.0)) throw std::invalid_argument("Grid: box_length must be positive");
}

double Grid::dk() const { return 2.0 * std::numbers::pi / box_length; }
double Grid::wavenumber(int m) const { return dk() * fold(m); }
double Grid::max_wavenumber() const { return std::numbers::pi * n / box_length; }

std::array<double, 3> Grid::xi(int i, int j, int k) const {
  return {wavenumber(i), wavenumber(j), wavenumber(k)};
}

double PhysicalField::l2_norm() const {
  double s = 0.0;
  for (double v : samples) s += v * v;
  return std::sqrt(s / samples.size());
}

double PhysicalField::max_abs() const {
  double m = 0.0;
  for (double v : samples) m = std::max(m, std::abs(v));
  return m;
}

double SpectralField::l2_norm() const {
  double s = 0.0;
  for (const cplx& c : coeffs) s += std::norm(c);
  return std::sqrt(s);
}

double SpectralField::max_abs() const {
  double m = 0.0;
  for (const cplx& c : coeffs) m = std::max(m, std::abs(c));
  return m;
}

double SpectralField::hermitian_defect() const {
  const int n = grid.n;
  double worst = 0.0, peak = 0.0;
  for (int i = 0; i < n; ++i) {
    int in = (n - i) % n;
    for (int j = 0; j < n; ++j) {
      int jn = (n - j) % n;
      for (int k = 0; k < n; ++k) {
        int kn = (n - k) % n;
        const cplx& a = coeffs[grid.index(i, j, k)];
        const cplx& b = coeffs[grid.index(in, jn, kn)];
        worst = std::max(worst, std::abs(b - std::conj(a)));
        peak = std::max(peak, std::abs(a));
      }
    }
  }
  return peak > 0.0 ? worst / peak : 0.0;
}

void SpectralField::zero_nyquist() {
  const int n = grid.n, ny = n / 2;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (i == ny || j == ny || k == ny) coeffs[grid.index(i, j, k)] = cplx(0);
}

void SpectralField::zero_axis() {
  const int n = grid.n;
  for (int k = 0; k < n; ++k) coeffs[grid.index(0, 0, k)] = cplx(0);
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
  for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] += o.coeffs[i];
  return *this;
}
SpectralField& SpectralField::operator-=(const SpectralField& o) {
  for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] -= o.coeffs[i];
  return *this;
}
SpectralField& SpectralField::operator*=(cplx a) {
  for (auto& c : coeffs) c *= a;
  return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(cplx a, SpectralField f) { return f *= a; }

double SpectralVectorField::l2_norm() const {
  double s = 0.0;
  for (const auto& c : comp)
    for (const cplx& v : c.coeffs) s += std::norm(v);
  return std::sqrt(s);
}

double SpectralVectorField::divergence_residual() const {
  const Grid& g = grid();
  double num = 0.0, den = 0.0;
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int k = 0; k < g.n; ++k) {
        auto xi = g.xi(i, j, k);
        std::size_t id = g.index(i, j, k);
        cplx div = xi[0] * comp[0].coeffs[id] + xi[1] * comp[1].coeffs[id] +
                   xi[2] * comp[2].coeffs[id];
        double xi2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
        double u2 = std::norm(comp[0].coeffs[id]) + std::norm(comp[1].coeffs[id]) +
                    std::norm(comp[2].coeffs[id]);
        num += std::norm(div);
        den += xi2 * u2;
      }
  return den > 0.0 ? std::sqrt(num / den) : 0.0;
}

SpectralVectorField& SpectralVectorField::operator+=(const SpectralVectorField& o) {
  for (int a = 0; a < 3; ++a) comp[a] += o.comp[a];
  return *this;
}
SpectralVectorField& SpectralVectorField::operator-=(const SpectralVectorField& o) {
  for (int a = 0; a < 3; ++a) comp[a] -= o.comp[a];
  return *this;
}
SpectralVectorField& SpectralVectorField::operator*=(cplx a) {
  for (int c = 0; c < 3; ++c) comp[c] *= a;
  return *this;
}

SpectralVectorField operator-(SpectralVectorField a, const SpectralVectorField& b) {
  return a -= b;
}

// ---- FFT engine ------------------------------------------------------------
// Plans are cached per grid size, created with FFTW_ESTIMATE | FFTW_UNALIGNED
// so execution is deterministic and works on any array.

namespace {

struct PlanPair {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
};

// Plans are created once per size on an aligned buffer (SIMD-capable) and
// executed on per-thread aligned scratch of the same alignment class.
PlanPair& plans_for(int n) {
  static std::mutex mu;
  static std::map<int, PlanPair> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::size_t sz = static_cast<std::size_t>(n) * n * n;
  fftw_complex* buf = fftw_alloc_complex(sz);
  PlanPair p;
  p.fwd = fftw_plan_dft_3d(n, n, n, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  p.bwd = fftw_plan_dft_3d(n, n, n, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  fftw_free(buf);
  return cache.emplace(n, p).first->second;
}

struct AlignedScratch {
  fftw_complex* data = nullptr;
  std::size_t size = 0;
  ~AlignedScratch() {
    if (data) fftw_free(data);
  }
  fftw_complex* get(std::size_t n) {
    if (size < n) {
      if (data) fftw_free(data);
      data = fftw_alloc_complex(n);
      size = n;
    }
    return data;
  }
};

void run_dft(fftw_plan plan, std::vector<cplx>& data) {
  static thread_local AlignedScratch scratch;
  fftw_complex* buf = scratch.get(data.size());
  std::memcpy(buf, data.data(), data.size() * sizeof(cplx));
  fftw_execute_dft(plan, buf, buf);
  std::memcpy(data.data(), buf, data.size() * sizeof(cplx));
}

}  // namespace

SpectralField forward_transform(const PhysicalField& f) {
  SpectralField out(f.grid);
  std::vector<cplx> buf(f.samples.size());
  for (std::size_t i = 0; i < buf.size(); ++i) buf[i] = cplx(f.samples[i], 0.0);
  run_dft(plans_for(f.grid.n).fwd, buf);
  const double scale = 1.0 / f.grid.size();
  for (std::size_t i = 0; i < buf.size(); ++i) out.coeffs[i] = buf[i] * scale;
  out.zero_nyquist();
  return out;
}

PhysicalField inverse_transform(const SpectralField& F) {
  if (F.hermitian_defect() > 1e-10)
    throw std::runtime_error("inverse_transform: Hermitian symmetry violated");
  std::vector<cplx> buf = F.coeffs;
  run_dft(plans_for(F.grid.n).bwd, buf);
  PhysicalField out(F.grid);
  for (std::size_t i = 0; i < buf.size(); ++i) out.samples[i] = buf[i].real();
  return out;
}

std::vector<cplx> inverse_transform_complex(const SpectralField& F) {
  std::vector<cplx> buf = F.coeffs;
  run_dft(plans_for(F.grid.n).bwd, buf);
  return buf;
}

SpectralField forward_transform_complex(const Grid& g, const std::vector<cplx>& phys) {
  SpectralField out(g);
  std::vector<cplx> buf = phys;
  run_dft(plans_for(g.n).fwd, buf);
  const double scale = 1.0 / g.size();
  for (std::size_t i = 0; i < buf.size(); ++i) out.coeffs[i] = buf[i] * scale;
  return out;
}

namespace {

struct RealPlanPair {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
};

RealPlanPair& real_plans_for(int n) {
  static std::mutex mu;
  static std::map<int, RealPlanPair> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::size_t nr = static_cast<std::size_t>(n) * n * n;
  std::size_t nc = static_cast<std::size_t>(n) * n * (n / 2 + 1);
  double* rbuf = fftw_alloc_real(nr);
  fftw_complex* cbuf = fftw_alloc_complex(nc);
  RealPlanPair p;
  p.r2c = fftw_plan_dft_r2c_3d(n, n, n, rbuf, cbuf, FFTW_ESTIMATE);
  p.c2r = fftw_plan_dft_c2r_3d(n, n, n, cbuf, rbuf, FFTW_ESTIMATE);
  fftw_free(rbuf);
  fftw_free(cbuf);
  return cache.emplace(n, p).first->second;
}

struct RealScratch {
  double* r = nullptr;
  fftw_complex* c = nullptr;
  std::size_t nr = 0, nc = 0;
  ~RealScratch() {
    if (r) fftw_free(r);
    if (c) fftw_free(c);
  }
  void ensure(std::size_t nreal, std::size_t ncplx) {
    if (nr < nreal) {
      if (r) fftw_free(r);
      r = fftw_alloc_real(nreal);
      nr = nreal;
    }
    if (nc < ncplx) {
      if (c) fftw_free(c);
      c = fftw_alloc_complex(ncplx);
      nc = ncplx;
    }
  }
};

}  // namespace

std::vector<double> inverse_transform_real(const SpectralField& F) {
  const Grid& g = F.grid;
  const int n = g.n, nh = n / 2 + 1;
  static thread_local RealScratch scratch;
  scratch.ensure(g.size(), static_cast<std::size_t>(n) * n * nh);
  // pack the k in [0, n/2] half-spectrum
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const cplx* row = &F.coeffs[g.index(i, j, 0)];
      fftw_complex* out = &scratch.c[(static_cast<std::size_t>(i) * n + j) * nh];
      for (int k = 0; k < nh; ++k) {
        out[k][0] = row[k].real();
        out[k][1] = row[k].imag();
      }
    }
  fftw_execute_dft_c2r(real_plans_for(n).c2r, scratch.c, scratch.r);
  return std::vector<double>(scratch.r, scratch.r + g.size());
}

SpectralField forward_transform_real(const Grid& g, const std::vector<double>& phys) {
  const int n = g.n, nh = n / 2 + 1;
  static thread_local RealScratch scratch;
  scratch.ensure(g.size(), static_cast<std::size_t>(n) * n * nh);
  std::memcpy(scratch.r, phys.data(), g.size() * sizeof(double));
  fftw_execute_dft_r2c(real_plans_for(n).r2c, scratch.r, scratch.c);
  SpectralField out(g);
  const double scale = 1.0 / g.size();
  for (int i = 0; i < n; ++i) {
    int in = (n - i) % n;
    for (int j = 0; j < n; ++j) {
      int jn = (n - j) % n;
      const fftw_complex* src = &scratch.c[(static_cast<std::size_t>(i) * n + j) * nh];
      cplx* dst = &out.coeffs[g.index(i, j, 0)];
      for (int k = 0; k < nh; ++k) dst[k] = cplx(src[k][0], src[k][1]) * scale;
      // mirror k in (n/2, n): conj at (-i, -j, -k)
      cplx* mrow = &out.coeffs[g.index(in, jn, 0)];
      (void)mrow;
    }
  }
  // fill k > n/2 from Hermitian symmetry
  for (int i = 0; i < n; ++i) {
    int in = (n - i) % n;
    for (int j = 0; j < n; ++j) {
      int jn = (n - j) % n;
      for (int k = nh; k < n; ++k) {
        int kn = n - k;
        out.coeffs[g.index(i, j, k)] = std::conj(out.coeffs[g.index(in, jn, kn)]);
      }
    }
  }
  return out;
}

// ---- snapshots --------------------------------------------------------------

namespace {

template <typename T>
void put(std::ofstream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw std::runtime_error("snapshot: truncated file");
  return v;
}

static_assert(std::endian::native == std::endian::little,
              "snapshot format is little-endian");

}  // namespace

void write_snapshot(const std::string& path, const Snapshot& s) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("snapshot: cannot open " + path);
  os.write("RWEU", 4);
  put<uint32_t>(os, 1u);
  put<uint32_t>(os, static_cast<uint32_t>(s.grid.n));
  put<double>(os, s.grid.box_length);
  put<double>(os, s.time);
  put<uint32_t>(os, static_cast<uint32_t>(s.fields.size()));
  for (const auto& [name, field] : s.fields) {
    char tag[16] = {0};
    std::snprintf(tag, sizeof(tag), "%.15s", name.c_str());
    os.write(tag, 16);
    os.write(reinterpret_cast<const char*>(field.coeffs.data()),
             static_cast<std::streamsize>(field.coeffs.size() * sizeof(cplx)));
  }
  if (!os) throw std::runtime_error("snapshot: write failed on " + path);
}

Snapshot read_snapshot(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("snapshot: cannot open " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "RWEU", 4) != 0)
    throw std::runtime_error("snapshot: bad magic in " + path);
  uint32_t version = get<uint32_t>(is);
  if (version != 1u) throw std::runtime_error("snapshot: unsupported version");
  uint32_t n = get<uint32_t>(is);
  double L = get<double>(is);
  Snapshot s;
  s.grid = Grid(static_cast<int>(n), L);
  s.time = get<double>(is);
  uint32_t count = get<uint32_t>(is);
  for (uint32_t f = 0; f < count; ++f) {
    char tag[17] = {0};
    is.read(tag, 16);
    SpectralField field(s.grid);
    is.read(reinterpret_cast<char*>(field.coeffs.data()),
            static_cast<std::streamsize>(field.coeffs.size() * sizeof(cplx)));
    if (!is) throw std::runtime_error("snapshot: truncated field data");
    s.fields.emplace_back(std::string(tag), std::move(field));
  }
  return s;
}

}  // namespace rotwave
