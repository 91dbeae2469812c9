#include "rotwave/symbols.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace rotwave {

namespace {
double norm3(const std::array<double, 3>& v) {
  return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
}
double norm_h(const std::array<double, 3>& v) {
  return std::hypot(v[0], v[1]);
}
}  // namespace

double lambda_sym(const std::array<double, 3>& xi) {
  double r = norm3(xi);
  return r > 0.0 ? xi[2] / r : 0.0;
}

double sqrt_one_minus_lambda2_sym(const std::array<double, 3>& xi) {
  double r = norm3(xi);
  return r > 0.0 ? norm_h(xi) / r : 0.0;
}

double riesz_full_sym(const std::array<double, 3>& xi, int i) {
  double r = norm3(xi);
  return r > 0.0 ? xi[i] / r : 0.0;
}

double riesz_h_sym(const std::array<double, 3>& xi, int j) {
  double rh = norm_h(xi);
  return rh > 0.0 ? xi[j] / rh : 0.0;
}

double abs_xi_sym(const std::array<double, 3>& xi) { return norm3(xi); }

double inv_abs_xi_sym(const std::array<double, 3>& xi) {
  double r = norm3(xi);
  return r > 0.0 ? 1.0 / r : 0.0;
}

double inv_abs_xi_h_sym(const std::array<double, 3>& xi) {
  double rh = norm_h(xi);
  return rh > 0.0 ? 1.0 / rh : 0.0;
}

SpectralField apply_symbol(const SpectralField& F, const SymbolFn& s) {
  SpectralField out(F.grid);
  const Grid& g = F.grid;
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int k = 0; k < g.n; ++k) {
        std::size_t id = g.index(i, j, k);
        out.coeffs[id] = s(g.xi(i, j, k)) * F.coeffs[id];
      }
  return out;
}

SpectralVectorField apply_symbol(const SpectralVectorField& u, const SymbolFn& s) {
  SpectralVectorField out(u.grid());
  for (int a = 0; a < 3; ++a) out.comp[a] = apply_symbol(u.comp[a], s);
  return out;
}

SpectralField partial(const SpectralField& F, int axis) {
  const Grid& g = F.grid;
  SpectralField out(F.grid);
  std::vector<double> k(g.n);
  for (int m = 0; m < g.n; ++m) k[m] = g.wavenumber(m);
  std::size_t id = 0;
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int kk = 0; kk < g.n; ++kk, ++id) {
        double w = axis == 0 ? k[i] : axis == 1 ? k[j] : k[kk];
        out.coeffs[id] = cplx(0.0, w) * F.coeffs[id];
      }
  return out;
}

SpectralVectorField gradient(const SpectralField& F) {
  SpectralVectorField out(F.grid);
  for (int a = 0; a < 3; ++a) out.comp[a] = partial(F, a);
  return out;
}

SpectralField divergence(const SpectralVectorField& u) {
  SpectralField out = partial(u.comp[0], 0);
  out += partial(u.comp[1], 1);
  out += partial(u.comp[2], 2);
  return out;
}

SpectralField curl_h(const SpectralVectorField& u) {
  SpectralField out = partial(u.comp[1], 0);
  out -= partial(u.comp[0], 1);
  return out;
}

SpectralField abs_grad(const SpectralField& F) {
  return apply_symbol(F, [](const std::array<double, 3>& xi) {
    return cplx(abs_xi_sym(xi), 0.0);
  });
}

SpectralField abs_grad_h(const SpectralField& F) {
  return apply_symbol(F, [](const std::array<double, 3>& xi) {
    return cplx(std::hypot(xi[0], xi[1]), 0.0);
  });
}

SpectralField inv_abs_grad(const SpectralField& F) {
  return apply_symbol(F, [](const std::array<double, 3>& xi) {
    return cplx(inv_abs_xi_sym(xi), 0.0);
  });
}

SpectralField inv_abs_grad_h(const SpectralField& F) {
  return apply_symbol(F, [](const std::array<double, 3>& xi) {
    return cplx(inv_abs_xi_h_sym(xi), 0.0);
  });
}

SpectralField bold_lambda(const SpectralField& F) {
  const Grid& g = F.grid;
  SpectralField out(g);
  const std::vector<double>& lam = lambda_table(g);
  for (std::size_t i = 0; i < out.coeffs.size(); ++i)
    out.coeffs[i] = cplx(0.0, lam[i]) * F.coeffs[i];
  return out;
}

const std::vector<double>& lambda_table(const Grid& g) {
  static std::mutex mu;
  static std::map<std::pair<int, double>, std::vector<double>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(g.n, g.box_length);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<double> tab(g.size());
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int k = 0; k < g.n; ++k)
        tab[g.index(i, j, k)] = lambda_sym(g.xi(i, j, k));
  return cache.emplace(key, std::move(tab)).first->second;
}

SpectralVectorField leray_project(const SpectralVectorField& u) {
  const Grid& g = u.grid();
  SpectralVectorField out(g);
  std::vector<double> kv(g.n);
  for (int m = 0; m < g.n; ++m) kv[m] = g.wavenumber(m);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int k = 0; k < g.n; ++k) {
        std::size_t id = g.index(i, j, k);
        std::array<double, 3> xi{kv[i], kv[j], kv[k]};
        double xi2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
        cplx u0 = u.comp[0].coeffs[id], u1 = u.comp[1].coeffs[id],
             u2 = u.comp[2].coeffs[id];
        if (xi2 == 0.0) {
          out.comp[0].coeffs[id] = u0;
          out.comp[1].coeffs[id] = u1;
          out.comp[2].coeffs[id] = u2;
          continue;
        }
        cplx dot = (xi[0] * u0 + xi[1] * u1 + xi[2] * u2) / xi2;
        out.comp[0].coeffs[id] = u0 - xi[0] * dot;
        out.comp[1].coeffs[id] = u1 - xi[1] * dot;
        out.comp[2].coeffs[id] = u2 - xi[2] * dot;
      }
  return out;
}

bool inside_dealias_ball(const Grid& g, int i, int j, int k) {
  const double cut = (2.0 / 3.0) * g.max_wavenumber();
  auto xi = g.xi(i, j, k);
  return std::abs(xi[0]) <= cut && std::abs(xi[1]) <= cut && std::abs(xi[2]) <= cut;
}

namespace {

const std::vector<unsigned char>& dealias_mask(const Grid& g) {
  static std::mutex mu;
  static std::map<std::pair<int, double>, std::vector<unsigned char>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(g.n, g.box_length);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<unsigned char> mask(g.size(), 0);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int k = 0; k < g.n; ++k)
        mask[g.index(i, j, k)] = inside_dealias_ball(g, i, j, k) ? 1 : 0;
  return cache.emplace(key, std::move(mask)).first->second;
}

}  // namespace

void dealias_in_place(SpectralField& F) {
  const std::vector<unsigned char>& mask = dealias_mask(F.grid);
  for (std::size_t i = 0; i < F.coeffs.size(); ++i)
    if (!mask[i]) F.coeffs[i] = cplx(0);
}

SpectralField dealias(const SpectralField& F) {
  SpectralField out = F;
  dealias_in_place(out);
  return out;
}

}  // namespace rotwave
