#include "rotwave/phase_geometry.hpp"

#include <cmath>
#include <stdexcept>

#include "rotwave/rng.hpp"

namespace rotwave::phase {

namespace {

double norm3(const Vec3& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }
double norm_h(const Vec3& v) { return std::hypot(v[0], v[1]); }
double dot3(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
double dot_h(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1]; }
// scalar horizontal cross product a1 b2 - a2 b1
double cross_h(const Vec3& a, const Vec3& b) { return a[0] * b[1] - a[1] * b[0]; }
Vec3 sub(const Vec3& a, const Vec3& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

}  // namespace

bool guarded(const PhasePoint& p) {
  const Vec3 zeta = sub(p.xi, p.eta);
  const double scale = std::max(norm3(p.xi), norm3(p.eta));
  const double delta = 1e-2 * scale;
  return norm3(p.xi) >= delta && norm3(p.eta) >= delta && norm3(zeta) >= delta &&
         norm_h(p.xi) >= delta && norm_h(p.eta) >= delta && norm_h(zeta) >= delta;
}

double lambda(const Vec3& xi) {
  double r = norm3(xi);
  if (r < 1e-12) throw std::domain_error("lambda: |xi| too small");
  return xi[2] / r;
}

double sqrt_one_minus_lambda2(const Vec3& xi) {
  double r = norm3(xi);
  if (r < 1e-12) throw std::domain_error("sqrt_one_minus_lambda2: |xi| too small");
  return norm_h(xi) / r;
}

Vec3 grad_lambda(const Vec3& xi) {
  double r = norm3(xi);
  if (r < 1e-12) throw std::domain_error("grad_lambda: |xi| too small");
  double r3 = r * r * r;
  double rh2 = xi[0] * xi[0] + xi[1] * xi[1];
  return {-xi[2] * xi[0] / r3, -xi[2] * xi[1] / r3, rh2 / r3};
}

double phase(const PhasePoint& p) {
  return lambda(p.xi) + p.mu * lambda(sub(p.xi, p.eta)) + p.nu * lambda(p.eta);
}

std::array<double, 2> sigma_bar(const Vec3& xi, const Vec3& eta) {
  return {xi[2] * eta[0] - eta[2] * xi[0], xi[2] * eta[1] - eta[2] * xi[1]};
}

FirstOrder vf_first_order(const PhasePoint& p) {
  const Vec3 zeta = sub(p.xi, p.eta);
  const auto sig = sigma_bar(p.xi, p.eta);
  const double z3 = std::pow(norm3(zeta), 3), e3 = std::pow(norm3(p.eta), 3);
  const double sig_dot_zh = sig[0] * zeta[0] + sig[1] * zeta[1];
  const double sig_dot_zhp = -sig[0] * zeta[1] + sig[1] * zeta[0];  // sig . zeta_h-perp
  const double sig_dot_eh = sig[0] * p.eta[0] + sig[1] * p.eta[1];
  const double sig_dot_ehp = -sig[0] * p.eta[1] + sig[1] * p.eta[0];

  FirstOrder out;
  out.S_eta = p.mu * sig_dot_zh / z3;
  out.Omega_eta = -p.mu * sig_dot_zhp / z3;
  out.S_xieta = p.nu * sig_dot_eh / e3;
  out.Omega_xieta = -p.nu * sig_dot_ehp / e3;

  const double Pxi = sqrt_one_minus_lambda2(p.xi), Lxi = lambda(p.xi);
  const double Pz = sqrt_one_minus_lambda2(zeta), Lz = lambda(zeta);
  const double omega = dot_h(p.xi, zeta) / (norm_h(p.xi) * norm_h(zeta));
  const double ups_lam_z =
      -(norm3(p.xi) / norm3(zeta)) * Pz * (Lxi * Lz * omega + Pxi * Pz);
  out.Ups_xi = -Pxi + p.mu * ups_lam_z;
  return out;
}

SecondThirdOrder vf_second_third_order(const PhasePoint& p) {
  const Vec3 zeta = sub(p.xi, p.eta);
  const auto sig = sigma_bar(p.xi, p.eta);
  const double z2 = dot3(zeta, zeta), z3 = std::pow(norm3(zeta), 3);
  const double sig_dot_xih = sig[0] * p.xi[0] + sig[1] * p.xi[1];
  const double eta_dot_z = dot3(p.eta, zeta);
  const double W = cross_h(p.eta, p.xi);  // eps^{ab} eta_a xi_b
  const double xih_dot_etah = dot_h(p.xi, p.eta);
  const double xih_dot_zh = dot_h(p.xi, zeta);
  const double Lz = lambda(zeta);
  const FirstOrder f1 = vf_first_order(p);
  const double S = f1.S_eta, Om = f1.Omega_eta;

  SecondThirdOrder o;
  o.SS_eta = S * (3.0 * eta_dot_z / z2 + 2.0) - p.mu * sig_dot_xih / z3;
  o.OmOm_eta = 3.0 * Om * W / z2 - p.mu * Lz * xih_dot_etah / z2;
  o.SOm_eta = S * W / z2 + Om * (1.0 + 2.0 * eta_dot_z / z2);

  o.Om_xieta_Om_eta = -p.mu * Lz * xih_dot_zh / z2;
  o.Om_xieta_S_eta = Om;
  o.S_xieta_S_eta = S;
  o.S_xieta_Om_eta = Om;

  o.S_xieta_SS_eta = S * (5.0 + 6.0 * eta_dot_z / z2) - 2.0 * p.mu * sig_dot_xih / z3;
  // The Lambda-term coefficient follows from the product rule
  // ((xi_h - eta_h).xi_h + 2 eta_h.xi_h = (xi_h + eta_h).xi_h); the finite-
  // difference oracle pins it.
  o.S_xieta_OmOm_eta =
      6.0 * Om * W / z2 - p.mu * Lz * (dot_h(p.xi, p.xi) + xih_dot_etah) / z2;
  // Product rule applied to the second-order form, with
  // Om_{xi-eta}(eta.zeta) = W and Om_{xi-eta}(sig.xi_h) = -xi3 W; the sign of
  // the S term follows and is pinned by the finite-difference oracle.
  o.Om_xieta_SS_eta = 3.0 * Om * dot3(p.xi, zeta) / z2 + 3.0 * S * W / z2 +
                      p.mu * p.eta[2] * W / z3;
  o.Om_xieta_OmOm_eta = Om * (1.0 - 6.0 * xih_dot_zh / z2);
  return o;
}

MixedSecondExact mixed_second_exact(const PhasePoint& p) {
  const Vec3 zeta = sub(p.xi, p.eta);
  const auto sig = sigma_bar(p.xi, p.eta);
  const double z = norm3(zeta), z3 = z * z * z, z5 = z3 * z * z;

  // S_eta Phi = mu G / |zeta|^3 with G = sig . zeta_h
  const double G = sig[0] * zeta[0] + sig[1] * zeta[1];
  // grad_eta G = (xi3 zeta_h - sig ; -xi_h . zeta_h)
  const Vec3 gradG{p.xi[2] * zeta[0] - sig[0], p.xi[2] * zeta[1] - sig[1],
                   -dot_h(p.xi, zeta)};
  // grad_eta |zeta|^{-3} = 3 zeta / |zeta|^5
  auto contract_S_eta_fn = [&](const Vec3& gradF, double F, const Vec3& dir) {
    return dot3(dir, gradF) / z3 + 3.0 * F * dot3(dir, zeta) / z5;
  };
  const Vec3 zperp{-zeta[1], zeta[0], 0.0};

  // Omega_eta Phi = -mu H / |zeta|^3 with H = zeta3 * X, X = cross(xi_h, eta_h)
  const double X = cross_h(p.xi, p.eta);
  const double H = zeta[2] * X;
  const Vec3 gradH{-zeta[2] * p.xi[1], zeta[2] * p.xi[0], -X};

  MixedSecondExact o;
  o.S_xieta_S_eta = p.mu * contract_S_eta_fn(gradG, G, zeta);
  o.Om_xieta_S_eta = p.mu * contract_S_eta_fn(gradG, G, zperp);
  o.S_xieta_Om_eta = -p.mu * contract_S_eta_fn(gradH, H, zeta);
  o.Om_xieta_Om_eta = -p.mu * contract_S_eta_fn(gradH, H, zperp);
  return o;
}

CrossTermCoeffs cross_term_coeffs(const Vec3& xi, const Vec3& eta) {
  const Vec3 zeta = sub(xi, eta);
  const double nh_e = norm_h(eta), nh_z = norm_h(zeta), nh_x = norm_h(xi);
  if (nh_e < 1e-12 || nh_z < 1e-12 || nh_x < 1e-12)
    throw std::domain_error("cross_term_coeffs: horizontal component too small");
  CrossTermCoeffs c;
  c.omega_c = dot_h(eta, zeta) / (nh_e * nh_z);
  // eta_h . zeta_h-perp
  c.omega_s = (-eta[0] * zeta[1] + eta[1] * zeta[0]) / (nh_e * nh_z) * -1.0;
  // note: eta . zeta-perp = cross(zeta, eta) = -cross(eta, zeta)
  c.omega_s = cross_h(zeta, eta) / (nh_e * nh_z);

  const double ne = norm3(eta), nz = norm3(zeta), nx = norm3(xi);
  const double Pe = nh_e / ne, Le = eta[2] / ne;
  const double Pz = nh_z / nz, Lz = zeta[2] / nz;
  const double Px = nh_x / nx, Lx = xi[2] / nx;
  const double re = ne / nz, rx = nx / nz;

  c.s_S = -re * (c.omega_c * Pe * Pz + Le * Lz);
  c.s_U = -re * (c.omega_c * Pe * Lz - Le * Pz);
  c.o_S = re * c.omega_s * Pe * Pz;
  c.o_U = re * c.omega_s * Pe * Lz;

  const double omega_cx = dot_h(xi, zeta) / (nh_x * nh_z);
  c.GammaS = rx * (omega_cx * Lx * Pz - Px * Lz);
  c.GammaU = rx * (omega_cx * Lx * Lz + Px * Pz);
  return c;
}

// ---- finite differences -----------------------------------------------------

namespace {

double step_scale(const Vec3& x) { return std::max(1.0, norm3(x)); }

}  // namespace

namespace {

// Fourth-order five-point stencil; keeps the rounding-vs-truncation floor of
// the oracles near 1e-9 absolute so near-zero closed-form values still
// validate at the stated relative tolerance.
template <typename At>
double stencil4(const At& at, double h) {
  return (8.0 * (at(h) - at(-h)) - (at(2 * h) - at(-2 * h))) / (12.0 * h);
}

}  // namespace

double fd_S(const ScalarFn& f, const Vec3& x, double h) {
  auto at = [&](double e) {
    double s = std::exp(e);
    return f({x[0] * s, x[1] * s, x[2] * s});
  };
  return stencil4(at, h);
}

double fd_Omega(const ScalarFn& f, const Vec3& x, double h) {
  auto at = [&](double e) {
    double cs = std::cos(e), sn = std::sin(e);
    return f({cs * x[0] - sn * x[1], sn * x[0] + cs * x[1], x[2]});
  };
  return stencil4(at, h);
}

double fd_Upsilon(const ScalarFn& f, const Vec3& x, double h) {
  double rho = norm3(x), rh = norm_h(x);
  if (rh < 1e-12) throw std::domain_error("fd_Upsilon: on the vertical axis");
  double phi0 = std::atan2(rh, x[2]);
  double c = x[0] / rh, s = x[1] / rh;
  auto at = [&](double e) {
    double sp = std::sin(phi0 + e), cp = std::cos(phi0 + e);
    return f({rho * sp * c, rho * sp * s, rho * cp});
  };
  return stencil4(at, h);
}

double fd_partial3(const ScalarFn& f, const Vec3& x, double h) {
  double hh = h * step_scale(x);
  auto at = [&](double e) { return f({x[0], x[1], x[2] + e}); };
  return stencil4(at, hh);
}

double fd_Sh(const ScalarFn& f, const Vec3& x, double h) {
  auto at = [&](double e) {
    double s = std::exp(e);
    return f({x[0] * s, x[1] * s, x[2]});
  };
  return stencil4(at, h);
}

double fd_S_eta(const EtaFn& f, const Vec3& eta, double h) { return fd_S(f, eta, h); }

double fd_Omega_eta(const EtaFn& f, const Vec3& eta, double h) {
  return fd_Omega(f, eta, h);
}

namespace {

// Flow variants used where the differentiated function is itself a closed
// form (third-order identities).
double fd4_S_eta(const EtaFn& f, const Vec3& eta, double h) {
  auto at = [&](double e) {
    double s = std::exp(e);
    return f({eta[0] * s, eta[1] * s, eta[2] * s});
  };
  return stencil4(at, h);
}

double fd4_Omega_eta(const EtaFn& f, const Vec3& eta, double h) {
  auto at = [&](double e) {
    double cs = std::cos(e), sn = std::sin(e);
    return f({cs * eta[0] - sn * eta[1], sn * eta[0] + cs * eta[1], eta[2]});
  };
  return stencil4(at, h);
}

double fd4_S_xieta(const EtaFn& f, const Vec3& xi, const Vec3& eta, double h) {
  const Vec3 d = sub(xi, eta);
  auto at = [&](double e) {
    return f({eta[0] + e * d[0], eta[1] + e * d[1], eta[2] + e * d[2]});
  };
  return stencil4(at, h);
}

double fd4_Omega_xieta(const EtaFn& f, const Vec3& xi, const Vec3& eta, double h) {
  const Vec3 d{-(xi[1] - eta[1]), xi[0] - eta[0], 0.0};
  auto at = [&](double e) {
    return f({eta[0] + e * d[0], eta[1] + e * d[1], eta[2] + e * d[2]});
  };
  return stencil4(at, h);
}

}  // namespace

double fd_S_xieta(const EtaFn& f, const Vec3& xi, const Vec3& eta, double h) {
  const Vec3 d = sub(xi, eta);
  auto at = [&](double e) {
    return f({eta[0] + e * d[0], eta[1] + e * d[1], eta[2] + e * d[2]});
  };
  return stencil4(at, h);
}

double fd_Omega_xieta(const EtaFn& f, const Vec3& xi, const Vec3& eta, double h) {
  const Vec3 d{-(xi[1] - eta[1]), xi[0] - eta[0], 0.0};
  auto at = [&](double e) {
    return f({eta[0] + e * d[0], eta[1] + e * d[1], eta[2] + e * d[2]});
  };
  return stencil4(at, h);
}

// ---- identity suite -----------------------------------------------------------

namespace {

Vec3 random_direction(SplitMix64& rng) {
  double z = rng.uniform(-1.0, 1.0);
  double th = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
  double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  return {r * std::cos(th), r * std::sin(th), z};
}

PhasePoint random_guarded_point(SplitMix64& rng) {
  for (;;) {
    Vec3 dx = random_direction(rng), de = random_direction(rng);
    double rx = std::exp(rng.uniform(std::log(0.5), std::log(2.5)));
    double re = std::exp(rng.uniform(std::log(0.5), std::log(2.5)));
    PhasePoint p;
    p.xi = {rx * dx[0], rx * dx[1], rx * dx[2]};
    p.eta = {re * de[0], re * de[1], re * de[2]};
    p.mu = rng.next_below(2) ? +1 : -1;
    p.nu = rng.next_below(2) ? +1 : -1;
    if (guarded(p)) return p;
  }
}

struct Tracker {
  DerivReport rep;
  void update(double got, double want, const PhasePoint& p) {
    double denom = std::max({std::abs(want), std::abs(got), 1e-8});
    double re = std::abs(got - want) / denom;
    ++rep.samples;
    if (re > rep.max_relerr) {
      rep.max_relerr = re;
      rep.worst = p;
    }
  }
};

}  // namespace

std::vector<DerivReport> run_identity_checks(int samples, uint64_t seed) {
  SplitMix64 rng(seed);
  const double h1 = 1e-4;  // first order
  const double h2 = 1e-3;  // nested second order
  const double h3 = 3e-3;  // outer step for the mixed third order

  Tracker grad_fd, t_S, t_Om, t_Sz, t_Omz, t_Ups;
  Tracker t_SS, t_OmOm, t_SOm, t_comm;
  Tracker t_zOmOm, t_zOmS, t_zSS, t_zSOm;
  Tracker t3_SSS, t3_SOmOm, t3_OmSS, t3_OmOmOm;
  Tracker ex_OmS, ex_SS, ex_SOm, ex_OmOm;
  grad_fd.rep.identity = "grad_lambda";
  t_S.rep.identity = "S_eta_Phi";
  t_Om.rep.identity = "Omega_eta_Phi";
  t_Sz.rep.identity = "S_xieta_Phi";
  t_Omz.rep.identity = "Omega_xieta_Phi";
  t_Ups.rep.identity = "Ups_xi_Phi";
  t_SS.rep.identity = "S_eta^2_Phi";
  t_OmOm.rep.identity = "Omega_eta^2_Phi";
  t_SOm.rep.identity = "S_eta_Omega_eta_Phi";
  t_comm.rep.identity = "S_Omega_commutator";
  t_zOmOm.rep.identity = "Om_xieta_Om_eta_Phi";
  t_zOmS.rep.identity = "Om_xieta_S_eta_Phi";
  t_zSS.rep.identity = "S_xieta_S_eta_Phi";
  t_zSOm.rep.identity = "S_xieta_Om_eta_Phi";
  t3_SSS.rep.identity = "S_xieta_S_eta^2_Phi";
  t3_SOmOm.rep.identity = "S_xieta_Om_eta^2_Phi";
  t3_OmSS.rep.identity = "Om_xieta_S_eta^2_Phi";
  t3_OmOmOm.rep.identity = "Om_xieta_Om_eta^2_Phi";
  ex_OmS.rep.identity = "exact_1VFmix2";
  ex_SS.rep.identity = "exact_1VFmix3";
  ex_SOm.rep.identity = "exact_1VFmix4";
  ex_OmOm.rep.identity = "exact_1VFmix1";

  for (int it = 0; it < samples; ++it) {
    PhasePoint p = random_guarded_point(rng);
    const Vec3 xi = p.xi;

    // gradient of Lambda vs plain central differences
    {
      Vec3 g = grad_lambda(xi);
      for (int a = 0; a < 3; ++a) {
        Vec3 xp = xi, xm = xi;
        double hh = h1 * step_scale(xi);
        xp[a] += hh;
        xm[a] -= hh;
        double fd = (lambda(xp) - lambda(xm)) / (2 * hh);
        grad_fd.update(fd, g[a], p);
      }
    }

    EtaFn Phi_of_eta = [&](const Vec3& e) { return phase({xi, e, p.mu, p.nu}); };
    ScalarFn Phi_of_xi = [&](const Vec3& x) { return phase({x, p.eta, p.mu, p.nu}); };

    FirstOrder f1 = vf_first_order(p);
    t_S.update(fd_S_eta(Phi_of_eta, p.eta, h1), f1.S_eta, p);
    t_Om.update(fd_Omega_eta(Phi_of_eta, p.eta, h1), f1.Omega_eta, p);
    t_Sz.update(fd_S_xieta(Phi_of_eta, xi, p.eta, h1), f1.S_xieta, p);
    t_Omz.update(fd_Omega_xieta(Phi_of_eta, xi, p.eta, h1), f1.Omega_xieta, p);
    t_Ups.update(fd_Upsilon(Phi_of_xi, xi, h1), f1.Ups_xi, p);

    // nested second order
    SecondThirdOrder f2 = vf_second_third_order(p);
    EtaFn S_eta_fn = [&](const Vec3& e) { return fd_S_eta(Phi_of_eta, e, h2); };
    EtaFn Om_eta_fn = [&](const Vec3& e) { return fd_Omega_eta(Phi_of_eta, e, h2); };
    t_SS.update(fd_S_eta(S_eta_fn, p.eta, h2), f2.SS_eta, p);
    t_OmOm.update(fd_Omega_eta(Om_eta_fn, p.eta, h2), f2.OmOm_eta, p);
    t_SOm.update(fd_S_eta(Om_eta_fn, p.eta, h2), f2.SOm_eta, p);
    t_comm.update(fd_S_eta(Om_eta_fn, p.eta, h2), fd_Omega_eta(S_eta_fn, p.eta, h2), p);

    t_zOmOm.update(fd_Omega_xieta(Om_eta_fn, xi, p.eta, h2), f2.Om_xieta_Om_eta, p);
    t_zOmS.update(fd_Omega_xieta(S_eta_fn, xi, p.eta, h2), f2.Om_xieta_S_eta, p);
    t_zSS.update(fd_S_xieta(S_eta_fn, xi, p.eta, h2), f2.S_xieta_S_eta, p);
    t_zSOm.update(fd_S_xieta(Om_eta_fn, xi, p.eta, h2), f2.S_xieta_Om_eta, p);

    // mixed third order: outer vector field by fourth-order differences of
    // the closed-form second-order expressions (themselves checked above)
    EtaFn SS_closed = [&](const Vec3& e) {
      return vf_second_third_order({xi, e, p.mu, p.nu}).SS_eta;
    };
    EtaFn OmOm_closed = [&](const Vec3& e) {
      return vf_second_third_order({xi, e, p.mu, p.nu}).OmOm_eta;
    };
    t3_SSS.update(fd4_S_xieta(SS_closed, xi, p.eta, h3), f2.S_xieta_SS_eta, p);
    t3_SOmOm.update(fd4_S_xieta(OmOm_closed, xi, p.eta, h3), f2.S_xieta_OmOm_eta, p);
    t3_OmSS.update(fd4_Omega_xieta(SS_closed, xi, p.eta, h3), f2.Om_xieta_SS_eta, p);
    t3_OmOmOm.update(fd4_Omega_xieta(OmOm_closed, xi, p.eta, h3), f2.Om_xieta_OmOm_eta,
                     p);
    (void)fd4_S_eta;
    (void)fd4_Omega_eta;

    // analytic mixed-second route vs the exact identities (rounding level)
    MixedSecondExact ex = mixed_second_exact(p);
    ex_OmS.update(ex.Om_xieta_S_eta, f1.Omega_eta, p);
    ex_SS.update(ex.S_xieta_S_eta, f1.S_eta, p);
    ex_SOm.update(ex.S_xieta_Om_eta, f1.Omega_eta, p);
    ex_OmOm.update(ex.Om_xieta_Om_eta, f2.Om_xieta_Om_eta, p);
  }

  std::vector<DerivReport> out;
  for (Tracker* t : {&grad_fd, &t_S, &t_Om, &t_Sz, &t_Omz, &t_Ups, &t_SS, &t_OmOm,
                     &t_SOm, &t_comm, &t_zOmOm, &t_zOmS, &t_zSS, &t_zSOm, &t3_SSS,
                     &t3_SOmOm, &t3_OmSS, &t3_OmOmOm, &ex_OmS, &ex_SS, &ex_SOm,
                     &ex_OmOm}) {
    t->rep.fd_step = h2;
    out.push_back(t->rep);
  }
  return out;
}

std::vector<DerivReport> run_decomposition_checks(int samples, uint64_t seed) {
  SplitMix64 rng(seed);
  const double h = 1e-5;
  std::vector<ScalarFn> fns = {
      [](const Vec3& x) { return x[0] * x[0] + x[1] * x[1] + x[2] * x[2]; },
      [](const Vec3& x) { return lambda(x); },
      [](const Vec3& x) {
        return std::sin(x[2]) * std::exp(-0.25 * dot3(x, x)) + 0.3 * x[0] * x[1];
      },
      [](const Vec3& x) { return x[2] * norm_h(x) * norm_h(x) / (1.0 + dot3(x, x)); },
  };
  Tracker t_d3, t_sh;
  t_d3.rep.identity = "partial3_decomposition";
  t_sh.rep.identity = "Sh_decomposition";
  for (int it = 0; it < samples; ++it) {
    PhasePoint p = random_guarded_point(rng);
    const Vec3 x = p.xi;
    const ScalarFn& f = fns[it % fns.size()];
    double rho = norm3(x);
    double L = lambda(x), P = sqrt_one_minus_lambda2(x);
    double Sf = fd_S(f, x, h), Uf = fd_Upsilon(f, x, h);
    // d_xi3 = rho^{-1} [Lambda S - sqrt(1-Lambda^2) Ups]
    t_d3.update(fd_partial3(f, x, h), (L * Sf - P * Uf) / rho, p);
    // S_h = sqrt(1-Lambda^2) [Lambda Ups + sqrt(1-Lambda^2) S]
    t_sh.update(fd_Sh(f, x, h), P * (L * Uf + P * Sf), p);
  }
  std::vector<DerivReport> out;
  t_d3.rep.fd_step = h;
  t_sh.rep.fd_step = h;
  out.push_back(t_d3.rep);
  out.push_back(t_sh.rep);
  return out;
}

std::vector<DerivReport> run_cross_term_checks(int samples, uint64_t seed) {
  SplitMix64 rng(seed);
  const double h = 1e-5;
  // axisymmetric test functions g(zeta) = G(|zeta_h|, zeta3)
  std::vector<ScalarFn> fns = {
      [](const Vec3& x) {
        double rh2 = x[0] * x[0] + x[1] * x[1];
        return x[2] * rh2 * std::exp(-0.25 * (rh2 + x[2] * x[2]));
      },
      [](const Vec3& x) {
        double rh2 = x[0] * x[0] + x[1] * x[1];
        return std::cos(x[2]) / (1.0 + rh2);
      },
      [](const Vec3& x) {
        double rh = norm_h(x);
        return std::sin(rh) * std::exp(-0.1 * x[2] * x[2]);
      },
  };
  Tracker t_s, t_o, t_u, t_w;
  t_s.rep.identity = "cross_S_eta";
  t_o.rep.identity = "cross_Omega_eta";
  t_u.rep.identity = "cross_Ups_xi";
  t_w.rep.identity = "omega_c2_plus_omega_s2";
  for (int it = 0; it < samples; ++it) {
    PhasePoint p = random_guarded_point(rng);
    const Vec3 xi = p.xi, eta = p.eta, zeta = sub(xi, eta);
    const ScalarFn& g = fns[it % fns.size()];
    CrossTermCoeffs c = cross_term_coeffs(xi, eta);
    t_w.update(c.omega_c * c.omega_c + c.omega_s * c.omega_s, 1.0, p);
    double Sg = fd_S(g, zeta, h), Ug = fd_Upsilon(g, zeta, h);
    EtaFn comp = [&](const Vec3& e) { return g(sub(xi, e)); };
    t_s.update(fd_S_eta(comp, eta, h), c.s_S * Sg + c.s_U * Ug, p);
    t_o.update(fd_Omega_eta(comp, eta, h), c.o_S * Sg + c.o_U * Ug, p);
    ScalarFn comp_xi = [&](const Vec3& x) { return g(sub(x, eta)); };
    t_u.update(fd_Upsilon(comp_xi, xi, h), c.GammaS * Sg + c.GammaU * Ug, p);
  }
  std::vector<DerivReport> out;
  for (Tracker* t : {&t_s, &t_o, &t_u, &t_w}) {
    t->rep.fd_step = h;
    out.push_back(t->rep);
  }
  return out;
}

// ---- phase vs sigma sampling -----------------------------------------------------

namespace {

double dyadic_floor_log2(double v) {
  if (v <= 0.0) return -1e9;
  return std::floor(std::log2(v));
}

}  // namespace

bool phase_sigma_accepts(const PhasePoint& p) {
  const Vec3 zeta = sub(p.xi, p.eta);
  double q = dyadic_floor_log2(std::abs(lambda(p.xi)));
  double q1 = dyadic_floor_log2(std::abs(lambda(zeta)));
  double q2 = dyadic_floor_log2(std::abs(lambda(p.eta)));
  double qmax = std::max({q, q1, q2});
  return std::abs(phase(p)) <= std::exp2(qmax - 2.0);
}

PhaseSigmaStats phase_vs_sigma_sample(long target_accepted, uint64_t seed,
                                      long min_accept) {
  SplitMix64 rng(seed);
  PhaseSigmaStats st;
  const long max_tries = 400 * target_accepted;
  while (st.accepted < target_accepted && st.tried < max_tries) {
    ++st.tried;
    PhasePoint p = random_guarded_point(rng);
    const Vec3 zeta = sub(p.xi, p.eta);
    // keep dyadic sizes finite
    if (std::abs(lambda(p.xi)) < 1e-6 || std::abs(lambda(zeta)) < 1e-6 ||
        std::abs(lambda(p.eta)) < 1e-6)
      continue;
    if (!phase_sigma_accepts(p)) continue;
    ++st.accepted;
    double q = dyadic_floor_log2(std::abs(lambda(p.xi)));
    double q1 = dyadic_floor_log2(std::abs(lambda(zeta)));
    double q2 = dyadic_floor_log2(std::abs(lambda(p.eta)));
    double qmax = std::max({q, q1, q2});
    double pmax = std::max({dyadic_floor_log2(sqrt_one_minus_lambda2(p.xi)),
                            dyadic_floor_log2(sqrt_one_minus_lambda2(zeta)),
                            dyadic_floor_log2(sqrt_one_minus_lambda2(p.eta))});
    double ks[3] = {dyadic_floor_log2(norm3(p.xi)), dyadic_floor_log2(norm3(zeta)),
                    dyadic_floor_log2(norm3(p.eta))};
    double kmax = std::max({ks[0], ks[1], ks[2]});
    double kmin = std::min({ks[0], ks[1], ks[2]});
    auto sig = sigma_bar(p.xi, p.eta);
    double sig_norm = std::hypot(sig[0], sig[1]);
    st.min_pmax = std::min(st.min_pmax, std::exp2(pmax));
    st.min_sigma_ratio =
        std::min(st.min_sigma_ratio, sig_norm / std::exp2(qmax + kmax + kmin));
  }
  st.conclusive = st.accepted >= min_accept;
  return st;
}

}  // namespace rotwave::phase
