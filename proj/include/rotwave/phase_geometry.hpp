// Pointwise geometry of the resonance phase Phi_{mu,nu} and the vector
// fields S, Omega, Upsilon in Fourier variables: closed-form first, second
// and third order derivatives of the phase, vector-field cross-term
// decompositions on axisymmetric functions, and the phase-vs-sigma sampling
// study.
//
// Operator conventions (fixed here, used by all tests):
//   S_eta = eta . grad_eta,   Omega_eta = eta_h-perp . grad_{eta_h},
//   S_{xi-eta} = (xi-eta) . grad_eta,  Omega_{xi-eta} = (xi_h-eta_h)-perp . grad_{eta_h},
//   Upsilon_xi = the polar-angle derivative in xi (eta fixed).
// Cross-term decompositions are expressed in the vector fields acting
// directly on the argument zeta = xi - eta (true-operator convention).
#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace rotwave::phase {

using Vec3 = std::array<double, 3>;

struct PhasePoint {
  Vec3 xi{};
  Vec3 eta{};
  int mu = +1;
  int nu = +1;
};

// Singular-set guard: all of |xi|, |eta|, |xi-eta|, |xi_h|, |eta_h|,
// |xi_h-eta_h| at least delta_sing = 1e-2 * max(|xi|,|eta|).
bool guarded(const PhasePoint& p);

double lambda(const Vec3& xi);
double sqrt_one_minus_lambda2(const Vec3& xi);
// grad Lambda = -(xi3/|xi|^3) xi_h + (|xi_h|^2/|xi|^3) e3. Rejects |xi| < 1e-12.
Vec3 grad_lambda(const Vec3& xi);

// Phi = Lambda(xi) + mu Lambda(xi-eta) + nu Lambda(eta).
double phase(const PhasePoint& p);

// sigma-bar = xi3 eta_h - eta3 xi_h (horizontal 2-vector).
std::array<double, 2> sigma_bar(const Vec3& xi, const Vec3& eta);

// ---- closed forms -------------------------------------------------------------

struct FirstOrder {
  double S_eta;        // mu * sigma.zeta_h / |zeta|^3
  double Omega_eta;    // -mu * sigma.zeta_h-perp / |zeta|^3
  double S_xieta;      // nu * sigma.eta_h / |eta|^3
  double Omega_xieta;  // -nu * sigma.eta_h-perp / |eta|^3
  double Ups_xi;       // -P(xi) + mu * Ups_xi Lambda(xi-eta)
};
FirstOrder vf_first_order(const PhasePoint& p);

struct SecondThirdOrder {
  // pure second order
  double SS_eta, OmOm_eta, SOm_eta;
  // mixed second order (closed forms; the exact identities 1VFmix-2..4 say
  // the last three equal Omega_eta, S_eta, Omega_eta of FirstOrder)
  double Om_xieta_Om_eta, Om_xieta_S_eta, S_xieta_S_eta, S_xieta_Om_eta;
  // mixed third order
  double S_xieta_SS_eta, S_xieta_OmOm_eta, Om_xieta_SS_eta, Om_xieta_OmOm_eta;
};
SecondThirdOrder vf_second_third_order(const PhasePoint& p);

// Independent analytic route for the mixed second-order derivatives: exact
// gradients of the closed-form S_etaPhi and Omega_etaPhi contracted with the
// outer vector field. Used to check the 1VFmix identities to rounding.
struct MixedSecondExact {
  double Om_xieta_S_eta, S_xieta_S_eta, S_xieta_Om_eta, Om_xieta_Om_eta;
};
MixedSecondExact mixed_second_exact(const PhasePoint& p);

// ---- cross terms ---------------------------------------------------------------

struct CrossTermCoeffs {
  double omega_c;  // eta_h . (xi_h - eta_h) / (|eta_h| |xi_h - eta_h|)
  double omega_s;  // eta_h . (xi_h - eta_h)-perp / (|eta_h| |xi_h - eta_h|)
  // S_eta g(xi-eta)     = s_S  (Sg)(zeta) + s_U  (Ups g)(zeta)
  // Omega_eta g(xi-eta) = o_S  (Sg)(zeta) + o_U  (Ups g)(zeta)
  // Ups_xi g(xi-eta)    = GammaS (Sg)(zeta) + GammaU (Ups g)(zeta)
  double s_S, s_U;
  double o_S, o_U;
  double GammaS, GammaU;
};
CrossTermCoeffs cross_term_coeffs(const Vec3& xi, const Vec3& eta);

// ---- finite-difference oracles --------------------------------------------------

using ScalarFn = std::function<double(const Vec3&)>;

// Central differences along the generating flows (first order), steps are
// relative to the point scale.
double fd_S(const ScalarFn& f, const Vec3& x, double h = 1e-5);
double fd_Omega(const ScalarFn& f, const Vec3& x, double h = 1e-5);
double fd_Upsilon(const ScalarFn& f, const Vec3& x, double h = 1e-5);
double fd_partial3(const ScalarFn& f, const Vec3& x, double h = 1e-5);
double fd_Sh(const ScalarFn& f, const Vec3& x, double h = 1e-5);  // horizontal scaling

// Vector fields in eta acting on (xi,eta) -> Phi-type functions with xi fixed.
using EtaFn = std::function<double(const Vec3&)>;
double fd_S_eta(const EtaFn& f, const Vec3& eta, double h = 1e-5);
double fd_Omega_eta(const EtaFn& f, const Vec3& eta, double h = 1e-5);
double fd_S_xieta(const EtaFn& f, const Vec3& xi, const Vec3& eta, double h = 1e-5);
double fd_Omega_xieta(const EtaFn& f, const Vec3& xi, const Vec3& eta, double h = 1e-5);

// ---- reports and sampling studies ------------------------------------------------

struct DerivReport {
  std::string identity;
  int samples = 0;
  double max_relerr = 0.0;
  PhasePoint worst;
  double fd_step = 0.0;
};

// Draws guarded random points and checks every closed form above against its
// finite-difference oracle. Returns one report per identity.
std::vector<DerivReport> run_identity_checks(int samples, uint64_t seed);

// Upsilon/S decomposition identities checked on a smooth test function.
std::vector<DerivReport> run_decomposition_checks(int samples, uint64_t seed);

// Cross-term coefficient checks against finite differences on axisymmetric
// test functions.
std::vector<DerivReport> run_cross_term_checks(int samples, uint64_t seed);

struct PhaseSigmaStats {
  long accepted = 0;
  long tried = 0;
  double min_pmax = 1e300;        // min over accepted samples of 2^{p_max}
  double min_sigma_ratio = 1e300; // min |sigma| / 2^{q_max + k_max + k_min}
  bool conclusive = false;        // >= min_accept samples accepted
};

// Accept predicate of the sampling study: |Phi| <= 2^{q_max - 2} with
// q(zeta) = floor(log2 |Lambda(zeta)|).
bool phase_sigma_accepts(const PhasePoint& p);

PhaseSigmaStats phase_vs_sigma_sample(long target_accepted, uint64_t seed,
                                      long min_accept = 100);

}  // namespace rotwave::phase
