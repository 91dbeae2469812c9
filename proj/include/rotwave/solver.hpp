// Nonlinear dynamics on the periodic box in both formulations, plus the
// instantaneous cross-formulation residual, diagnostics, and the lifespan
// proxy sweep.
//
// Velocity form:   du/dt = -Leray( div(u (x) u) + rot * e3 x u ),  RK4.
// Dispersive form: profiles (e^{-+ t Lam} U+-) stepped with an integrating-
// factor RK4 (Lawson): the linear part is exact, stages evaluate only the
// quadratic kernels.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rotwave/formulation.hpp"
#include "rotwave/grid.hpp"
#include "rotwave/pipeline.hpp"

namespace rotwave {

enum class Formulation { Velocity, Dispersive };

struct SimConfig {
  int n = 32;
  double box_length = 2.0 * 3.14159265358979323846 * 16.0;
  double dt = 0.02;
  double t_end = 1.0;
  bool rotation_on = true;
  bool dealias_on = true;
  bool nonlinear_on = true;
  // Galerkin truncation onto the axis-free sector (modes with xi_h = 0
  // removed). This is the velocity-side rendering of the state space of the
  // (a,c)/(U+,U-) formulation; axisymmetric data never populates the axis,
  // so the flag only matters for cross-formulation trajectory comparisons.
  bool axis_free = false;
  Formulation formulation = Formulation::Velocity;
  int stride = 10;            // diagnostics every this many steps
  int snapshot_stride = 0;    // 0 = no snapshots
  uint64_t seed = 1;
  double amplitude = 0.1;     // initial data normalized to ||u||_inf = amplitude
  double k0 = 0.4;            // spectral center of the generated data
  double width = 0.15;
  double sobolev_s = 2.0;
  std::string out_dir;        // empty = no file output
};

struct DiagnosticsRow {
  double t = 0.0;
  double energy = 0.0;     // ||u||_2
  double h_s = 0.0;        // ||u||_{H^s}
  double a0 = 0.0;         // (1+t) ||u||_inf
  double a1 = 0.0;         // (1+t) ||grad u||_inf
  double axi_dev = 0.0;
  double bnorm_plus = 0.0;   // B norm of the U+ profile
  double bnorm_minus = 0.0;
  double max_hat = 0.0;
  bool healthy = true;
};

// e^{sign * i t Lambda(xi)} multiplication (exactly unitary per mode).
SpectralField semigroup_grid(const SpectralField& F, double t, int sign);

// -Leray( div(u (x) u) + rot e3 x u ), pseudo-spectral with 2/3 dealiasing.
SpectralVectorField rhs_velocity(const SpectralVectorField& u, bool rotation_on,
                                 bool dealias_on = true);

// Relative L2 difference between d/dt(U+,U-) computed from rhs_velocity
// mapped through the (linear) change of unknowns and from rhs_dispersive.
double formulation_equivalence_check(const SpectralVectorField& u);

struct SimState {
  double time = 0.0;
  bool healthy = true;
  // velocity formulation state
  SpectralVectorField u;
  // dispersive formulation state (profiles)
  ProfilePair profiles;
  Formulation formulation = Formulation::Velocity;

  SpectralVectorField velocity() const;  // current u in either formulation
};

SimState make_initial_state(const SimConfig& cfg);
SimState make_state_from_velocity(const SpectralVectorField& u, const SimConfig& cfg);

// One RK4 (velocity) or integrating-factor RK4 (dispersive) step.
void step(SimState& state, double dt, const SimConfig& cfg);

DiagnosticsRow diagnostics(const SimState& state, const SimConfig& cfg);

struct SimResult {
  std::vector<DiagnosticsRow> rows;
  SimState final_state;
  bool healthy = true;
};

SimResult run_simulation(const SimConfig& cfg);

struct LifespanRow {
  double eps = 0.0;
  bool rotation = false;
  uint64_t seed = 0;
  double t_star = 0.0;
  bool censored = false;  // no crossing before t_end
};

// First time ||grad u||_inf exceeds threshold_factor * its initial value.
LifespanRow lifespan_run(const SimConfig& cfg, double eps, bool rotation,
                         uint64_t seed, double threshold_factor = 10.0);

std::vector<LifespanRow> lifespan_experiment(const SimConfig& tmpl,
                                             const std::vector<double>& eps_list,
                                             const std::vector<uint64_t>& seeds,
                                             double threshold_factor = 10.0);

// Physical-space sup norms from grid samples.
double sup_norm_velocity(const SpectralVectorField& u);
double sup_norm_gradient(const SpectralVectorField& u);

}  // namespace rotwave
