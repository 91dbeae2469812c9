#include <cstdarg>
// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// criterion fails. Each criterion pins its tolerance in code.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <vector>

#include "rotwave/bands.hpp"
#include "rotwave/formulation.hpp"
#include "rotwave/phase_geometry.hpp"
#include "rotwave/pipeline.hpp"
#include "rotwave/quadrature.hpp"
#include "rotwave/rng.hpp"
#include "rotwave/solver.hpp"
#include "rotwave/symbols.hpp"

using namespace rotwave;

namespace {

const double kTwoPi = 2.0 * std::numbers::pi;
int g_failures = 0;

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  }
};

void report(int num, const char* name, bool pass, const std::string& detail,
            double secs) {
  std::printf("[%s] criterion %2d %-28s %s  (%.1fs)\n", pass ? "PASS" : "FAIL", num,
              name, detail.c_str(), secs);
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof(buf), f, ap);
  va_end(ap);
  return buf;
}

SpectralField random_hermitian(const Grid& g, uint64_t seed, int mmax) {
  SpectralField F(g);
  SplitMix64 rng(seed);
  for (int mi = -mmax; mi <= mmax; ++mi)
    for (int mj = -mmax; mj <= mmax; ++mj)
      for (int mk = -mmax; mk <= mmax; ++mk) {
        if (mi == 0 && mj == 0 && mk == 0) continue;
        cplx v(rng.uniform(-1, 1), rng.uniform(-1, 1));
        F.coeffs[g.index(g.unfold(mi), g.unfold(mj), g.unfold(mk))] += 0.5 * v;
        F.coeffs[g.index(g.unfold(-mi), g.unfold(-mj), g.unfold(-mk))] +=
            0.5 * std::conj(v);
      }
  return F;
}

// 1. Remark 4.2 sharpness for a radial Gaussian profile.
void criterion1() {
  Timer tm;
  QuadratureGrid2D qg(256, 1e-3, 8.0, 512);
  RadialProfile f = gaussian_radial_profile(qg, 1.0, 0.5);
  auto f0 = profile_value_at_origin(f);
  double worst = 0.0;
  for (double t : {0.5, 1.0, 5.0, 20.0, 50.0}) {
    auto I = semigroup_point_eval(f, 0.0, 0.0, t);
    worst = std::max(worst, std::abs(I - (std::sin(t) / t) * f0) / std::abs(f0));
  }
  double secs = tm.seconds();
  report(1, "sharpness sin(t)/t", worst < 1e-6 && secs < 10.0,
         fmt("max relerr %.3e", worst), secs);
}

// 2. Dispersive decay rate for a generic band-localized profile.
void criterion2() {
  Timer tm;
  QuadratureGrid2D qg(768, 1e-3, 2.5, 1024);
  BandIndex b{0, -1, 0};
  RadialProfile f = band_profile(qg, b, 3);
  std::vector<double> times;
  for (int a = 0; a < 8; ++a) times.push_back(10.0 * std::pow(10.0, a / 7.0));
  DecayCurve c = decay_study(f, b, times, 8);
  bool finite = true;
  for (const auto& p : c.points) finite = finite && std::isfinite(p.empirical_constant);
  double secs = tm.seconds();
  report(2, "decay rate t^-1",
         c.budget_ok && finite && c.slope > -1.15 && c.slope < -0.85 && secs < 120.0,
         fmt("slope %.3f const %.3e budget %d", c.slope,
             c.points.back().empirical_constant, (int)c.budget_ok),
         secs);
}

// 3. Reformulation transcription: residual on 20 grid-exact states.
void criterion3() {
  Timer tm;
  Grid g(32, kTwoPi * 16.0);
  double worst = 0.0;
  for (uint64_t seed = 1; seed <= 12; ++seed) {
    ScalarPair s = make_collinear_data(g, seed, {0.25, 0.1, 0.05}, 5);
    worst = std::max(worst, formulation_equivalence_check(scalars_to_velocity(s)));
  }
  for (uint64_t seed = 1; seed <= 8; ++seed) {
    ScalarPair s = make_single_ring_swirl_data(g, seed, 25, 5, 0.05);
    worst = std::max(worst, formulation_equivalence_check(scalars_to_velocity(s)));
  }
  double secs = tm.seconds();
  report(3, "reformulation residual", worst < 1e-10 && secs < 120.0,
         fmt("max residual %.3e over 20 states", worst), secs);
}

// 4. Pseudo-product pipelines vs the O(n^6) convolution oracle.
void criterion4() {
  Timer tm;
  Grid g8(8, kTwoPi);
  SpectralField f = random_hermitian(g8, 31, 2);
  SpectralField h = random_hermitian(g8, 32, 2);
  auto kernels = build_euler_kernels();
  double worst = 0.0;
  for (const auto& k : kernels) {
    SpectralField got = q_m(k.pipeline, f, h, true);
    double num = 0.0, den = 0.0;
    for (int i = 0; i < g8.n; ++i)
      for (int j = 0; j < g8.n; ++j)
        for (int kk = 0; kk < g8.n; ++kk) {
          if (!inside_dealias_ball(g8, i, j, kk)) continue;
          auto xi = g8.xi(i, j, kk);
          cplx acc(0, 0);
          for (int ei = 0; ei < g8.n; ++ei)
            for (int ej = 0; ej < g8.n; ++ej)
              for (int ek = 0; ek < g8.n; ++ek) {
                auto eta = g8.xi(ei, ej, ek);
                int di = g8.fold(i) - g8.fold(ei), dj = g8.fold(j) - g8.fold(ej),
                    dk = g8.fold(kk) - g8.fold(ek);
                if (std::abs(di) > 3 || std::abs(dj) > 3 || std::abs(dk) > 3)
                  continue;
                cplx fv = f.at(g8.unfold(di), g8.unfold(dj), g8.unfold(dk));
                cplx gv = h.at(ei, ej, ek);
                if (fv == cplx(0) || gv == cplx(0)) continue;
                acc += eval_pipeline(k.pipeline, xi, eta) * fv * gv;
              }
          num += std::norm(got.at(i, j, kk) - acc);
          den += std::norm(acc);
        }
    worst = std::max(worst, std::sqrt(num / den));
  }
  double secs = tm.seconds();
  report(4, "convolution oracle 8^3", worst < 1e-10 && secs < 300.0,
         fmt("max relerr %.3e over 6 kernels", worst), secs);
}

// 5. Phase-geometry identities vs finite differences.
void criterion5() {
  Timer tm;
  auto all = phase::run_identity_checks(1000, 2024);
  auto dec = phase::run_decomposition_checks(1000, 99);
  auto cross = phase::run_cross_term_checks(1000, 314);
  all.insert(all.end(), dec.begin(), dec.end());
  all.insert(all.end(), cross.begin(), cross.end());
  double worst_fd = 0.0, worst_exact = 0.0;
  for (const auto& r : all) {
    if (r.identity.rfind("exact_", 0) == 0 ||
        r.identity == "omega_c2_plus_omega_s2")
      worst_exact = std::max(worst_exact, r.max_relerr);
    else
      worst_fd = std::max(worst_fd, r.max_relerr);
  }
  // sigma relations to rounding
  SplitMix64 rng(5150);
  double worst_sigma = 0.0;
  for (int t = 0; t < 1000; ++t) {
    phase::Vec3 xi{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
    phase::Vec3 eta{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
    phase::Vec3 zeta{xi[0] - eta[0], xi[1] - eta[1], xi[2] - eta[2]};
    auto s1 = phase::sigma_bar(xi, eta);
    auto s2 = phase::sigma_bar(zeta, eta);
    auto s3 = phase::sigma_bar(xi, zeta);
    for (int a = 0; a < 2; ++a) {
      worst_sigma = std::max(worst_sigma, std::abs(s1[a] - s2[a]));
      worst_sigma = std::max(worst_sigma, std::abs(s1[a] + s3[a]));
    }
  }
  double secs = tm.seconds();
  report(5, "phase identities",
         worst_fd < 1e-5 && worst_exact < 1e-11 && worst_sigma < 1e-12 && secs < 60.0,
         fmt("fd %.2e exact %.2e sigma %.2e", worst_fd, worst_exact, worst_sigma),
         secs);
}

// 6. Parseval splitting over the elementary multiplier class.
void criterion6() {
  Timer tm;
  Grid g(32, kTwoPi * 16.0);
  std::vector<SymbolFn> cls;
  cls.push_back([](const std::array<double, 3>&) { return cplx(1, 0); });
  for (int i = 0; i < 3; ++i)
    cls.push_back([i](const std::array<double, 3>& xi) {
      return cplx(riesz_full_sym(xi, i), 0);
    });
  for (int j = 0; j < 2; ++j)
    cls.push_back([j](const std::array<double, 3>& xi) {
      return cplx(riesz_h_sym(xi, j), 0);
    });
  cls.push_back([](const std::array<double, 3>& xi) {
    return cplx(sqrt_one_minus_lambda2_sym(xi), 0);
  });
  double worst = 0.0;
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    ScalarPair s;
    s.a = random_hermitian(g, seed, 5);
    s.c = random_hermitian(g, seed + 500, 5);
    s.a.zero_axis();
    s.c.zero_axis();
    SpectralVectorField u = scalars_to_velocity(s);
    for (const auto& m : cls)
      worst = std::max(worst, parseval_split_check(u, m).relerr);
  }
  report(6, "Parseval splitting", worst < 1e-12,
         fmt("max relerr %.3e over 20 fields x 7 multipliers", worst), tm.seconds());
}

// 7. Phase-vs-sigma sampling study.
void criterion7() {
  Timer tm;
  phase::PhaseSigmaStats st = phase::phase_vs_sigma_sample(10000, 7);
  report(7, "phase vs sigma sampling",
         st.conclusive && st.accepted >= 10000 && st.min_pmax >= 0.25 &&
             st.min_sigma_ratio >= std::exp2(-6.0),
         fmt("accepted %ld/%ld min2pmax %.3f minratio %.3f", st.accepted, st.tried,
             st.min_pmax, st.min_sigma_ratio),
         tm.seconds());
}

// 8. Set-size gain empirical constant.
void criterion8() {
  Timer tm;
  Grid g(16, kTwoPi);
  auto kernels = build_euler_kernels();
  struct Triple {
    BandIndex out, f, gg;
  };
  std::vector<Triple> triples = {
      {{2, 0, -1}, {1, 0, -1}, {2, -1, 0}},  {{2, -1, 0}, {2, -1, 0}, {1, 0, -2}},
      {{1, 0, -2}, {1, -1, 0}, {1, 0, -1}},  {{3, -1, 0}, {2, 0, -2}, {2, -1, 0}},
      {{2, 0, -2}, {2, 0, -1}, {2, 0, -2}},
  };
  double maxratio = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Triple& tr = triples[trial % triples.size()];
    const auto& k = kernels[trial % kernels.size()];
    SetSizeTrial t = set_size_check(k.pipeline, g, tr.out, tr.f, tr.gg,
                                    1000 + static_cast<uint64_t>(trial));
    maxratio = std::max(maxratio, t.ratio);
  }
  report(8, "set-size constant", maxratio <= 8.0,
         fmt("max ratio %.4f over 100 trials", maxratio), tm.seconds());
}

// 9. Conservation, symmetry, and integrator order under dynamics.
void criterion9() {
  Timer tm;
  SimConfig cfg;
  cfg.n = 32;
  cfg.box_length = kTwoPi * 16.0;
  cfg.dt = 0.02;
  cfg.t_end = 20.0;  // 1000 steps
  cfg.amplitude = 0.1;
  cfg.stride = 0;
  bool pass = true;
  std::string detail;
  for (bool rot : {true, false}) {
    cfg.rotation_on = rot;
    SimState st = make_initial_state(cfg);
    double e0 = st.u.l2_norm();
    double drift = 0.0, axi = 0.0;
    for (int i = 0; i < 1000; ++i) {
      step(st, cfg.dt, cfg);
      if (i % 10 == 9 || i == 999) {
        drift = std::max(drift, std::abs(st.u.l2_norm() - e0) / e0);
        axi = std::max(axi, axisymmetry_deviation(st.u));
      }
    }
    pass = pass && st.healthy && drift < 1e-8 && axi < 1e-9;
    detail += fmt("%sdrift %.2e axi %.2e", rot ? "on: " : " off: ", drift, axi);
  }
  // Richardson order check
  SimConfig rc;
  rc.n = 16;
  rc.box_length = kTwoPi * 4.0;
  rc.amplitude = 0.3;
  rc.k0 = 0.8;
  rc.width = 0.3;
  auto run = [&](double dt) {
    SimState st = make_initial_state(rc);
    int n = static_cast<int>(std::llround(1.0 / dt));
    for (int i = 0; i < n; ++i) step(st, dt, rc);
    return st.u;
  };
  SpectralVectorField u1 = run(0.1), u2 = run(0.05), u4 = run(0.025);
  double factor = (u1 - u2).l2_norm() / (u2 - u4).l2_norm();
  pass = pass && factor > 12.0 && factor < 20.0;
  detail += fmt(" rk4 %.2f", factor);
  report(9, "conservation + RK4 order", pass, detail, tm.seconds());
}

// 10. Qualitative stabilization sweep.
void criterion10() {
  Timer tm;
  SimConfig cfg;
  cfg.n = 32;
  cfg.box_length = kTwoPi * 4.0;
  cfg.dt = 0.1;
  cfg.t_end = 60.0;
  cfg.k0 = 1.0;
  cfg.width = 0.4;
  std::vector<double> eps_list{0.05, 0.1, 0.2};
  std::vector<uint64_t> seeds{1, 2, 3, 4, 5};
  auto rows = lifespan_experiment(cfg, eps_list, seeds, 10.0);
  int wins = 0, pairs = 0, censored = 0;
  for (double eps : eps_list)
    for (uint64_t seed : seeds) {
      const LifespanRow *on = nullptr, *off = nullptr;
      for (const auto& r : rows)
        if (r.eps == eps && r.seed == seed) (r.rotation ? on : off) = &r;
      if (on->censored || off->censored) {
        ++censored;
        continue;
      }
      ++pairs;
      wins += (on->t_star >= off->t_star);
    }
  double secs = tm.seconds();
  bool pass = pairs > 0 && wins * 2 > pairs && secs < 1800.0;
  report(10, "stabilization sweep", pass,
         fmt("rotation-on wins %d of %d uncensored pairs (%d censored)", wins, pairs,
             censored),
         secs);
}

}  // namespace

int main() {
  std::printf("rotwave acceptance suite\n");
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  criterion10();
  std::printf("%d of 10 criteria passed\n", 10 - g_failures);
  return g_failures == 0 ? 0 : 1;
}
