// Implementation of the CLI subcommands: verification suites with CSV
// reports, decay studies, simulations and lifespan sweeps.
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <vector>

#include "rotwave/bands.hpp"
#include "rotwave/bump.hpp"
#include "rotwave/config.hpp"
#include "rotwave/formulation.hpp"
#include "rotwave/phase_geometry.hpp"
#include "rotwave/pipeline.hpp"
#include "rotwave/quadrature.hpp"
#include "rotwave/rng.hpp"
#include "rotwave/solver.hpp"
#include "rotwave/symbols.hpp"

namespace rotwave {

namespace {

struct SuiteResult {
  int checks = 0;
  std::vector<std::string> failures;

  void expect(bool ok, const std::string& what) {
    ++checks;
    if (!ok) failures.push_back(what);
  }
};

std::string out_path(const RunConfig& cfg, const std::string& name) {
  std::filesystem::path dir = cfg.out_dir.empty() ? "rotwave_out" : cfg.out_dir;
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

void echo_config(const RunConfig& cfg) {
  std::ofstream os(out_path(cfg, "config_resolved.txt"), std::ios::binary);
  os << cfg.echo();
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

SpectralVectorField random_divfree_acfield(const Grid& g, uint64_t seed, int mmax) {
  ScalarPair s;
  s.a = random_hermitian(g, seed, mmax);
  s.c = random_hermitian(g, seed + 1000, mmax);
  s.a.zero_axis();
  s.c.zero_axis();
  return scalars_to_velocity(s);
}

// ---- individual suites -------------------------------------------------------

SuiteResult suite_phase_identities(const RunConfig& cfg) {
  SuiteResult res;
  CsvWriter csv(out_path(cfg, "phase_identities.csv"));
  csv.header({"identity", "samples", "max_relerr", "worst_xi1", "worst_xi2",
              "worst_xi3", "worst_eta1", "worst_eta2", "worst_eta3", "fd_step"});
  auto all = phase::run_identity_checks(1000, 2024);
  auto dec = phase::run_decomposition_checks(1000, 99);
  auto cross = phase::run_cross_term_checks(1000, 314);
  all.insert(all.end(), dec.begin(), dec.end());
  all.insert(all.end(), cross.begin(), cross.end());
  for (const auto& r : all) {
    csv.row({r.identity, std::to_string(r.samples), CsvWriter::num(r.max_relerr),
             CsvWriter::num(r.worst.xi[0]), CsvWriter::num(r.worst.xi[1]),
             CsvWriter::num(r.worst.xi[2]), CsvWriter::num(r.worst.eta[0]),
             CsvWriter::num(r.worst.eta[1]), CsvWriter::num(r.worst.eta[2]),
             CsvWriter::num(r.fd_step)});
    double tol = r.identity.rfind("exact_", 0) == 0 ? 1e-11
                 : r.identity == "omega_c2_plus_omega_s2" ? 1e-12
                 : r.identity.rfind("partial3", 0) == 0 ||
                         r.identity.rfind("Sh_", 0) == 0
                     ? 1e-6
                     : 1e-5;
    res.expect(r.max_relerr < tol, "phase-identities/" + r.identity + " relerr " +
                                       CsvWriter::num(r.max_relerr));
  }
  // sigma-bar exact relations at rounding
  SplitMix64 rng(5150);
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    phase::Vec3 xi{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
    phase::Vec3 eta{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
    phase::Vec3 zeta{xi[0] - eta[0], xi[1] - eta[1], xi[2] - eta[2]};
    auto s1 = phase::sigma_bar(xi, eta);
    auto s2 = phase::sigma_bar(zeta, eta);
    auto s3 = phase::sigma_bar(xi, zeta);
    for (int a = 0; a < 2; ++a) {
      worst = std::max(worst, std::abs(s1[a] - s2[a]));
      worst = std::max(worst, std::abs(s1[a] + s3[a]));
    }
  }
  res.expect(worst < 1e-12, "phase-identities/sigma_relations");
  return res;
}

SuiteResult suite_sampling(const RunConfig& cfg) {
  SuiteResult res;
  phase::PhaseSigmaStats st = phase::phase_vs_sigma_sample(10000, 7);
  CsvWriter csv(out_path(cfg, "phase_vs_sigma.csv"));
  csv.header({"accepted", "tried", "min_2pmax", "min_sigma_ratio"});
  csv.row({std::to_string(st.accepted), std::to_string(st.tried),
           CsvWriter::num(st.min_pmax), CsvWriter::num(st.min_sigma_ratio)});
  res.expect(st.conclusive, "sampling/conclusive");
  res.expect(st.accepted >= 10000, "sampling/accepted>=1e4");
  res.expect(st.min_pmax >= 0.25, "sampling/2pmax>=1/4");
  res.expect(st.min_sigma_ratio >= std::exp2(-6.0), "sampling/sigma_ratio>=2^-6");

  // set-size study: 100 trials over 5 band triples
  Grid g(16, 2 * std::numbers::pi);
  auto kernels = build_euler_kernels();
  struct Triple {
    BandIndex out, f, gg;
  };
  std::vector<Triple> triples = {
      {{2, 0, -1}, {1, 0, -1}, {2, -1, 0}},  {{2, -1, 0}, {2, -1, 0}, {1, 0, -2}},
      {{1, 0, -2}, {1, -1, 0}, {1, 0, -1}},  {{3, -1, 0}, {2, 0, -2}, {2, -1, 0}},
      {{2, 0, -2}, {2, 0, -1}, {2, 0, -2}},
  };
  CsvWriter scsv(out_path(cfg, "set_size.csv"));
  scsv.header({"trial", "kernel", "ratio", "m_inf"});
  double maxratio = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Triple& tr = triples[trial % triples.size()];
    const auto& k = kernels[trial % kernels.size()];
    SetSizeTrial t = set_size_check(k.pipeline, g, tr.out, tr.f, tr.gg,
                                    1000 + static_cast<uint64_t>(trial));
    scsv.row({std::to_string(trial), k.name, CsvWriter::num(t.ratio),
              CsvWriter::num(t.m_inf)});
    maxratio = std::max(maxratio, t.ratio);
  }
  res.expect(maxratio <= 8.0, "sampling/set_size_max<=8 (got " +
                                  CsvWriter::num(maxratio) + ")");
  return res;
}

SuiteResult suite_formulation(const RunConfig& cfg) {
  SuiteResult res;
  Grid g(32, 2.0 * std::numbers::pi * 16.0);
  CsvWriter csv(out_path(cfg, "parseval_split.csv"));
  csv.header({"field_seed", "multiplier", "relerr"});
  std::vector<std::pair<std::string, SymbolFn>> cls;
  cls.emplace_back("one", [](const std::array<double, 3>&) { return cplx(1, 0); });
  for (int i = 0; i < 3; ++i)
    cls.emplace_back("riesz_full_" + std::to_string(i + 1),
                     [i](const std::array<double, 3>& xi) {
                       return cplx(riesz_full_sym(xi, i), 0);
                     });
  for (int j = 0; j < 2; ++j)
    cls.emplace_back("riesz_h_" + std::to_string(j + 1),
                     [j](const std::array<double, 3>& xi) {
                       return cplx(riesz_h_sym(xi, j), 0);
                     });
  cls.emplace_back("sqrt_1m_lambda2", [](const std::array<double, 3>& xi) {
    return cplx(sqrt_one_minus_lambda2_sym(xi), 0);
  });
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    SpectralVectorField u = random_divfree_acfield(g, seed, 5);
    for (const auto& [name, m] : cls) {
      ParsevalSplit ps = parseval_split_check(u, m);
      csv.row({std::to_string(seed), name, CsvWriter::num(ps.relerr)});
      res.expect(ps.relerr < 1e-12, "formulation/parseval " + name + " seed " +
                                        std::to_string(seed));
    }
  }
  // conversion round trips and energy identity
  for (uint64_t seed = 50; seed < 55; ++seed) {
    SpectralVectorField u = random_divfree_acfield(g, seed, 5);
    ScalarPair s = velocity_to_scalars(u);
    SpectralVectorField u2 = scalars_to_velocity(s);
    res.expect((u2 - u).l2_norm() / u.l2_norm() < 1e-12, "formulation/round_trip");
    DispersivePair d = to_dispersive(s);
    double eu = std::pow(u.l2_norm(), 2);
    double eU = 0.5 * (std::pow(d.Uplus.l2_norm(), 2) +
                       std::pow(d.Uminus.l2_norm(), 2));
    res.expect(std::abs(eu - eU) / eu < 1e-12, "formulation/energy_split");
  }
  // axisymmetric data passes the quarter-turn oracle
  ScalarPair s = make_axisymmetric_data(g, 99, {0.4, 0.15, 1.0});
  SpectralVectorField u = scalars_to_velocity(s);
  res.expect(axisymmetry_deviation(u) < 1e-10, "formulation/axisymmetry");
  return res;
}

SuiteResult suite_kernels(const RunConfig& cfg) {
  SuiteResult res;
  auto kernels = build_euler_kernels();
  res.expect(kernels.size() == 6, "kernels/count");
  // audit export
  {
    std::ofstream os(out_path(cfg, "kernel_terms.txt"), std::ios::binary);
    BaseMultipliers B = build_base_multipliers();
    SignedMultipliers S = build_signed_multipliers();
    os << "# m1\n" << describe(B.m1) << "# m2\n" << describe(B.m2);
    os << "# m3\n" << describe(B.m3) << "# m4\n" << describe(B.m4);
    os << "# m1pp\n" << describe(S.m1pp) << "# m1pm\n" << describe(S.m1pm);
    os << "# m2pp\n" << describe(S.m2pp) << "# m2pm\n" << describe(S.m2pm);
    for (const auto& k : kernels) os << "# " << k.name << "\n" << describe(k.pipeline);
  }
  // structure: Lambda slice, Riesz pairing
  SplitMix64 rng(404);
  for (int trial = 0; trial < 100; ++trial) {
    std::array<double, 3> xi{rng.uniform(-3, 3), rng.uniform(-3, 3), 0.0};
    std::array<double, 3> eta{rng.uniform(-3, 3), rng.uniform(-3, 3), 0.0};
    for (const auto& k : kernels)
      res.expect(std::abs(eval_pipeline(k.pipeline, xi, eta)) == 0.0,
                 "kernels/lambda_slice " + k.name);
  }
  // brute-force convolution oracle on 8^3
  Grid g8(8, 2 * std::numbers::pi);
  SpectralField f = random_hermitian(g8, 31, 2);
  SpectralField h = random_hermitian(g8, 32, 2);
  CsvWriter csv(out_path(cfg, "kernel_oracle.csv"));
  csv.header({"kernel", "relerr"});
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
    double relerr = std::sqrt(num / den);
    csv.row({k.name, CsvWriter::num(relerr)});
    res.expect(relerr < 1e-10, "kernels/convolution_oracle " + k.name);
  }
  // (a,c) <-> (U+,U-) consistency on random data
  Grid g(16, 2 * std::numbers::pi);
  for (uint64_t seed : {1ull, 2ull, 3ull}) {
    ScalarPair s;
    s.a = random_hermitian(g, seed, 4);
    s.c = random_hermitian(g, seed + 50, 4);
    s.a.zero_axis();
    s.c.zero_axis();
    DispersivePair want = to_dispersive(rhs_ac(s));
    DispersivePair got = rhs_dispersive(to_dispersive(s));
    double scale = want.Uplus.l2_norm() + want.Uminus.l2_norm();
    res.expect((got.Uplus - want.Uplus).l2_norm() / scale < 1e-10 &&
                   (got.Uminus - want.Uminus).l2_norm() / scale < 1e-10,
               "kernels/ac_dispersive_consistency");
  }
  return res;
}

SuiteResult suite_bands(const RunConfig& cfg) {
  SuiteResult res;
  (void)cfg;
  SplitMix64 rng(17);
  for (int t = 0; t < 1000; ++t) {
    double x = std::exp(rng.uniform(-6.0, 6.0)) * (rng.next_below(2) ? 1.0 : -1.0);
    double total = 0.0;
    for (int k = -12; k <= 12; ++k) total += phi_k(x, k);
    res.expect(std::abs(total - 1.0) < 1e-12, "bands/partition_of_unity");
    res.expect(std::abs(phibar(x) * phi(x) - phi(x)) < 1e-15, "bands/phibar");
  }
  Grid g(16, 2 * std::numbers::pi);
  SpectralField F = random_hermitian(g, 55, 6);
  BandIndex b{2, 0, -1};
  SpectralField pf = project_kpq(F, b);
  SpectralField pff = project_kpq_fat(pf, b);
  res.expect((pff - pf).l2_norm() <= 1e-12 * std::max(1.0, pf.l2_norm()),
             "bands/fattened_idempotence");
  BNormResult r = norm_B(pf);
  res.expect(r.value > 0.0, "bands/norm_B_positive");
  return res;
}

SuiteResult suite_equivalence(const RunConfig& cfg) {
  SuiteResult res;
  Grid g(32, 2.0 * std::numbers::pi * 16.0);
  CsvWriter csv(out_path(cfg, "equivalence.csv"));
  csv.header({"class", "seed", "residual"});
  for (uint64_t seed = 1; seed <= 12; ++seed) {
    ScalarPair s = make_collinear_data(g, seed, {0.25, 0.1, 0.05}, 5);
    double r = formulation_equivalence_check(scalars_to_velocity(s));
    csv.row({"collinear", std::to_string(seed), CsvWriter::num(r)});
    res.expect(r < 1e-10, "equivalence/collinear seed " + std::to_string(seed));
  }
  for (uint64_t seed = 1; seed <= 8; ++seed) {
    ScalarPair s = make_single_ring_swirl_data(g, seed, 25, 5, 0.05);
    double r = formulation_equivalence_check(scalars_to_velocity(s));
    csv.row({"ring_swirl", std::to_string(seed), CsvWriter::num(r)});
    res.expect(r < 1e-10, "equivalence/ring_swirl seed " + std::to_string(seed));
  }
  // informational: ring-axisymmetric data carries the lattice angular gap
  ScalarPair s = make_axisymmetric_data(g, 31, {0.25, 0.08, 0.05});
  for (SpectralField* f : {&s.a, &s.c})
    for (int i = 0; i < g.n; ++i)
      for (int j = 0; j < g.n; ++j)
        for (int k = 0; k < g.n; ++k)
          if (!(std::abs(g.fold(i)) <= 5 && std::abs(g.fold(j)) <= 5 &&
                std::abs(g.fold(k)) <= 5))
            f->at(i, j, k) = cplx(0);
  double rring = formulation_equivalence_check(scalars_to_velocity(s));
  csv.row({"ring_axisymmetric_informational", "31", CsvWriter::num(rring)});
  res.expect(std::isfinite(rring), "equivalence/ring_finite");
  return res;
}

int run_suites(const RunConfig& cfg, const std::vector<std::string>& names) {
  int failures = 0, checks = 0;
  for (const std::string& name : names) {
    SuiteResult r;
    if (name == "phase-identities") r = suite_phase_identities(cfg);
    else if (name == "sampling") r = suite_sampling(cfg);
    else if (name == "formulation") r = suite_formulation(cfg);
    else if (name == "kernels") r = suite_kernels(cfg);
    else if (name == "bands") r = suite_bands(cfg);
    else if (name == "equivalence") r = suite_equivalence(cfg);
    else {
      std::fprintf(stderr, "unknown suite: %s\n", name.c_str());
      return 2;
    }
    checks += r.checks;
    failures += static_cast<int>(r.failures.size());
    for (const std::string& f : r.failures)
      std::printf("FAIL %s\n", f.c_str());
    std::printf("suite %-18s %4d checks, %zu failures\n", name.c_str(), r.checks,
                r.failures.size());
  }
  std::printf("verify: %d checks, %d failures\n", checks, failures);
  return failures == 0 ? 0 : 1;
}

}  // namespace

int cmd_verify(const RunConfig& cfg) {
  echo_config(cfg);
  std::vector<std::string> names;
  if (cfg.suite == "all")
    names = {"bands", "formulation", "kernels", "phase-identities", "sampling",
             "equivalence"};
  else if (cfg.suite.empty())
    return 2;
  else
    names = {cfg.suite};
  return run_suites(cfg, names);
}

int cmd_decay(const RunConfig& cfg) {
  echo_config(cfg);
  QuadratureGrid2D qg(cfg.quad_n_rho, 1e-3, 2.5 * std::exp2(cfg.decay_band_k),
                      cfg.quad_n_lam);

  // sharpness preset: radial Gaussian at the origin
  {
    RadialProfile fr = gaussian_radial_profile(qg, std::exp2(cfg.decay_band_k), 0.4);
    auto f0 = profile_value_at_origin(fr);
    CsvWriter csv(out_path(cfg, "sharpness.csv"));
    csv.header({"t", "value_abs", "sin_t_over_t_abs", "relerr"});
    for (double t : {0.5, 1.0, 5.0, 20.0, 50.0}) {
      auto I = semigroup_point_eval(fr, 0.0, 0.0, t);
      double want = std::sin(t) / t;
      double rel = std::abs(I - want * f0) / std::abs(f0);
      csv.row({CsvWriter::num(t), CsvWriter::num(std::abs(I)),
               CsvWriter::num(std::abs(want)), CsvWriter::num(rel)});
      if (rel >= 1e-6) {
        std::printf("FAIL decay/sharpness t=%g relerr=%g\n", t, rel);
        return 1;
      }
    }
  }

  std::vector<double> times = cfg.decay_times;
  if (times.empty())
    for (int a = 0; a < 8; ++a) times.push_back(10.0 * std::pow(10.0, a / 7.0));
  if (times.empty()) return 2;
  BandIndex b{cfg.decay_band_k, cfg.decay_band_p, cfg.decay_band_q};
  RadialProfile f = band_profile(qg, b, cfg.sim.seed);
  DecayCurve curve = decay_study(f, b, times);
  if (!curve.budget_ok) {
    std::fprintf(stderr,
                 "decay: oscillation budget violated; raise quad_n_rho/quad_n_lam "
                 "(currently %d/%d)\n",
                 cfg.quad_n_rho, cfg.quad_n_lam);
    return 1;
  }
  CsvWriter csv(out_path(cfg, "decay.csv"));
  csv.header({"t", "sup", "empirical_constant"});
  for (const auto& pt : curve.points)
    csv.row({CsvWriter::num(pt.t), CsvWriter::num(pt.sup),
             CsvWriter::num(pt.empirical_constant)});
  csv.row({"slope", CsvWriter::num(curve.slope), CsvWriter::num(curve.d_norm_value)});
  std::printf("decay: slope %.4f, d-norm %.6g\n", curve.slope, curve.d_norm_value);
  return 0;
}

int cmd_simulate(const RunConfig& cfg) {
  echo_config(cfg);
  SimResult res = run_simulation(cfg.sim);
  CsvWriter csv(out_path(cfg, "diagnostics.csv"));
  csv.header({"t", "energy", "h_s", "a0", "a1", "axi_dev", "bnorm_plus",
              "bnorm_minus", "max_hat"});
  for (const auto& r : res.rows)
    csv.row({CsvWriter::num(r.t), CsvWriter::num(r.energy), CsvWriter::num(r.h_s),
             CsvWriter::num(r.a0), CsvWriter::num(r.a1), CsvWriter::num(r.axi_dev),
             CsvWriter::num(r.bnorm_plus), CsvWriter::num(r.bnorm_minus),
             CsvWriter::num(r.max_hat)});
  if (!res.healthy) {
    std::printf("simulate: run unhealthy, partial series written\n");
    return 1;
  }
  // final snapshot
  SpectralVectorField u = res.final_state.velocity();
  Snapshot snap;
  snap.grid = u.grid();
  snap.time = res.final_state.time;
  snap.fields.emplace_back("u1", u.comp[0]);
  snap.fields.emplace_back("u2", u.comp[1]);
  snap.fields.emplace_back("u3", u.comp[2]);
  write_snapshot(out_path(cfg, "final.rweu"), snap);
  return 0;
}

int cmd_lifespan(const RunConfig& cfg) {
  echo_config(cfg);
  auto rows = lifespan_experiment(cfg.sim, cfg.eps_list, cfg.seeds,
                                  cfg.threshold_factor);
  CsvWriter csv(out_path(cfg, "lifespan.csv"));
  csv.header({"eps", "rotation", "seed", "T_star", "censored"});
  for (const auto& r : rows)
    csv.row({CsvWriter::num(r.eps), r.rotation ? "on" : "off",
             std::to_string(r.seed), CsvWriter::num(r.t_star),
             r.censored ? "1" : "0"});
  // summary: majority vote over uncensored pairs
  int wins = 0, pairs = 0;
  for (double eps : cfg.eps_list)
    for (uint64_t seed : cfg.seeds) {
      const LifespanRow *on = nullptr, *off = nullptr;
      for (const auto& r : rows)
        if (r.eps == eps && r.seed == seed) (r.rotation ? on : off) = &r;
      if (!on || !off || on->censored || off->censored) continue;
      ++pairs;
      wins += (on->t_star >= off->t_star);
    }
  std::printf("lifespan: rotation-on lifespan >= off in %d of %d uncensored pairs\n",
              wins, pairs);
  // monotonicity report: larger eps should not lengthen the rotation-off
  // proxy lifespan (majority over seeds, uncensored consecutive pairs)
  int mono = 0, mono_pairs = 0;
  for (std::size_t e = 0; e + 1 < cfg.eps_list.size(); ++e)
    for (uint64_t seed : cfg.seeds) {
      const LifespanRow *lo = nullptr, *hi = nullptr;
      for (const auto& r : rows) {
        if (r.rotation || r.seed != seed) continue;
        if (r.eps == cfg.eps_list[e]) lo = &r;
        if (r.eps == cfg.eps_list[e + 1]) hi = &r;
      }
      if (!lo || !hi || lo->censored || hi->censored) continue;
      ++mono_pairs;
      mono += (hi->t_star <= lo->t_star);
    }
  if (mono_pairs > 0)
    std::printf("lifespan: larger eps shortens rotation-off T* in %d of %d pairs\n",
                mono, mono_pairs);
  return 0;
}

namespace {

// Approximate continuum profile from grid data: ring-average the coefficients
// over (|xi_h|^2, xi3) classes and interpolate onto a quadrature grid with a
// Gaussian kernel at the grid's spectral resolution. Good enough for a
// labeled, approximate D norm of a snapshot.
RadialProfile profile_from_grid(const SpectralField& F, double* ring_residual) {
  const Grid& g = F.grid;
  struct RingVal {
    double rh, x3;
    cplx v;
  };
  std::map<std::pair<int, int>, std::pair<cplx, int>> rings;
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) {
      int mi = g.fold(i), mj = g.fold(j);
      int rh2 = mi * mi + mj * mj;
      if (rh2 == 0) continue;
      for (int k = 0; k < g.n; ++k) {
        const cplx& v = F.coeffs[g.index(i, j, k)];
        if (v == cplx(0)) continue;
        auto& slot = rings[{rh2, g.fold(k)}];
        slot.first += v;
        slot.second += 1;
      }
    }
  // how well the field is represented by ring-constant values
  if (ring_residual) {
    double num = 0.0, den = 0.0;
    for (int i = 0; i < g.n; ++i)
      for (int j = 0; j < g.n; ++j) {
        int mi = g.fold(i), mj = g.fold(j);
        int rh2 = mi * mi + mj * mj;
        if (rh2 == 0) continue;
        for (int k = 0; k < g.n; ++k) {
          const cplx& v = F.coeffs[g.index(i, j, k)];
          if (v == cplx(0)) continue;
          auto& slot = rings[{rh2, g.fold(k)}];
          cplx mean = slot.first / static_cast<double>(slot.second);
          num += std::norm(v - mean);
          den += std::norm(v);
        }
      }
    *ring_residual = den > 0.0 ? std::sqrt(num / den) : 0.0;
  }
  std::vector<RingVal> pts;
  pts.reserve(rings.size());
  const double dk = g.dk();
  for (const auto& [key, acc] : rings)
    pts.push_back({std::sqrt(static_cast<double>(key.first)) * dk,
                   key.second * dk, acc.first / static_cast<double>(acc.second)});
  double rmax = std::sqrt(3.0) * g.max_wavenumber();
  QuadratureGrid2D qg(128, 1e-3 * rmax, rmax, 128);
  RadialProfile f(qg);
  const double bw = 1.2 * dk;  // kernel bandwidth at the spectral resolution
  for (int i = 0; i < qg.nr(); ++i)
    for (int j = 0; j < qg.nl(); ++j) {
      double rho = qg.rho.nodes[i], lam = qg.lam.nodes[j];
      double rh = rho * std::sqrt(std::max(0.0, 1 - lam * lam)), x3 = rho * lam;
      cplx acc(0, 0);
      double wsum = 0.0;
      for (const RingVal& p : pts) {
        double d2 = std::pow(p.rh - rh, 2) + std::pow(p.x3 - x3, 2);
        if (d2 > 9.0 * bw * bw) continue;
        double w = std::exp(-0.5 * d2 / (bw * bw));
        acc += w * p.v;
        wsum += w;
      }
      if (wsum > 1e-12) f.values[qg.index(i, j)] = acc / wsum;
    }
  return f;
}

}  // namespace

int cmd_norms(const RunConfig& cfg, const std::string& snapshot_path) {
  Snapshot snap = read_snapshot(snapshot_path);
  std::printf("snapshot: n=%d L=%.6g t=%.6g fields=%zu\n", snap.grid.n,
              snap.grid.box_length, snap.time, snap.fields.size());
  for (const auto& [name, field] : snap.fields) {
    BNormResult b = norm_B(field);
    std::string dtxt = "n/a";
    try {
      double ring_res = 0.0;
      RadialProfile prof = profile_from_grid(field, &ring_res);
      if (ring_res > 0.1)
        dtxt = "n/a (not an axisymmetric scalar)";
      else if (prof.max_abs() > 0.0)
        dtxt = CsvWriter::num(d_norm(prof).value) + " (ring-interp approx, ring residual " +
               CsvWriter::num(ring_res) + ")";
    } catch (const std::exception&) {
      dtxt = "n/a (under-resolved)";
    }
    std::printf(
        "%-16s  B %.8e (band k=%d p=%d q=%d)  H^%.3g %.8e  H^-1 %.8e  D %s\n",
        name.c_str(), b.value, b.argmax.k, b.argmax.p, b.argmax.q,
        cfg.sim.sobolev_s, norm_sobolev(field, cfg.sim.sobolev_s),
        norm_Hneg1(field), dtxt.c_str());
  }
  return 0;
}

}  // namespace rotwave
