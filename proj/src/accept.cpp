#include "qbench/accept.hpp"

#include <Eigen/Eigenvalues>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>

#include "qbench/clifford.hpp"
#include "qbench/ctrlphys.hpp"
#include "qbench/ghz.hpp"
#include "qbench/rbench.hpp"
#include "qbench/tomo.hpp"
#include "qbench/version.hpp"

namespace qbench {

namespace {

std::string fmt(double v, int prec = 6) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
  return buf;
}

struct Ctx {
  int threads;
  std::uint64_t seed;
};

// ---- 1: group exactness -----------------------------------------------

CriterionResult crit_groups(const Ctx&) {
  CriterionResult r{1, "group exactness (sizes, classes, mean gate counts)"};
  CliffordGroup c1 = build_c1();
  CliffordGroup c2 = build_c2();
  bool ok = c1.size() == 24 && c2.size() == 11520;
  ok = ok && c2.class_sizes[0] == 576 && c2.class_sizes[1] == 5184 &&
       c2.class_sizes[2] == 5184 && c2.class_sizes[3] == 576;
  // exact rational counts: 45/24 and (17280 cz, 95040 sq)/11520
  ok = ok && c1.total_sq_gates() == 45;
  ok = ok && c2.total_cz_gates() == 17280 && c2.total_sq_gates() == 95040;
  r.pass = ok;
  r.detail = "|C1|=" + std::to_string(c1.size()) + " |C2|=" + std::to_string(c2.size()) +
             " classes=" + std::to_string(c2.class_sizes[0]) + "/" +
             std::to_string(c2.class_sizes[1]) + "/" + std::to_string(c2.class_sizes[2]) +
             "/" + std::to_string(c2.class_sizes[3]) +
             " mean_sq(C1)=" + fmt(c1.total_sq_gates() / 24.0) +
             " mean(C2)=" + fmt(c2.total_cz_gates() / 11520.0) + "cz+" +
             fmt(c2.total_sq_gates() / 11520.0) + "sq";
  return r;
}

// ---- 2: 2-design sums --------------------------------------------------

CriterionResult crit_two_design(const Ctx& ctx) {
  CriterionResult r{2, "2-design fourth-moment sums (C1 full, C2 full)"};
  CliffordGroup c1 = build_c1();
  double s1 = two_design_sum(c1, 1);
  CliffordGroup c2 = build_c2();
  double s2 = two_design_sum(c2, ctx.threads);
  r.pass = std::abs(s1 - 2.0) <= 1e-9 && std::abs(s2 - 2.0) <= 1e-6;
  r.detail = "C1=" + fmt(s1, 12) + " (tol 1e-9), C2=" + fmt(s2, 12) + " (tol 1e-6)";
  return r;
}

// ---- 3: single-qubit depolarizing oracle -------------------------------

CriterionResult crit_rb_oracle(const Ctx& ctx) {
  CriterionResult r{3, "RB depolarizing oracle (p_dep=0.002 -> p=0.998, r=0.001)"};
  CliffordGroup c1 = build_c1();
  RBConfig cfg;
  cfg.n_qubits = 1;
  cfg.m_values = {1, 3, 6, 12, 25, 50, 100, 200, 350, 500, 700};
  cfg.k = 50;
  cfg.noise.depol_per_clifford = 0.002;
  cfg.seed = ctx.seed;
  RBCurve curve = run_reference(cfg, c1, ctx.threads);
  DecayFit fit = fit_decay(curve, {false, 100, ctx.seed});
  double err = clifford_error(fit.p, 1);
  r.pass = std::abs(fit.p - 0.998) <= 5e-4 && std::abs(err - 0.001) <= 2.5e-4;
  r.detail = "fitted p=" + fmt(fit.p, 8) + " (target 0.998 +- 5e-4), r=" + fmt(err, 6) +
             " (target 0.001 +- 2.5e-4)";
  return r;
}

// ---- 4: interleaved CZ extraction ---------------------------------------

CriterionResult crit_interleaved(const Ctx& ctx) {
  CriterionResult r{4, "interleaved RB recovers injected CZ error within 10%"};
  CliffordGroup c2 = build_c2();
  const double injected = 6e-3;
  RBConfig cfg;
  cfg.n_qubits = 2;
  cfg.qubits = {0, 1};
  cfg.m_values = {2, 5, 10, 15, 22, 30, 40, 50, 60};
  cfg.k = 30;
  cfg.noise.gate_errors.cz[{0, 1}] = injected;
  cfg.seed = ctx.seed;
  RBCurve ref = run_reference(cfg, c2, ctx.threads);
  RBCurve ilv = run_interleaved(cfg, c2, cz(0, 1), ctx.threads);
  DecayFit fr = fit_decay(ref, {false, 100, ctx.seed});
  DecayFit fi = fit_decay(ilv, {false, 100, ctx.seed});
  double r_cz = interleaved_error(fi.p, fr.p, 2);
  double rel = std::abs(r_cz - injected) / injected;
  r.pass = rel <= 0.10;
  r.detail = "r_cz=" + fmt(r_cz, 6) + " vs injected " + fmt(injected, 6) +
             " (rel err " + fmt(rel, 3) + ", tol 0.10); p_ref=" + fmt(fr.p, 8) +
             " p_int=" + fmt(fi.p, 8);
  return r;
}

// ---- 5: error-budget algebra --------------------------------------------

CriterionResult crit_budget_algebra(const Ctx&) {
  CriterionResult r{5, "Clifford error algebra anchors"};
  CliffordErrorModel m = predict_clifford_errors(0.001, 0.006);
  bool ok = std::abs(m.r_c2 - 0.01725) < 1e-12 && std::abs(m.r_c2_cz - 0.02325) < 1e-12;
  // reference/interleaved chain to the CZ fidelity
  double p_ref = 1.0 - 0.0189 * 4.0 / 3.0;
  double p_int = 1.0 - 0.0244 * 4.0 / 3.0;
  double f_cz = 1.0 - interleaved_error(p_int, p_ref, 2);
  ok = ok && std::abs(f_cz - 0.9944) <= 5e-5;
  r.pass = ok;
  r.detail = "r_C2=" + fmt(m.r_c2, 6) + " (exp 0.01725), r_C2+CZ=" + fmt(m.r_c2_cz, 6) +
             " (exp 0.02325), chained F_cz=" + fmt(f_cz, 7) + " (0.9944 +- 5e-5)";
  return r;
}

// ---- 6: budget shares ----------------------------------------------------

CriterionResult crit_budget_shares(const Ctx&) {
  CriterionResult r{6, "error budget shares 24/31/24/21%"};
  BudgetTable t = budget_assemble(0.0017, 0.0022, 0.0017, 0.0015);
  const double want[4] = {24, 31, 24, 21};
  bool ok = true;
  std::string s;
  for (int i = 0; i < 4; ++i) {
    ok = ok && std::abs(t.rows[i].share_pct - want[i]) <= 1.0;
    s += (i ? "/" : "") + fmt(t.rows[i].share_pct, 4);
  }
  r.pass = ok;
  r.detail = "shares " + s + "% vs 24/31/24/21% (tol 1 point)";
  return r;
}

// ---- 7: CZ trajectory ----------------------------------------------------

CriterionResult crit_cz_trajectory(const Ctx&) {
  CriterionResult r{7, "CZ trajectory: Rabi oracle, tuned phase/leakage, adiabatic sweep"};
  // on-resonance square pulse vs the two-level closed form
  CZTrajectory sqr;
  sqr.shape = RampShape::Square;
  sqr.hold_detuning_mhz = 0;
  sqr.idle_detuning_mhz = 0;
  sqr.g_mhz = 30;
  sqr.eta_mhz = -214;
  sqr.duration_ns = 5.0;
  CZEvolution ev = evolve_cz(sqr, 0.005);
  double expect = std::pow(std::sin(std::sqrt(2.0) * 2.0 * kPi * sqr.g_mhz * 1e-3 *
                                    sqr.duration_ns / 2.0), 2);
  bool ok = std::abs(ev.leakage - expect) <= 1e-6;
  std::string det = "rabi leak=" + fmt(ev.leakage, 9) + " vs " + fmt(expect, 9);

  // tuned 43 ns gate
  CZTrajectory tuned = tune_cz(RampShape::RaisedCosine, 30.0, -214.0, 586.0, 43.0);
  CZEvolution tev = evolve_cz(tuned, 0.01);
  double gap = std::abs(wrap_angle(tev.phi_cz - kPi));
  ok = ok && gap <= 1e-3 && tev.leakage < 5e-3;
  det += "; tuned |phi-pi|=" + fmt(gap, 3) + " leak=" + fmt(tev.leakage, 4);

  // leakage decreases monotonically as the gate slows down
  double prev = 1e9;
  bool mono = true;
  std::string leaks;
  for (double scale : {1.0, std::sqrt(2.0), 2.0, 2.0 * std::sqrt(2.0), 4.0}) {
    CZTrajectory t = tune_cz(RampShape::RaisedCosine, 30.0, -214.0, 586.0, 43.0 * scale);
    double leak = evolve_cz(t, 0.01).leakage;
    mono = mono && leak < prev;
    prev = leak;
    leaks += (leaks.empty() ? "" : ",") + fmt(leak, 3);
  }
  ok = ok && mono;
  r.pass = ok;
  r.detail = det + "; sweep leaks " + leaks + (mono ? " (monotone)" : " (NOT monotone)");
  return r;
}

// ---- 8: Ramsey error filter ----------------------------------------------

CriterionResult crit_error_filter(const Ctx&) {
  CriterionResult r{8, "error filter fringe period and dP/4 estimator"};
  CZTrajectory t = tune_cz(RampShape::RaisedCosine, 30.0, -200.0, 600.0, 43.0);
  RamseyFilterResult f = ramsey_error_filter(t, 8.0, 0.02);
  double period_expect = 1.0 / 0.6;  // ns, idle splitting 600 MHz
  double rel = std::abs(f.period_ns - period_expect) / period_expect;
  bool ok = rel <= 0.05;
  const double inject = 4e-3;
  RamseyFilterResult inj = ramsey_error_filter_injected(inject, 600.0, 8.0, 0.02);
  double rel2 = std::abs(inj.leak_estimate - inject) / inject;
  ok = ok && rel2 <= 0.20;
  r.pass = ok;
  r.detail = "period=" + fmt(f.period_ns, 5) + " ns vs " + fmt(period_expect, 5) +
             " (rel " + fmt(rel, 3) + ", tol 0.05); injected " + fmt(inject, 4) +
             " -> dP/4=" + fmt(inj.leak_estimate, 4) + " (rel " + fmt(rel2, 3) +
             ", tol 0.20)";
  return r;
}

// ---- 9: Z-line response ---------------------------------------------------

CriterionResult crit_z_response(const Ctx&) {
  CriterionResult r{9, "Z response drift anchor and predistortion round trip"};
  // constant 30 kHz residual ripple over 150 ns
  StepResponse flat{6e-5, 0.0, 1e9, 5.0};
  double drift = step_phase_response(flat, 0.5, {150.0}).back();
  bool ok = std::abs(drift - 0.03) / 0.03 <= 0.10;
  std::string det = "drift=" + fmt(drift, 4) + " rad vs 0.03 (tol 10%)";

  StepResponse sr{0.02, -0.008, 100.0, 5.0};
  const double dt = 0.5;
  std::vector<double> step(400, 0.0);
  for (std::size_t i = 40; i < step.size(); ++i) step[i] = 1.0;
  std::vector<double> shaped = filter_waveform(predistort(step, sr, dt), sr, dt);
  double worst = 0;
  for (std::size_t i = 0; i < step.size(); ++i)
    worst = std::max(worst, std::abs(shaped[i] - step[i]));
  ok = ok && worst <= 1e-4;
  double ripple = 0;
  std::vector<double> raw = filter_waveform(step, sr, dt);
  for (std::size_t i = 40; i < step.size(); ++i)
    ripple = std::max(ripple, std::abs(raw[i] - 1.0));
  r.pass = ok;
  r.detail = det + "; corrected step flat to " + fmt(worst, 3) +
             " (tol 1e-4; uncorrected ripple " + fmt(ripple, 3) + ")";
  return r;
}

// ---- 10: tomography round trip --------------------------------------------

CriterionResult crit_tomo_roundtrip(const Ctx& ctx) {
  CriterionResult r{10, "tomography round trip and noiseless GHZ pipeline"};
  bool ok = true;
  double worst_td = 0;
  for (int n = 1; n <= 3; ++n) {
    SplitMix64 rng = substream(ctx.seed, 0x7d0, n);
    Index d = Index(1) << n;
    ComplexMatrix l(d, d);
    for (Index i = 0; i < d; ++i)
      for (Index j = 0; j < d; ++j)
        l(i, j) = (j <= i) ? Complex(rng.gaussian(), j < i ? rng.gaussian() : 0.0)
                           : Complex(0, 0);
    ComplexMatrix sig = l * l.adjoint();
    DensityMatrix rho{sig / sig.trace().real()};
    MLEResult mle = mle_reconstruct(simulate_tomo(rho));
    worst_td = std::max(worst_td, trace_distance(rho, mle.rho));
  }
  ok = worst_td <= 1e-4;
  std::string det = "worst trace distance (N<=3) " + fmt(worst_td, 3) + " (tol 1e-4)";

  NoiseParams off;
  double worst_fid = 1.0;
  for (int n = 2; n <= 5; ++n) {
    GHZExperiment ex = run_ghz_experiment(n, off, default_durations(), true, 0, 1, ctx.seed);
    worst_fid = std::min(worst_fid, ex.tomo.fidelity);
  }
  ok = ok && worst_fid >= 0.9999;
  r.pass = ok;
  r.detail = det + "; noiseless GHZ fidelity >= " + fmt(worst_fid, 7) + " (tol 0.9999)";
  return r;
}

// ---- 11: GHZ qualitative reproduction --------------------------------------

CriterionResult crit_ghz_profile(const Ctx& ctx) {
  CriterionResult r{11, "calibrated-profile GHZ fidelities and echo advantage"};
  NoiseParams profile = calibrated_ghz_noise();
  GateDurations dur = default_durations();
  std::vector<double> fids;
  bool decreasing = true;
  for (int n = 2; n <= 5; ++n) {
    GHZExperiment ex = run_ghz_experiment(n, profile, dur, true, 0, 1, ctx.seed);
    if (!fids.empty() && ex.tomo.fidelity >= fids.back()) decreasing = false;
    fids.push_back(ex.tomo.fidelity);
  }
  bool in_band = fids.back() >= 0.72 && fids.back() <= 0.90;

  // quasi-static-only dephasing: echoes must help in >= 80% of seeded runs
  NoiseParams qs;
  qs.sigma_qs_mhz = {0.3, 0.3, 0.3, 0.3, 0.3};
  Circuit with = build_ghz(5, true), without = build_ghz(5, false);
  PureState target = PureState::ghz(5);
  int wins = 0;
  const int n_seeds = 20;
  for (int s = 0; s < n_seeds; ++s) {
    std::uint64_t sd = ctx.seed + 1000 + s;
    double fe = fidelity_pure(target, simulate_circuit(with, qs, dur, 24, sd));
    double fn = fidelity_pure(target, simulate_circuit(without, qs, dur, 24, sd));
    if (fe >= fn) ++wins;
  }
  bool echo_ok = wins >= 16;
  r.pass = decreasing && in_band && echo_ok;
  std::string fid_s;
  for (double f : fids) fid_s += (fid_s.empty() ? "" : ",") + fmt(f, 4);
  r.detail = "fidelities N=2..5: " + fid_s + (decreasing ? " (decreasing)" : " (NOT decreasing)") +
             "; F(5) in [0.72,0.90]: " + (in_band ? "yes" : "NO") + "; echo wins " +
             std::to_string(wins) + "/20 (need >= 16)";
  return r;
}

// ---- 12: ZZ formula vs exact diagonalization -------------------------------

double zz_exact_9dim(double fa, double fb, double eta_a, double eta_b, double g) {
  // two transmons, three levels each; coupling g(a b^dag + a^dag b)
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(9, 9);
  auto idx = [](int na, int nb) { return na * 3 + nb; };
  for (int na = 0; na < 3; ++na)
    for (int nb = 0; nb < 3; ++nb) {
      double e = fa * na + 0.5 * eta_a * na * (na - 1) + fb * nb + 0.5 * eta_b * nb * (nb - 1);
      h(idx(na, nb), idx(na, nb)) = e;
    }
  auto lower = [](int n) { return std::sqrt(double(n)); };
  for (int na = 1; na < 3; ++na)
    for (int nb = 0; nb < 2; ++nb) {
      double v = g * lower(na) * lower(nb + 1);
      h(idx(na - 1, nb + 1), idx(na, nb)) += v;
      h(idx(na, nb), idx(na - 1, nb + 1)) += v;
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  // dressed energies by maximum overlap with the bare states
  auto dressed = [&](int na, int nb) {
    int bare = idx(na, nb);
    int best = 0;
    double best_ov = -1;
    for (int k = 0; k < 9; ++k) {
      double ov = std::abs(es.eigenvectors()(bare, k));
      if (ov > best_ov) {
        best_ov = ov;
        best = k;
      }
    }
    return es.eigenvalues()(best);
  };
  return dressed(0, 1) + dressed(1, 0) - dressed(0, 0) - dressed(1, 1);
}

CriterionResult crit_zz(const Ctx&) {
  CriterionResult r{12, "ZZ rate formula vs 9-dim diagonalization within 10%"};
  RunConfig cfg = default_config();
  bool ok = true;
  double worst = 0;
  for (int q = 0; q < 4; ++q) {
    double fa = cfg.device.f10_mhz[q], fb = cfg.device.f10_mhz[q + 1];
    double ea = cfg.device.nonlinearity_mhz[q], eb = cfg.device.nonlinearity_mhz[q + 1];
    double g = cfg.device.nn_coupling_mhz[q];
    double formula = zz_rate({g, ea, eb, fa - fb});
    double exact = zz_exact_9dim(fa, fb, ea, eb, g);
    double rel = std::abs(formula - exact) / std::abs(exact);
    worst = std::max(worst, rel);
    ok = ok && rel <= 0.10;
  }
  r.pass = ok;
  r.detail = "worst relative gap over the device pair grid " + fmt(worst, 3) + " (tol 0.10)";
  return r;
}

// ---- 13: determinism --------------------------------------------------------

CriterionResult crit_determinism(const Ctx& ctx) {
  CriterionResult r{13, "byte-identical reruns across 1 and 8 threads"};
  std::vector<int> rest;
  for (int i = 1; i <= 12; ++i) rest.push_back(i);
  RunConfig cfg = default_config();
  auto dump = [&](int threads) {
    return acceptance_json(run_acceptance(threads, ctx.seed, rest), cfg, ctx.seed).dump(2);
  };
  std::string a = dump(1);
  std::string b = dump(1);
  std::string c = dump(8);
  r.pass = (a == b) && (a == c);
  r.detail = std::string("rerun@1thread ") + (a == b ? "identical" : "DIFFERS") +
             ", 8threads " + (a == c ? "identical" : "DIFFERS") + " (" +
             std::to_string(a.size()) + " bytes)";
  return r;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(int threads, std::uint64_t seed,
                                            const std::vector<int>& only) {
  Ctx ctx{threads, seed};
  using Fn = std::function<CriterionResult(const Ctx&)>;
  const std::vector<Fn> table = {
      crit_groups,       crit_two_design,   crit_rb_oracle,  crit_interleaved,
      crit_budget_algebra, crit_budget_shares, crit_cz_trajectory, crit_error_filter,
      crit_z_response,   crit_tomo_roundtrip, crit_ghz_profile, crit_zz,
      crit_determinism};
  std::vector<CriterionResult> out;
  for (int id = 1; id <= int(table.size()); ++id) {
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    auto t0 = std::chrono::steady_clock::now();
    CriterionResult r = table[id - 1](ctx);
    r.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.push_back(std::move(r));
  }
  return out;
}

Json acceptance_json(const std::vector<CriterionResult>& results, const RunConfig& cfg,
                     std::uint64_t seed) {
  Json j;
  j["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  j["seed"] = seed;
  j["config"] = config_to_json(cfg);
  Json arr = Json::array();
  for (const auto& r : results)
    arr.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
  j["criteria"] = arr;
  return j;
}

}  // namespace qbench
