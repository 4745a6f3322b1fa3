#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "qbench/accept.hpp"
#include "qbench/clifford.hpp"
#include "qbench/config.hpp"
#include "qbench/ctrlphys.hpp"
#include "qbench/ghz.hpp"
#include "qbench/rbench.hpp"
#include "qbench/tomo.hpp"
#include "qbench/version.hpp"

namespace {

using namespace qbench;

struct Global {
  std::string config_path;
  std::string out_path;
  std::string format = "json";
  std::uint64_t seed = 0;  // 0 = take the config's seed
  int threads = 1;
};

RunConfig load_or_default(const Global& g) {
  RunConfig cfg = g.config_path.empty() ? default_config() : load_config(g.config_path);
  if (g.seed != 0) cfg.seed = g.seed;
  return cfg;
}

void emit(const Global& g, const std::string& text) {
  if (g.out_path.empty()) {
    std::cout << text << "\n";
  } else {
    std::ofstream out(g.out_path);
    if (!out) throw std::runtime_error("cannot write '" + g.out_path + "'");
    out << text << "\n";
  }
}

Json base_output(const RunConfig& cfg) {
  Json j;
  j["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  j["config"] = config_to_json(cfg);
  return j;
}

template <typename T>
T jget(const Json& j, const char* key, T fallback) {
  if (j.is_object() && j.contains(key)) return j.at(key).get<T>();
  return fallback;
}

Json curve_json(const RBCurve& c) {
  return {{"m", c.m_values}, {"mean", c.mean}, {"stddev", c.stddev}};
}

Json fit_json(const DecayFit& f) {
  return {{"a", f.a},           {"b", f.b},
          {"p", f.p},           {"p_err", f.p_err},
          {"residual_norm", f.residual_norm}, {"converged", f.converged},
          {"degenerate", f.degenerate}};
}

// ---- subcommands ----------------------------------------------------------

int cmd_cliffords_verify(const Global& g) {
  RunConfig cfg = load_or_default(g);
  CliffordGroup c1 = build_c1();
  CliffordGroup c2 = build_c2();
  Json j = base_output(cfg);
  j["c1_size"] = c1.size();
  j["c2_size"] = c2.size();
  j["c2_class_sizes"] = c2.class_sizes;
  j["c1_mean_gates"] = double(c1.total_sq_gates()) / double(c1.size());
  j["c2_mean_cz"] = double(c2.total_cz_gates()) / double(c2.size());
  j["c2_mean_sq"] = double(c2.total_sq_gates()) / double(c2.size());
  j["two_design_c1"] = two_design_sum(c1, 1);
  j["two_design_c2"] = two_design_sum(c2, g.threads);
  emit(g, j.dump(2));
  return 0;
}

GateLabel parse_interleaved(const std::string& name, int n_qubits) {
  GateKind k = gate_kind_from_name(name);
  if (k == GateKind::CZ) {
    if (n_qubits != 2) throw std::runtime_error("interleaved CZ needs a two-qubit run");
    return cz(0, 1);
  }
  return sq(k, 0);
}

int cmd_rb_run(const Global& g, const std::string& interleaved_flag) {
  RunConfig cfg = load_or_default(g);
  Json rb = cfg.experiment.contains("rb") ? cfg.experiment["rb"] : Json::object();
  RBConfig rc;
  rc.n_qubits = jget(rb, "n_qubits", 1);
  rc.qubits = jget(rb, "qubits", std::vector<int>{});
  rc.m_values = jget(rb, "m_values",
                     rc.n_qubits == 1
                         ? std::vector<int>{1, 3, 6, 12, 25, 50, 100, 200, 350, 500, 700}
                         : std::vector<int>{2, 4, 7, 10, 15, 22, 30, 40, 55, 70});
  rc.k = jget(rb, "k", 40);
  rc.shots = jget(rb, "shots", 0L);
  rc.qs_draws = jget(rb, "qs_draws", 16);
  rc.noise = cfg.resolved_noise();
  rc.durations = cfg.device.durations;
  rc.seed = cfg.seed;

  std::string ilv = interleaved_flag.empty() ? jget<std::string>(rb, "interleaved", "none")
                                             : interleaved_flag;
  FitOptions fo{jget(rb, "weighted_fit", false), jget(rb, "bootstrap", 200), cfg.seed};

  CliffordGroup group = rc.n_qubits == 1 ? build_c1() : build_c2();
  RBCurve ref = run_reference(rc, group, g.threads);
  DecayFit fr = fit_decay(ref, fo);

  Json j = base_output(cfg);
  j["reference"] = {{"curve", curve_json(ref)}, {"fit", fit_json(fr)}};
  j["r_ref"] = clifford_error(fr.p, rc.n_qubits);
  if (rc.n_qubits == 1)
    j["avg_gate_fidelity"] = avg_gate_fidelity_from_c1(clifford_error(fr.p, 1));

  int exit_code = fr.converged ? 0 : 2;
  if (ilv != "none" && !ilv.empty()) {
    GateLabel gate = parse_interleaved(ilv, rc.n_qubits);
    RBCurve icurve = run_interleaved(rc, group, gate, g.threads);
    DecayFit fi = fit_decay(icurve, fo);
    j["interleaved"] = {{"gate", ilv}, {"curve", curve_json(icurve)}, {"fit", fit_json(fi)}};
    j["r_gate"] = interleaved_error(fi.p, fr.p, rc.n_qubits);
    j["gate_fidelity"] = 1.0 - j["r_gate"].get<double>();
    if (!fi.converged) exit_code = 2;
  }
  emit(g, j.dump(2));
  return exit_code;
}

int cmd_rb_fit(const Global& g, const std::string& in_path, bool weighted) {
  RunConfig cfg = load_or_default(g);
  std::ifstream in(in_path);
  if (!in) throw std::runtime_error("cannot open '" + in_path + "'");
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty CSV");
  // header row required: m,fidelity[,std]
  if (line.find("m") == std::string::npos)
    throw std::runtime_error("CSV header row required (m,fidelity[,std])");
  RBCurve curve;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (row.size() < 2) throw std::runtime_error("CSV row needs at least m,fidelity");
    curve.m_values.push_back(int(row[0]));
    curve.mean.push_back(row[1]);
    curve.stddev.push_back(row.size() > 2 ? row[2] : 0.0);
  }
  DecayFit fit = fit_decay(curve, {weighted, 200, cfg.seed});
  Json j = base_output(cfg);
  j["fit"] = fit_json(fit);
  j["n_points"] = curve.m_values.size();
  emit(g, j.dump(2));
  return fit.converged ? 0 : 2;
}

int cmd_budget(const Global& g, double rsq, double rcz, std::vector<double> components) {
  RunConfig cfg = load_or_default(g);
  Json j = base_output(cfg);
  CliffordErrorModel m = predict_clifford_errors(rsq, rcz);
  j["inputs"] = {{"r_sq", rsq}, {"r_cz", rcz}};
  j["predicted"] = {{"r_c1", m.r_c1},       {"r_c1xc1", m.r_c1c1}, {"r_cnot", m.r_cnot},
                    {"r_iswap", m.r_iswap}, {"r_swap", m.r_swap},  {"r_c2", m.r_c2},
                    {"r_c2_cz", m.r_c2_cz}};
  if (components.size() == 4) {
    BudgetTable t = budget_assemble(components[0], components[1], components[2], components[3]);
    Json rows = Json::array();
    for (const auto& row : t.rows)
      rows.push_back({{"name", row.name}, {"error", row.error}, {"share_pct", row.share_pct}});
    j["budget"] = {{"rows", rows}, {"total", t.total}};
  }
  emit(g, j.dump(2));
  return 0;
}

CZTrajectory trajectory_from_config(const Json& czj, bool do_tune) {
  double g_mhz = jget(czj, "g_mhz", 30.0);
  double eta = jget(czj, "eta_mhz", -214.0);
  double idle = jget(czj, "idle_detuning_mhz", 586.0);
  double dur = jget(czj, "duration_ns", 43.0);
  double ramp = jget(czj, "ramp_fraction", 0.3);
  std::string shape_s = jget<std::string>(czj, "shape", "raised_cosine");
  RampShape shape = shape_s == "tanh" ? RampShape::Tanh
                    : shape_s == "square" ? RampShape::Square
                                          : RampShape::RaisedCosine;
  if (do_tune) return tune_cz(shape, g_mhz, eta, idle, dur, ramp);
  CZTrajectory t;
  t.duration_ns = dur;
  t.g_mhz = g_mhz;
  t.eta_mhz = eta;
  t.idle_detuning_mhz = idle;
  t.hold_detuning_mhz = jget(czj, "hold_detuning_mhz", 0.0);
  t.shape = shape;
  t.ramp_fraction = ramp;
  return t;
}

int cmd_cz_sim(const Global& g, bool tune_flag) {
  RunConfig cfg = load_or_default(g);
  Json czj = cfg.experiment.contains("cz") ? cfg.experiment["cz"] : Json::object();
  bool do_tune = tune_flag || jget(czj, "tune", true);
  double dt = jget(czj, "dt_ns", 0.01);
  CZTrajectory t = trajectory_from_config(czj, do_tune);
  CZEvolution ev = evolve_cz(t, dt);

  if (g.format == "csv") {
    std::ostringstream csv;
    csv << "t_ns,detuning_mhz\n";
    for (double x = 0; x <= t.duration_ns + 1e-9; x += std::max(dt, t.duration_ns / 2000.0))
      csv << x << "," << t.detuning_at(std::min(x, t.duration_ns)) << "\n";
    emit(g, csv.str());
    return 0;
  }
  Json j = base_output(cfg);
  j["trajectory"] = {{"duration_ns", t.duration_ns},
                     {"g_mhz", t.g_mhz},
                     {"eta_mhz", t.eta_mhz},
                     {"idle_detuning_mhz", t.idle_detuning_mhz},
                     {"hold_detuning_mhz", t.hold_detuning_mhz},
                     {"ramp_fraction", t.ramp_fraction},
                     {"tuned", do_tune}};
  j["result"] = {{"leakage", ev.leakage},
                 {"phi00", ev.phi00},
                 {"phi01", ev.phi01},
                 {"phi10", ev.phi10},
                 {"phi11", ev.phi11},
                 {"phi_cz", ev.phi_cz}};
  emit(g, j.dump(2));
  return 0;
}

int cmd_cz_filter(const Global& g) {
  RunConfig cfg = load_or_default(g);
  Json czj = cfg.experiment.contains("cz") ? cfg.experiment["cz"] : Json::object();
  Json fj = cfg.experiment.contains("filter") ? cfg.experiment["filter"] : Json::object();
  CZTrajectory t = trajectory_from_config(czj, true);
  RamseyFilterResult f = ramsey_error_filter(t, jget(fj, "max_delay_ns", 8.0),
                                             jget(fj, "delay_step_ns", 0.02));
  if (g.format == "csv") {
    std::ostringstream csv;
    csv << "delay_ns,p11\n";
    for (std::size_t i = 0; i < f.delays_ns.size(); ++i)
      csv << f.delays_ns[i] << "," << f.p11[i] << "\n";
    emit(g, csv.str());
    return 0;
  }
  Json j = base_output(cfg);
  j["delta_p"] = f.delta_p;
  j["leak_estimate"] = f.leak_estimate;
  j["fringe_period_ns"] = f.period_ns;
  emit(g, j.dump(2));
  return 0;
}

int cmd_zstep(const Global& g) {
  RunConfig cfg = load_or_default(g);
  Json zj = cfg.experiment.contains("zstep") ? cfg.experiment["zstep"] : Json::object();
  StepResponse sr{jget(zj, "a1", 0.02), jget(zj, "a2", -0.008), jget(zj, "tau1_ns", 100.0),
                  jget(zj, "tau2_ns", 5.0)};
  double amp = jget(zj, "amplitude_ghz", 0.5);
  double t_max = jget(zj, "t_max_ns", 200.0);
  double dt = jget(zj, "dt_ns", 0.5);

  std::vector<double> grid;
  for (double t = 0; t <= t_max; t += dt) grid.push_back(t);
  std::vector<double> phase = step_phase_response(sr, amp, grid);

  std::vector<double> step(grid.size(), 0.0);
  for (std::size_t i = grid.size() / 10; i < step.size(); ++i) step[i] = 1.0;
  std::vector<double> pre = predistort(step, sr, dt);
  std::vector<double> shaped = filter_waveform(pre, sr, dt);
  std::vector<double> raw = filter_waveform(step, sr, dt);

  if (g.format == "csv") {
    std::ostringstream csv;
    csv << "t_ns,phase_rad,step,predistorted,line_response,corrected_response\n";
    for (std::size_t i = 0; i < grid.size(); ++i)
      csv << grid[i] << "," << phase[i] << "," << step[i] << "," << pre[i] << "," << raw[i]
          << "," << shaped[i] << "\n";
    emit(g, csv.str());
    return 0;
  }
  double worst = 0;
  for (std::size_t i = 0; i < step.size(); ++i)
    worst = std::max(worst, std::abs(shaped[i] - step[i]));
  Json j = base_output(cfg);
  j["response"] = {{"a1", sr.a1}, {"a2", sr.a2}, {"tau1_ns", sr.tau1_ns}, {"tau2_ns", sr.tau2_ns}};
  j["phase_drift_rad"] = phase.back();
  j["corrected_step_worst_error"] = worst;
  emit(g, j.dump(2));
  return 0;
}

DensityMatrix named_state(const std::string& name) {
  if (name == "bell" || name == "ghz2") return DensityMatrix::from_pure(PureState::ghz(2));
  if (name == "ghz3") return DensityMatrix::from_pure(PureState::ghz(3));
  if (name == "ghz4") return DensityMatrix::from_pure(PureState::ghz(4));
  if (name == "ghz5") return DensityMatrix::from_pure(PureState::ghz(5));
  if (name == "mixed1") return DensityMatrix::maximally_mixed(2);
  throw std::runtime_error("unknown state '" + name + "' (bell, ghz2..ghz5, mixed1)");
}

int cmd_tomo(const Global& g, const std::string& in_path) {
  RunConfig cfg = load_or_default(g);
  Json tj = cfg.experiment.contains("tomo") ? cfg.experiment["tomo"] : Json::object();
  TomoDataset data;
  std::string state_name = jget<std::string>(tj, "state", "bell");
  if (!in_path.empty()) {
    std::ifstream in(in_path);
    if (!in) throw std::runtime_error("cannot open '" + in_path + "'");
    Json dj = Json::parse(in, nullptr, true, true);
    data.n_qubits = dj.at("n_qubits").get<int>();
    data.repetitions = jget(dj, "repetitions", 0L);
    for (const auto& row : dj.at("probabilities"))
      data.probabilities.push_back(row.get<std::vector<double>>());
    if (data.repetitions > 0) {
      for (auto& row : data.probabilities) {
        double s = 0;
        for (double v : row) s += v;
        if (s > 1.5) for (double& v : row) v /= double(data.repetitions);
      }
    }
  } else {
    DensityMatrix rho = named_state(state_name);
    data = simulate_tomo(rho, jget(tj, "shots", 0L), cfg.seed);
  }

  MLEResult mle = mle_reconstruct(data);
  Json j = base_output(cfg);
  const Index d = mle.rho.dim();
  Json re = Json::array(), im = Json::array();
  for (Index i = 0; i < d; ++i) {
    Json rr = Json::array(), ri = Json::array();
    for (Index k = 0; k < d; ++k) {
      rr.push_back(mle.rho.matrix(i, k).real());
      ri.push_back(mle.rho.matrix(i, k).imag());
    }
    re.push_back(rr);
    im.push_back(ri);
  }
  j["rho_re"] = re;
  j["rho_im"] = im;
  j["residual"] = mle.residual;
  j["converged"] = mle.converged;
  j["pauli"] = pauli_representation(mle.rho);
  if (in_path.empty() && state_name.rfind("ghz", 0) == 0) {
    int n = state_name[3] - '0';
    j["fidelity"] = fidelity_pure(PureState::ghz(n), mle.rho);
  } else if (in_path.empty() && state_name == "bell") {
    j["fidelity"] = fidelity_pure(PureState::ghz(2), mle.rho);
  }
  emit(g, j.dump(2));
  return mle.converged ? 0 : 2;
}

int cmd_ghz(const Global& g) {
  RunConfig cfg = load_or_default(g);
  Json gj = cfg.experiment.contains("ghz") ? cfg.experiment["ghz"] : Json::object();
  int n = jget(gj, "n", 5);
  bool echo = jget(gj, "echo", true);
  long shots = jget(gj, "shots", 0L);
  int reps = jget(gj, "repetitions", shots > 0 ? 10 : 1);
  int qs_draws = jget(gj, "qs_draws", 16);
  GHZExperiment ex = run_ghz_experiment(n, cfg.resolved_noise(), cfg.device.durations, echo,
                                        shots, reps, cfg.seed, qs_draws);
  if (g.format == "csv") {
    std::ostringstream csv;
    csv << "row,col,re,im\n";
    const Index d = ex.tomo.rho.dim();
    for (Index i = 0; i < d; ++i)
      for (Index k = 0; k < d; ++k)
        csv << i << "," << k << "," << ex.tomo.rho.matrix(i, k).real() << ","
            << ex.tomo.rho.matrix(i, k).imag() << "\n";
    emit(g, csv.str());
    return 0;
  }
  Json j = base_output(cfg);
  j["n"] = n;
  j["echo"] = echo;
  j["fidelity"] = ex.tomo.fidelity;
  j["uncertainty"] = ex.tomo.uncertainty;
  j["offdiag_ratio"] = ex.diagnostics.offdiag_ratio;
  j["ratio_valid"] = ex.diagnostics.ratio_valid;
  j["genuine_entanglement"] = ex.diagnostics.genuine_entanglement;
  j["converged"] = ex.tomo.converged;
  emit(g, j.dump(2));
  return ex.tomo.converged ? 0 : 2;
}

int cmd_reproduce(const Global& g, const std::string& only_csv) {
  RunConfig cfg = load_or_default(g);
  std::vector<int> only;
  if (!only_csv.empty()) {
    std::stringstream ss(only_csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) only.push_back(std::stoi(tok));
  }
  auto results = run_acceptance(g.threads, cfg.seed, only);
  bool all = true;
  for (const auto& r : results) {
    std::cerr << (r.pass ? "PASS" : "FAIL") << "  " << r.id << ": " << r.name << " — "
              << r.detail << "\n";
    all = all && r.pass;
  }
  emit(g, acceptance_json(results, cfg, cfg.seed).dump(2));
  return all ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string(kToolName) + " " + kToolVersion +
               " — few-qubit gate characterization toolkit"};
  app.require_subcommand(1);

  Global g;
  app.add_option("--config", g.config_path, "run configuration file (JSON)");
  app.add_option("--seed", g.seed, "override the config seed");
  app.add_option("--out", g.out_path, "write output to a file instead of stdout");
  app.add_option("--format", g.format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--threads", g.threads, "worker threads for sweeps")
      ->check(CLI::Range(1, 256));

  auto* cliffords = app.add_subcommand("cliffords", "Clifford group tools");
  auto* verify = cliffords->add_subcommand("verify", "build C1/C2 and print group diagnostics");

  auto* rb = app.add_subcommand("rb", "randomized benchmarking");
  auto* rb_run = rb->add_subcommand("run", "simulate reference (and interleaved) RB");
  std::string interleaved_flag;
  rb_run->add_option("--interleaved", interleaved_flag, "gate name to interleave (e.g. CZ, X/2)");
  auto* rb_fit = rb->add_subcommand("fit", "fit an external (m,fidelity[,std]) CSV");
  std::string fit_in;
  bool fit_weighted = false;
  rb_fit->add_option("--in", fit_in, "input CSV path")->required();
  rb_fit->add_flag("--weighted", fit_weighted, "weight points by 1/std");

  auto* budget = app.add_subcommand("budget", "error-per-Clifford algebra and budget shares");
  double rsq = 0.001, rcz = 0.006;
  std::vector<double> components;
  budget->add_option("--rsq", rsq, "single-qubit gate error");
  budget->add_option("--rcz", rcz, "CZ gate error");
  budget->add_option("--components", components,
                     "four budget components: decoherence A, decoherence B, phase, leakage")
      ->expected(4);

  auto* czc = app.add_subcommand("cz", "adiabatic CZ trajectory tools");
  auto* cz_sim = czc->add_subcommand("sim", "evolve (or tune) a trajectory");
  bool tune_flag = false;
  cz_sim->add_flag("--tune", tune_flag, "tune the hold depth to a pi conditional phase");
  auto* cz_filter = czc->add_subcommand("filter", "two-gate interference leakage filter");

  auto* zstep = app.add_subcommand("zstep", "Z-line step response and predistortion");
  auto* tomo = app.add_subcommand("tomo", "state tomography");
  std::string tomo_in;
  tomo->add_option("--in", tomo_in, "dataset JSON (settings x outcomes)");
  auto* ghz = app.add_subcommand("ghz", "GHZ pipeline with tomography");
  auto* reproduce = app.add_subcommand("reproduce", "run the release criteria suite");
  std::string only_csv;
  reproduce->add_option("--only", only_csv, "comma-separated criterion ids");

  CLI11_PARSE(app, argc, argv);

  try {
    if (verify->parsed()) return cmd_cliffords_verify(g);
    if (rb_run->parsed()) return cmd_rb_run(g, interleaved_flag);
    if (rb_fit->parsed()) return cmd_rb_fit(g, fit_in, fit_weighted);
    if (budget->parsed()) return cmd_budget(g, rsq, rcz, components);
    if (cz_sim->parsed()) return cmd_cz_sim(g, tune_flag);
    if (cz_filter->parsed()) return cmd_cz_filter(g);
    if (zstep->parsed()) return cmd_zstep(g);
    if (tomo->parsed()) return cmd_tomo(g, tomo_in);
    if (ghz->parsed()) return cmd_ghz(g);
    if (reproduce->parsed()) return cmd_reproduce(g, only_csv);
    std::cerr << "no subcommand\n";
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
