#include "qbench/rbench.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>
#include <thread>

namespace qbench {

namespace {

void apply_clifford_noisy(SimState& st, const CliffordElement& e, const RBConfig& cfg,
                          const std::vector<int>& devmap,
                          const std::vector<double>& detunings) {
  Circuit c = schedule(e.gates, cfg.n_qubits);
  for (const auto& slot : c.slots)
    apply_slot_noisy(st, slot, cfg.n_qubits, cfg.noise, cfg.durations, devmap, detunings);
}

// one sequence realisation at frozen detunings; returns the exact ground
// population after the recovery
double run_once(const RBConfig& cfg, const CliffordGroup& group,
                const std::optional<GateLabel>& interleaved,
                const std::vector<int>& elems, const std::vector<int>& devmap,
                const std::vector<double>& detunings) {
  SimState st = SimState::ground(cfg.n_qubits);
  const Index d = Index(1) << cfg.n_qubits;
  ComplexMatrix ideal = ComplexMatrix::Identity(d, d);

  std::vector<ComplexMatrix> depol;
  if (cfg.noise.depol_per_clifford > 0)
    depol = depolarizing_kraus(cfg.noise.depol_per_clifford, d);

  ComplexMatrix gate_ideal;
  if (interleaved) gate_ideal = gate_unitary(*interleaved, cfg.n_qubits).matrix;

  for (int id : elems) {
    const CliffordElement& e = group.at(id);
    apply_clifford_noisy(st, e, cfg, devmap, detunings);
    ideal = e.unitary * ideal;
    // oracle channel: once per random Clifford, never on the recovery
    if (!depol.empty()) apply_kraus_inplace(st.rho, depol);
    if (interleaved) {
      Circuit c = schedule({*interleaved}, cfg.n_qubits);
      for (const auto& slot : c.slots)
        apply_slot_noisy(st, slot, cfg.n_qubits, cfg.noise, cfg.durations, devmap, detunings);
      ideal = gate_ideal * ideal;
    }
  }

  const CliffordElement& rec = recovery(ideal, group);
  apply_clifford_noisy(st, rec, cfg, devmap, detunings);
  return st.ground_pop();
}

// sequence fidelity including quasi-static averaging and optional shot noise
double measure_sequence(const RBConfig& cfg, const CliffordGroup& group,
                        const std::optional<GateLabel>& interleaved, int m,
                        int seq_idx, const std::vector<int>& devmap) {
  SplitMix64 pick = substream(cfg.seed, 0x5eb, std::uint64_t(m), std::uint64_t(seq_idx));
  std::vector<int> elems(m);
  for (int i = 0; i < m; ++i) elems[i] = int(pick.below(group.size()));

  const bool qs = cfg.noise.has_quasistatic();
  auto draw_detunings = [&](std::uint64_t draw) {
    std::vector<double> det(cfg.n_qubits, 0.0);
    if (!qs) return det;
    SplitMix64 g = substream(cfg.seed, 0xde7, (std::uint64_t(m) << 20) | std::uint64_t(seq_idx), draw);
    for (int q = 0; q < cfg.n_qubits; ++q)
      det[q] = cfg.noise.sigma_qs(devmap[q]) * g.gaussian();
    return det;
  };

  if (cfg.shots <= 0) {
    int draws = qs ? std::max(1, cfg.qs_draws) : 1;
    double sum = 0;
    for (int dr = 0; dr < draws; ++dr)
      sum += run_once(cfg, group, interleaved, elems, devmap, draw_detunings(dr));
    return sum / draws;
  }

  // finite shots: one frozen detuning draw per shot (quasi-static), Bernoulli
  // readout of the all-ground outcome
  SplitMix64 meas = substream(cfg.seed, 0x3507, (std::uint64_t(m) << 20) | std::uint64_t(seq_idx), 1);
  long hits = 0;
  if (!qs) {
    double f = run_once(cfg, group, interleaved, elems, devmap, draw_detunings(0));
    for (long s = 0; s < cfg.shots; ++s)
      if (meas.uniform() < f) ++hits;
  } else {
    for (long s = 0; s < cfg.shots; ++s) {
      double f = run_once(cfg, group, interleaved, elems, devmap, draw_detunings(std::uint64_t(s)));
      if (meas.uniform() < f) ++hits;
    }
  }
  return double(hits) / double(cfg.shots);
}

RBCurve run_protocol(const RBConfig& cfg, const CliffordGroup& group,
                     const std::optional<GateLabel>& interleaved, int threads) {
  cfg.validate();
  if (group.n_qubits != cfg.n_qubits)
    throw std::invalid_argument("RB: group does not match n_qubits");
  std::vector<int> devmap = cfg.device_map();

  const int nm = int(cfg.m_values.size());
  RBCurve curve;
  curve.m_values = cfg.m_values;
  curve.per_sequence.assign(nm, std::vector<double>(cfg.k, 0.0));

  struct Job {
    int mi, seq;
  };
  std::vector<Job> jobs;
  jobs.reserve(std::size_t(nm) * cfg.k);
  for (int mi = 0; mi < nm; ++mi)
    for (int s = 0; s < cfg.k; ++s) jobs.push_back({mi, s});

  auto work = [&](std::size_t j) {
    const auto& job = jobs[j];
    curve.per_sequence[job.mi][job.seq] = measure_sequence(
        cfg, group, interleaved, cfg.m_values[job.mi], job.seq, devmap);
  };

  if (threads <= 1) {
    for (std::size_t j = 0; j < jobs.size(); ++j) work(j);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        for (std::size_t j = t; j < jobs.size(); j += threads) work(j);
      });
    for (auto& th : pool) th.join();
  }

  curve.mean.resize(nm);
  curve.stddev.resize(nm);
  for (int mi = 0; mi < nm; ++mi) {
    const auto& v = curve.per_sequence[mi];
    double mean = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
    double var = 0;
    for (double x : v) var += (x - mean) * (x - mean);
    curve.mean[mi] = mean;
    curve.stddev[mi] = v.size() > 1 ? std::sqrt(var / (v.size() - 1)) : 0.0;
  }
  return curve;
}

DecayFit fit_points(const std::vector<int>& ms, const std::vector<double>& ys,
                    const std::vector<double>& ws) {
  const int n = int(ms.size());
  DecayFit fit;

  double ymax = *std::max_element(ys.begin(), ys.end());
  double ymin = *std::min_element(ys.begin(), ys.end());
  if (ymax - ymin < 1e-9) {
    // flat curve: decay unidentifiable
    fit.a = 0;
    fit.b = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    fit.p = 1.0;
    fit.p_err = 1.0;
    fit.converged = true;
    fit.degenerate = true;
    return fit;
  }

  // initialisation
  int tail = std::max(1, n / 4);
  double b0 = 0;
  for (int i = n - tail; i < n; ++i) b0 += ys[i];
  b0 /= tail;
  double a0 = ys[0] - b0;
  double p0 = 0.99;
  {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (int i = 0; i < n; ++i) {
      double dy = (a0 >= 0) ? ys[i] - b0 : b0 - ys[i];
      if (dy > 1e-12) {
        double lx = ms[i], ly = std::log(dy);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++cnt;
      }
    }
    if (cnt >= 2 && (cnt * sxx - sx * sx) > 1e-12) {
      double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
      p0 = std::exp(slope);
    }
    p0 = std::clamp(p0, 1e-6, 1.0);
  }

  double A = a0, B = b0, P = p0;
  auto cost = [&](double a, double b, double p) {
    double c = 0;
    for (int i = 0; i < n; ++i) {
      double r = ws[i] * (a * std::pow(p, ms[i]) + b - ys[i]);
      c += r * r;
    }
    return c;
  };

  double lambda = 1e-3;
  double c_now = cost(A, B, P);
  int it = 0;
  bool ok = false;
  for (; it < 500; ++it) {
    Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
    Eigen::Vector3d g = Eigen::Vector3d::Zero();
    for (int i = 0; i < n; ++i) {
      double pm = std::pow(P, ms[i]);
      double r = ws[i] * (A * pm + B - ys[i]);
      Eigen::Vector3d j(ws[i] * pm, ws[i],
                        ws[i] * A * ms[i] * (ms[i] > 0 ? std::pow(P, ms[i] - 1) : 0.0));
      h += j * j.transpose();
      g += j * r;
    }
    Eigen::Matrix3d damped = h;
    damped.diagonal() += lambda * h.diagonal().cwiseMax(1e-12);
    Eigen::Vector3d step = damped.ldlt().solve(-g);
    double A2 = A + step(0), B2 = B + step(1), P2 = std::clamp(P + step(2), 1e-9, 1.0);
    double c_new = cost(A2, B2, P2);
    if (c_new < c_now) {
      double drop = c_now - c_new;
      A = A2;
      B = B2;
      P = P2;
      c_now = c_new;
      lambda = std::max(lambda * 0.3, 1e-12);
      if (drop < 1e-15 * std::max(1.0, c_now) && step.norm() < 1e-12) {
        ok = true;
        break;
      }
    } else {
      lambda *= 10;
      if (lambda > 1e12) {
        ok = true;  // stalled at a (local) optimum
        break;
      }
    }
  }

  fit.a = A;
  fit.b = B;
  fit.p = P;
  fit.residual_norm = std::sqrt(c_now);
  fit.converged = ok;
  fit.iterations = it;
  if (P <= 1e-9 + 1e-15 || std::abs(A) < 1e-9) fit.degenerate = true;
  return fit;
}

}  // namespace

std::vector<int> RBConfig::device_map() const {
  if (!qubits.empty()) {
    if (int(qubits.size()) != n_qubits)
      throw std::invalid_argument("RBConfig: qubit list does not match n_qubits");
    return qubits;
  }
  std::vector<int> m(n_qubits);
  std::iota(m.begin(), m.end(), 0);
  return m;
}

void RBConfig::validate() const {
  if (n_qubits != 1 && n_qubits != 2)
    throw std::invalid_argument("RBConfig: n_qubits must be 1 or 2");
  if (m_values.empty()) throw std::invalid_argument("RBConfig: empty m grid");
  for (std::size_t i = 1; i < m_values.size(); ++i)
    if (m_values[i] <= m_values[i - 1])
      throw std::invalid_argument("RBConfig: m_values must be strictly increasing");
  if (m_values.front() < 0) throw std::invalid_argument("RBConfig: negative m");
  if (k < 1) throw std::invalid_argument("RBConfig: k must be >= 1");
  noise.validate();
  durations.validate();
  device_map();
}

RBCurve run_reference(const RBConfig& cfg, const CliffordGroup& group, int threads) {
  return run_protocol(cfg, group, std::nullopt, threads);
}

RBCurve run_interleaved(const RBConfig& cfg, const CliffordGroup& group,
                        const GateLabel& gate, int threads) {
  return run_protocol(cfg, group, gate, threads);
}

SimultaneousRB run_simultaneous(const RBConfig& cfg_a, const RBConfig& cfg_b,
                                std::optional<CouplingParams> coupling,
                                const CliffordGroup& c1, int threads) {
  if (cfg_a.n_qubits != 1 || cfg_b.n_qubits != 1)
    throw std::invalid_argument("run_simultaneous: expects single-qubit configs");
  int dev_a = cfg_a.device_map()[0], dev_b = cfg_b.device_map()[0];
  if (dev_a == dev_b) throw std::invalid_argument("run_simultaneous: same qubit twice");

  SimultaneousRB out;
  out.a_alone = run_reference(cfg_a, c1, threads);
  out.b_alone = run_reference(cfg_b, c1, threads);

  // joint two-qubit run with independent C1 streams on each qubit
  RBConfig joint = cfg_a;
  joint.n_qubits = 2;
  joint.qubits = {dev_a, dev_b};
  if (coupling) joint.noise.zz_mhz = zz_rate(*coupling);
  joint.validate();
  std::vector<int> devmap = joint.device_map();

  const int nm = int(joint.m_values.size());
  out.a_joint.m_values = out.b_joint.m_values = joint.m_values;
  out.a_joint.per_sequence.assign(nm, std::vector<double>(joint.k, 0.0));
  out.b_joint.per_sequence.assign(nm, std::vector<double>(joint.k, 0.0));

  auto run_joint_seq = [&](int mi, int seq) {
    int m = joint.m_values[mi];
    SplitMix64 pa = substream(joint.seed, 0x5eb, (std::uint64_t(m) << 20) | std::uint64_t(seq), 10);
    SplitMix64 pb = substream(joint.seed, 0x5eb, (std::uint64_t(m) << 20) | std::uint64_t(seq), 11);
    std::vector<double> det(2, 0.0);
    if (joint.noise.has_quasistatic()) {
      SplitMix64 g = substream(joint.seed, 0xde7, (std::uint64_t(m) << 20) | std::uint64_t(seq), 0);
      det[0] = joint.noise.sigma_qs(dev_a) * g.gaussian();
      det[1] = joint.noise.sigma_qs(dev_b) * g.gaussian();
    }

    SimState st = SimState::ground(2);
    ComplexMatrix ia = ComplexMatrix::Identity(2, 2), ib = ia;
    std::vector<ComplexMatrix> depol;
    if (joint.noise.depol_per_clifford > 0)
      depol = depolarizing_kraus(joint.noise.depol_per_clifford, 2);

    for (int i = 0; i < m; ++i) {
      const auto& ea = c1.at(int(pa.below(c1.size())));
      const auto& eb = c1.at(int(pb.below(c1.size())));
      std::vector<GateLabel> gates;
      for (const auto& g : ea.gates) gates.push_back(sq(g.kind, 0));
      for (const auto& g : eb.gates) gates.push_back(sq(g.kind, 1));
      Circuit c = schedule(gates, 2);
      for (const auto& slot : c.slots)
        apply_slot_noisy(st, slot, 2, joint.noise, joint.durations, devmap, det);
      ia = ea.unitary * ia;
      ib = eb.unitary * ib;
      if (!depol.empty()) {
        std::vector<ComplexMatrix> e0, e1;
        for (const auto& k : depol) e0.push_back(embed(k, {0}, 2));
        for (const auto& k : depol) e1.push_back(embed(k, {1}, 2));
        apply_kraus_inplace(st.rho, e0);
        apply_kraus_inplace(st.rho, e1);
      }
    }
    const auto& ra = recovery(ia, c1);
    const auto& rb = recovery(ib, c1);
    std::vector<GateLabel> gates;
    for (const auto& g : ra.gates) gates.push_back(sq(g.kind, 0));
    for (const auto& g : rb.gates) gates.push_back(sq(g.kind, 1));
    Circuit c = schedule(gates, 2);
    for (const auto& slot : c.slots)
      apply_slot_noisy(st, slot, 2, joint.noise, joint.durations, devmap, det);

    DensityMatrix full{st.rho};
    out.a_joint.per_sequence[mi][seq] = ground_population(partial_trace(full, {0}, {2, 2}));
    out.b_joint.per_sequence[mi][seq] = ground_population(partial_trace(full, {1}, {2, 2}));
  };

  std::vector<std::pair<int, int>> jobs;
  for (int mi = 0; mi < nm; ++mi)
    for (int s = 0; s < joint.k; ++s) jobs.emplace_back(mi, s);
  if (threads <= 1) {
    for (auto& [mi, s] : jobs) run_joint_seq(mi, s);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        for (std::size_t j = t; j < jobs.size(); j += threads)
          run_joint_seq(jobs[j].first, jobs[j].second);
      });
    for (auto& th : pool) th.join();
  }

  for (RBCurve* c : {&out.a_joint, &out.b_joint}) {
    c->mean.resize(nm);
    c->stddev.resize(nm);
    for (int mi = 0; mi < nm; ++mi) {
      const auto& v = c->per_sequence[mi];
      double mean = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
      double var = 0;
      for (double x : v) var += (x - mean) * (x - mean);
      c->mean[mi] = mean;
      c->stddev[mi] = v.size() > 1 ? std::sqrt(var / (v.size() - 1)) : 0.0;
    }
  }

  out.r_a = clifford_error(fit_decay(out.a_alone).p, 1);
  out.r_b = clifford_error(fit_decay(out.b_alone).p, 1);
  out.r_a_joint = clifford_error(fit_decay(out.a_joint).p, 1);
  out.r_b_joint = clifford_error(fit_decay(out.b_joint).p, 1);
  return out;
}

DecayFit fit_decay(const RBCurve& curve, const FitOptions& opts) {
  const int n = int(curve.m_values.size());
  if (n < 3) throw std::invalid_argument("fit_decay: need at least 3 sequence lengths");

  std::vector<double> ws(n, 1.0);
  if (opts.weighted) {
    for (int i = 0; i < n; ++i)
      if (i < int(curve.stddev.size()) && curve.stddev[i] > 1e-12) ws[i] = 1.0 / curve.stddev[i];
  }

  DecayFit fit = fit_points(curve.m_values, curve.mean, ws);
  if (!fit.converged)
    std::cerr << "fit_decay: least squares did not converge (flagged)\n";

  if (opts.bootstrap > 0 && !fit.degenerate) {
    std::vector<double> ps;
    ps.reserve(opts.bootstrap);
    bool have_seqs = !curve.per_sequence.empty() &&
                     int(curve.per_sequence.size()) == n &&
                     curve.per_sequence[0].size() > 1;
    SplitMix64 rng = substream(opts.seed, 0xb007);
    for (int r = 0; r < opts.bootstrap; ++r) {
      std::vector<double> ys(n);
      if (have_seqs) {
        for (int mi = 0; mi < n; ++mi) {
          const auto& v = curve.per_sequence[mi];
          double s = 0;
          for (std::size_t j = 0; j < v.size(); ++j) s += v[rng.below(v.size())];
          ys[mi] = s / v.size();
        }
      } else if (!curve.stddev.empty() &&
                 *std::max_element(curve.stddev.begin(), curve.stddev.end()) > 0) {
        for (int mi = 0; mi < n; ++mi)
          ys[mi] = curve.mean[mi] + curve.stddev[mi] * rng.gaussian();
      } else {
        // residual bootstrap around the fitted model
        for (int mi = 0; mi < n; ++mi) {
          int pick = int(rng.below(n));
          double res_pick = curve.mean[pick] -
                            (fit.a * std::pow(fit.p, curve.m_values[pick]) + fit.b);
          ys[mi] = fit.a * std::pow(fit.p, curve.m_values[mi]) + fit.b + res_pick;
        }
      }
      ps.push_back(fit_points(curve.m_values, ys, ws).p);
    }
    double mean = std::accumulate(ps.begin(), ps.end(), 0.0) / ps.size();
    double var = 0;
    for (double p : ps) var += (p - mean) * (p - mean);
    fit.p_err = std::sqrt(var / (ps.size() - 1));
    if (fit.p < 1.0 && fit.p_err > 0.5 * (1.0 - fit.p)) fit.degenerate = true;
  }
  return fit;
}

double clifford_error(double p, int n_qubits) {
  double d = double(Index(1) << n_qubits);
  return (1.0 - p) * (d - 1.0) / d;
}

double interleaved_error(double p_gate, double p_ref, int n_qubits) {
  if (p_gate > p_ref)
    std::cerr << "interleaved_error: p_gate > p_ref (reporting a negative error)\n";
  double d = double(Index(1) << n_qubits);
  return (1.0 - p_gate / p_ref) * (d - 1.0) / d;
}

double avg_gate_fidelity_from_c1(double r_ref) { return 1.0 - r_ref / 1.875; }

CliffordErrorModel predict_clifford_errors(double r_sq, double r_cz) {
  CliffordErrorModel m;
  m.r_c1 = 1.875 * r_sq;
  m.r_c1c1 = (90.0 / 24.0) * r_sq;
  m.r_cnot = r_cz + (89.0 / 12.0) * r_sq;
  m.r_iswap = 2.0 * r_cz + (113.0 / 12.0) * r_sq;
  m.r_swap = 3.0 * r_cz + (35.0 / 4.0) * r_sq;
  m.r_c2 = 1.5 * r_cz + (33.0 / 4.0) * r_sq;
  m.r_c2_cz = 2.5 * r_cz + (33.0 / 4.0) * r_sq;
  return m;
}

BudgetTable budget_assemble(double decoherence_a, double decoherence_b,
                            double phase_ctrl, double leakage) {
  for (double v : {decoherence_a, decoherence_b, phase_ctrl, leakage})
    if (v < 0) throw std::invalid_argument("budget_assemble: negative component");
  BudgetTable t;
  t.total = decoherence_a + decoherence_b + phase_ctrl + leakage;
  auto add = [&](const std::string& name, double v) {
    t.rows.push_back({name, v, t.total > 0 ? 100.0 * v / t.total : 0.0});
  };
  add("decoherence qubit A", decoherence_a);
  add("decoherence qubit B", decoherence_b);
  add("single-qubit phase control", phase_ctrl);
  add("state leakage", leakage);
  return t;
}

}  // namespace qbench
