#include "qbench/noise.hpp"

#include <cmath>
#include <stdexcept>

#include "qbench/pauli.hpp"

namespace qbench {

namespace {

constexpr double kNsPerUs = 1e3;

// phase accrued by f [MHz] over t [ns], in rad
double mhz_ns_phase(double f_mhz, double t_ns) { return 2.0 * kPi * f_mhz * t_ns * 1e-3; }

void apply_embedded_kraus(SimState& st, const std::vector<ComplexMatrix>& ks,
                          const std::vector<int>& qubits, int n_qubits) {
  std::vector<ComplexMatrix> embedded;
  embedded.reserve(ks.size());
  for (const auto& k : ks) embedded.push_back(embed(k, qubits, n_qubits));
  apply_kraus_inplace(st.rho, embedded);
}

void apply_z_phase(SimState& st, int q, int n_qubits, double phi) {
  const Complex i(0, 1);
  ComplexMatrix u(2, 2);
  u << 1, 0, 0, std::exp(-i * phi);
  apply_unitary_inplace(st.rho, embed(u, {q}, n_qubits));
}

// T1 + white dephasing + idle depolarizing + quasi-static phase on one qubit
// for a stretch of time with no pulse on it.
void apply_idle_noise(SimState& st, int q, double t_ns, int n_qubits,
                      const NoiseParams& np, const std::vector<int>& device_of,
                      const std::vector<double>& detunings_mhz) {
  if (t_ns <= 0) return;
  int dq = device_of[q];
  if (np.t1(dq) > 0)
    apply_embedded_kraus(st, amplitude_damping_kraus(t_ns, np.t1(dq)), {q}, n_qubits);
  if (np.tphi(dq) > 0)
    apply_embedded_kraus(st, dephasing_kraus(t_ns, np.tphi(dq)), {q}, n_qubits);
  if (np.idle_error_per_10ns > 0) {
    double p = np.idle_error_per_10ns * t_ns / 10.0;
    apply_embedded_kraus(st, depolarizing_kraus(std::min(p, 1.0), 2), {q}, n_qubits);
  }
  if (!detunings_mhz.empty() && detunings_mhz[q] != 0.0)
    apply_z_phase(st, q, n_qubits, mhz_ns_phase(detunings_mhz[q], t_ns));
}

}  // namespace

std::optional<double> GateErrorTable::lookup(const GateLabel& g) const {
  if (g.is_two_qubit()) {
    auto key = std::minmax(g.q0, g.q1);
    auto it = cz.find({key.first, key.second});
    if (it != cz.end()) return it->second;
    return std::nullopt;
  }
  auto it = sq.find({g.kind, g.q0});
  if (it != sq.end()) return it->second;
  return std::nullopt;
}

bool NoiseParams::has_quasistatic() const {
  for (double s : sigma_qs_mhz)
    if (s > 0) return true;
  return false;
}

void NoiseParams::validate() const {
  auto prob = [](double p, const char* what) {
    if (p < 0 || p > 1) throw std::runtime_error(std::string("NoiseParams: ") + what + " outside [0,1]");
  };
  prob(depol_per_clifford, "depol_per_clifford");
  prob(cz_leak, "cz_leak");
  prob(idle_error_per_10ns, "idle_error_per_10ns");
  for (const auto& [k, v] : gate_errors.sq) prob(v, "gate error");
  for (const auto& [k, v] : gate_errors.cz) prob(v, "cz error");
  for (double t : t1_us)
    if (t < 0) throw std::runtime_error("NoiseParams: negative T1");
  for (double t : tphi_us)
    if (t < 0) throw std::runtime_error("NoiseParams: negative Tphi");
  for (double s : sigma_qs_mhz)
    if (s < 0) throw std::runtime_error("NoiseParams: negative sigma");
}

void ZCrosstalkMatrix::validate() const {
  for (int i = 0; i < 5; ++i) {
    if (std::abs(m(i, i) - 1.0) > 1e-12)
      throw std::runtime_error("ZCrosstalkMatrix: diagonal not unity");
    for (int j = 0; j < 5; ++j)
      if (i != j && std::abs(m(i, j)) >= 0.05)
        throw std::runtime_error("ZCrosstalkMatrix: off-diagonal too large");
  }
}

ZCrosstalkMatrix ZCrosstalkMatrix::device_default() {
  ZCrosstalkMatrix x;
  x.m << 1.000, -0.023, -0.014, -0.009, -0.006,
         0.019,  1.000, -0.022, -0.011, -0.007,
         0.017,  0.000,  1.000, -0.016, -0.009,
         0.016,  0.008, -0.015,  1.000, -0.014,
         0.013,  0.014, -0.016, -0.010,  1.000;
  x.validate();
  return x;
}

std::vector<ComplexMatrix> amplitude_damping_kraus(double t_ns, double t1_us) {
  if (t1_us <= 0 || t_ns <= 0) return {ComplexMatrix::Identity(2, 2)};
  double gamma = 1.0 - std::exp(-t_ns / (t1_us * kNsPerUs));
  ComplexMatrix k0(2, 2), k1(2, 2);
  k0 << 1, 0, 0, std::sqrt(1.0 - gamma);
  k1 << 0, std::sqrt(gamma), 0, 0;
  return {k0, k1};
}

std::vector<ComplexMatrix> dephasing_kraus(double t_ns, double tphi_us) {
  if (tphi_us <= 0 || t_ns <= 0) return {ComplexMatrix::Identity(2, 2)};
  // off-diagonal factor exp(-t/Tphi) = 1 - 2p
  double p = 0.5 * (1.0 - std::exp(-t_ns / (tphi_us * kNsPerUs)));
  return {std::sqrt(1.0 - p) * ComplexMatrix::Identity(2, 2),
          std::sqrt(p) * pauli1(3)};
}

std::vector<ComplexMatrix> depolarizing_kraus(double p, Index dim) {
  if (p < 0 || p > 1) throw std::invalid_argument("depolarizing_kraus: p outside [0,1]");
  int n = 0;
  while ((Index(1) << n) < dim) ++n;
  if ((Index(1) << n) != dim) throw std::invalid_argument("depolarizing_kraus: dim not a power of 2");
  if (p == 0) return {ComplexMatrix::Identity(dim, dim)};
  // (1-p) rho + (p/d^2) sum_P P rho P
  double d2 = double(dim) * double(dim);
  auto paulis = all_pauli_strings(n);
  std::vector<ComplexMatrix> ks;
  ks.reserve(paulis.size());
  ks.push_back(std::sqrt(1.0 - p + p / d2) * paulis[0]);
  for (std::size_t i = 1; i < paulis.size(); ++i)
    ks.push_back(std::sqrt(p / d2) * paulis[i]);
  return ks;
}

double ramsey_envelope(double t_ns, double tphi1_us, double tphi2_us) {
  if (t_ns < 0) throw std::invalid_argument("ramsey_envelope: negative time");
  double x = 0.0;
  if (tphi1_us > 0) x += t_ns / (tphi1_us * kNsPerUs);
  if (tphi2_us > 0) {
    double r = t_ns / (tphi2_us * kNsPerUs);
    x += r * r;
  }
  return std::exp(-x);
}

double zz_rate(const CouplingParams& c) {
  double d1 = c.delta_mhz - c.eta1_mhz;
  double d2 = c.delta_mhz + c.eta2_mhz;
  if (std::abs(d1) < 1e-6 || std::abs(d2) < 1e-6)
    throw std::runtime_error("zz_rate: denominator too close to a pole");
  return -2.0 * c.g_mhz * c.g_mhz * (c.eta1_mhz + c.eta2_mhz) / (d1 * d2);
}

Eigen::Matrix<double, 5, 1> correct_z_crosstalk(const Eigen::Matrix<double, 5, 1>& fluxes,
                                                const ZCrosstalkMatrix& m) {
  Eigen::FullPivLU<Eigen::Matrix<double, 5, 5>> lu(m.m);
  if (!lu.isInvertible()) throw std::runtime_error("correct_z_crosstalk: singular matrix");
  return lu.solve(fluxes);
}

SimState SimState::ground(int n_qubits) {
  Index d = Index(1) << n_qubits;
  SimState st;
  st.rho = ComplexMatrix::Zero(d, d);
  st.rho(0, 0) = 1.0;
  return st;
}

void apply_gate_noisy(SimState& st, const GateLabel& g, int n_qubits,
                      const NoiseParams& np, const GateDurations& dur,
                      const std::vector<int>& device_of,
                      const std::vector<double>& detunings_mhz) {
  GateLabel dev_gate = g;
  dev_gate.q0 = device_of[g.q0];
  if (g.is_two_qubit()) dev_gate.q1 = device_of[g.q1];
  const double t = dur.of(dev_gate);

  apply_unitary_inplace(st.rho, gate_unitary(g, n_qubits, np.overrotation).matrix);

  std::vector<int> targets = {g.q0};
  if (g.is_two_qubit()) targets.push_back(g.q1);

  for (int q : targets) {
    int dq = device_of[q];
    if (np.t1(dq) > 0)
      apply_embedded_kraus(st, amplitude_damping_kraus(t, np.t1(dq)), {q}, n_qubits);
    if (np.tphi(dq) > 0)
      apply_embedded_kraus(st, dephasing_kraus(t, np.tphi(dq)), {q}, n_qubits);
  }
  for (int q : targets) {
    if (!detunings_mhz.empty() && detunings_mhz[q] != 0.0)
      apply_z_phase(st, q, n_qubits, mhz_ns_phase(detunings_mhz[q], t));
  }

  // per-gate depolarizing: calibrated table r -> p = r d/(d-1); idles use the
  // per-10ns identity error
  double p_depol = 0.0;
  if (auto r = np.gate_errors.lookup(dev_gate)) {
    double d = g.is_two_qubit() ? 4.0 : 2.0;
    p_depol = *r * d / (d - 1.0);
  } else if (g.kind == GateKind::I && np.idle_error_per_10ns > 0) {
    p_depol = np.idle_error_per_10ns * t / 10.0;
  }
  if (p_depol > 0) {
    if (g.is_two_qubit())
      apply_embedded_kraus(st, depolarizing_kraus(std::min(p_depol, 1.0), 4),
                           {g.q0, g.q1}, n_qubits);
    else
      apply_embedded_kraus(st, depolarizing_kraus(std::min(p_depol, 1.0), 2),
                           {g.q0}, n_qubits);
  }

  if (g.is_two_qubit() && np.cz_leak > 0) {
    // incoherent bleed of |11> population into the tracked leaked weight
    ComplexMatrix p11 = ComplexMatrix::Zero(4, 4);
    p11(3, 3) = 1.0;
    ComplexMatrix proj = embed(p11, {g.q0, g.q1}, n_qubits);
    double pop = (proj * st.rho).trace().real();
    ComplexMatrix k0 = ComplexMatrix::Identity(st.rho.rows(), st.rho.cols()) -
                       (1.0 - std::sqrt(1.0 - np.cz_leak)) * proj;
    st.rho = k0 * st.rho * k0.adjoint();
    st.leaked += np.cz_leak * pop;
  }
}

void apply_slot_noisy(SimState& st, const Slot& slot, int n_qubits,
                      const NoiseParams& np, const GateDurations& dur,
                      const std::vector<int>& device_of,
                      const std::vector<double>& detunings_mhz) {
  double t_slot = 0;
  std::vector<double> busy(n_qubits, 0.0);
  for (const auto& g : slot.gates) {
    GateLabel dev_gate = g;
    dev_gate.q0 = device_of[g.q0];
    if (g.is_two_qubit()) dev_gate.q1 = device_of[g.q1];
    double t = dur.of(dev_gate);
    t_slot = std::max(t_slot, t);
    busy[g.q0] = t;
    if (g.is_two_qubit()) busy[g.q1] = t;
  }

  for (const auto& g : slot.gates)
    apply_gate_noisy(st, g, n_qubits, np, dur, device_of, detunings_mhz);

  // idle padding up to the slot duration
  for (int q = 0; q < n_qubits; ++q)
    apply_idle_noise(st, q, t_slot - busy[q], n_qubits, np, device_of, detunings_mhz);

  // residual ZZ between consecutive simulated qubits while time passes
  if (np.zz_mhz != 0.0 && n_qubits >= 2 && t_slot > 0) {
    const Complex i(0, 1);
    for (int q = 0; q + 1 < n_qubits; ++q) {
      ComplexMatrix u = ComplexMatrix::Identity(4, 4);
      u(3, 3) = std::exp(i * mhz_ns_phase(np.zz_mhz, t_slot));
      apply_unitary_inplace(st.rho, embed(u, {q, q + 1}, n_qubits));
    }
  }
}

}  // namespace qbench
