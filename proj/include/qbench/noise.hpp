#pragma once

#include <map>
#include <optional>
#include <vector>

#include "qbench/circuit.hpp"
#include "qbench/gateset.hpp"
#include "qbench/rng.hpp"

namespace qbench {

// Per-physical-gate depolarizing strengths expressed as average gate errors
// (r); converted to channel parameters internally (p = r d/(d-1)).
struct GateErrorTable {
  // key: (kind, device qubit) for single-qubit gates
  std::map<std::pair<GateKind, int>, double> sq;
  // key: unordered device pair
  std::map<std::pair<int, int>, double> cz;

  bool empty() const { return sq.empty() && cz.empty(); }
  std::optional<double> lookup(const GateLabel& g) const;
};

// Per-device-qubit noise knobs. Zero / empty means the mechanism is off.
struct NoiseParams {
  std::vector<double> t1_us;           // energy relaxation
  std::vector<double> tphi_us;         // white (fast) dephasing
  std::vector<double> sigma_qs_mhz;    // quasi-static detuning std-dev per shot
  double overrotation = 0.0;           // fractional XY amplitude error
  double depol_per_clifford = 0.0;     // RB oracle channel, applied per random Clifford
  double cz_leak = 0.0;                // incoherent |11> weight loss per CZ
  double idle_error_per_10ns = 0.0;    // depolarizing on idle time
  GateErrorTable gate_errors;          // per-gate depolarizing (calibrated profile)
  double zz_mhz = 0.0;                 // residual |11> conditional-phase rate, adjacent pairs

  double t1(int device_q) const { return at(t1_us, device_q); }
  double tphi(int device_q) const { return at(tphi_us, device_q); }
  double sigma_qs(int device_q) const { return at(sigma_qs_mhz, device_q); }
  bool has_quasistatic() const;
  void validate() const;  // probabilities in [0,1], times > 0

 private:
  static double at(const std::vector<double>& v, int q) {
    if (v.empty()) return 0.0;
    return v[q < int(v.size()) ? q : v.size() - 1];
  }
};

struct CouplingParams {
  double g_mhz = 0.0;
  double eta1_mhz = 0.0;  // negative
  double eta2_mhz = 0.0;  // negative
  double delta_mhz = 0.0; // qubit frequency difference
};

// Flux crosstalk, actual = M * ideal. Unit diagonal, small off-diagonals.
struct ZCrosstalkMatrix {
  Eigen::Matrix<double, 5, 5> m;
  void validate() const;
  static ZCrosstalkMatrix device_default();
};

// gamma = 1 - exp(-t/T1); {K0, K1} on one qubit. T1 <= 0 disables.
std::vector<ComplexMatrix> amplitude_damping_kraus(double t_ns, double t1_us);

// off-diagonal decay exp(-t/Tphi); {sqrt(1-p) I, sqrt(p) Z}.
std::vector<ComplexMatrix> dephasing_kraus(double t_ns, double tphi_us);

// rho -> (1-p) rho + p I/dim, dim a power of two.
std::vector<ComplexMatrix> depolarizing_kraus(double p, Index dim);

// exp[-t/Tphi1 - (t/Tphi2)^2]; either time <= 0 disables its term.
double ramsey_envelope(double t_ns, double tphi1_us, double tphi2_us);

// Residual conditional-phase rate -2 g^2 (eta1+eta2) / ((D-eta1)(D+eta2)),
// in MHz with the same 2*pi convention as the inputs. Positive values accrue
// phase toward CZ. Throws near the poles (|factor| < 1e-6).
double zz_rate(const CouplingParams& c);

// Returns M^-1 * fluxes so that the delivered flux equals the ideal request.
Eigen::Matrix<double, 5, 1> correct_z_crosstalk(
    const Eigen::Matrix<double, 5, 1>& fluxes, const ZCrosstalkMatrix& m);

// Simulator state: computational density matrix plus classically tracked
// leaked weight (never returns, reads out as non-ground).
struct SimState {
  ComplexMatrix rho;
  double leaked = 0.0;

  static SimState ground(int n_qubits);
  double ground_pop() const { return rho(0, 0).real(); }
};

// Ideal unitary (with overrotation), then relaxation + dephasing channels on
// each involved qubit for the gate duration, then the per-qubit quasi-static
// phase, then any per-gate depolarizing; CZ additionally bleeds cz_leak of
// the |11> population into the leaked weight.
// `device_of` maps simulated qubit index -> device qubit; `detunings_mhz` is
// the per-simulated-qubit frozen detuning for this shot.
void apply_gate_noisy(SimState& st, const GateLabel& g, int n_qubits,
                      const NoiseParams& np, const GateDurations& dur,
                      const std::vector<int>& device_of,
                      const std::vector<double>& detunings_mhz);

// Run a whole slot: gates via apply_gate_noisy, then idle channels (T1,
// dephasing, idle depolarizing, quasi-static phase) on the qubits the slot
// does not touch, for the slot duration.
void apply_slot_noisy(SimState& st, const Slot& slot, int n_qubits,
                      const NoiseParams& np, const GateDurations& dur,
                      const std::vector<int>& device_of,
                      const std::vector<double>& detunings_mhz);

}  // namespace qbench
