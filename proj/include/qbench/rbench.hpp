#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qbench/clifford.hpp"
#include "qbench/noise.hpp"

namespace qbench {

struct RBConfig {
  int n_qubits = 1;                 // 1 or 2
  std::vector<int> m_values;        // strictly increasing sequence lengths
  int k = 40;                       // random sequences per length
  long shots = 0;                   // 0 = exact populations
  std::optional<GateLabel> interleaved;
  NoiseParams noise;
  GateDurations durations = default_durations();
  std::vector<int> qubits;          // device qubits, defaults to 0..n-1
  std::uint64_t seed = 1;
  int qs_draws = 16;                // ensemble size for quasi-static noise at shots=0

  std::vector<int> device_map() const;
  void validate() const;
};

struct RBCurve {
  std::vector<int> m_values;
  std::vector<double> mean;
  std::vector<double> stddev;
  std::vector<std::vector<double>> per_sequence;  // k fidelities per m
};

struct DecayFit {
  double a = 0, b = 0, p = 1;
  double p_err = 0;          // bootstrap std
  double residual_norm = 0;
  bool converged = false;
  bool degenerate = false;   // flat curve / unidentifiable decay
  int iterations = 0;
};

struct FitOptions {
  bool weighted = false;     // weight points by 1/std
  int bootstrap = 200;       // resamples; 0 disables
  std::uint64_t seed = 1;
};

// Protocol: m random Cliffords, the unique recovery, ground population
// averaged over k sequences per m. The recovery is a physical Clifford and
// sees the same per-gate noise.
RBCurve run_reference(const RBConfig& cfg, const CliffordGroup& group,
                      int threads = 1);

// Same with the test gate inserted after every random Clifford.
RBCurve run_interleaved(const RBConfig& cfg, const CliffordGroup& group,
                        const GateLabel& gate, int threads = 1);

struct SimultaneousRB {
  RBCurve a_alone, b_alone, a_joint, b_joint;
  double r_a = 0, r_a_joint = 0, r_b = 0, r_b_joint = 0;
};

// Individual vs simultaneous single-qubit RB on two qubits; the joint runs
// trace out the partner before reading the ground population. `coupling`
// enables the residual ZZ phase during joint operation.
SimultaneousRB run_simultaneous(const RBConfig& cfg_a, const RBConfig& cfg_b,
                                std::optional<CouplingParams> coupling,
                                const CliffordGroup& c1, int threads = 1);

// Least squares for F(m) = A p^m + B. Initialisation: B0 = tail mean,
// A0 = first point - B0, p0 from a log-linear regression. Bootstrap resamples
// sequences when per-sequence data is present, otherwise residuals.
DecayFit fit_decay(const RBCurve& curve, const FitOptions& opts = {});

// r = (1 - p)(d - 1)/d
double clifford_error(double p, int n_qubits);

// r_gate = (1 - p_gate/p_ref)(d - 1)/d; warns (flag) if p_gate > p_ref.
double interleaved_error(double p_gate, double p_ref, int n_qubits);

// 1 - r_ref / 1.875
double avg_gate_fidelity_from_c1(double r_ref);

// The error-per-Clifford algebra in terms of the measured single-qubit and
// CZ gate errors.
struct CliffordErrorModel {
  double r_c1;        // 1.875 r_sq
  double r_c1c1;      // (90/24) r_sq
  double r_cnot;      // r_cz + (89/12) r_sq
  double r_iswap;     // 2 r_cz + (113/12) r_sq
  double r_swap;      // 3 r_cz + (35/4) r_sq
  double r_c2;        // (3/2) r_cz + (33/4) r_sq
  double r_c2_cz;     // (5/2) r_cz + (33/4) r_sq
};
CliffordErrorModel predict_clifford_errors(double r_sq, double r_cz);

struct BudgetRow {
  std::string name;
  double error;
  double share_pct;
};
struct BudgetTable {
  std::vector<BudgetRow> rows;
  double total;
};
// Absolute errors and percentage shares of the summed total.
BudgetTable budget_assemble(double decoherence_a, double decoherence_b,
                            double phase_ctrl, double leakage);

}  // namespace qbench
