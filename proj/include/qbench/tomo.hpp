#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qbench/gateset.hpp"

namespace qbench {

// Analysis rotations per qubit, in setting-digit order: I, X/2, Y/2, X. A
// setting index is a base-4 number, digit for qubit 0 most significant. The
// rotation is applied literally (R = exp(-i theta sigma/2)) before a Z
// measurement.
GateKind tomo_setting_gate(int digit);

struct TomoDataset {
  int n_qubits = 1;
  // probabilities[s][k] for setting s and outcome k; when sampled, these are
  // counts/repetitions
  std::vector<std::vector<double>> probabilities;
  long repetitions = 0;  // 0 = exact

  int n_settings() const { return 1 << (2 * n_qubits); }
  void validate() const;  // complete settings, each row sums to 1 within 1e-9
};

// Optional readout confusion: per-qubit chance of reading the true state.
struct ReadoutModel {
  double fidelity0 = 1.0;  // P(read 0 | state 0)
  double fidelity1 = 1.0;  // P(read 1 | state 1)
};

// P(outcome | setting) = diag(U_s rho U_s^dag), multinomial-sampled when
// shots > 0. Analysis rotations are ideal.
TomoDataset simulate_tomo(const DensityMatrix& rho, long shots = 0,
                          std::uint64_t seed = 1,
                          std::optional<ReadoutModel> readout = std::nullopt);

struct MLEOptions {
  int max_iterations = 4000;
  double grad_tol = 1e-10;
};

struct MLEResult {
  DensityMatrix rho;
  double residual = 0;           // sum of squared probability residuals
  double seed_residual = 0;      // residual of the linear-inversion seed
  bool converged = false;
  int iterations = 0;
};

// Quadratic maximum likelihood: minimize sum (P_measured - P_model)^2 over
// rho = L L^dag / Tr(L L^dag), L lower triangular. Deterministic multi-start
// (identity and linear-inversion seeds) quasi-Newton descent.
MLEResult mle_reconstruct(const TomoDataset& data, const MLEOptions& opts = {});

// Pauli-averaged linear inversion (exact on noiseless data); Hermitian and
// unit trace but not necessarily positive.
ComplexMatrix linear_inversion(const TomoDataset& data);

// c_P = Tr(rho P) for every Pauli string, keyed by name ("IXZ..").
std::map<std::string, double> pauli_representation(const DensityMatrix& rho);

struct GHZDiagnostics {
  double fidelity = 0;
  double offdiag_ratio = 0;      // |rho_0N,1N|^2 / (rho_00 rho_11)
  bool ratio_valid = false;      // false when a diagonal corner vanishes
  bool genuine_entanglement = false;  // fidelity > 0.5
};
GHZDiagnostics ghz_diagnostics(const DensityMatrix& rho, int n_qubits);

// Full reporting bundle for a reconstructed state vs a pure target.
struct TomoResult {
  DensityMatrix rho;
  double fidelity = 0;
  double uncertainty = 0;  // std over repeated reconstructions
  std::map<std::string, double> pauli;
  bool converged = true;
};

}  // namespace qbench
