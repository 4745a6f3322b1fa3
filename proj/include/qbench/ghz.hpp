#pragma once

#include <cstdint>

#include "qbench/circuit.hpp"
#include "qbench/noise.hpp"
#include "qbench/tomo.hpp"

namespace qbench {

// Y/2 on qubit 0, then chained CNOTs (CZ with -Y/2, Y/2 wrappers on the
// target), entangling one qubit at a time. With echoes, each finished qubit
// gets an X at the temporal midpoint of its idle window and a compensating X
// at the window's end, so the net rotation is identity.
Circuit build_ghz(int n_qubits, bool with_echo);

// Ensemble-averaged final state of a circuit. Quasi-static dephasing draws
// one frozen detuning per qubit per draw; other channels act per slot.
DensityMatrix simulate_circuit(const Circuit& circuit, const NoiseParams& noise,
                               const GateDurations& durations, int qs_draws,
                               std::uint64_t seed);

struct GHZExperiment {
  TomoResult tomo;
  GHZDiagnostics diagnostics;
  DensityMatrix state;  // pre-tomography simulated state
};

// Simulate the GHZ circuit under noise, run tomography (exact probabilities
// when shots = 0), reconstruct, and report diagnostics. `repetitions`
// independent shot-sampled reconstructions feed the fidelity uncertainty.
GHZExperiment run_ghz_experiment(int n_qubits, const NoiseParams& noise,
                                 const GateDurations& durations, bool with_echo,
                                 long shots, int repetitions, std::uint64_t seed,
                                 int qs_draws = 16);

}  // namespace qbench
