#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "qbench/qstate.hpp"

namespace qbench {

// Physical gate vocabulary. Rotation convention throughout:
// R_axis(theta) = exp(-i theta sigma/2), so X means R_x(pi) = -i sigma_x.
// Z-family gates are frame rotations; H is the composite Y/2 then X.
enum class GateKind {
  I,
  X,
  Y,
  Xm,   // -X
  Ym,   // -Y
  X2,   // X/2
  X2m,  // -X/2
  Y2,   // Y/2
  Y2m,  // -Y/2
  Z,
  Z2,    // Z/2
  T,     // Z/4
  TwoT,  // two T pulses in series
  H,
  CZ,
};

std::string gate_kind_name(GateKind k);
GateKind gate_kind_from_name(const std::string& name);

struct GateLabel {
  GateKind kind = GateKind::I;
  int q0 = 0;
  int q1 = -1;  // second target, CZ only

  bool is_two_qubit() const { return kind == GateKind::CZ; }
  std::string str() const;
};

inline GateLabel sq(GateKind k, int q) { return {k, q, -1}; }
inline GateLabel cz(int a, int b) { return {GateKind::CZ, a, b}; }

// Per-device-qubit gate times in ns.
struct GateDurations {
  std::array<double, 5> pi_ns{};      // X, Y, -X, -Y
  std::array<double, 5> half_ns{};    // X/2, Y/2, -X/2, -Y/2
  std::array<double, 5> z_ns{};       // Z, Z/2, T
  std::array<double, 5> idle_ns{};    // I
  std::array<double, 5> h_ns{};       // composite
  std::array<double, 5> twot_ns{};    // two T pulses
  std::map<std::pair<int, int>, double> cz_ns;  // per unordered pair

  double of(const GateLabel& g) const;
  // all durations > 0; H = Y/2 + X; 2T = 2 * T, per qubit
  void validate() const;
};

// Shipped device table.
GateDurations default_durations();

// 2x2 rotation exp(-i theta sigma/2) about x/y/z (axis = 0/1/2).
ComplexMatrix rotation2(int axis, double theta);

// The gate's 2x2 (or 4x4 for CZ) matrix on its own qubits, with the XY
// rotation angle scaled by (1 + overrotation).
ComplexMatrix gate_matrix(GateKind kind, double overrotation = 0.0);

// Unitary embedded on the full 2^n space (qubit 0 = most significant slot).
UnitaryOp gate_unitary(const GateLabel& g, int n_qubits,
                       double overrotation = 0.0);

// Embed a k-qubit operator acting on the listed qubits into 2^n.
ComplexMatrix embed(const ComplexMatrix& op, const std::vector<int>& qubits,
                    int n_qubits);

// [-Y/2 on target, CZ, Y/2 on target]; composes to CNOT exactly.
std::vector<GateLabel> cnot_from_cz(int control, int target);

// Compose a time-ordered gate list into one unitary (later gates multiply
// from the left).
ComplexMatrix compose_gates(const std::vector<GateLabel>& gates, int n_qubits,
                            double overrotation = 0.0);

}  // namespace qbench
