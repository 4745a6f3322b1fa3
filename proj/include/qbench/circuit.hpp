#pragma once

#include <vector>

#include "qbench/gateset.hpp"

namespace qbench {

// One time slot: gates with pairwise disjoint targets. Qubits not named in
// any gate idle for the slot duration (idles are padded, not materialised).
struct Slot {
  std::vector<GateLabel> gates;
  bool touches(int q) const;
};

struct Circuit {
  int n_qubits = 0;
  std::vector<Slot> slots;

  double duration(const GateDurations& d) const;
  // later slots multiply from the left; gates inside a slot commute
  ComplexMatrix unitary(double overrotation = 0.0) const;
  void validate() const;  // no qubit twice in a slot
};

double slot_duration(const Slot& s, const GateDurations& d);

// ASAP list scheduling: each gate lands in the earliest slot after the last
// slot that used any of its qubits.
Circuit schedule(const std::vector<GateLabel>& gates, int n_qubits);

}  // namespace qbench
