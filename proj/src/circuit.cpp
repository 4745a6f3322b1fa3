#include "qbench/circuit.hpp"

#include <algorithm>
#include <stdexcept>

namespace qbench {

bool Slot::touches(int q) const {
  for (const auto& g : gates)
    if (g.q0 == q || (g.is_two_qubit() && g.q1 == q)) return true;
  return false;
}

double slot_duration(const Slot& s, const GateDurations& d) {
  double t = 0;
  for (const auto& g : s.gates) t = std::max(t, d.of(g));
  return t;
}

double Circuit::duration(const GateDurations& d) const {
  double t = 0;
  for (const auto& s : slots) t += slot_duration(s, d);
  return t;
}

ComplexMatrix Circuit::unitary(double eps) const {
  Index dim = Index(1) << n_qubits;
  ComplexMatrix u = ComplexMatrix::Identity(dim, dim);
  for (const auto& s : slots)
    for (const auto& g : s.gates) u = gate_unitary(g, n_qubits, eps).matrix * u;
  return u;
}

void Circuit::validate() const {
  for (const auto& s : slots) {
    std::vector<int> seen;
    for (const auto& g : s.gates) {
      for (int q : {g.q0, g.is_two_qubit() ? g.q1 : -1}) {
        if (q < 0) continue;
        if (std::find(seen.begin(), seen.end(), q) != seen.end())
          throw std::runtime_error("Circuit: qubit used twice in a slot");
        seen.push_back(q);
      }
    }
  }
}

Circuit schedule(const std::vector<GateLabel>& gates, int n_qubits) {
  Circuit c;
  c.n_qubits = n_qubits;
  std::vector<int> last(n_qubits, -1);  // last slot index touching each qubit
  for (const auto& g : gates) {
    int earliest = last[g.q0] + 1;
    if (g.is_two_qubit()) earliest = std::max(earliest, last[g.q1] + 1);
    if (earliest >= int(c.slots.size())) c.slots.resize(earliest + 1);
    c.slots[earliest].gates.push_back(g);
    last[g.q0] = earliest;
    if (g.is_two_qubit()) last[g.q1] = earliest;
  }
  return c;
}

}  // namespace qbench
