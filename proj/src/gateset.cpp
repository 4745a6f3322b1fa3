#include "qbench/gateset.hpp"

#include <cmath>
#include <stdexcept>

namespace qbench {

std::string gate_kind_name(GateKind k) {
  switch (k) {
    case GateKind::I: return "I";
    case GateKind::X: return "X";
    case GateKind::Y: return "Y";
    case GateKind::Xm: return "-X";
    case GateKind::Ym: return "-Y";
    case GateKind::X2: return "X/2";
    case GateKind::X2m: return "-X/2";
    case GateKind::Y2: return "Y/2";
    case GateKind::Y2m: return "-Y/2";
    case GateKind::Z: return "Z";
    case GateKind::Z2: return "Z/2";
    case GateKind::T: return "T";
    case GateKind::TwoT: return "2T";
    case GateKind::H: return "H";
    case GateKind::CZ: return "CZ";
  }
  return "?";
}

GateKind gate_kind_from_name(const std::string& name) {
  static const std::map<std::string, GateKind> table = {
      {"I", GateKind::I},     {"X", GateKind::X},     {"Y", GateKind::Y},
      {"-X", GateKind::Xm},   {"-Y", GateKind::Ym},   {"X/2", GateKind::X2},
      {"-X/2", GateKind::X2m}, {"Y/2", GateKind::Y2}, {"-Y/2", GateKind::Y2m},
      {"Z", GateKind::Z},     {"Z/2", GateKind::Z2},  {"T", GateKind::T},
      {"2T", GateKind::TwoT}, {"H", GateKind::H},     {"CZ", GateKind::CZ}};
  auto it = table.find(name);
  if (it == table.end()) throw std::invalid_argument("unknown gate name: " + name);
  return it->second;
}

std::string GateLabel::str() const {
  std::string s = gate_kind_name(kind) + "(" + std::to_string(q0);
  if (is_two_qubit()) s += "," + std::to_string(q1);
  return s + ")";
}

double GateDurations::of(const GateLabel& g) const {
  int q = g.q0;
  switch (g.kind) {
    case GateKind::X:
    case GateKind::Y:
    case GateKind::Xm:
    case GateKind::Ym: return pi_ns[q];
    case GateKind::X2:
    case GateKind::X2m:
    case GateKind::Y2:
    case GateKind::Y2m: return half_ns[q];
    case GateKind::Z:
    case GateKind::Z2:
    case GateKind::T: return z_ns[q];
    case GateKind::I: return idle_ns[q];
    case GateKind::H: return h_ns[q];
    case GateKind::TwoT: return twot_ns[q];
    case GateKind::CZ: {
      auto key = std::minmax(g.q0, g.q1);
      auto it = cz_ns.find({key.first, key.second});
      if (it == cz_ns.end())
        throw std::invalid_argument("no CZ duration for pair " + g.str());
      return it->second;
    }
  }
  throw std::invalid_argument("bad gate kind");
}

void GateDurations::validate() const {
  for (int q = 0; q < 5; ++q) {
    for (double d : {pi_ns[q], half_ns[q], z_ns[q], idle_ns[q], h_ns[q], twot_ns[q]})
      if (!(d > 0)) throw std::runtime_error("GateDurations: nonpositive duration");
    if (std::abs(h_ns[q] - (half_ns[q] + pi_ns[q])) > 1e-12)
      throw std::runtime_error("GateDurations: H must equal Y/2 + X time");
    if (std::abs(twot_ns[q] - 2.0 * z_ns[q]) > 1e-12)
      throw std::runtime_error("GateDurations: 2T must equal twice the T time");
  }
  for (const auto& [pair, d] : cz_ns)
    if (!(d > 0)) throw std::runtime_error("GateDurations: nonpositive CZ duration");
}

GateDurations default_durations() {
  GateDurations d;
  d.pi_ns = {20, 20, 12, 18, 12};
  d.half_ns = {20, 20, 12, 12, 12};
  d.z_ns = {10, 10, 10, 10, 10};
  d.idle_ns = {20, 20, 12, 12, 12};
  d.h_ns = {40, 40, 24, 30, 24};
  d.twot_ns = {20, 20, 20, 20, 20};
  d.cz_ns = {{{0, 1}, 45}, {{1, 2}, 43}, {{2, 3}, 43}, {{3, 4}, 38}};
  d.validate();
  return d;
}

ComplexMatrix rotation2(int axis, double theta) {
  const Complex i(0, 1);
  double c = std::cos(theta / 2), s = std::sin(theta / 2);
  ComplexMatrix u(2, 2);
  switch (axis) {
    case 0: u << c, -i * s, -i * s, c; break;
    case 1: u << c, -s, s, c; break;
    case 2: u << std::exp(-i * (theta / 2)), 0, 0, std::exp(i * (theta / 2)); break;
    default: throw std::invalid_argument("bad axis");
  }
  return u;
}

ComplexMatrix gate_matrix(GateKind kind, double eps) {
  const double pi = kPi;
  auto rot = [&](int axis, double theta) { return rotation2(axis, theta * (1.0 + eps)); };
  switch (kind) {
    case GateKind::I: return ComplexMatrix::Identity(2, 2);
    case GateKind::X: return rot(0, pi);
    case GateKind::Y: return rot(1, pi);
    case GateKind::Xm: return rot(0, -pi);
    case GateKind::Ym: return rot(1, -pi);
    case GateKind::X2: return rot(0, pi / 2);
    case GateKind::X2m: return rot(0, -pi / 2);
    case GateKind::Y2: return rot(1, pi / 2);
    case GateKind::Y2m: return rot(1, -pi / 2);
    // Z rotations are frame updates, not amplitude-driven pulses
    case GateKind::Z: return rotation2(2, pi);
    case GateKind::Z2: return rotation2(2, pi / 2);
    case GateKind::T: return rotation2(2, pi / 4);
    case GateKind::TwoT: return rotation2(2, pi / 4) * rotation2(2, pi / 4);
    case GateKind::H: return rot(0, pi) * rot(1, pi / 2);
    case GateKind::CZ: {
      ComplexMatrix u = ComplexMatrix::Identity(4, 4);
      u(3, 3) = -1;
      return u;
    }
  }
  throw std::invalid_argument("bad gate kind");
}

ComplexMatrix embed(const ComplexMatrix& op, const std::vector<int>& qubits, int n_qubits) {
  Index d = Index(1) << n_qubits;
  int k = int(qubits.size());
  for (int q : qubits)
    if (q < 0 || q >= n_qubits) throw std::invalid_argument("embed: qubit out of range");

  ComplexMatrix out = ComplexMatrix::Zero(d, d);
  Index rest = d >> k;
  // enumerate values of the embedded qubits (r, c) and of the remaining ones
  for (Index r = 0; r < (Index(1) << k); ++r) {
    for (Index c = 0; c < (Index(1) << k); ++c) {
      Complex v = op(r, c);
      if (v == Complex(0)) continue;
      for (Index o = 0; o < rest; ++o) {
        Index row = 0, col = 0, ob = 0;
        for (int q = 0; q < n_qubits; ++q) {
          int slot = -1;
          for (int s = 0; s < k; ++s)
            if (qubits[s] == q) slot = s;
          Index bit_r, bit_c;
          if (slot >= 0) {
            bit_r = (r >> (k - 1 - slot)) & 1;
            bit_c = (c >> (k - 1 - slot)) & 1;
          } else {
            Index bit = (o >> (n_qubits - k - 1 - ob)) & 1;
            ++ob;
            bit_r = bit_c = bit;
          }
          row = (row << 1) | bit_r;
          col = (col << 1) | bit_c;
        }
        out(row, col) += v;
      }
    }
  }
  return out;
}

UnitaryOp gate_unitary(const GateLabel& g, int n_qubits, double eps) {
  if (g.q0 < 0 || g.q0 >= n_qubits ||
      (g.is_two_qubit() && (g.q1 < 0 || g.q1 >= n_qubits || g.q1 == g.q0)))
    throw std::invalid_argument("gate_unitary: invalid target in " + g.str());
  ComplexMatrix m = gate_matrix(g.kind, eps);
  if (g.is_two_qubit()) return {embed(m, {g.q0, g.q1}, n_qubits)};
  return {embed(m, {g.q0}, n_qubits)};
}

std::vector<GateLabel> cnot_from_cz(int control, int target) {
  if (control == target) throw std::invalid_argument("cnot_from_cz: control equals target");
  return {sq(GateKind::Y2m, target), cz(control, target), sq(GateKind::Y2, target)};
}

ComplexMatrix compose_gates(const std::vector<GateLabel>& gates, int n_qubits, double eps) {
  Index d = Index(1) << n_qubits;
  ComplexMatrix u = ComplexMatrix::Identity(d, d);
  for (const auto& g : gates) u = gate_unitary(g, n_qubits, eps).matrix * u;
  return u;
}

}  // namespace qbench
