#include "qbench/clifford.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>

#include "qbench/pauli.hpp"
#include "qbench/rng.hpp"

namespace qbench {

namespace {

using K = GateKind;

// Table of the 24 single-qubit Cliffords as physical pulse sequences in time:
// 4 Paulis, 8 rotations of 2pi/3, 4 of pi/2, 8 Hadamard-like. 45 gates total.
const std::vector<std::vector<K>>& c1_table() {
  static const std::vector<std::vector<K>> t = {
      {K::I},
      {K::X},
      {K::Y},
      {K::Y, K::X},
      {K::X2, K::Y2},
      {K::X2, K::Y2m},
      {K::X2m, K::Y2},
      {K::X2m, K::Y2m},
      {K::Y2, K::X2},
      {K::Y2, K::X2m},
      {K::Y2m, K::X2},
      {K::Y2m, K::X2m},
      {K::X2},
      {K::X2m},
      {K::Y2},
      {K::Y2m},
      {K::X2m, K::Y2, K::X2},
      {K::X2m, K::Y2m, K::X2},
      {K::X, K::Y2},
      {K::X, K::Y2m},
      {K::Y, K::X2},
      {K::Y, K::X2m},
      {K::X2, K::Y2, K::X2},
      {K::X2m, K::Y2, K::X2m},
  };
  return t;
}

// Termination sets; rows are C1 elements.
const std::vector<std::vector<K>> kS1 = {{K::I}, {K::Y2, K::X2}, {K::X2m, K::Y2m}};
const std::vector<std::vector<K>> kS1X2 = {{K::X2}, {K::X2, K::Y2, K::X2}, {K::Y2m}};
const std::vector<std::vector<K>> kS1Y2 = {{K::Y2}, {K::Y, K::X2}, {K::X2m, K::Y2m, K::X2}};

std::vector<GateLabel> on_qubit(const std::vector<K>& kinds, int q) {
  std::vector<GateLabel> out;
  out.reserve(kinds.size());
  for (K k : kinds) out.push_back(sq(k, q));
  return out;
}

void tally(CliffordElement& e) {
  e.sq_count = 0;
  e.cz_count = 0;
  for (const auto& g : e.gates)
    (g.is_two_qubit() ? e.cz_count : e.sq_count)++;
}

void insert_element(CliffordGroup& group, CliffordElement&& e) {
  e.unitary = compose_gates(e.gates, group.n_qubits);
  e.key = pauli_conjugation_key(e.unitary, group.n_qubits);
  tally(e);
  auto [it, fresh] = group.index.try_emplace(e.key, int(group.elements.size()));
  if (!fresh) {
    const auto& other = group.elements[it->second];
    std::string lhs, rhs;
    for (const auto& g : e.gates) lhs += g.str() + " ";
    for (const auto& g : other.gates) rhs += g.str() + " ";
    throw std::runtime_error("Clifford key collision between [" + lhs + "] and [" + rhs + "]");
  }
  group.class_sizes[int(e.klass)]++;
  group.elements.push_back(std::move(e));
}

}  // namespace

std::optional<int> CliffordGroup::find(std::uint64_t key) const {
  auto it = index.find(key);
  if (it == index.end()) return std::nullopt;
  return it->second;
}

long CliffordGroup::total_sq_gates() const {
  long n = 0;
  for (const auto& e : elements) n += e.sq_count;
  return n;
}

long CliffordGroup::total_cz_gates() const {
  long n = 0;
  for (const auto& e : elements) n += e.cz_count;
  return n;
}

std::uint64_t pauli_conjugation_key(const ComplexMatrix& u, int n_qubits) {
  static const std::vector<ComplexMatrix> paulis1 = all_pauli_strings(1);
  static const std::vector<ComplexMatrix> paulis2 = all_pauli_strings(2);
  const auto& paulis = (n_qubits == 1) ? paulis1 : paulis2;
  if (n_qubits != 1 && n_qubits != 2)
    throw std::invalid_argument("pauli_conjugation_key: 1 or 2 qubits only");

  const Index d = u.rows();
  // generators X_q, Z_q as base-4 codes (digit for qubit 0 most significant)
  std::vector<int> generators;
  for (int q = 0; q < n_qubits; ++q) {
    int shift = 2 * (n_qubits - 1 - q);
    generators.push_back(1 << shift);  // X on q
    generators.push_back(3 << shift);  // Z on q
  }

  std::uint64_t key = 0;
  int field = 0;
  for (int gcode : generators) {
    ComplexMatrix m = u * paulis[gcode] * u.adjoint();
    // expand over the Pauli basis; exactly one coefficient of +-1 survives
    int best = -1;
    double best_mag = 0;
    Complex best_c;
    for (int p = 1; p < int(paulis.size()); ++p) {
      Complex c = (paulis[p] * m).trace() / double(d);
      if (std::abs(c) > best_mag) {
        best_mag = std::abs(c);
        best = p;
        best_c = c;
      }
    }
    if (best < 0 || std::abs(best_mag - 1.0) > 1e-8 || std::abs(best_c.imag()) > 1e-8)
      throw std::runtime_error("pauli_conjugation_key: conjugation image is not a signed Pauli");
    if (max_abs(m - best_c.real() * paulis[best]) > 1e-8)
      throw std::runtime_error("pauli_conjugation_key: conjugation image is not a signed Pauli");
    std::uint64_t packed = (std::uint64_t(best) << 1) | (best_c.real() < 0 ? 1 : 0);
    key |= packed << (8 * field);
    ++field;
  }
  return key;
}

CliffordGroup build_c1() {
  CliffordGroup g;
  g.n_qubits = 1;
  for (const auto& kinds : c1_table()) {
    CliffordElement e;
    e.gates = on_qubit(kinds, 0);
    insert_element(g, std::move(e));
  }
  if (g.size() != 24) throw std::runtime_error("build_c1: expected 24 elements");
  return g;
}

S1Sets build_s1_sets() {
  CliffordGroup c1 = build_c1();
  auto resolve = [&](const std::vector<std::vector<K>>& rows) {
    std::vector<CliffordElement> out;
    for (const auto& kinds : rows) {
      CliffordElement e;
      e.gates = on_qubit(kinds, 0);
      e.unitary = compose_gates(e.gates, 1);
      e.key = pauli_conjugation_key(e.unitary, 1);
      tally(e);
      if (!c1.find(e.key))
        throw std::runtime_error("build_s1_sets: element not in C1");
      out.push_back(std::move(e));
    }
    return out;
  };
  return {resolve(kS1), resolve(kS1X2), resolve(kS1Y2)};
}

CliffordGroup build_c2() {
  CliffordGroup c1 = build_c1();
  S1Sets s = build_s1_sets();
  const auto& tab = c1_table();

  CliffordGroup g;
  g.n_qubits = 2;
  g.elements.reserve(11520);
  g.index.reserve(11520);

  auto append = [](std::vector<GateLabel>& dst, const std::vector<GateLabel>& src) {
    dst.insert(dst.end(), src.begin(), src.end());
  };

  // Fixed entangling cores. Time order, qubits (0, 1).
  const std::vector<GateLabel> cnot_core = {cz(0, 1)};
  const std::vector<GateLabel> iswap_core = {cz(0, 1), sq(K::Y2, 0), sq(K::X2m, 1), cz(0, 1)};
  // SWAP as three CNOTs with the target's -Y/2, Y/2 wrappers merged
  const std::vector<GateLabel> swap_core = {
      sq(K::Y2m, 1), cz(0, 1), sq(K::Y2, 1),  sq(K::Y2m, 0), cz(0, 1),
      sq(K::Y2, 0),  sq(K::Y2m, 1), cz(0, 1), sq(K::Y2, 1)};

  for (const auto& ka : tab) {
    for (const auto& kb : tab) {
      std::vector<GateLabel> base;
      append(base, on_qubit(ka, 0));
      append(base, on_qubit(kb, 1));

      // single-qubit class
      {
        CliffordElement e;
        e.gates = base;
        e.klass = C2Class::SingleQubit;
        insert_element(g, std::move(e));
      }
      // CNOT-like: CZ terminated by S1 x S1^{Y/2}
      for (const auto& sa : s.s1) {
        for (const auto& sb : s.s1_y2) {
          CliffordElement e;
          e.gates = base;
          append(e.gates, cnot_core);
          for (const auto& gl : sa.gates) e.gates.push_back(sq(gl.kind, 0));
          for (const auto& gl : sb.gates) e.gates.push_back(sq(gl.kind, 1));
          e.klass = C2Class::CnotLike;
          insert_element(g, std::move(e));
        }
      }
      // iSWAP-like: CZ (Y/2 x -X/2) CZ terminated by S1^{Y/2} x S1^{X/2}
      for (const auto& sa : s.s1_y2) {
        for (const auto& sb : s.s1_x2) {
          CliffordElement e;
          e.gates = base;
          append(e.gates, iswap_core);
          for (const auto& gl : sa.gates) e.gates.push_back(sq(gl.kind, 0));
          for (const auto& gl : sb.gates) e.gates.push_back(sq(gl.kind, 1));
          e.klass = C2Class::IswapLike;
          insert_element(g, std::move(e));
        }
      }
      // SWAP-like
      {
        CliffordElement e;
        e.gates = base;
        append(e.gates, swap_core);
        e.klass = C2Class::SwapLike;
        insert_element(g, std::move(e));
      }
    }
  }

  if (g.size() != 11520) throw std::runtime_error("build_c2: expected 11520 elements");
  return g;
}

const CliffordElement& recovery(const ComplexMatrix& composed, const CliffordGroup& group) {
  std::uint64_t key = pauli_conjugation_key(composed.adjoint(), group.n_qubits);
  auto idx = group.find(key);
  if (!idx)
    throw std::runtime_error("recovery: inverse key not found; group not closed over input");
  return group.at(*idx);
}

const CliffordElement& recovery(const std::vector<int>& sequence, const CliffordGroup& group) {
  Index d = Index(1) << group.n_qubits;
  ComplexMatrix u = ComplexMatrix::Identity(d, d);
  for (int id : sequence) u = group.at(id).unitary * u;
  return recovery(u, group);
}

double two_design_sum(const CliffordGroup& group, int threads) {
  const long k = long(group.size());
  const Index d2 = group.at(0).unitary.size();
  ComplexMatrix v(k, d2);
  for (long i = 0; i < k; ++i)
    v.row(i) = Eigen::Map<const ComplexVector>(group.at(i).unitary.data(), d2);

  const long block = 256;
  const long n_blocks = (k + block - 1) / block;
  std::vector<double> partial(n_blocks, 0.0);

  auto work = [&](long b) {
    long r0 = b * block;
    long rows = std::min(block, k - r0);
    ComplexMatrix gram = v.middleRows(r0, rows).conjugate() * v.transpose();
    partial[b] = gram.array().abs2().square().sum();
  };

  if (threads <= 1) {
    for (long b = 0; b < n_blocks; ++b) work(b);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        for (long b = t; b < n_blocks; b += threads) work(b);
      });
    for (auto& th : pool) th.join();
  }

  double sum = 0;
  for (double p : partial) sum += p;
  return sum / (double(k) * double(k));
}

TwoDesignEstimate two_design_sum_sampled(const CliffordGroup& group, long n_pairs,
                                         std::uint64_t seed) {
  SplitMix64 rng = substream(seed, 0x2d, group.size());
  const long k = long(group.size());
  double sum = 0, sum2 = 0;
  for (long i = 0; i < n_pairs; ++i) {
    const auto& a = group.at(int(rng.below(k)));
    const auto& b = group.at(int(rng.below(k)));
    Complex tr = (a.unitary.adjoint() * b.unitary).trace();
    double t4 = std::norm(tr);
    t4 *= t4;
    sum += t4;
    sum2 += t4 * t4;
  }
  double mean = sum / double(n_pairs);
  double var = sum2 / double(n_pairs) - mean * mean;
  return {mean, std::sqrt(std::max(var, 0.0) / double(n_pairs)), n_pairs};
}

}  // namespace qbench
