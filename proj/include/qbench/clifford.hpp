#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "qbench/gateset.hpp"

namespace qbench {

enum class C2Class : int {
  SingleQubit = 0,
  CnotLike = 1,
  IswapLike = 2,
  SwapLike = 3,
};

// A group element as its physical gate sequence (time ordered) plus the
// cached unitary and the Pauli-conjugation key that identifies it up to
// global phase.
struct CliffordElement {
  std::vector<GateLabel> gates;
  ComplexMatrix unitary;
  std::uint64_t key = 0;
  int sq_count = 0;
  int cz_count = 0;
  C2Class klass = C2Class::SingleQubit;
};

struct CliffordGroup {
  int n_qubits = 1;
  std::vector<CliffordElement> elements;
  std::unordered_map<std::uint64_t, int> index;
  std::array<long, 4> class_sizes{};

  std::size_t size() const { return elements.size(); }
  const CliffordElement& at(int i) const { return elements[i]; }
  std::optional<int> find(std::uint64_t key) const;

  long total_sq_gates() const;
  long total_cz_gates() const;
};

// Key = images of the generator Paulis (X_0, Z_0[, X_1, Z_1]) under
// conjugation, each a signed Pauli string packed in 8 bits. Throws if any
// image is not a signed Pauli (i.e. u is not a Clifford), tolerance 1e-8.
std::uint64_t pauli_conjugation_key(const ComplexMatrix& u, int n_qubits);

// The 24-element single-qubit group, decomposed over {I,+-X/2,+-Y/2,+-X,+-Y}.
CliffordGroup build_c1();

// The three 3-element termination sets; elements of C1.
struct S1Sets {
  std::vector<CliffordElement> s1, s1_x2, s1_y2;
};
S1Sets build_s1_sets();

// The 11520-element two-qubit group on qubits (0, 1), CZ as the entangler.
// Classes: 576 single-qubit, 5184 CNOT-like, 5184 iSWAP-like, 576 SWAP-like.
CliffordGroup build_c2();

// The unique element whose unitary inverts `composed` up to phase. Throws if
// the key is absent (group not closed over the input).
const CliffordElement& recovery(const ComplexMatrix& composed,
                                const CliffordGroup& group);
const CliffordElement& recovery(const std::vector<int>& sequence,
                                const CliffordGroup& group);

// Normalized fourth-moment sum: sum_{k,k'} |Tr(U_k'^dag U_k)|^4 / K^2.
// Exactly 2 for a 2-design. Full pairwise sum, blocked matrix products.
double two_design_sum(const CliffordGroup& group, int threads = 1);

struct TwoDesignEstimate {
  double value = 0;
  double std_error = 0;
  long pairs = 0;
};
// Monte-Carlo estimate over uniformly sampled ordered pairs.
TwoDesignEstimate two_design_sum_sampled(const CliffordGroup& group,
                                         long n_pairs, std::uint64_t seed);

}  // namespace qbench
