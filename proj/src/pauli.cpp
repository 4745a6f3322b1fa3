#include "qbench/pauli.hpp"

namespace qbench {

const ComplexMatrix& pauli1(int idx) {
  static const std::vector<ComplexMatrix> table = [] {
    std::vector<ComplexMatrix> t(4, ComplexMatrix(2, 2));
    const Complex i(0, 1);
    t[0] << 1, 0, 0, 1;
    t[1] << 0, 1, 1, 0;
    t[2] << 0, -i, i, 0;
    t[3] << 1, 0, 0, -1;
    return t;
  }();
  return table[idx];
}

ComplexMatrix pauli_string(int code, int n_qubits) {
  std::vector<int> digits(n_qubits);
  for (int q = n_qubits - 1; q >= 0; --q) {
    digits[q] = code % 4;
    code /= 4;
  }
  ComplexMatrix out = pauli1(digits[0]);
  for (int q = 1; q < n_qubits; ++q) out = kron(out, pauli1(digits[q]));
  return out;
}

std::string pauli_name(int code, int n_qubits) {
  static const char names[] = "IXYZ";
  std::string s(n_qubits, 'I');
  for (int q = n_qubits - 1; q >= 0; --q) {
    s[q] = names[code % 4];
    code /= 4;
  }
  return s;
}

std::vector<ComplexMatrix> all_pauli_strings(int n_qubits) {
  int count = 1 << (2 * n_qubits);
  std::vector<ComplexMatrix> out;
  out.reserve(count);
  for (int c = 0; c < count; ++c) out.push_back(pauli_string(c, n_qubits));
  return out;
}

}  // namespace qbench
