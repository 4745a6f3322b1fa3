#pragma once

#include <string>
#include <vector>

#include "qbench/linalg.hpp"

namespace qbench {

// Single-qubit Pauli by index: 0=I, 1=X, 2=Y, 3=Z.
const ComplexMatrix& pauli1(int idx);

// Dense Pauli string for n qubits; `code` is base-4, digit for qubit 0 most
// significant.
ComplexMatrix pauli_string(int code, int n_qubits);

// "XIZ"-style name for a base-4 code.
std::string pauli_name(int code, int n_qubits);

// All 4^n Pauli strings, indexed by code. Built once per call.
std::vector<ComplexMatrix> all_pauli_strings(int n_qubits);

}  // namespace qbench
