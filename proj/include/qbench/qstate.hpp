#pragma once

#include <stdexcept>
#include <vector>

#include "qbench/linalg.hpp"

namespace qbench {

// Thrown when an iterative routine fails to converge; the CLI maps it to a
// dedicated exit code.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PureState {
  ComplexVector amplitudes;

  Index dim() const { return amplitudes.size(); }
  void validate(double tol = 1e-9) const;

  static PureState ground(int n_qubits);
  static PureState basis(Index dim, Index k);
  // (|0...0> + |1...1>)/sqrt(2)
  static PureState ghz(int n_qubits);
};

struct DensityMatrix {
  ComplexMatrix matrix;

  Index dim() const { return matrix.rows(); }
  // Hermitian within herm_tol, unit trace within trace_tol, eigenvalues not
  // below eig_floor. Throws std::runtime_error on violation.
  void validate(double herm_tol = 1e-9, double trace_tol = 1e-9,
                double eig_floor = -1e-8) const;

  static DensityMatrix from_pure(const PureState& psi);
  static DensityMatrix maximally_mixed(Index dim);
  static DensityMatrix ground(int n_qubits);
};

struct UnitaryOp {
  ComplexMatrix matrix;

  Index dim() const { return matrix.rows(); }
  void validate(double tol = 1e-9) const;
};

// Reduced density matrix keeping the listed subsystems (indices into `dims`,
// slot 0 = most significant tensor factor). Throws if dims do not multiply to
// rho.dim().
DensityMatrix partial_trace(const DensityMatrix& rho,
                            const std::vector<int>& keep,
                            const std::vector<int>& dims);

// U rho U^dag
DensityMatrix apply_unitary(const DensityMatrix& rho, const UnitaryOp& u);
void apply_unitary_inplace(ComplexMatrix& rho, const ComplexMatrix& u);

// sum_k K rho K^dag. Throws if the set is not trace preserving within 1e-9.
DensityMatrix apply_kraus(const DensityMatrix& rho,
                          const std::vector<ComplexMatrix>& ks);
void apply_kraus_inplace(ComplexMatrix& rho,
                         const std::vector<ComplexMatrix>& ks);

// <psi| rho |psi>
double fidelity_pure(const PureState& psi, const DensityMatrix& rho);

// <0...0| rho |0...0>
double ground_population(const DensityMatrix& rho);

// True iff u equals v up to a global phase, where the phase is read off the
// largest-magnitude entry of u.
bool phase_equal(const ComplexMatrix& u, const ComplexMatrix& v,
                 double tol = 1e-8);

// 0.5 * ||a - b||_1
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

}  // namespace qbench
