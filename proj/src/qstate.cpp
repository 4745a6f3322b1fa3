#include "qbench/qstate.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace qbench {

void PureState::validate(double tol) const {
  if (!amplitudes.allFinite()) throw std::runtime_error("PureState: non-finite amplitude");
  double n = amplitudes.norm();
  if (std::abs(n - 1.0) > tol)
    throw std::runtime_error("PureState: norm deviates from 1 by " + std::to_string(n - 1.0));
}

PureState PureState::ground(int n_qubits) {
  return basis(Index(1) << n_qubits, 0);
}

PureState PureState::basis(Index dim, Index k) {
  PureState s;
  s.amplitudes = ComplexVector::Zero(dim);
  s.amplitudes(k) = 1.0;
  return s;
}

PureState PureState::ghz(int n_qubits) {
  Index d = Index(1) << n_qubits;
  PureState s;
  s.amplitudes = ComplexVector::Zero(d);
  s.amplitudes(0) = 1.0 / std::sqrt(2.0);
  s.amplitudes(d - 1) = 1.0 / std::sqrt(2.0);
  return s;
}

void DensityMatrix::validate(double herm_tol, double trace_tol, double eig_floor) const {
  if (matrix.rows() != matrix.cols()) throw std::runtime_error("DensityMatrix: not square");
  if (!matrix.allFinite()) throw std::runtime_error("DensityMatrix: non-finite entry");
  if (max_abs(matrix - matrix.adjoint()) > herm_tol)
    throw std::runtime_error("DensityMatrix: not Hermitian");
  double tr = matrix.trace().real();
  if (std::abs(tr - 1.0) > trace_tol)
    throw std::runtime_error("DensityMatrix: trace deviates from 1 by " + std::to_string(tr - 1.0));
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(matrix, Eigen::EigenvaluesOnly);
  double lo = es.eigenvalues().minCoeff();
  if (lo < eig_floor)
    throw std::runtime_error("DensityMatrix: negative eigenvalue " + std::to_string(lo));
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
  return {psi.amplitudes * psi.amplitudes.adjoint()};
}

DensityMatrix DensityMatrix::maximally_mixed(Index dim) {
  return {ComplexMatrix::Identity(dim, dim) / double(dim)};
}

DensityMatrix DensityMatrix::ground(int n_qubits) {
  return from_pure(PureState::ground(n_qubits));
}

void UnitaryOp::validate(double tol) const {
  ComplexMatrix g = matrix.adjoint() * matrix;
  g -= ComplexMatrix::Identity(matrix.rows(), matrix.cols());
  if (max_abs(g) > tol) throw std::runtime_error("UnitaryOp: U^dag U deviates from identity");
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep,
                            const std::vector<int>& dims) {
  Index total = 1;
  for (int d : dims) total *= d;
  if (total != rho.dim()) throw std::invalid_argument("partial_trace: dims do not match rho");

  int n = int(dims.size());
  std::vector<bool> kept(n, false);
  for (int s : keep) {
    if (s < 0 || s >= n) throw std::invalid_argument("partial_trace: bad subsystem index");
    kept[s] = true;
  }

  // strides of each slot in the flat index, slot 0 most significant
  std::vector<Index> stride(n, 1);
  for (int s = n - 2; s >= 0; --s) stride[s] = stride[s + 1] * dims[s + 1];

  Index dk = 1, dt = 1;
  std::vector<int> keep_slots, tr_slots;
  for (int s = 0; s < n; ++s) {
    if (kept[s]) {
      keep_slots.push_back(s);
      dk *= dims[s];
    } else {
      tr_slots.push_back(s);
      dt *= dims[s];
    }
  }

  auto expand = [&](Index packed, const std::vector<int>& slots) {
    Index flat = 0;
    for (int i = int(slots.size()) - 1; i >= 0; --i) {
      int s = slots[i];
      flat += (packed % dims[s]) * stride[s];
      packed /= dims[s];
    }
    return flat;
  };

  ComplexMatrix out = ComplexMatrix::Zero(dk, dk);
  for (Index t = 0; t < dt; ++t) {
    Index ft = expand(t, tr_slots);
    for (Index i = 0; i < dk; ++i) {
      Index fi = expand(i, keep_slots) + ft;
      for (Index j = 0; j < dk; ++j) {
        out(i, j) += rho.matrix(fi, expand(j, keep_slots) + ft);
      }
    }
  }
  return {out};
}

DensityMatrix apply_unitary(const DensityMatrix& rho, const UnitaryOp& u) {
  if (rho.dim() != u.dim()) throw std::invalid_argument("apply_unitary: dimension mismatch");
  ComplexMatrix m = rho.matrix;
  apply_unitary_inplace(m, u.matrix);
  return {m};
}

void apply_unitary_inplace(ComplexMatrix& rho, const ComplexMatrix& u) {
  rho = u * rho * u.adjoint();
}

DensityMatrix apply_kraus(const DensityMatrix& rho, const std::vector<ComplexMatrix>& ks) {
  ComplexMatrix sum = ComplexMatrix::Zero(rho.dim(), rho.dim());
  for (const auto& k : ks) {
    if (k.cols() != rho.dim()) throw std::invalid_argument("apply_kraus: dimension mismatch");
    sum += k.adjoint() * k;
  }
  sum -= ComplexMatrix::Identity(rho.dim(), rho.dim());
  if (max_abs(sum) > 1e-9)
    throw std::invalid_argument("apply_kraus: Kraus set is not trace preserving");
  ComplexMatrix m = rho.matrix;
  apply_kraus_inplace(m, ks);
  return {m};
}

void apply_kraus_inplace(ComplexMatrix& rho, const std::vector<ComplexMatrix>& ks) {
  ComplexMatrix out = ComplexMatrix::Zero(rho.rows(), rho.cols());
  for (const auto& k : ks) out += k * rho * k.adjoint();
  // keep exactly Hermitian against round-off from long channel chains
  rho = 0.5 * (out + out.adjoint().eval());
}

double fidelity_pure(const PureState& psi, const DensityMatrix& rho) {
  if (psi.dim() != rho.dim()) throw std::invalid_argument("fidelity_pure: dimension mismatch");
  Complex f = psi.amplitudes.adjoint() * rho.matrix * psi.amplitudes;
  return f.real();
}

double ground_population(const DensityMatrix& rho) { return rho.matrix(0, 0).real(); }

bool phase_equal(const ComplexMatrix& u, const ComplexMatrix& v, double tol) {
  if (u.rows() != v.rows() || u.cols() != v.cols())
    throw std::invalid_argument("phase_equal: dimension mismatch");
  Index bi = 0, bj = 0;
  double best = -1.0;
  for (Index i = 0; i < u.rows(); ++i)
    for (Index j = 0; j < u.cols(); ++j)
      if (std::abs(u(i, j)) > best) {
        best = std::abs(u(i, j));
        bi = i;
        bj = j;
      }
  if (std::abs(v(bi, bj)) < 1e-12) return false;
  Complex phase = u(bi, bj) / v(bi, bj);
  phase /= std::abs(phase);
  return max_abs(u - phase * v) <= tol;
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  ComplexMatrix d = a.matrix - b.matrix;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(d, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

}  // namespace qbench
