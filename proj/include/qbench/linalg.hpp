#pragma once

#include <Eigen/Dense>
#include <complex>

namespace qbench {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr double kPi = 3.14159265358979323846;

// Kronecker product; dimensions multiply. The first factor is the most
// significant one: (A (x) B)[i1*rb+i2, j1*cb+j2] = A(i1,j1)*B(i2,j2).
template <typename DerivedA, typename DerivedB>
ComplexMatrix kron(const Eigen::MatrixBase<DerivedA>& a,
                   const Eigen::MatrixBase<DerivedB>& b) {
  ComplexMatrix bc = b.template cast<Complex>();
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * bc.rows(), j * bc.cols(), bc.rows(), bc.cols()) =
          Complex(a(i, j)) * bc;
  return out;
}

template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.cwiseAbs().maxCoeff();
}

inline double wrap_angle(double phi) {
  // wraps to (-pi, pi]
  phi = std::fmod(phi, 2.0 * kPi);
  if (phi <= -kPi) phi += 2.0 * kPi;
  if (phi > kPi) phi -= 2.0 * kPi;
  return phi;
}

}  // namespace qbench
