#pragma once

// exp(-iHt) for small real symmetric H by a one-off eigendecomposition.
// Any number of times can then be evaluated exactly by spectral synthesis.

#include <Eigen/Dense>
#include <complex>

#include "qwsearch/error.hpp"

namespace qwsearch {

template <typename Scalar>
class SpectralPropagator {
 public:
  using RealVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using RealMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Complex = std::complex<Scalar>;
  using ComplexVector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;

  static SpectralPropagator from_dense(const RealMatrix& H) {
    require(H.rows() == H.cols(), ErrorCode::DimensionMismatch, "matrix must be square");
    Eigen::SelfAdjointEigenSolver<RealMatrix> solver(H);
    require(solver.info() == Eigen::Success, ErrorCode::ConvergenceFailure,
            "symmetric eigensolver did not converge");
    return SpectralPropagator(solver.eigenvalues(), solver.eigenvectors());
  }

  static SpectralPropagator from_tridiagonal(const RealVector& diag, const RealVector& offdiag) {
    require(offdiag.size() + 1 == diag.size() || (diag.size() == 0 && offdiag.size() == 0),
            ErrorCode::DimensionMismatch, "tridiagonal off-diagonal must have length dim-1");
    Eigen::SelfAdjointEigenSolver<RealMatrix> solver;
    solver.computeFromTridiagonal(diag, offdiag, Eigen::ComputeEigenvectors);
    require(solver.info() == Eigen::Success, ErrorCode::ConvergenceFailure,
            "tridiagonal eigensolver did not converge");
    return SpectralPropagator(solver.eigenvalues(), solver.eigenvectors());
  }

  Eigen::Index dim() const noexcept { return values_.size(); }
  const RealVector& eigenvalues() const noexcept { return values_; }
  const RealMatrix& eigenvectors() const noexcept { return vectors_; }

  ComplexVector evolve(const ComplexVector& psi, Scalar t) const {
    require(psi.size() == dim(), ErrorCode::DimensionMismatch, "state size differs from H");
    ComplexVector coeff = vectors_.transpose().template cast<Complex>() * psi;
    for (Eigen::Index m = 0; m < dim(); ++m) coeff(m) *= phase(values_(m), t);
    return vectors_.template cast<Complex>() * coeff;
  }

  /// <target| exp(-iHt) |psi> as a sum of dim() phases; weights are cached.
  class TargetAmplitude {
   public:
    Complex operator()(Scalar t) const {
      Complex sum(0);
      for (Eigen::Index m = 0; m < weights_.size(); ++m) sum += weights_(m) * phase(values_(m), t);
      return sum;
    }
    Scalar probability(Scalar t) const { return std::norm((*this)(t)); }

   private:
    friend class SpectralPropagator;
    TargetAmplitude(RealVector values, ComplexVector weights)
        : values_(std::move(values)), weights_(std::move(weights)) {}
    RealVector values_;
    ComplexVector weights_;
  };

  TargetAmplitude target_amplitude(Eigen::Index target, const ComplexVector& psi) const {
    require(psi.size() == dim(), ErrorCode::DimensionMismatch, "state size differs from H");
    require(target >= 0 && target < dim(), ErrorCode::InvalidArgs, "target index out of range");
    ComplexVector coeff = vectors_.transpose().template cast<Complex>() * psi;
    ComplexVector weights = vectors_.row(target).transpose().template cast<Complex>().cwiseProduct(coeff);
    return TargetAmplitude(values_, std::move(weights));
  }

 private:
  SpectralPropagator(RealVector values, RealMatrix vectors)
      : values_(std::move(values)), vectors_(std::move(vectors)) {}

  static Complex phase(Scalar energy, Scalar t) {
    using std::cos;
    using std::sin;
    const Scalar arg = energy * t;
    return Complex(cos(arg), -sin(arg));
  }

  RealVector values_;
  RealMatrix vectors_;
};

}  // namespace qwsearch
