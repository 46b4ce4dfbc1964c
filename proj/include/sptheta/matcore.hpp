#pragma once

// Dense Hermitian linear algebra: eigendecompositions, fractional powers,
// support projectors, Kronecker products and Schatten norms.
//
// All matrices are dense and complex. The checked wrapper types below carry
// the Hermitian / PSD / unit-trace invariants; solvers that need raw speed
// work on CMatrix directly and rewrap results with the trusted factories.

#include <Eigen/Dense>

#include <complex>
#include <cstddef>

namespace sptheta {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

namespace tol {
inline constexpr double hermitian = 1e-12;
inline constexpr double psd = 1e-10;
inline constexpr double trace = 1e-10;
/// Eigenvalues at or below this fraction of the largest one count as zero.
inline constexpr double spectrum_zero = 1e-12;
}  // namespace tol

class HermitianMatrix {
 public:
  /// Throws ValidationError unless `m` is square and Hermitian within tol::hermitian.
  explicit HermitianMatrix(CMatrix m);

  /// Skips validation; the stored matrix is replaced by its Hermitian part.
  static HermitianMatrix trusted(const CMatrix& m);

  Eigen::Index dim() const noexcept { return m_.rows(); }
  const CMatrix& matrix() const noexcept { return m_; }
  Complex operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }
  double trace() const { return m_.trace().real(); }

 protected:
  struct TrustedTag {};
  HermitianMatrix(CMatrix m, TrustedTag);

  CMatrix m_;
};

class PsdMatrix : public HermitianMatrix {
 public:
  /// Throws ValidationError unless Hermitian with all eigenvalues
  /// >= -tol::psd * (largest eigenvalue magnitude).
  explicit PsdMatrix(CMatrix m);
  explicit PsdMatrix(const HermitianMatrix& h);

  static PsdMatrix trusted(const CMatrix& m);

 protected:
  PsdMatrix(CMatrix m, TrustedTag t) : HermitianMatrix(std::move(m), t) {}
};

class DensityOperator : public PsdMatrix {
 public:
  /// Throws ValidationError unless PSD with unit trace within tol::trace.
  explicit DensityOperator(CMatrix m);
  explicit DensityOperator(const PsdMatrix& p);

  static DensityOperator trusted(const CMatrix& m);
  static DensityOperator maximally_mixed(Eigen::Index dim);
  /// |v><v| / <v|v>.
  static DensityOperator pure(const CVector& v);
  /// Rescales a nonzero PSD matrix to unit trace.
  static DensityOperator normalized(const PsdMatrix& p);

 private:
  DensityOperator(CMatrix m, TrustedTag t) : PsdMatrix(std::move(m), t) {}
};

/// Eigenvalues sorted descending with matching unitary eigenvector columns.
struct EigenDecomposition {
  RVector values;
  CMatrix vectors;

  /// V diag(f(lambda)) V^dagger.
  template <typename Fn>
  CMatrix map(Fn&& f) const {
    RVector mapped = values.unaryExpr(f);
    return vectors * mapped.asDiagonal() * vectors.adjoint();
  }
};

EigenDecomposition eig_hermitian(const HermitianMatrix& h);

/// Eigendecomposition of the Hermitian part of `m`, for solver inner loops.
EigenDecomposition eig_hermitian_unchecked(const CMatrix& m);

/// Fractional power lambda -> lambda^a on the numerically nonzero spectrum;
/// eigenvalues <= tol::spectrum_zero * lambda_max map to 0, including for a = 0.
PsdMatrix mat_pow(const PsdMatrix& s, double a);

/// Projector onto the support of `s`; identical to mat_pow(s, 0).
PsdMatrix support_projector(const PsdMatrix& s);

/// mat_pow on an existing decomposition; skips PSD validation.
CMatrix spectral_power(const EigenDecomposition& e, double a);

HermitianMatrix kron(const HermitianMatrix& a, const HermitianMatrix& b);
PsdMatrix kron(const PsdMatrix& a, const PsdMatrix& b);
DensityOperator kron(const DensityOperator& a, const DensityOperator& b);
CMatrix kron(const CMatrix& a, const CMatrix& b);

/// (sum_i lambda_i^r)^(1/r). Throws DomainError for r < 1.
double schatten_norm(const PsdMatrix& a, double r);

/// Re Tr(A B) without forming the product.
double trace_product(const CMatrix& a, const CMatrix& b);

/// Largest |a_ij|.
double max_abs(const CMatrix& a);

}  // namespace sptheta
