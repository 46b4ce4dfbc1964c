#include "sptheta/matcore.hpp"

#include "sptheta/errors.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <string>

namespace sptheta {

namespace {

CMatrix hermitian_part(const CMatrix& m) { return (m + m.adjoint()) * 0.5; }

void require_hermitian(const CMatrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw ValidationError("matrix must be square and nonempty, got " + std::to_string(m.rows()) +
                          "x" + std::to_string(m.cols()));
  }
  const double scale = std::max(1.0, max_abs(m));
  const double asym = max_abs(m - m.adjoint());
  if (asym > tol::hermitian * scale) {
    throw ValidationError("matrix is not Hermitian (max |A - A^dagger| = " + std::to_string(asym) +
                          ")");
  }
}

void require_psd(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m, Eigen::EigenvaluesOnly);
  const RVector& ev = es.eigenvalues();
  const double largest = ev.cwiseAbs().maxCoeff();
  if (ev.minCoeff() < -tol::psd * largest) {
    throw ValidationError("matrix has a negative eigenvalue " + std::to_string(ev.minCoeff()));
  }
}

void require_unit_trace(const CMatrix& m) {
  const double tr = m.trace().real();
  if (std::abs(tr - 1.0) > tol::trace) {
    throw ValidationError("trace is " + std::to_string(tr) + ", expected 1");
  }
}

}  // namespace

HermitianMatrix::HermitianMatrix(CMatrix m) : m_(std::move(m)) {
  require_hermitian(m_);
  m_ = hermitian_part(m_);
}

HermitianMatrix::HermitianMatrix(CMatrix m, TrustedTag) : m_(hermitian_part(m)) {}

HermitianMatrix HermitianMatrix::trusted(const CMatrix& m) { return {m, TrustedTag{}}; }

PsdMatrix::PsdMatrix(CMatrix m) : HermitianMatrix(std::move(m)) { require_psd(m_); }

PsdMatrix::PsdMatrix(const HermitianMatrix& h) : HermitianMatrix(h) { require_psd(m_); }

PsdMatrix PsdMatrix::trusted(const CMatrix& m) { return {m, TrustedTag{}}; }

DensityOperator::DensityOperator(CMatrix m) : PsdMatrix(std::move(m)) { require_unit_trace(m_); }

DensityOperator::DensityOperator(const PsdMatrix& p) : PsdMatrix(p) { require_unit_trace(m_); }

DensityOperator DensityOperator::trusted(const CMatrix& m) { return {m, TrustedTag{}}; }

DensityOperator DensityOperator::maximally_mixed(Eigen::Index dim) {
  return trusted(CMatrix::Identity(dim, dim) / static_cast<double>(dim));
}

DensityOperator DensityOperator::pure(const CVector& v) {
  const double n2 = v.squaredNorm();
  if (!(n2 > 0.0)) throw ValidationError("pure state from a zero vector");
  return trusted(v * v.adjoint() / n2);
}

DensityOperator DensityOperator::normalized(const PsdMatrix& p) {
  const double tr = p.trace();
  if (!(tr > 0.0)) throw ValidationError("cannot normalize a PSD matrix with zero trace");
  return trusted(p.matrix() / tr);
}

EigenDecomposition eig_hermitian_unchecked(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(m));
  if (es.info() != Eigen::Success) throw ValidationError("eigendecomposition failed");
  // Eigen sorts ascending.
  EigenDecomposition out;
  out.values = es.eigenvalues().reverse();
  out.vectors = es.eigenvectors().rowwise().reverse();
  return out;
}

EigenDecomposition eig_hermitian(const HermitianMatrix& h) {
  return eig_hermitian_unchecked(h.matrix());
}

CMatrix spectral_power(const EigenDecomposition& e, double a) {
  const double top = e.values.size() > 0 ? std::max(0.0, e.values.maxCoeff()) : 0.0;
  const double zero = tol::spectrum_zero * top;
  return e.map([a, zero](double l) { return l <= zero ? 0.0 : std::pow(l, a); });
}

PsdMatrix mat_pow(const PsdMatrix& s, double a) {
  if (!(a >= 0.0)) throw DomainError("mat_pow exponent must be >= 0");
  const EigenDecomposition e = eig_hermitian(s);
  const double largest = e.values.cwiseAbs().maxCoeff();
  if (e.values.minCoeff() < -tol::psd * largest) {
    throw ValidationError("mat_pow of a matrix with negative eigenvalue " +
                          std::to_string(e.values.minCoeff()));
  }
  return PsdMatrix::trusted(spectral_power(e, a));
}

PsdMatrix support_projector(const PsdMatrix& s) { return mat_pow(s, 0.0); }

CMatrix kron(const CMatrix& a, const CMatrix& b) { return Eigen::kroneckerProduct(a, b).eval(); }

HermitianMatrix kron(const HermitianMatrix& a, const HermitianMatrix& b) {
  return HermitianMatrix::trusted(kron(a.matrix(), b.matrix()));
}

PsdMatrix kron(const PsdMatrix& a, const PsdMatrix& b) {
  return PsdMatrix::trusted(kron(a.matrix(), b.matrix()));
}

DensityOperator kron(const DensityOperator& a, const DensityOperator& b) {
  return DensityOperator::trusted(kron(a.matrix(), b.matrix()));
}

double schatten_norm(const PsdMatrix& a, double r) {
  if (!(r >= 1.0)) throw DomainError("Schatten norm needs r >= 1");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(a.matrix(), Eigen::EigenvaluesOnly);
  double sum = 0.0;
  for (double l : es.eigenvalues()) sum += std::pow(std::max(l, 0.0), r);
  return std::pow(sum, 1.0 / r);
}

double trace_product(const CMatrix& a, const CMatrix& b) {
  return a.cwiseProduct(b.transpose()).sum().real();
}

double max_abs(const CMatrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

}  // namespace sptheta
