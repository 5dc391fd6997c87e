#include "bdpr/hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "bdpr/error.hpp"

namespace bdpr {

namespace {

void require_same_dim(const HermitianMatrix& a, const HermitianMatrix& b, const char* what) {
  if (a.dim() != b.dim()) {
    throw InvalidArgument(std::string(what) + ": dimension mismatch (" + std::to_string(a.dim()) +
                          " vs " + std::to_string(b.dim()) + ")");
  }
}

Eigen::SelfAdjointEigenSolver<CMatrix> eigensolve(const HermitianMatrix& h, const char* what) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h.matrix());
  if (es.info() != Eigen::Success) {
    throw NumericalError(std::string(what) + ": eigendecomposition failed");
  }
  return es;
}

}  // namespace

HermitianMatrix::HermitianMatrix(CMatrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols()) {
    throw InvalidArgument("HermitianMatrix: matrix is not square");
  }
  if (!entries_.allFinite()) {
    throw NumericalError("HermitianMatrix: non-finite entries");
  }
  const double scale = std::max(1.0, entries_.norm());
  const double asym = (entries_ - entries_.adjoint()).norm() / scale;
  if (asym > kHermitianRejectTol) {
    throw InvalidArgument("HermitianMatrix: asymmetry " + std::to_string(asym) +
                          " exceeds tolerance");
  }
  if (asym > kHermitianSymmetrizeTol) {
    CMatrix sym = 0.5 * (entries_ + entries_.adjoint());
    entries_ = std::move(sym);
  }
  // Diagonal of a Hermitian matrix is real; drop rounding residue.
  entries_.diagonal() = entries_.diagonal().real().cast<Complex>();
}

HermitianMatrix HermitianMatrix::zero(Eigen::Index dim) {
  return HermitianMatrix(CMatrix::Zero(dim, dim), Unchecked{});
}

HermitianMatrix HermitianMatrix::identity(Eigen::Index dim) {
  return HermitianMatrix(CMatrix::Identity(dim, dim), Unchecked{});
}

HermitianMatrix HermitianMatrix::outer(const CVector& v) {
  if (!v.allFinite()) {
    throw NumericalError("HermitianMatrix::outer: non-finite vector");
  }
  CMatrix out = v * v.adjoint();
  out.diagonal() = v.cwiseAbs2().cast<Complex>();
  return HermitianMatrix(std::move(out), Unchecked{});
}

HermitianMatrix HermitianMatrix::operator+(const HermitianMatrix& other) const {
  require_same_dim(*this, other, "HermitianMatrix::operator+");
  return HermitianMatrix(entries_ + other.entries_, Unchecked{});
}

HermitianMatrix HermitianMatrix::operator-(const HermitianMatrix& other) const {
  require_same_dim(*this, other, "HermitianMatrix::operator-");
  return HermitianMatrix(entries_ - other.entries_, Unchecked{});
}

HermitianMatrix HermitianMatrix::operator*(double s) const {
  return HermitianMatrix(entries_ * s, Unchecked{});
}

double LiftedPair::frobenius_norm() const {
  return std::hypot(H.frobenius_norm(), M.frobenius_norm());
}

double hermitian_inner(const HermitianMatrix& a, const HermitianMatrix& x) {
  require_same_dim(a, x, "hermitian_inner");
  // Tr(A* X) = Σ_ij conj(A_ij) X_ij
  const Complex value = (a.matrix().conjugate().cwiseProduct(x.matrix())).sum();
  const double bound = 1e-10 * a.frobenius_norm() * x.frobenius_norm();
  if (std::abs(value.imag()) > std::max(bound, 1e-300)) {
    throw InvalidArgument("hermitian_inner: imaginary part " + std::to_string(value.imag()) +
                          " indicates non-Hermitian input");
  }
  return value.real();
}

HermitianMatrix project_psd(const HermitianMatrix& z) {
  if (z.dim() == 0) return z;
  const auto es = eigensolve(z, "project_psd");
  const RVector clipped = es.eigenvalues().cwiseMax(0.0);
  const CMatrix& u = es.eigenvectors();
  return HermitianMatrix(u * clipped.cast<Complex>().asDiagonal() * u.adjoint());
}

EigPair top_eigpair(const HermitianMatrix& h) {
  if (h.dim() == 0) throw InvalidArgument("top_eigpair: empty matrix");
  const auto es = eigensolve(h, "top_eigpair");
  const Eigen::Index top = h.dim() - 1;  // eigenvalues ascending
  CVector v = es.eigenvectors().col(top);
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  const Complex pivot = v(imax);
  if (std::abs(pivot) > 0.0) {
    v *= std::conj(pivot) / std::abs(pivot);
    v(imax) = Complex(v(imax).real(), 0.0);
  }
  return {es.eigenvalues()(top), v / v.norm()};
}

double min_eigenvalue(const HermitianMatrix& h) {
  if (h.dim() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h.matrix(), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("min_eigenvalue: eigensolve failed");
  return es.eigenvalues()(0);
}

HermitianVecBasis::HermitianVecBasis(Eigen::Index dim) : dim_(dim) {
  if (dim <= 0) throw InvalidArgument("HermitianVecBasis: dimension must be positive");
}

RVector HermitianVecBasis::to_real_vec(const HermitianMatrix& x) const {
  if (x.dim() != dim_) throw InvalidArgument("to_real_vec: dimension mismatch");
  RVector v(size());
  const CMatrix& a = x.matrix();
  for (Eigen::Index i = 0; i < dim_; ++i) v(i) = a(i, i).real();
  Eigen::Index p = dim_;
  for (Eigen::Index i = 0; i < dim_; ++i) {
    for (Eigen::Index j = i + 1; j < dim_; ++j) {
      v(p++) = M_SQRT2 * a(i, j).real();
      v(p++) = M_SQRT2 * a(i, j).imag();
    }
  }
  return v;
}

HermitianMatrix HermitianVecBasis::from_real_vec(const RVector& v) const {
  if (v.size() != size()) throw InvalidArgument("from_real_vec: length mismatch");
  CMatrix a(dim_, dim_);
  for (Eigen::Index i = 0; i < dim_; ++i) a(i, i) = v(i);
  Eigen::Index p = dim_;
  for (Eigen::Index i = 0; i < dim_; ++i) {
    for (Eigen::Index j = i + 1; j < dim_; ++j) {
      const Complex z(v(p) * M_SQRT1_2, v(p + 1) * M_SQRT1_2);
      a(i, j) = z;
      a(j, i) = std::conj(z);
      p += 2;
    }
  }
  return HermitianMatrix(std::move(a));
}

void HermitianVecBasis::outer_coords(const Eigen::Ref<const CVector>& a,
                                     Eigen::Ref<RVector> out) const {
  // (a a*)_ij = a_i conj(a_j)
  for (Eigen::Index i = 0; i < dim_; ++i) out(i) = std::norm(a(i));
  Eigen::Index p = dim_;
  for (Eigen::Index i = 0; i < dim_; ++i) {
    for (Eigen::Index j = i + 1; j < dim_; ++j) {
      const Complex z = a(i) * std::conj(a(j));
      out(p++) = M_SQRT2 * z.real();
      out(p++) = M_SQRT2 * z.imag();
    }
  }
}

}  // namespace bdpr
