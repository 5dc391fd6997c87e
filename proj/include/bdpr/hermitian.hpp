#pragma once

#include <complex>
#include <utility>

#include <Eigen/Dense>

namespace bdpr {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

/// Asymmetry ‖X − X*‖_F / max(1, ‖X‖_F) above which a matrix is rejected.
inline constexpr double kHermitianRejectTol = 1e-8;
/// Asymmetry below which no symmetrization is applied.
inline constexpr double kHermitianSymmetrizeTol = 1e-12;

/// Square complex matrix equal to its conjugate transpose, with finite
/// entries. Construction validates and, for small float drift,
/// symmetrizes via (X + X*)/2.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(CMatrix entries);

  static HermitianMatrix zero(Eigen::Index dim);
  static HermitianMatrix identity(Eigen::Index dim);
  /// v v*.
  static HermitianMatrix outer(const CVector& v);

  Eigen::Index dim() const { return entries_.rows(); }
  const CMatrix& matrix() const { return entries_; }
  Complex operator()(Eigen::Index i, Eigen::Index j) const { return entries_(i, j); }

  double trace() const { return entries_.diagonal().real().sum(); }
  double frobenius_norm() const { return entries_.norm(); }

  HermitianMatrix operator+(const HermitianMatrix& other) const;
  HermitianMatrix operator-(const HermitianMatrix& other) const;
  HermitianMatrix operator*(double s) const;

 private:
  struct Unchecked {};
  HermitianMatrix(CMatrix entries, Unchecked) : entries_(std::move(entries)) {}

  CMatrix entries_;
};

inline HermitianMatrix operator*(double s, const HermitianMatrix& x) { return x * s; }

/// The pair (H, M), read as the block-diagonal matrix diag(H, M).
struct LiftedPair {
  HermitianMatrix H;
  HermitianMatrix M;

  double trace() const { return H.trace() + M.trace(); }
  double frobenius_norm() const;
};

/// Tr(A* X), real for Hermitian arguments.
double hermitian_inner(const HermitianMatrix& a, const HermitianMatrix& x);

/// Frobenius-nearest positive semidefinite matrix: U diag(max(λ, 0)) U*.
HermitianMatrix project_psd(const HermitianMatrix& z);

struct EigPair {
  double value;
  CVector vector;
};

/// Largest eigenvalue with a unit eigenvector whose largest-magnitude
/// entry is real and nonnegative.
EigPair top_eigpair(const HermitianMatrix& h);

/// Smallest eigenvalue (used for PSD checks).
double min_eigenvalue(const HermitianMatrix& h);

/// Isometric coordinates for the real vector space of dim×dim Hermitian
/// matrices. Ordering: the dim diagonal entries first, then for each
/// pair i < j in row-major order the two coordinates √2·Re X_ij, √2·Im X_ij.
class HermitianVecBasis {
 public:
  explicit HermitianVecBasis(Eigen::Index dim);

  Eigen::Index dim() const { return dim_; }
  Eigen::Index size() const { return dim_ * dim_; }

  RVector to_real_vec(const HermitianMatrix& x) const;
  HermitianMatrix from_real_vec(const RVector& v) const;

  /// Coordinates of a a* without forming the outer product.
  void outer_coords(const Eigen::Ref<const CVector>& a, Eigen::Ref<RVector> out) const;

 private:
  Eigen::Index dim_;
};

}  // namespace bdpr
