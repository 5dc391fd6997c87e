#include <string>

#include "bdpr/error.hpp"
#include "bdpr/hyperbola.hpp"
#include "bdpr/kernels.hpp"

namespace bdpr::kernels::serial {

void quadratic_forms(const CMatrix& rows, const HermitianMatrix& x, RVector& out) {
  if (rows.cols() != x.dim()) throw InvalidArgument("quadratic_forms: dimension mismatch");
  out.resize(rows.rows());
  for (Eigen::Index l = 0; l < rows.rows(); ++l) {
    const Eigen::RowVectorXcd y = rows.row(l) * x.matrix();
    out(l) = y.cwiseProduct(rows.row(l).conjugate()).sum().real();
  }
}

void lift_operator(const CMatrix& rows, const HermitianVecBasis& basis, RMatrix& out) {
  if (rows.cols() != basis.dim()) throw InvalidArgument("lift_operator: dimension mismatch");
  out.resize(rows.rows(), basis.size());
  RVector coords(basis.size());
  for (Eigen::Index l = 0; l < rows.rows(); ++l) {
    basis.outer_coords(rows.row(l).adjoint(), coords);
    out.row(l) = coords.transpose();
  }
}

HermitianMatrix weighted_outer_sum(const CMatrix& rows, const RVector& weights) {
  if (rows.rows() != weights.size()) throw InvalidArgument("weighted_outer_sum: length mismatch");
  const Eigen::Index d = rows.cols();
  CMatrix acc(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i; j < d; ++j) {
      Complex s = 0.0;
      for (Eigen::Index l = 0; l < rows.rows(); ++l) {
        s += weights(l) * std::conj(rows(l, i)) * rows(l, j);
      }
      acc(i, j) = s;
      acc(j, i) = std::conj(s);
    }
  }
  return HermitianMatrix(std::move(acc));
}

void project_batch(const RVector& xi1, const RVector& xi2, const RVector& delta, RVector& u1,
                   RVector& u2) {
  const Eigen::Index m = xi1.size();
  if (xi2.size() != m || delta.size() != m) {
    throw InvalidArgument("project_set_C: length mismatch");
  }
  u1.resize(m);
  u2.resize(m);
  for (Eigen::Index l = 0; l < m; ++l) {
    try {
      const ProjectionResult r = project_hyperbola({xi1(l), xi2(l), delta(l)});
      u1(l) = r.u1;
      u2(l) = r.u2;
    } catch (const NumericalError& e) {
      throw NumericalError("component " + std::to_string(l) + ": " + e.what());
    } catch (const InvalidArgument& e) {
      throw InvalidArgument("component " + std::to_string(l) + ": " + e.what());
    }
  }
}

}  // namespace bdpr::kernels::serial
