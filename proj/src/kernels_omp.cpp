#include <exception>
#include <string>

#include "bdpr/error.hpp"
#include "bdpr/hyperbola.hpp"
#include "bdpr/kernels.hpp"

namespace bdpr::kernels::omp {

void quadratic_forms(const CMatrix& rows, const HermitianMatrix& x, RVector& out) {
  if (rows.cols() != x.dim()) throw InvalidArgument("quadratic_forms: dimension mismatch");
  const Eigen::Index m = rows.rows();
  out.resize(m);
#pragma omp parallel for schedule(static)
  for (Eigen::Index l = 0; l < m; ++l) {
    const Eigen::RowVectorXcd y = rows.row(l) * x.matrix();
    out(l) = y.cwiseProduct(rows.row(l).conjugate()).sum().real();
  }
}

void lift_operator(const CMatrix& rows, const HermitianVecBasis& basis, RMatrix& out) {
  if (rows.cols() != basis.dim()) throw InvalidArgument("lift_operator: dimension mismatch");
  const Eigen::Index m = rows.rows();
  out.resize(m, basis.size());
#pragma omp parallel
  {
    RVector coords(basis.size());
#pragma omp for schedule(static)
    for (Eigen::Index l = 0; l < m; ++l) {
      basis.outer_coords(rows.row(l).adjoint(), coords);
      out.row(l) = coords.transpose();
    }
  }
}

HermitianMatrix weighted_outer_sum(const CMatrix& rows, const RVector& weights) {
  if (rows.rows() != weights.size()) throw InvalidArgument("weighted_outer_sum: length mismatch");
  const Eigen::Index d = rows.cols();
  CMatrix acc(d, d);
#pragma omp parallel for schedule(dynamic)
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
  Eigen::Index first_fail = m;
  std::exception_ptr failure;
#pragma omp parallel for schedule(static)
  for (Eigen::Index l = 0; l < m; ++l) {
    try {
      const ProjectionResult r = project_hyperbola({xi1(l), xi2(l), delta(l)});
      u1(l) = r.u1;
      u2(l) = r.u2;
    } catch (...) {
#pragma omp critical(bdpr_project_batch_error)
      if (l < first_fail) {
        first_fail = l;
        failure = std::current_exception();
      }
    }
  }
  if (failure) {
    const std::string where = "component " + std::to_string(first_fail) + ": ";
    try {
      std::rethrow_exception(failure);
    } catch (const NumericalError& e) {
      throw NumericalError(where + e.what());
    } catch (const InvalidArgument& e) {
      throw InvalidArgument(where + e.what());
    }
  }
}

}  // namespace bdpr::kernels::omp
