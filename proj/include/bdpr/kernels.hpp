#pragma once

// Data-parallel inner loops over the measurement index ℓ.
//
// Every kernel exists twice: `serial` is the plain reference loop kept for
// testing, `omp` is the OpenMP version used by the solver. Each output
// element is computed by exactly the same floating-point sequence in both,
// so the two agree bit for bit and neither depends on the thread count.
//
// Measurement rows are passed as an m×d matrix whose row ℓ is a_ℓ*.

#include "bdpr/hermitian.hpp"

namespace bdpr::kernels {

namespace serial {

/// out_ℓ = a_ℓ* X a_ℓ.
void quadratic_forms(const CMatrix& rows, const HermitianMatrix& x, RVector& out);

/// Row ℓ of `out` is the real coordinate vector of a_ℓ a_ℓ*.
void lift_operator(const CMatrix& rows, const HermitianVecBasis& basis, RMatrix& out);

/// Σ_ℓ w_ℓ a_ℓ a_ℓ*.
HermitianMatrix weighted_outer_sum(const CMatrix& rows, const RVector& weights);

/// Componentwise project_hyperbola. On failure throws the error of the
/// lowest failing index, prefixed with that index.
void project_batch(const RVector& xi1, const RVector& xi2, const RVector& delta, RVector& u1,
                   RVector& u2);

}  // namespace serial

namespace omp {

void quadratic_forms(const CMatrix& rows, const HermitianMatrix& x, RVector& out);
void lift_operator(const CMatrix& rows, const HermitianVecBasis& basis, RMatrix& out);
HermitianMatrix weighted_outer_sum(const CMatrix& rows, const RVector& weights);
void project_batch(const RVector& xi1, const RVector& xi2, const RVector& delta, RVector& u1,
                   RVector& u2);

}  // namespace omp

}  // namespace bdpr::kernels
