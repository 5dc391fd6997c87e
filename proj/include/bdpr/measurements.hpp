#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "bdpr/hermitian.hpp"
#include "bdpr/rng.hpp"

namespace bdpr {

enum class SubspaceKind { Gaussian, PartialIdentity };

/// How the measurement rows relate to the subspace matrices.
///  - FourierConvolution: rows of √m·F·B and √m·F·C (F the unitary DFT),
///    i.e. y = |F(Bh ⊛ Cm)|.
///  - DirectGaussian: rows of √m·B and √m·C, so Gaussian subspaces give
///    b_ℓ, c_ℓ ~ Normal(0, I) directly.
enum class EnsembleModel { FourierConvolution, DirectGaussian };

std::string_view to_string(SubspaceKind k);
std::string_view to_string(EnsembleModel m);
SubspaceKind parse_subspace_kind(std::string_view s);
EnsembleModel parse_ensemble_model(std::string_view s);

struct SubspaceModel {
  SubspaceKind kind;
  Eigen::Index ambient;  // m
  Eigen::Index dim;      // k or n
};

/// The m pairs (b_ℓ, c_ℓ). Row ℓ of `b_rows` is b_ℓ*, so b_rows·h is the
/// vector of inner products ⟨b_ℓ, h⟩ = b_ℓ* h; likewise for `c_rows`.
struct MeasurementEnsemble {
  EnsembleModel model;
  CMatrix b_rows;  // m×k
  CMatrix c_rows;  // m×n

  Eigen::Index m() const { return b_rows.rows(); }
  Eigen::Index k() const { return b_rows.cols(); }
  Eigen::Index n() const { return c_rows.cols(); }
};

struct GroundTruth {
  CVector h;  // length k
  CVector m;  // length n
};

struct ProblemInstance {
  EnsembleModel model;
  SubspaceKind subspace_b;
  SubspaceKind subspace_c;
  std::uint64_t seed;
  CMatrix B;  // m×k subspace basis
  CMatrix C;  // m×n subspace basis
  MeasurementEnsemble ensemble;
  RVector y;      // phaseless magnitudes
  RVector delta;  // m·y²
  std::optional<GroundTruth> truth;

  Eigen::Index m() const { return ensemble.m(); }
  Eigen::Index k() const { return ensemble.k(); }
  Eigen::Index n() const { return ensemble.n(); }
};

/// Unitary DFT: (Fx)[ω] = m^{-1/2} Σ_t x[t] e^{−2πiωt/m}.
CVector unitary_dft(const CVector& x);
CVector inverse_unitary_dft(const CVector& x);

/// (w ⊛ x)[t] = Σ_s w[s] x[(t − s) mod m], evaluated through the DFT.
CVector circular_convolve(const CVector& w, const CVector& x);

/// Subspace basis per model; Gaussian entries are real Normal(0, 1/m) drawn
/// row-major from `rng`. Throws InvalidArgument if dim > ambient.
CMatrix gen_subspace(const SubspaceModel& model, Rng& rng);

/// Rows √m·F·B (Fourier) or √m·B (direct) for both subspaces.
MeasurementEnsemble make_ensemble(EnsembleModel model, const CMatrix& B, const CMatrix& C);

/// Magnitudes (1/√m)|⟨b_ℓ, h⟩⟨c_ℓ, m⟩| computed from the rows.
RVector measure_from_rows(const MeasurementEnsemble& ensemble, const CVector& h, const CVector& m);

/// Builds an instance from explicit subspaces and truth. For the Fourier model
/// y is computed as |F(Bh ⊛ Cm)|, otherwise from the rows.
ProblemInstance instance_from_truth(EnsembleModel model, SubspaceKind kind_b, SubspaceKind kind_c,
                                    CMatrix B, CMatrix C, const CVector& h, const CVector& m,
                                    std::uint64_t seed);

/// Seeded instance. The generator is Rng(seed); draws happen in the order
/// B (row-major), C (row-major), h, m, with h and m standard normal reals.
/// Identical arguments give bit-identical instances.
ProblemInstance gen_instance(Eigen::Index m, Eigen::Index k, Eigen::Index n, SubspaceKind kind_b,
                             SubspaceKind kind_c, EnsembleModel model, std::uint64_t seed);

/// (u, v) with u_ℓ = b_ℓ* H b_ℓ and v_ℓ = c_ℓ* M c_ℓ.
std::pair<RVector, RVector> lifted_forward(const MeasurementEnsemble& ensemble,
                                           const HermitianMatrix& H, const HermitianMatrix& M);

/// Largest violation of y_ℓ² = (1/m)⟨b_ℓb_ℓ*, hh*⟩⟨c_ℓc_ℓ*, mm*⟩, relative
/// per component (with an absolute floor of 1e-14 of the largest measurement).
double truth_consistency_error(const ProblemInstance& inst);

/// Checks dimensions, nonnegativity, δ = m·y², and truth consistency
/// (to `truth_tol`). Throws InvalidArgument naming the first violation.
void validate_instance(const ProblemInstance& inst, double truth_tol = 1e-9);

}  // namespace bdpr
