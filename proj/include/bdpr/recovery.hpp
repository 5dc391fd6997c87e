#pragma once

#include "bdpr/admm.hpp"
#include "bdpr/hermitian.hpp"
#include "bdpr/measurements.hpp"

namespace bdpr {

inline constexpr double kDefaultSuccessThreshold = 0.01;

/// (α·hh*, α⁻¹·mm*) with α = ‖m‖/‖h‖, the member of the scaling orbit
/// with equal traces ‖h‖‖m‖.
LiftedPair balanced_truth(const CVector& h, const CVector& m);

struct Rank1Factor {
  CVector vector;      // √λ_max · v_max
  double rank1_ratio;  // λ_max / Tr H
};

/// Leading rank-1 factor of a PSD matrix. Throws InvalidArgument if the
/// smallest eigenvalue is below −1e-8·max(1, ‖H‖_F).
Rank1Factor extract_rank1(const HermitianMatrix& H);

/// ‖(Ĥ, M̂) − (H̃, M̃)‖_F / ‖(H̃, M̃)‖_F against the balanced truth.
double relative_error(const LiftedPair& result, const CVector& h, const CVector& m);

/// Distance between rank-1 factors of the result and the balanced truth
/// vectors (√α·h, m/√α), minimized over a global phase per vector, relative
/// to the truth norm. Diagnostic only.
double relative_error_vectors(const LiftedPair& result, const CVector& h, const CVector& m);

/// Strict: err < threshold.
bool is_success(double err, double threshold = kDefaultSuccessThreshold);

struct RecoveryReport {
  double alpha;
  double relative_error_lifted;
  double relative_error_vectors;
  double rank1_ratio_H;
  double rank1_ratio_M;
  bool success;
};

RecoveryReport score(const LiftedPair& result, const GroundTruth& truth,
                     double threshold = kDefaultSuccessThreshold);

}  // namespace bdpr
