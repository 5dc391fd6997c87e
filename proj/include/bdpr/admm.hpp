#pragma once

#include <array>
#include <vector>

#include <Eigen/Cholesky>

#include "bdpr/hermitian.hpp"
#include "bdpr/measurements.hpp"

namespace bdpr {

/// Penalties and stopping rule of the ADMM scheme.
///
/// rho1 weighs the measurement splitting u_j = ⟨a a*, X_j⟩, rho2 the PSD
/// splitting X_j = Z_j. The run stops once
///   max(primal_split, primal_meas) ≤ tol_abs·√(k²+n²+2m) + tol_rel·primal scale
///   dual                          ≤ tol_abs·√(k²+n²+2m) + tol_rel·dual scale
/// where the primal scale is the largest norm among (X), (Z), (u), (A(X))
/// and the dual scale is max(ρ2‖(P1,P2)‖_F, ρ1‖(α1,α2)‖).
struct SolverConfig {
  double rho1 = 0.01;
  double rho2 = 1.0;
  int max_iters = 5000;
  double tol_abs = 1e-6;
  double tol_rel = 1e-5;
  /// Thinning of the residual history written to result files (0 keeps only
  /// the final entry) and period of verbose progress lines.
  int log_every = 100;
  /// Use the OpenMP kernels (true) or the serial reference kernels.
  bool parallel_kernels = true;
  bool verbose = false;

  void validate() const;
};

struct SolverState {
  HermitianMatrix X1, Z1, P1;  // k×k
  HermitianMatrix X2, Z2, P2;  // n×n
  RVector u1, u2;
  RVector alpha1, alpha2;
  int iter = 0;

  /// All-zero state for an instance.
  static SolverState zeros(Eigen::Index m, Eigen::Index k, Eigen::Index n);
};

/// Per-block data for the X-update: the lifted measurement operator V_j
/// (row ℓ = coordinates of a_ℓ a_ℓ* in the Hermitian basis) and the Cholesky
/// factor of A_j = ρ1·V_jᵀV_j + ρ2·I, computed once per solve.
struct XUpdateBlock {
  HermitianVecBasis basis;
  RMatrix lift;  // m × dim²
  Eigen::LLT<RMatrix> chol;
  RVector identity_coords;

  /// A_j reconstructed from the factor (for inspection and tests).
  RMatrix system_matrix() const;
};

struct XUpdateFactorization {
  XUpdateBlock block1;  // H side, rows b_ℓ
  XUpdateBlock block2;  // M side, rows c_ℓ
  double rho1;
  double rho2;
};

struct ResidualSample {
  int iter;
  double primal_split;
  double primal_meas;
  double dual;
};

struct SolverResult {
  HermitianMatrix H_hat;
  HermitianMatrix M_hat;
  int iters = 0;
  bool converged = false;
  std::vector<ResidualSample> residual_history;  // one entry per iteration
  double objective = 0.0;                        // Tr Ĥ + Tr M̂
  double wall_time = 0.0;                        // seconds
  SolverConfig config;
};

XUpdateFactorization precompute_xupdate(const MeasurementEnsemble& ensemble,
                                        const SolverConfig& config);

/// X_j ← argmin Tr X + (ρ1/2)Σ(⟨a a*, X⟩ − u − α)² + (ρ2/2)‖X − Z + P‖²_F.
std::pair<HermitianMatrix, HermitianMatrix> x_update(const SolverState& state,
                                                     const XUpdateFactorization& fact);

/// Z_j ← PSD projection of X_j + P_j.
std::pair<HermitianMatrix, HermitianMatrix> z_update(const SolverState& state);

/// (u1, u2) ← projection of (⟨a a*, X_j⟩ − α_j) onto {u1·u2 ≥ δ, u1 ≥ 0}.
std::pair<RVector, RVector> u_update(const SolverState& state, const XUpdateFactorization& fact,
                                     const RVector& delta, bool parallel = true);

struct DualUpdate {
  RVector alpha1, alpha2;
  HermitianMatrix P1, P2;
};

/// α_j ← α_j + u_j − A_j(X_j),  P_j ← P_j + X_j − Z_j.
DualUpdate dual_update(const SolverState& state, const XUpdateFactorization& fact);

struct Residuals {
  double primal_split;
  double primal_meas;
  double dual;
};

Residuals residuals(const SolverState& state, const XUpdateFactorization& fact,
                    const HermitianMatrix& Z1_prev, const HermitianMatrix& Z2_prev);

/// Runs the iteration from the zero state. Non-convergence is reported
/// through `converged`; numerical failures throw.
SolverResult solve(const ProblemInstance& instance, const SolverConfig& config = {});

}  // namespace bdpr
