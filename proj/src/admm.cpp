#include "bdpr/admm.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <tuple>
#include <utility>

#include "bdpr/error.hpp"
#include "bdpr/hyperbola.hpp"
#include "bdpr/kernels.hpp"

namespace bdpr {

void SolverConfig::validate() const {
  if (!(rho1 >= 0.0) || !std::isfinite(rho1)) throw InvalidArgument("rho1 must be >= 0");
  if (!(rho2 > 0.0) || !std::isfinite(rho2)) throw InvalidArgument("rho2 must be > 0");
  if (max_iters <= 0) throw InvalidArgument("max_iters must be positive");
  if (!(tol_abs > 0.0)) throw InvalidArgument("tol_abs must be positive");
  if (!(tol_rel > 0.0)) throw InvalidArgument("tol_rel must be positive");
  if (log_every < 0) throw InvalidArgument("log_every must be nonnegative");
}

SolverState SolverState::zeros(Eigen::Index m, Eigen::Index k, Eigen::Index n) {
  SolverState s;
  s.X1 = s.Z1 = s.P1 = HermitianMatrix::zero(k);
  s.X2 = s.Z2 = s.P2 = HermitianMatrix::zero(n);
  s.u1 = s.u2 = s.alpha1 = s.alpha2 = RVector::Zero(m);
  return s;
}

RMatrix XUpdateBlock::system_matrix() const { return chol.reconstructedMatrix(); }

namespace {

XUpdateBlock make_block(const CMatrix& rows, const SolverConfig& config) {
  XUpdateBlock block{HermitianVecBasis(rows.cols()), RMatrix(), {}, RVector()};
  if (config.parallel_kernels) {
    kernels::omp::lift_operator(rows, block.basis, block.lift);
  } else {
    kernels::serial::lift_operator(rows, block.basis, block.lift);
  }
  RMatrix a = RMatrix::Identity(block.basis.size(), block.basis.size()) * config.rho2;
  a.selfadjointView<Eigen::Lower>().rankUpdate(block.lift.transpose(), config.rho1);
  block.chol.compute(a.selfadjointView<Eigen::Lower>());
  if (block.chol.info() != Eigen::Success) {
    throw NumericalError("precompute_xupdate: Cholesky factorization failed");
  }
  block.identity_coords = block.basis.to_real_vec(HermitianMatrix::identity(rows.cols()));
  return block;
}

HermitianMatrix solve_block(const XUpdateBlock& block, const HermitianMatrix& Z,
                            const HermitianMatrix& P, const RVector& u, const RVector& alpha,
                            double rho1, double rho2) {
  if (Z.dim() != block.basis.dim() || u.size() != block.lift.rows()) {
    throw InvalidArgument("x_update: state does not match factorization");
  }
  RVector rhs = rho1 * (block.lift.transpose() * (u + alpha));
  rhs += rho2 * block.basis.to_real_vec(Z - P);
  rhs -= block.identity_coords;
  return block.basis.from_real_vec(block.chol.solve(rhs));
}

RVector apply_lift(const XUpdateBlock& block, const HermitianMatrix& X) {
  return block.lift * block.basis.to_real_vec(X);
}

double pair_norm(const HermitianMatrix& a, const HermitianMatrix& b) {
  return std::hypot(a.frobenius_norm(), b.frobenius_norm());
}

double pair_norm(const RVector& a, const RVector& b) { return std::hypot(a.norm(), b.norm()); }

}  // namespace

XUpdateFactorization precompute_xupdate(const MeasurementEnsemble& ensemble,
                                        const SolverConfig& config) {
  config.validate();
  return {make_block(ensemble.b_rows, config), make_block(ensemble.c_rows, config), config.rho1,
          config.rho2};
}

std::pair<HermitianMatrix, HermitianMatrix> x_update(const SolverState& state,
                                                     const XUpdateFactorization& fact) {
  return {solve_block(fact.block1, state.Z1, state.P1, state.u1, state.alpha1, fact.rho1, fact.rho2),
          solve_block(fact.block2, state.Z2, state.P2, state.u2, state.alpha2, fact.rho1, fact.rho2)};
}

std::pair<HermitianMatrix, HermitianMatrix> z_update(const SolverState& state) {
  return {project_psd(state.X1 + state.P1), project_psd(state.X2 + state.P2)};
}

std::pair<RVector, RVector> u_update(const SolverState& state, const XUpdateFactorization& fact,
                                     const RVector& delta, bool parallel) {
  const RVector xi1 = apply_lift(fact.block1, state.X1) - state.alpha1;
  const RVector xi2 = apply_lift(fact.block2, state.X2) - state.alpha2;
  RVector u1;
  RVector u2;
  if (parallel) {
    kernels::omp::project_batch(xi1, xi2, delta, u1, u2);
  } else {
    kernels::serial::project_batch(xi1, xi2, delta, u1, u2);
  }
  return {std::move(u1), std::move(u2)};
}

DualUpdate dual_update(const SolverState& state, const XUpdateFactorization& fact) {
  return {state.alpha1 + state.u1 - apply_lift(fact.block1, state.X1),
          state.alpha2 + state.u2 - apply_lift(fact.block2, state.X2),
          state.P1 + state.X1 - state.Z1, state.P2 + state.X2 - state.Z2};
}

Residuals residuals(const SolverState& state, const XUpdateFactorization& fact,
                    const HermitianMatrix& Z1_prev, const HermitianMatrix& Z2_prev) {
  const double split = pair_norm(state.X1 - state.Z1, state.X2 - state.Z2);
  const double meas = pair_norm(RVector(state.u1 - apply_lift(fact.block1, state.X1)),
                                RVector(state.u2 - apply_lift(fact.block2, state.X2)));
  const double dual = fact.rho2 * pair_norm(state.Z1 - Z1_prev, state.Z2 - Z2_prev);
  return {split, meas, dual};
}

SolverResult solve(const ProblemInstance& instance, const SolverConfig& config) {
  config.validate();
  const auto t0 = std::chrono::steady_clock::now();
  const Eigen::Index m = instance.m();
  const Eigen::Index k = instance.k();
  const Eigen::Index n = instance.n();

  const XUpdateFactorization fact = precompute_xupdate(instance.ensemble, config);
  SolverState state = SolverState::zeros(m, k, n);

  SolverResult result;
  result.config = config;
  result.residual_history.reserve(static_cast<std::size_t>(config.max_iters));
  const double abs_floor =
      config.tol_abs * std::sqrt(static_cast<double>(k * k + n * n + 2 * m));

  for (int it = 1; it <= config.max_iters; ++it) {
    std::tie(state.X1, state.X2) = x_update(state, fact);
    const HermitianMatrix Z1_prev = state.Z1;
    const HermitianMatrix Z2_prev = state.Z2;
    std::tie(state.Z1, state.Z2) = z_update(state);

    const RVector ax1 = apply_lift(fact.block1, state.X1);
    const RVector ax2 = apply_lift(fact.block2, state.X2);
    {
      const RVector xi1 = ax1 - state.alpha1;
      const RVector xi2 = ax2 - state.alpha2;
      if (config.parallel_kernels) {
        kernels::omp::project_batch(xi1, xi2, instance.delta, state.u1, state.u2);
      } else {
        kernels::serial::project_batch(xi1, xi2, instance.delta, state.u1, state.u2);
      }
    }

    const RVector r1 = state.u1 - ax1;
    const RVector r2 = state.u2 - ax2;
    state.alpha1 += r1;
    state.alpha2 += r2;
    state.P1 = state.P1 + state.X1 - state.Z1;
    state.P2 = state.P2 + state.X2 - state.Z2;
    state.iter = it;

    const ResidualSample sample{it, pair_norm(state.X1 - state.Z1, state.X2 - state.Z2),
                                pair_norm(r1, r2),
                                config.rho2 * pair_norm(state.Z1 - Z1_prev, state.Z2 - Z2_prev)};
    result.residual_history.push_back(sample);

    const double primal_scale =
        std::max({pair_norm(state.X1, state.X2), pair_norm(state.Z1, state.Z2),
                  pair_norm(state.u1, state.u2), pair_norm(ax1, ax2)});
    const double dual_scale = std::max(config.rho2 * pair_norm(state.P1, state.P2),
                                       config.rho1 * pair_norm(state.alpha1, state.alpha2));
    const bool primal_ok =
        std::max(sample.primal_split, sample.primal_meas) <= abs_floor + config.tol_rel * primal_scale;
    const bool dual_ok = sample.dual <= abs_floor + config.tol_rel * dual_scale;

    if (config.verbose && config.log_every > 0 && it % config.log_every == 0) {
      std::fprintf(stderr, "iter %d  split %.3e  meas %.3e  dual %.3e  obj %.6f\n", it,
                   sample.primal_split, sample.primal_meas, sample.dual,
                   state.Z1.trace() + state.Z2.trace());
    }
    if (primal_ok && dual_ok) {
      result.converged = true;
      break;
    }
  }

  result.iters = state.iter;
  result.H_hat = state.Z1;
  result.M_hat = state.Z2;
  result.objective = state.Z1.trace() + state.Z2.trace();
  result.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

}  // namespace bdpr
