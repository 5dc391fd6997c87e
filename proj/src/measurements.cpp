#include "bdpr/measurements.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "bdpr/error.hpp"
#include "bdpr/kernels.hpp"

namespace bdpr {

std::string_view to_string(SubspaceKind k) {
  return k == SubspaceKind::Gaussian ? "gaussian" : "partial-identity";
}

std::string_view to_string(EnsembleModel m) {
  return m == EnsembleModel::FourierConvolution ? "fourier-convolution" : "direct-gaussian";
}

SubspaceKind parse_subspace_kind(std::string_view s) {
  if (s == "gaussian") return SubspaceKind::Gaussian;
  if (s == "partial-identity") return SubspaceKind::PartialIdentity;
  throw InvalidArgument("unknown subspace kind '" + std::string(s) + "'");
}

EnsembleModel parse_ensemble_model(std::string_view s) {
  if (s == "fourier-convolution") return EnsembleModel::FourierConvolution;
  if (s == "direct-gaussian") return EnsembleModel::DirectGaussian;
  throw InvalidArgument("unknown ensemble model '" + std::string(s) + "'");
}

namespace {

// Unitary DFT matrix with sign ∓ in the exponent; the index product is
// reduced mod m before forming the angle.
CMatrix dft_matrix(Eigen::Index m, double sign) {
  CMatrix f(m, m);
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  for (Eigen::Index w = 0; w < m; ++w) {
    for (Eigen::Index t = 0; t < m; ++t) {
      const double angle = sign * 2.0 * std::numbers::pi * static_cast<double>((w * t) % m) /
                           static_cast<double>(m);
      f(w, t) = std::polar(scale, angle);
    }
  }
  return f;
}

}  // namespace

CVector unitary_dft(const CVector& x) { return dft_matrix(x.size(), -1.0) * x; }

CVector inverse_unitary_dft(const CVector& x) { return dft_matrix(x.size(), 1.0) * x; }

CVector circular_convolve(const CVector& w, const CVector& x) {
  if (w.size() != x.size()) throw InvalidArgument("circular_convolve: length mismatch");
  if (w.size() == 0) return CVector();
  const double root_m = std::sqrt(static_cast<double>(w.size()));
  // F(w ⊛ x) = √m · Fw ⊙ Fx for the unitary F
  const CVector spectrum = root_m * unitary_dft(w).cwiseProduct(unitary_dft(x));
  return inverse_unitary_dft(spectrum);
}

CMatrix gen_subspace(const SubspaceModel& model, Rng& rng) {
  if (model.ambient <= 0 || model.dim <= 0) {
    throw InvalidArgument("gen_subspace: dimensions must be positive");
  }
  if (model.dim > model.ambient) {
    throw InvalidArgument("gen_subspace: dim " + std::to_string(model.dim) + " exceeds ambient " +
                          std::to_string(model.ambient));
  }
  CMatrix out = CMatrix::Zero(model.ambient, model.dim);
  if (model.kind == SubspaceKind::PartialIdentity) {
    for (Eigen::Index i = 0; i < model.dim; ++i) out(i, i) = 1.0;
    return out;
  }
  const double sd = 1.0 / std::sqrt(static_cast<double>(model.ambient));
  for (Eigen::Index l = 0; l < model.ambient; ++l) {
    for (Eigen::Index i = 0; i < model.dim; ++i) out(l, i) = sd * rng.normal();
  }
  return out;
}

MeasurementEnsemble make_ensemble(EnsembleModel model, const CMatrix& B, const CMatrix& C) {
  if (B.rows() != C.rows()) throw InvalidArgument("make_ensemble: B and C row counts differ");
  const Eigen::Index m = B.rows();
  const double root_m = std::sqrt(static_cast<double>(m));
  if (model == EnsembleModel::DirectGaussian) {
    return {model, root_m * B, root_m * C};
  }
  const CMatrix f = dft_matrix(m, -1.0);
  return {model, root_m * (f * B), root_m * (f * C)};
}

RVector measure_from_rows(const MeasurementEnsemble& ensemble, const CVector& h,
                          const CVector& m) {
  if (h.size() != ensemble.k() || m.size() != ensemble.n()) {
    throw InvalidArgument("measure_from_rows: dimension mismatch");
  }
  const double inv_root_m = 1.0 / std::sqrt(static_cast<double>(ensemble.m()));
  const CVector bh = ensemble.b_rows * h;
  const CVector cm = ensemble.c_rows * m;
  return inv_root_m * bh.cwiseProduct(cm).cwiseAbs();
}

ProblemInstance instance_from_truth(EnsembleModel model, SubspaceKind kind_b, SubspaceKind kind_c,
                                    CMatrix B, CMatrix C, const CVector& h, const CVector& m,
                                    std::uint64_t seed) {
  if (B.cols() != h.size() || C.cols() != m.size()) {
    throw InvalidArgument("instance_from_truth: truth does not match subspace dimensions");
  }
  MeasurementEnsemble ens = make_ensemble(model, B, C);
  RVector y;
  if (model == EnsembleModel::FourierConvolution) {
    const CVector w = B * h;
    const CVector x = C * m;
    y = unitary_dft(circular_convolve(w, x)).cwiseAbs();
  } else {
    y = measure_from_rows(ens, h, m);
  }
  const double mm = static_cast<double>(B.rows());
  RVector delta = mm * y.cwiseAbs2();
  return ProblemInstance{model,          kind_b,        kind_c,          seed,
                         std::move(B),   std::move(C),  std::move(ens),  std::move(y),
                         std::move(delta), GroundTruth{h, m}};
}

ProblemInstance gen_instance(Eigen::Index m, Eigen::Index k, Eigen::Index n, SubspaceKind kind_b,
                             SubspaceKind kind_c, EnsembleModel model, std::uint64_t seed) {
  if (m <= 0 || k <= 0 || n <= 0) throw InvalidArgument("gen_instance: dimensions must be positive");
  if (k > m || n > m) throw InvalidArgument("gen_instance: k and n must not exceed m");
  Rng rng(seed);
  CMatrix B = gen_subspace({kind_b, m, k}, rng);
  CMatrix C = gen_subspace({kind_c, m, n}, rng);
  CVector h(k);
  for (Eigen::Index i = 0; i < k; ++i) h(i) = rng.normal();
  CVector mv(n);
  for (Eigen::Index i = 0; i < n; ++i) mv(i) = rng.normal();
  return instance_from_truth(model, kind_b, kind_c, std::move(B), std::move(C), h, mv, seed);
}

std::pair<RVector, RVector> lifted_forward(const MeasurementEnsemble& ensemble,
                                           const HermitianMatrix& H, const HermitianMatrix& M) {
  if (H.dim() != ensemble.k() || M.dim() != ensemble.n()) {
    throw InvalidArgument("lifted_forward: dimension mismatch");
  }
  RVector u;
  RVector v;
  kernels::omp::quadratic_forms(ensemble.b_rows, H, u);
  kernels::omp::quadratic_forms(ensemble.c_rows, M, v);
  return {std::move(u), std::move(v)};
}

double truth_consistency_error(const ProblemInstance& inst) {
  if (!inst.truth) return 0.0;
  const auto& t = *inst.truth;
  const auto [u, v] = lifted_forward(inst.ensemble, HermitianMatrix::outer(t.h),
                                     HermitianMatrix::outer(t.m));
  const RVector lifted = u.cwiseProduct(v) / static_cast<double>(inst.m());
  const RVector y2 = inst.y.cwiseAbs2();
  const double floor = 1e-14 * std::max(lifted.cwiseAbs().maxCoeff(), y2.maxCoeff());
  double worst = 0.0;
  for (Eigen::Index l = 0; l < inst.m(); ++l) {
    const double denom = std::max({std::abs(lifted(l)), y2(l), floor, 1e-300});
    worst = std::max(worst, std::abs(lifted(l) - y2(l)) / denom);
  }
  return worst;
}

void validate_instance(const ProblemInstance& inst, double truth_tol) {
  const Eigen::Index m = inst.B.rows();
  if (m <= 0 || inst.B.cols() <= 0 || inst.C.cols() <= 0) {
    throw InvalidArgument("instance: empty dimensions");
  }
  if (inst.C.rows() != m || inst.y.size() != m || inst.delta.size() != m ||
      inst.ensemble.m() != m || inst.ensemble.k() != inst.B.cols() ||
      inst.ensemble.n() != inst.C.cols()) {
    throw InvalidArgument("instance: inconsistent dimensions");
  }
  if (inst.B.cols() > m || inst.C.cols() > m) {
    throw InvalidArgument("instance: k and n must not exceed m");
  }
  if (!inst.y.allFinite() || !inst.delta.allFinite() || !inst.B.allFinite() ||
      !inst.C.allFinite()) {
    throw InvalidArgument("instance: non-finite data");
  }
  for (Eigen::Index l = 0; l < m; ++l) {
    if (inst.y(l) < 0.0) throw InvalidArgument("instance: negative y at " + std::to_string(l));
    const double expect = static_cast<double>(m) * inst.y(l) * inst.y(l);
    if (std::abs(inst.delta(l) - expect) > 1e-12 * std::max(1.0, expect)) {
      throw InvalidArgument("instance: delta != m*y^2 at " + std::to_string(l));
    }
  }
  if (inst.truth) {
    if (inst.truth->h.size() != inst.B.cols() || inst.truth->m.size() != inst.C.cols()) {
      throw InvalidArgument("instance: truth dimensions do not match subspaces");
    }
    const double err = truth_consistency_error(inst);
    if (err > truth_tol) {
      throw InvalidArgument("instance: truth inconsistent with y (relative error " +
                            std::to_string(err) + ")");
    }
  }
}

}  // namespace bdpr
