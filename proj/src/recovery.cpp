#include "bdpr/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bdpr/error.hpp"

namespace bdpr {

namespace {

double balancing_alpha(const CVector& h, const CVector& m) {
  const double nh = h.norm();
  const double nm = m.norm();
  if (nh == 0.0 || nm == 0.0) throw InvalidArgument("balanced_truth: zero truth vector");
  return nm / nh;
}

// min over θ of ‖a − e^{iθ} b‖² = ‖a‖² + ‖b‖² − 2|⟨a, b⟩|
double phase_aligned_sq_distance(const CVector& a, const CVector& b) {
  return std::max(0.0, a.squaredNorm() + b.squaredNorm() - 2.0 * std::abs(a.dot(b)));
}

}  // namespace

LiftedPair balanced_truth(const CVector& h, const CVector& m) {
  const double alpha = balancing_alpha(h, m);
  return {HermitianMatrix::outer(h) * alpha, HermitianMatrix::outer(m) * (1.0 / alpha)};
}

Rank1Factor extract_rank1(const HermitianMatrix& H) {
  const double lo = min_eigenvalue(H);
  if (lo < -1e-8 * std::max(1.0, H.frobenius_norm())) {
    throw InvalidArgument("extract_rank1: matrix is not PSD (min eigenvalue " +
                          std::to_string(lo) + ")");
  }
  const EigPair top = top_eigpair(H);
  const double lambda = std::max(top.value, 0.0);
  const double tr = H.trace();
  const double ratio = tr > 0.0 ? std::clamp(lambda / tr, 0.0, 1.0) : 0.0;
  return {std::sqrt(lambda) * top.vector, ratio};
}

double relative_error(const LiftedPair& result, const CVector& h, const CVector& m) {
  if (result.H.dim() != h.size() || result.M.dim() != m.size()) {
    throw InvalidArgument("relative_error: dimension mismatch");
  }
  const LiftedPair truth = balanced_truth(h, m);
  const double num = std::hypot((result.H - truth.H).frobenius_norm(),
                                (result.M - truth.M).frobenius_norm());
  return num / truth.frobenius_norm();
}

double relative_error_vectors(const LiftedPair& result, const CVector& h, const CVector& m) {
  if (result.H.dim() != h.size() || result.M.dim() != m.size()) {
    throw InvalidArgument("relative_error_vectors: dimension mismatch");
  }
  const double root_alpha = std::sqrt(balancing_alpha(h, m));
  const CVector ht = root_alpha * h;
  const CVector mt = m / root_alpha;
  const CVector hh = extract_rank1(result.H).vector;
  const CVector mh = extract_rank1(result.M).vector;
  const double num = phase_aligned_sq_distance(hh, ht) + phase_aligned_sq_distance(mh, mt);
  return std::sqrt(num / (ht.squaredNorm() + mt.squaredNorm()));
}

bool is_success(double err, double threshold) { return err < threshold; }

RecoveryReport score(const LiftedPair& result, const GroundTruth& truth, double threshold) {
  RecoveryReport r{};
  r.alpha = balancing_alpha(truth.h, truth.m);
  r.relative_error_lifted = relative_error(result, truth.h, truth.m);
  r.relative_error_vectors = relative_error_vectors(result, truth.h, truth.m);
  r.rank1_ratio_H = extract_rank1(result.H).rank1_ratio;
  r.rank1_ratio_M = extract_rank1(result.M).rank1_ratio;
  r.success = is_success(r.relative_error_lifted, threshold);
  return r;
}

}  // namespace bdpr
