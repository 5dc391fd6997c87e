#include <cmath>
#include <random>

#include "bdpr/error.hpp"
#include "bdpr/recovery.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace bdpr;

TEST_CASE("balanced truth has equal traces ||h|| ||m|| and is scale invariant") {
  std::mt19937_64 g(51);
  const CVector h = oracle::random_cvector(g, 3);
  const CVector m = oracle::random_cvector(g, 4);
  const LiftedPair t = balanced_truth(h, m);
  CHECK(t.H.trace() == doctest::Approx(h.norm() * m.norm()));
  CHECK(t.M.trace() == doctest::Approx(h.norm() * m.norm()));
  const LiftedPair u = balanced_truth(h * 7.0, m / 7.0);
  CHECK(oracle::frob_distance(t.H.matrix(), u.H.matrix()) < 1e-12 * t.H.frobenius_norm());
  CHECK_THROWS_AS(balanced_truth(CVector::Zero(3), m), InvalidArgument);
}

TEST_CASE("relative error is zero at the balanced truth and scale/phase invariant") {
  std::mt19937_64 g(52);
  const CVector h = oracle::random_cvector(g, 3);
  const CVector m = oracle::random_cvector(g, 2);
  const LiftedPair t = balanced_truth(h, m);
  CHECK(relative_error(t, h, m) < 1e-12);
  CHECK(relative_error(t, h * Complex(0, 3), m / 3.0) < 1e-12);
  CHECK(relative_error_vectors(t, h, m) < 1e-7);
}

TEST_CASE("relative error matches its definition") {
  std::mt19937_64 g(53);
  const CVector h = oracle::random_cvector(g, 2);
  const CVector m = oracle::random_cvector(g, 3);
  const LiftedPair t = balanced_truth(h, m);
  const LiftedPair r{t.H * 1.1, t.M};
  const double expected = 0.1 * t.H.frobenius_norm() /
                          std::hypot(t.H.frobenius_norm(), t.M.frobenius_norm());
  CHECK(relative_error(r, h, m) == doctest::Approx(expected).epsilon(1e-12));
  // unbalanced but otherwise exact pair is not a success
  const LiftedPair unbalanced{t.H * 2.0, t.M * 0.5};
  CHECK(relative_error(unbalanced, h, m) > 0.1);
  CHECK_THROWS_AS(relative_error(r, m, h), InvalidArgument);
}

TEST_CASE("extract_rank1") {
  std::mt19937_64 g(54);
  const CVector v = oracle::random_cvector(g, 4);
  const Rank1Factor f = extract_rank1(HermitianMatrix::outer(v));
  CHECK(f.rank1_ratio == doctest::Approx(1.0));
  CHECK(std::abs(std::abs(f.vector.dot(v)) - v.squaredNorm()) < 1e-10 * v.squaredNorm());

  CHECK(extract_rank1(HermitianMatrix::identity(4)).rank1_ratio == doctest::Approx(0.25));
  CHECK(extract_rank1(HermitianMatrix::zero(3)).rank1_ratio == 0.0);

  CMatrix d = CMatrix::Identity(2, 2);
  d(1, 1) = -0.5;
  CHECK_THROWS_AS(extract_rank1(HermitianMatrix(d)), InvalidArgument);
}

TEST_CASE("success threshold is strict") {
  CHECK(is_success(0.0099));
  CHECK_FALSE(is_success(0.01));
  CHECK(is_success(0.05, 0.1));
}

TEST_CASE("score combines the metrics") {
  std::mt19937_64 g(55);
  const CVector h = oracle::random_cvector(g, 3);
  const CVector m = oracle::random_cvector(g, 3);
  const LiftedPair t = balanced_truth(h, m);
  const RecoveryReport rep = score(t, GroundTruth{h, m});
  CHECK(rep.success);
  CHECK(rep.alpha == doctest::Approx(m.norm() / h.norm()));
  CHECK(rep.rank1_ratio_M == doctest::Approx(1.0));
  const RecoveryReport bad = score({t.H * 1.5, t.M}, GroundTruth{h, m});
  CHECK_FALSE(bad.success);
}
