#include <cmath>
#include <numbers>
#include <random>

#include "bdpr/error.hpp"
#include "bdpr/measurements.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace bdpr;

namespace {

CVector naive_dft(const CVector& x) {
  const auto m = x.size();
  CVector out(m);
  for (Eigen::Index w = 0; w < m; ++w) {
    Complex s = 0.0;
    for (Eigen::Index t = 0; t < m; ++t) {
      const double ang = -2.0 * std::numbers::pi * static_cast<double>(w) * static_cast<double>(t) /
                         static_cast<double>(m);
      s += x(t) * Complex(std::cos(ang), std::sin(ang));
    }
    out(w) = s / std::sqrt(static_cast<double>(m));
  }
  return out;
}

CVector naive_convolve(const CVector& w, const CVector& x) {
  const auto m = w.size();
  CVector out = CVector::Zero(m);
  for (Eigen::Index t = 0; t < m; ++t)
    for (Eigen::Index s = 0; s < m; ++s) out(t) += w(s) * x((t - s + m) % m);
  return out;
}

}  // namespace

TEST_CASE("unitary DFT agrees with direct summation and is unitary") {
  std::mt19937_64 g(11);
  for (int m : {1, 2, 7, 16, 31}) {
    const CVector x = oracle::random_cvector(g, m);
    const CVector f = unitary_dft(x);
    CHECK((f - naive_dft(x)).norm() < 1e-12 * x.norm());
    CHECK(f.norm() == doctest::Approx(x.norm()).epsilon(1e-12));
    CHECK((inverse_unitary_dft(f) - x).norm() < 1e-12 * x.norm());
  }
}

TEST_CASE("circular convolution matches the index-mod-m definition") {
  std::mt19937_64 g(12);
  for (int m : {1, 5, 12}) {
    const CVector w = oracle::random_cvector(g, m);
    const CVector x = oracle::random_cvector(g, m);
    CHECK((circular_convolve(w, x) - naive_convolve(w, x)).norm() < 1e-12 * w.norm() * x.norm());
  }
}

TEST_CASE("subspace generators") {
  Rng rng(3);
  const CMatrix id = gen_subspace({SubspaceKind::PartialIdentity, 6, 2}, rng);
  CHECK(id.rows() == 6);
  CHECK(id.cols() == 2);
  CHECK((id - CMatrix::Identity(6, 2)).norm() == 0.0);

  Rng r2(3);
  const CMatrix gs = gen_subspace({SubspaceKind::Gaussian, 400, 50}, r2);
  CHECK(gs.imag().norm() == 0.0);
  // entries Normal(0, 1/m): mean square 1/m
  CHECK(gs.squaredNorm() / (400.0 * 50.0) == doctest::Approx(1.0 / 400.0).epsilon(0.05));

  Rng r3(3);
  CHECK_THROWS_AS(gen_subspace({SubspaceKind::Gaussian, 3, 4}, r3), InvalidArgument);
}

TEST_CASE("ensemble rows follow the model") {
  std::mt19937_64 g(13);
  const int m = 9;
  const CMatrix B = oracle::random_complex(g, m, 2);
  const CMatrix C = oracle::random_complex(g, m, 3);
  const MeasurementEnsemble direct = make_ensemble(EnsembleModel::DirectGaussian, B, C);
  CHECK((direct.b_rows - std::sqrt(9.0) * B).norm() < 1e-14);
  const MeasurementEnsemble four = make_ensemble(EnsembleModel::FourierConvolution, B, C);
  for (int j = 0; j < 3; ++j) {
    CHECK((four.c_rows.col(j) - 3.0 * naive_dft(C.col(j))).norm() < 1e-12 * C.norm());
  }
}

TEST_CASE("fourier instance magnitudes equal |F(w conv x)| and satisfy the lifted model") {
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    const ProblemInstance inst = gen_instance(24, 3, 4, SubspaceKind::Gaussian,
                                              SubspaceKind::PartialIdentity,
                                              EnsembleModel::FourierConvolution, seed);
    const CVector w = inst.B * inst.truth->h;
    const CVector x = inst.C * inst.truth->m;
    const CVector ref = naive_dft(naive_convolve(w, x));
    for (Eigen::Index l = 0; l < 24; ++l) CHECK(inst.y(l) == doctest::Approx(std::abs(ref(l))).epsilon(1e-10));
    CHECK(truth_consistency_error(inst) < 1e-10);
    for (Eigen::Index l = 0; l < 24; ++l) {
      CHECK(inst.delta(l) == doctest::Approx(24.0 * inst.y(l) * inst.y(l)).epsilon(1e-14));
    }
  }
}

TEST_CASE("gen_instance is reproducible and seed sensitive") {
  const auto a = gen_instance(20, 2, 3, SubspaceKind::Gaussian, SubspaceKind::Gaussian,
                              EnsembleModel::DirectGaussian, 99);
  const auto b = gen_instance(20, 2, 3, SubspaceKind::Gaussian, SubspaceKind::Gaussian,
                              EnsembleModel::DirectGaussian, 99);
  const auto c = gen_instance(20, 2, 3, SubspaceKind::Gaussian, SubspaceKind::Gaussian,
                              EnsembleModel::DirectGaussian, 100);
  CHECK(a.B == b.B);
  CHECK(a.y == b.y);
  CHECK(a.truth->h == b.truth->h);
  CHECK(a.y != c.y);
  CHECK_THROWS_AS(gen_instance(3, 4, 1, SubspaceKind::Gaussian, SubspaceKind::Gaussian,
                               EnsembleModel::DirectGaussian, 1),
                  InvalidArgument);
}

TEST_CASE("lifted_forward evaluates the quadratic forms") {
  std::mt19937_64 g(14);
  const auto inst = gen_instance(15, 3, 2, SubspaceKind::Gaussian, SubspaceKind::Gaussian,
                                 EnsembleModel::FourierConvolution, 5);
  const HermitianMatrix H = oracle::random_hermitian(g, 3);
  const HermitianMatrix M = oracle::random_hermitian(g, 2);
  const auto [u, v] = lifted_forward(inst.ensemble, H, M);
  for (Eigen::Index l = 0; l < 15; ++l) {
    const CVector b = inst.ensemble.b_rows.row(l).adjoint();
    const CVector c = inst.ensemble.c_rows.row(l).adjoint();
    CHECK(u(l) == doctest::Approx(oracle::quadratic_form(b, H.matrix())).epsilon(1e-12));
    CHECK(v(l) == doctest::Approx(oracle::quadratic_form(c, M.matrix())).epsilon(1e-12));
  }
}

TEST_CASE("validate_instance rejects inconsistent data") {
  auto inst = gen_instance(12, 2, 2, SubspaceKind::Gaussian, SubspaceKind::Gaussian,
                           EnsembleModel::DirectGaussian, 4);
  CHECK_NOTHROW(validate_instance(inst));

  auto neg = inst;
  neg.y(0) = -1.0;
  CHECK_THROWS_AS(validate_instance(neg), InvalidArgument);

  auto bad_delta = inst;
  bad_delta.delta(3) *= 1.01;
  CHECK_THROWS_AS(validate_instance(bad_delta), InvalidArgument);

  auto bad_truth = inst;
  bad_truth.truth->h(0) += 0.5;
  CHECK_THROWS_AS(validate_instance(bad_truth), InvalidArgument);

  auto short_y = inst;
  short_y.y.conservativeResize(5);
  CHECK_THROWS_AS(validate_instance(short_y), InvalidArgument);
}

TEST_CASE("model and subspace names round-trip") {
  for (auto m : {EnsembleModel::DirectGaussian, EnsembleModel::FourierConvolution}) {
    CHECK(parse_ensemble_model(to_string(m)) == m);
  }
  for (auto k : {SubspaceKind::Gaussian, SubspaceKind::PartialIdentity}) {
    CHECK(parse_subspace_kind(to_string(k)) == k);
  }
  CHECK_THROWS_AS(parse_ensemble_model("fft"), InvalidArgument);
  CHECK_THROWS_AS(parse_subspace_kind(""), InvalidArgument);
}
