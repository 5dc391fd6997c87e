#include "bdpr/hyperbola.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "bdpr/error.hpp"
#include "bdpr/kernels.hpp"

namespace bdpr {

namespace {

using Quartic = std::array<double, 4>;  // a3, a2, a1, a0

struct Eval {
  double p;
  double dp;
};

Eval evaluate(const Quartic& a, double x) {
  // Horner for p and p'
  double p = 1.0;
  double dp = 0.0;
  for (double c : a) {
    dp = dp * x + p;
    p = p * x + c;
  }
  return {p, dp};
}

double newton_polish(const Quartic& a, double x) {
  double best_x = x;
  double best_r = std::abs(evaluate(a, x).p);
  for (int it = 0; it < 50 && best_r > 0.0; ++it) {
    const Eval e = evaluate(a, x);
    if (e.dp == 0.0) break;
    const double step = e.p / e.dp;
    x -= step;
    const double r = std::abs(evaluate(a, x).p);
    if (r < best_r) {
      best_r = r;
      best_x = x;
    }
    if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(x)) break;
  }
  return best_x;
}

double coeff_scale(const Quartic& a) {
  double s = 1.0;
  for (double c : a) s = std::max(s, std::abs(c));
  return s;
}

// |Im λ| below this (relative to max(1, |λ|)) counts as a real eigenvalue.
constexpr double kRealImagTol = 1e-8;
// Wider band in which a near-real conjugate pair is tested as a double root.
constexpr double kDoubleRootImagTol = 1e-4;

}  // namespace

std::vector<double> quartic_real_roots(double a3, double a2, double a1, double a0) {
  const Quartic a{a3, a2, a1, a0};
  for (double c : a) {
    if (!std::isfinite(c)) throw InvalidArgument("quartic_real_roots: non-finite coefficient");
  }

  // Substitute u = s·t with s the Cauchy-style root scale so the companion
  // matrix entries are O(1).
  double s = 1e-300;
  s = std::max(s, std::abs(a3));
  s = std::max(s, std::sqrt(std::abs(a2)));
  s = std::max(s, std::cbrt(std::abs(a1)));
  s = std::max(s, std::sqrt(std::sqrt(std::abs(a0))));
  if (s == 1e-300) return {0.0};  // u⁴ = 0

  Eigen::Matrix4d companion = Eigen::Matrix4d::Zero();
  companion(0, 0) = -a3 / s;
  companion(0, 1) = -a2 / (s * s);
  companion(0, 2) = -a1 / (s * s * s);
  companion(0, 3) = -a0 / (s * s * s * s);
  companion(1, 0) = 1.0;
  companion(2, 1) = 1.0;
  companion(3, 2) = 1.0;

  Eigen::EigenSolver<Eigen::Matrix4d> es(companion, false);
  if (es.info() != Eigen::Success) throw NumericalError("quartic_real_roots: eigensolve failed");

  const double residual_tol = 1e-12 * coeff_scale(a);
  std::vector<double> roots;
  roots.reserve(4);
  for (Eigen::Index i = 0; i < 4; ++i) {
    const std::complex<double> t = es.eigenvalues()(i);
    const double mag = std::max(1.0, std::abs(t));
    const double im = std::abs(t.imag());
    if (im <= kRealImagTol * mag) {
      roots.push_back(newton_polish(a, s * t.real()));
    } else if (im <= kDoubleRootImagTol * mag) {
      // A double real root splits into a conjugate pair of size √ε; keep it
      // only if the polished real part actually zeroes the polynomial.
      const double x = newton_polish(a, s * t.real());
      if (std::abs(evaluate(a, x).p) <= residual_tol) roots.push_back(x);
    }
  }

  std::sort(roots.begin(), roots.end());
  std::vector<double> unique;
  for (double r : roots) {
    if (!unique.empty() && std::abs(r - unique.back()) <= 1e-7 * std::max(1.0, std::abs(r))) {
      // keep the better of the two polished copies
      if (std::abs(evaluate(a, r).p) < std::abs(evaluate(a, unique.back()).p)) unique.back() = r;
      continue;
    }
    unique.push_back(r);
  }
  return unique;
}

std::string_view to_string(ProjectionCase c) {
  return c == ProjectionCase::Interior ? "interior" : "boundary";
}

ProjectionResult project_hyperbola(const HyperbolaTarget& t) {
  const double xi1 = t.xi1;
  const double xi2 = t.xi2;
  const double delta = t.delta;
  if (!std::isfinite(xi1) || !std::isfinite(xi2) || !std::isfinite(delta)) {
    throw InvalidArgument("project_hyperbola: non-finite target");
  }
  if (delta < 0.0) throw InvalidArgument("project_hyperbola: negative delta");

  if (delta == 0.0) {
    const double u1 = std::max(xi1, 0.0);
    if (u1 * xi2 >= 0.0) {
      const auto c = (u1 == xi1) ? ProjectionCase::Interior : ProjectionCase::Boundary;
      return {u1, xi2, c, 0.0, 0.0};
    }
    // u1 > 0 and ξ2 < 0: nearest of the two boundary rays
    const double d_axis1 = (u1 - xi1) * (u1 - xi1) + xi2 * xi2;
    const double d_axis2 = xi1 * xi1;
    if (d_axis1 <= d_axis2) return {u1, 0.0, ProjectionCase::Boundary, 0.0, 0.0};
    return {0.0, xi2, ProjectionCase::Boundary, 0.0, 0.0};
  }

  if (xi1 >= 0.0 && xi1 * xi2 >= delta) {
    return {xi1, xi2, ProjectionCase::Interior, 0.0, 0.0};
  }

  // Product constraint active, u1 > 0 (the u1 = 0 cases are infeasible for δ > 0).
  const double s = std::sqrt(delta);
  const auto scaled = quartic_real_roots(-xi1 / s, 0.0, xi2 / s, -1.0);
  const Quartic poly{-xi1, 0.0, delta * xi2, -delta * delta};

  ProjectionResult best{0.0, 0.0, ProjectionCase::Boundary, 0.0, 0.0};
  double best_dist = std::numeric_limits<double>::infinity();
  for (double root : scaled) {
    const double u1 = newton_polish(poly, s * root);
    if (!(u1 > 0.0)) continue;
    const double slack = delta - xi2 * u1;
    if (slack < -1e-12 * std::max(delta, std::abs(xi2 * u1))) continue;
    const double mu = std::max(0.0, slack / (u1 * u1));
    const double u2 = xi2 + mu * u1;
    const double dist = (u1 - xi1) * (u1 - xi1) + (u2 - xi2) * (u2 - xi2);
    if (dist < best_dist) {
      best_dist = dist;
      const double kkt = std::max(std::abs(u1 - xi1 - mu * u2), std::abs(u2 - xi2 - mu * u1));
      best = {u1, u2, ProjectionCase::Boundary, kkt, mu};
    }
  }

  if (!std::isfinite(best_dist)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "project_hyperbola: no admissible root for (xi1=" << xi1 << ", xi2=" << xi2
        << ", delta=" << delta << "); scaled roots:";
    for (double r : scaled) msg << ' ' << r;
    throw NumericalError(msg.str());
  }
  return best;
}

void project_set_C(const RVector& xi1, const RVector& xi2, const RVector& delta, RVector& u1,
                   RVector& u2) {
  kernels::omp::project_batch(xi1, xi2, delta, u1, u2);
}

}  // namespace bdpr
