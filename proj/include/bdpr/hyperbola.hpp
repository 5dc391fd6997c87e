#pragma once

#include <string_view>
#include <vector>

#include "bdpr/hermitian.hpp"

namespace bdpr {

/// Real roots of the monic quartic u⁴ + a3·u³ + a2·u² + a1·u + a0, ascending,
/// with coincident roots collapsed. Roots come from the eigenvalues of the
/// companion matrix and are Newton-polished on the polynomial.
std::vector<double> quartic_real_roots(double a3, double a2, double a1, double a0);

/// Point to be projected onto {(u1, u2) : u1·u2 ≥ δ, u1 ≥ 0}.
struct HyperbolaTarget {
  double xi1;
  double xi2;
  double delta;
};

enum class ProjectionCase { Interior, Boundary };

std::string_view to_string(ProjectionCase c);

struct ProjectionResult {
  double u1;
  double u2;
  ProjectionCase case_id;
  /// max(|u1 − ξ1 − μ·u2|, |u2 − ξ2 − μ·u1|) at the returned point; 0 for
  /// interior points.
  double kkt_residual;
  /// Multiplier of the product constraint (0 for interior points).
  double mu;
};

/// Euclidean projection onto the convex set {u1·u2 ≥ δ, u1 ≥ 0}.
///
/// For δ > 0 a target already inside the set is returned unchanged.
/// Otherwise the projection lies on the branch u1·u2 = δ, u1 > 0, and u1 is
/// a root of u1⁴ − ξ1·u1³ + δ·ξ2·u1 − δ² = 0 with δ − ξ2·u1 ≥ 0; then
/// μ = (δ − ξ2·u1)/u1² and u2 = ξ2 + μ·u1. When several roots qualify the
/// one nearest the target wins.
///
/// δ = 0 projects onto the closed set {u1 ≥ 0, u1·u2 ≥ 0}.
///
/// Throws NumericalError when δ > 0 and no root qualifies, InvalidArgument
/// for negative or non-finite input.
ProjectionResult project_hyperbola(const HyperbolaTarget& t);

/// Componentwise projection of (ξ1, ξ2) with per-component δ. Runs the
/// OpenMP kernel; results do not depend on the thread count.
void project_set_C(const RVector& xi1, const RVector& xi2, const RVector& delta, RVector& u1,
                   RVector& u2);

}  // namespace bdpr
