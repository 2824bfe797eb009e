#pragma once

// Derivatives of angles and curvature with respect to conformal factors.

#include <array>
#include <cstdint>
#include <vector>

#include "hexconf/fan.hpp"

namespace hexconf {

/// Triangles with an angle below this are rejected by the derivative routines.
inline constexpr double kMinDerivativeAngle = 1e-9;

/// d(theta_i)/d(u_j) for the triangle's vertices (a, b, c). Off-diagonal entries are
/// cot of the third angle, diagonal entries minus the sum of the other two cotangents.
using AngleJacobian = std::array<std::array<double, 3>, 3>;

/// Throws degenerate_triangle when an angle is below kMinDerivativeAngle.
[[nodiscard]] AngleJacobian angle_derivatives(const GeneralizedTriangle& t);

/// (dK/du_0, dK/du_1, ..., dK/du_n).
[[nodiscard]] std::vector<double> curvature_gradient(const FanConfiguration& f);

/// Cotangent sums at boundary vertex j of a fan.
///   A_j = cot(angle at 0 in (0,j-1,j)) + cot(angle at 0 in (0,j,j+1))
///   B_j = cot(angle at 0 in (0,j-1,j)) + cot(angle at j-1 in (0,j-1,j))
///   C_j = cot(angle at 0 in (0,j,j+1)) + cot(angle at j+1 in (0,j,j+1))
struct EdgeCoefficients {
    double A = 0.0;
    double B = 0.0;
    double C = 0.0;
};

[[nodiscard]] EdgeCoefficients edge_coefficients(const FanConfiguration& f, int j);

/// d(alpha_j)/dt along a path with u_0 fixed: A_j u_j' - B_{j+1} u_{j+1}' - C_{j-1} u_{j-1}'.
[[nodiscard]] double alpha_rate(const FanConfiguration& f, int j, double du_prev, double du_j, double du_next);

}  // namespace hexconf

namespace hexconf {

struct FdCheckReport {
    std::uint64_t trials = 0;
    /// Relative error |fd - an| / max(1, |an|), central differences with the given step.
    double max_angle_error = 0.0;
    double max_gradient_error = 0.0;
    /// Largest |row sum| of an angle Jacobian.
    double max_row_sum = 0.0;
    /// Largest |sum_j dK/du_j|.
    double max_gradient_sum = 0.0;
};

/// Trial t draws a fan of size n with factors in [-0.4, 0.4] and min angle >= 0.05 from
/// seed ^ t, then compares every triangle's angle Jacobian and the curvature gradient
/// with central differences.
[[nodiscard]] FdCheckReport fd_check(std::uint64_t seed, std::uint64_t trials, int n, double step = 1e-6);

}  // namespace hexconf
