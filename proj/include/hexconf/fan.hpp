#pragma once

// Metric kernel: generalized triangles, conformal scaling, and fans.
//
// A fan has a center (index 0) and n boundary vertices 1..n in counterclockwise
// order; boundary indices are taken mod n. Base lengths are all 1, so with
// factors u the edge {a, b} has length e^{u_a + u_b}. Triangle j is (0, j, j+1).

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace hexconf {

/// Edge lengths; `a` is the edge opposite vertex a, and so on.
struct GeneralizedTriangle {
    double a = 1.0;
    double b = 1.0;
    double c = 1.0;
};

struct TriangleAngles {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
};

/// 1e-12 times the perimeter.
[[nodiscard]] double degeneracy_tolerance(const GeneralizedTriangle& t) noexcept;

/// Smallest of a+b-c, b+c-a, c+a-b.
[[nodiscard]] double triangle_slack(const GeneralizedTriangle& t) noexcept;

[[nodiscard]] bool is_generalized_triangle(const GeneralizedTriangle& t) noexcept;

/// Interior angles, continuously extended to degenerate triangles (a = b + c gives (pi, 0, 0)).
/// Uses the half-angle form, which stays accurate near degeneracy.
/// Throws invalid_triangle when a triangle inequality fails by more than degeneracy_tolerance.
[[nodiscard]] TriangleAngles angles(const GeneralizedTriangle& t);

[[nodiscard]] double conformal_length(double base_length, double u_i, double u_j);

class FanConfiguration {
public:
    FanConfiguration() = default;

    /// `factors` holds (u_0, u_1, ..., u_n). Requires n >= 3.
    explicit FanConfiguration(std::vector<double> factors);

    [[nodiscard]] static FanConfiguration regular(int n, double boundary_factor = 0.0);

    [[nodiscard]] int n() const noexcept { return static_cast<int>(u_.size()) - 1; }
    [[nodiscard]] std::span<const double> factors() const noexcept { return u_; }

    [[nodiscard]] double center() const noexcept { return u_[0]; }

    /// Boundary factor, index taken mod n into 1..n.
    [[nodiscard]] double boundary(int j) const noexcept { return u_[wrap(j)]; }
    void set_boundary(int j, double value) noexcept { u_[wrap(j)] = value; }
    void set_center(double value) noexcept { u_[0] = value; }

    /// Boundary index j mapped into 1..n.
    [[nodiscard]] std::size_t wrap(int j) const noexcept;

    /// Triangle (0, j, j+1) with vertex order (center, j, j+1).
    [[nodiscard]] GeneralizedTriangle triangle(int j) const noexcept;

    /// Adds c to every factor.
    [[nodiscard]] FanConfiguration shifted(double c) const;

    /// Shifts so that u_0 = 0.
    [[nodiscard]] FanConfiguration normalized() const { return shifted(-u_[0]); }

private:
    std::vector<double> u_{0.0, 0.0, 0.0, 0.0};
};

/// Membership in the space of fans made of generalized triangles.
[[nodiscard]] bool in_T(const FanConfiguration& f) noexcept;

/// Angles of triangle (0, j, j+1), ordered (center, j, j+1).
[[nodiscard]] TriangleAngles fan_triangle_angles(const FanConfiguration& f, int j);

/// 2*pi minus the angle sum at the center. Throws invalid_triangle outside T.
[[nodiscard]] double curvature(const FanConfiguration& f);

/// Sum of the two angles opposite the edge (0, j).
[[nodiscard]] double alpha(const FanConfiguration& f, int j);

/// alpha(f, j) for j = 1..n, stored at index j - 1.
[[nodiscard]] std::vector<double> alphas(const FanConfiguration& f);

inline constexpr double kDelaunayTolerance = 1e-10;

/// f is in T and every alpha_j <= pi + tol.
[[nodiscard]] bool in_D(const FanConfiguration& f, double tol = kDelaunayTolerance) noexcept;

/// Smallest interior angle over the fan's triangles (0 for degenerate fans).
[[nodiscard]] double min_angle(const FanConfiguration& f);

/// Range of u_j keeping the two triangles at j generalized, with the other factors fixed.
struct FactorInterval {
    double lower = 0.0;
    double upper = 0.0;
};
[[nodiscard]] FactorInterval feasible_interval(const FanConfiguration& f, int j);

struct SolveOptions {
    double target = 0.0;
    double lower = -10.0;
    double upper = 10.0;
    int scan_points = 32;
    double tolerance = 1e-12;
};

/// Adjusts u_j so that the curvature equals opts.target, by bracketing on a grid and
/// bisecting. Throws no_root when the curvature keeps one sign over the interval and
/// ambiguous when the grid finds more than one sign change.
[[nodiscard]] FanConfiguration solve_flat(const FanConfiguration& f, int j, const SolveOptions& opts = {});

/// Boundary factor making the regular n-fan flat: ln(2 sin(pi / n)).
[[nodiscard]] double regular_flat_factor(int n);

struct SampleOptions {
    /// Half-width of the box u_2..u_n are drawn from, centred at regular_flat_factor(n).
    double half_width = 0.3;
    int max_attempts = 10000;
    bool allow_degenerate = false;
    double delaunay_tol = kDelaunayTolerance;
};

struct SampleOutcome {
    FanConfiguration fan;
    int attempts = 0;
};

/// Random flat Delaunay fan with u_0 = 0 drawn from `rng`. Throws sampling_exhausted.
[[nodiscard]] SampleOutcome sample_D0(std::mt19937_64& rng, int n, const SampleOptions& opts = {});

/// Deterministic per seed.
[[nodiscard]] FanConfiguration sample_D0(std::uint64_t seed, int n, const SampleOptions& opts = {});

}  // namespace hexconf
