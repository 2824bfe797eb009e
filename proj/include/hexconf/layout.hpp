#pragma once

// Flat layouts of conformal fields, overlap detection, and the example families
// (constant-gradient and linear-factor fields).

#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hexconf/field.hpp"
#include "hexconf/lattice.hpp"

namespace hexconf {

struct PlacedFace {
    Face face;
    /// Positions of face.vertices(), in the same order.
    std::array<Vec2, 3> corners{};
};

struct HolonomyEntry {
    LatticeVertex vertex;
    double mismatch = 0.0;
};

/// Development of the faces of a ball, one copy per face (universal-cover view).
struct LayoutChart {
    std::vector<PlacedFace> faces;
    /// Position at which each vertex was first placed.
    std::map<LatticeVertex, Vec2> placements;
    /// Re-encounters whose position differs from the first placement by more than 1e-9 * longest edge.
    std::vector<HolonomyEntry> holonomy_log;
    double holonomy_defect = 0.0;
    /// Largest relative error between placed and metric edge lengths.
    double length_error = 0.0;

    [[nodiscard]] double diameter() const;
    [[nodiscard]] bool positively_oriented(double tol = 0.0) const;
};

/// Places the faces of B(base, R) breadth-first from the face {base, base+1, base+w}.
/// Throws nonflat_input when an interior vertex has |K| > flat_tol and
/// reflection_impossible when lengths admit no triangle.
[[nodiscard]] LayoutChart develop(const ConformalField& field, LatticeVertex base, int R, double flat_tol = 1e-8);

struct OverlapReport {
    bool found = false;
    std::optional<std::pair<Face, Face>> witness;
    /// Largest intersection area seen.
    double area = 0.0;
    /// 1e-12 * diameter^2.
    double threshold = 0.0;
    std::size_t candidate_pairs = 0;
};

/// Intersection area of two triangles (zero for degenerate ones).
[[nodiscard]] double triangle_overlap(const std::array<Vec2, 3>& a, const std::array<Vec2, 3>& b);

/// Pairwise overlap over placed faces, with a sweep over bounding boxes.
[[nodiscard]] OverlapReport overlap_area(const LayoutChart& chart);

struct OverlapPair {
    std::size_t first = 0;
    std::size_t second = 0;
    double area = 0.0;
};

/// Every pair with intersection area above threshold, ordered by (first, second).
[[nodiscard]] std::vector<OverlapPair> overlapping_pairs(const LayoutChart& chart, double threshold);

/// u(m, n) = M m + N n on the vertices of B(0, R). Throws infeasible_gradient when
/// the faces are not generalized triangles.
[[nodiscard]] ConformalField constant_gradient_field(double M, double N, int R);

/// Largest M with (M, N) feasible, by bisection on [0, hi].
[[nodiscard]] double gradient_feasibility_limit(double N, double hi = 10.0, double tol = 1e-12);

/// Smallest R <= R_max whose developed ball has a positive-area overlap.
[[nodiscard]] std::optional<int> find_overlap_radius(double M, double N, int R_max);

/// u(v) = Re(a * pos(v)) + b on the vertices of B(0, R).
[[nodiscard]] ConformalField linear_factor_field(std::complex<double> a, double b, int R);

/// Curvature of the linear field at the origin, checked equal at three vertices within 1e-10.
/// Throws infeasible_gradient outside T and domain_error on disagreement.
[[nodiscard]] double common_curvature(std::complex<double> a);

struct LinearLocus {
    /// Grid radii with |K| <= tol (0 is always first).
    std::vector<double> flat_samples;
    /// Maximal runs of flat grid samples, as [start, end].
    std::vector<std::pair<double, double>> flat_intervals;
    /// Isolated sign changes of K refined by bisection.
    std::vector<double> roots;
    /// First radius where the fan leaves T, refined by bisection; empty if none on [0, r_max].
    std::optional<double> feasible_limit;
};

/// Scans r -> common_curvature(r * direction) on a grid of `points` + 1 radii in [0, r_max].
[[nodiscard]] LinearLocus flat_linear_locus(std::complex<double> direction, double r_max, double tol,
                                            int points = 200);

struct FlattenOptions {
    double tolerance = 1e-13;
    int max_iterations = 100;
};

/// Solves K = 0 at the interior vertices of the field's ball by damped Newton, keeping the
/// rim values. Throws no_root when Newton stalls or leaves T.
[[nodiscard]] ConformalField flatten_interior(const ConformalField& field, const FlattenOptions& opts = {});

struct RandomFieldOptions {
    double M = 0.0;
    double N = 0.0;
    /// Rim values are the linear field plus U(-amplitude, amplitude).
    double amplitude = 0.1;
    int max_attempts = 100;
};

/// Random field on B(0, R), flat and Delaunay at every interior vertex. Throws sampling_exhausted.
[[nodiscard]] ConformalField random_flat_field(std::mt19937_64& rng, int R, const RandomFieldOptions& opts = {});

/// One polygon per face, stroke only; witness faces filled. Six-decimal coordinates.
[[nodiscard]] std::string chart_svg(const LayoutChart& chart, const OverlapReport* overlap = nullptr);

}  // namespace hexconf
