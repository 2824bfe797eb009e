#pragma once

// Length cross-ratios, shear coordinates, conformal equivalence of edge metrics,
// circumcircle intersection angles and the reduced Delaunay decomposition.

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "hexconf/field.hpp"
#include "hexconf/layout.hpp"
#include "hexconf/lattice.hpp"

namespace hexconf {

using Edge = std::pair<LatticeVertex, LatticeVertex>;

/// The undirected edge {a, b} with the smaller endpoint first.
[[nodiscard]] Edge canonical_edge(LatticeVertex a, LatticeVertex b) noexcept;

/// Positive lengths on the edges of a ball, not necessarily conformal to anything.
class EdgeMetric {
public:
    EdgeMetric() = default;
    /// All edges of the ball get length 1.
    explicit EdgeMetric(Ball domain);

    [[nodiscard]] static EdgeMetric from_field(const ConformalField& field);

    [[nodiscard]] const Ball& domain() const noexcept { return domain_; }
    [[nodiscard]] const std::map<Edge, double>& lengths() const noexcept { return l_; }

    /// Throws domain_error for an edge outside the ball.
    [[nodiscard]] double length(LatticeVertex a, LatticeVertex b) const;
    /// Throws domain_error outside the ball or for a non-positive length.
    void set(LatticeVertex a, LatticeVertex b, double length);

    /// l_ab * e^{u_a + u_b}. The field must cover the ball.
    [[nodiscard]] EdgeMetric conformally_scaled(const ConformalField& u) const;

    /// Every face a generalized triangle.
    [[nodiscard]] bool in_T() const;

    /// Edges shared by two faces of the ball.
    [[nodiscard]] std::vector<Edge> interior_edges() const;

private:
    Ball domain_;
    std::map<Edge, double> l_;
};

/// The two apexes of edge i -> j: k of the face to its left, l of the face to its right.
[[nodiscard]] std::pair<LatticeVertex, LatticeVertex> edge_apexes(LatticeVertex i, LatticeVertex j);

/// l_il * l_jk / (l_jl * l_ik). Throws domain_error for non-positive input.
[[nodiscard]] double length_cross_ratio(double l_il, double l_jk, double l_jl, double l_ik);

/// Cross ratio at the oriented edge i -> j with k left and l right. Both faces must be in the ball.
[[nodiscard]] double length_cross_ratio(const EdgeMetric& metric, LatticeVertex i, LatticeVertex j);

/// Sum over the six edges at i of ln(l_jl l_ik / (l_il l_jk)). Throws boundary_vertex
/// when the star of i is not in the ball.
[[nodiscard]] double vertex_shear_sum(const EdgeMetric& metric, LatticeVertex i);

struct ConformalEquivalence {
    bool equivalent = false;
    /// Recovered factors with l~ = u * l, when equivalent.
    std::optional<std::map<LatticeVertex, double>> u;
    /// First interior edge whose cross ratios differ, when not equivalent.
    std::optional<Edge> witness;
    /// Largest |ln lcr~ - ln lcr| over interior edges.
    double lcr_gap = 0.0;
    /// Largest disagreement between per-face reconstructions of the same u_i.
    double gluing_residual = 0.0;
};

/// Compares cross ratios on interior edges; when all agree within tol, reconstructs u face by
/// face and checks the faces agree. Throws precondition_violation when the metrics differ in
/// domain or leave T, and inconsistent_reconstruction when the faces disagree beyond 1e-8.
[[nodiscard]] ConformalEquivalence conformal_equivalence(const EdgeMetric& l, const EdgeMetric& l_tilde,
                                                         double tol = 1e-10);

struct Circle {
    Vec2 center;
    double radius = 0.0;
};

/// Throws collinear_points when the signed area is below 1e-12 times the squared longest side.
[[nodiscard]] Circle circumcircle(Vec2 p1, Vec2 p2, Vec2 p3);

/// Intersection angle with cos = (d^2 - r1^2 - r2^2) / (2 r1 r2). Throws disjoint_circles unless
/// |r1 - r2| <= d <= r1 + r2 up to a relative 1e-12.
[[nodiscard]] double dihedral_angle(const Circle& c1, const Circle& c2);

struct DecoratedEdge {
    Edge edge;
    double lcr = 1.0;
    double shear = 0.0;
    /// Sum of the two angles opposite the edge, from the metric.
    double alpha = 0.0;
    /// Intersection angle of the developed circumcircles.
    double phi = 0.0;
    /// Neither apex strictly inside the other face's circumcircle (relative tol 1e-9).
    bool empty_circles = true;
};

/// One entry per interior edge of the developed ball, ordered by edge.
[[nodiscard]] std::vector<DecoratedEdge> decorate_chart(const LayoutChart& chart, const ConformalField& field);

struct MergedFace {
    std::vector<Face> faces;
    std::vector<LatticeVertex> vertices;
    Circle circle;
    /// max |dist(v, center) - radius| / radius.
    double concyclicity_residual = 0.0;
    bool convex = true;
};

struct ReducedDecomposition {
    std::vector<Edge> erased;
    std::vector<MergedFace> faces;
};

/// Erases interior edges with |alpha - pi| <= tol (angles from the developed corners) and merges
/// faces across them. Throws concyclicity_violation when a merged face is not convex or its
/// residual exceeds 10 * tol.
[[nodiscard]] ReducedDecomposition reduced_decomposition(const LayoutChart& chart, double tol = 1e-8);

enum class KleinDirection { forward, inverse };

/// forward: 2p / (1 + |p|^2), the stereographic lift dropped to the disk. inverse undoes it.
/// Throws outside_disk when |p| >= 1.
[[nodiscard]] Vec2 klein_stereographic(Vec2 p, KleinDirection direction = KleinDirection::forward);

}  // namespace hexconf
