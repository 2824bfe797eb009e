#include "hexconf/hyperbolic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "hexconf/error.hpp"
#include "hexconf/fan.hpp"

namespace hexconf {

namespace {

std::size_t direction_index(LatticeVertex i, LatticeVertex j)
{
    const auto it = std::find(kUnitDirections.begin(), kUnitDirections.end(), j - i);
    if (it == kUnitDirections.end()) {
        throw Error(ErrorKind::domain_error, "vertices are not adjacent");
    }
    return static_cast<std::size_t>(it - kUnitDirections.begin());
}

double corner_angle(Vec2 at, Vec2 p, Vec2 q)
{
    return std::abs(std::atan2(cross(p - at, q - at), dot(p - at, q - at)));
}

Vec2 corner_of(const PlacedFace& f, LatticeVertex v)
{
    const auto vs = f.face.vertices();
    for (std::size_t i = 0; i < 3; ++i) {
        if (vs[i] == v) {
            return f.corners[i];
        }
    }
    throw Error(ErrorKind::domain_error, "vertex not on face");
}

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x)
    {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(std::size_t a, std::size_t b)
    {
        a = find(a);
        b = find(b);
        if (a != b) {
            parent[std::max(a, b)] = std::min(a, b);
        }
    }
};

double hull_area(std::vector<Vec2> pts)
{
    std::sort(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    if (pts.size() < 3) {
        return 0.0;
    }
    std::vector<Vec2> hull(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0.0) {
            --k;
        }
        hull[k++] = pts[i];
    }
    for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
        while (k >= lower && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0.0) {
            --k;
        }
        hull[k++] = pts[i];
    }
    double area = 0.0;
    for (std::size_t i = 0; i + 1 < k; ++i) {
        area += cross(hull[i], hull[i + 1]);
    }
    return 0.5 * area;
}

}  // namespace

Edge canonical_edge(LatticeVertex a, LatticeVertex b) noexcept { return a < b ? Edge{a, b} : Edge{b, a}; }

EdgeMetric::EdgeMetric(Ball domain) : domain_(std::move(domain))
{
    for (const auto& f : domain_.faces()) {
        const auto vs = f.vertices();
        for (std::size_t i = 0; i < 3; ++i) {
            l_.emplace(canonical_edge(vs[i], vs[(i + 1) % 3]), 1.0);
        }
    }
}

EdgeMetric EdgeMetric::from_field(const ConformalField& field)
{
    EdgeMetric metric(field.domain());
    for (auto& [e, l] : metric.l_) {
        l = field.length(e.first, e.second);
    }
    return metric;
}

double EdgeMetric::length(LatticeVertex a, LatticeVertex b) const
{
    const auto it = l_.find(canonical_edge(a, b));
    if (it == l_.end()) {
        throw Error(ErrorKind::domain_error, "edge outside the metric's ball");
    }
    return it->second;
}

void EdgeMetric::set(LatticeVertex a, LatticeVertex b, double length)
{
    const auto it = l_.find(canonical_edge(a, b));
    if (it == l_.end()) {
        throw Error(ErrorKind::domain_error, "edge outside the metric's ball");
    }
    if (!(length > 0.0)) {
        throw Error(ErrorKind::domain_error, "edge lengths must be positive");
    }
    it->second = length;
}

EdgeMetric EdgeMetric::conformally_scaled(const ConformalField& u) const
{
    EdgeMetric out = *this;
    for (auto& [e, l] : out.l_) {
        l *= std::exp(u.at(e.first) + u.at(e.second));
    }
    return out;
}

bool EdgeMetric::in_T() const
{
    return std::all_of(domain_.faces().begin(), domain_.faces().end(), [&](const Face& f) {
        const auto vs = f.vertices();
        return is_generalized_triangle({length(vs[1], vs[2]), length(vs[0], vs[2]), length(vs[0], vs[1])});
    });
}

std::vector<Edge> EdgeMetric::interior_edges() const
{
    std::vector<Edge> out;
    for (const auto& [e, _] : l_) {
        const auto faces = faces_of_edge(e.first, e.second);
        if (domain_.contains_face(faces[0]) && domain_.contains_face(faces[1])) {
            out.push_back(e);
        }
    }
    return out;
}

std::pair<LatticeVertex, LatticeVertex> edge_apexes(LatticeVertex i, LatticeVertex j)
{
    const auto k = direction_index(i, j);
    return {i + kUnitDirections[(k + 1) % 6], i + kUnitDirections[(k + 5) % 6]};
}

double length_cross_ratio(double l_il, double l_jk, double l_jl, double l_ik)
{
    if (!(l_il > 0.0 && l_jk > 0.0 && l_jl > 0.0 && l_ik > 0.0)) {
        throw Error(ErrorKind::domain_error, "cross ratio needs positive lengths");
    }
    return (l_il * l_jk) / (l_jl * l_ik);
}

double length_cross_ratio(const EdgeMetric& metric, LatticeVertex i, LatticeVertex j)
{
    const auto [k, l] = edge_apexes(i, j);
    return length_cross_ratio(metric.length(i, l), metric.length(j, k), metric.length(j, l), metric.length(i, k));
}

double vertex_shear_sum(const EdgeMetric& metric, LatticeVertex i)
{
    if (!metric.domain().is_interior(i)) {
        throw Error(ErrorKind::boundary_vertex, "shear sum needs the full star");
    }
    double sum = 0.0;
    for (const auto& j : neighbors(i)) {
        const auto [k, l] = edge_apexes(i, j);
        sum += std::log(metric.length(j, l) * metric.length(i, k) / (metric.length(i, l) * metric.length(j, k)));
    }
    return sum;
}

ConformalEquivalence conformal_equivalence(const EdgeMetric& l, const EdgeMetric& l_tilde, double tol)
{
    if (l.domain().center() != l_tilde.domain().center() || l.domain().radius() != l_tilde.domain().radius()) {
        throw Error(ErrorKind::precondition_violation, "metrics live on different balls");
    }
    if (!l.in_T() || !l_tilde.in_T()) {
        throw Error(ErrorKind::precondition_violation, "metric leaves the space of triangles");
    }
    ConformalEquivalence out;
    for (const auto& [i, j] : l.interior_edges()) {
        const double gap =
            std::abs(std::log(length_cross_ratio(l_tilde, i, j)) - std::log(length_cross_ratio(l, i, j)));
        out.lcr_gap = std::max(out.lcr_gap, gap);
        if (gap > tol && !out.witness) {
            out.witness = Edge{i, j};
        }
    }
    if (out.witness) {
        return out;
    }

    std::map<LatticeVertex, double> u;
    for (const auto& f : l.domain().faces()) {
        const auto vs = f.vertices();
        for (std::size_t s = 0; s < 3; ++s) {
            const auto a = vs[s];
            const auto b = vs[(s + 1) % 3];
            const auto c = vs[(s + 2) % 3];
            const double ua = 0.5 * std::log(l_tilde.length(a, b) * l_tilde.length(a, c) * l.length(b, c) /
                                             (l.length(a, b) * l.length(a, c) * l_tilde.length(b, c)));
            const auto [it, fresh] = u.emplace(a, ua);
            if (!fresh) {
                out.gluing_residual = std::max(out.gluing_residual, std::abs(it->second - ua));
            }
        }
    }
    if (out.gluing_residual > 1e-8) {
        throw Error(ErrorKind::inconsistent_reconstruction,
                    "per-face factors disagree by " + std::to_string(out.gluing_residual));
    }
    out.equivalent = true;
    out.u = std::move(u);
    return out;
}

Circle circumcircle(Vec2 p1, Vec2 p2, Vec2 p3)
{
    const Vec2 b = p2 - p1;
    const Vec2 c = p3 - p1;
    const double d = 2.0 * cross(b, c);
    const double scale = std::max({dot(b, b), dot(c, c), dot(p3 - p2, p3 - p2)});
    if (!(std::abs(d) > 2e-12 * scale)) {
        throw Error(ErrorKind::collinear_points, "points are collinear");
    }
    const double bb = dot(b, b);
    const double cc = dot(c, c);
    const Vec2 center{(c.y * bb - b.y * cc) / d, (b.x * cc - c.x * bb) / d};
    return {p1 + center, norm(center)};
}

double dihedral_angle(const Circle& c1, const Circle& c2)
{
    if (!(c1.radius > 0.0 && c2.radius > 0.0)) {
        throw Error(ErrorKind::domain_error, "radii must be positive");
    }
    const double d = norm(c1.center - c2.center);
    const double slack = 1e-12 * (c1.radius + c2.radius);
    if (d > c1.radius + c2.radius + slack || d < std::abs(c1.radius - c2.radius) - slack) {
        throw Error(ErrorKind::disjoint_circles, "circles do not intersect");
    }
    const double cosine = (d * d - c1.radius * c1.radius - c2.radius * c2.radius) / (2.0 * c1.radius * c2.radius);
    return std::acos(std::clamp(cosine, -1.0, 1.0));
}

std::vector<DecoratedEdge> decorate_chart(const LayoutChart& chart, const ConformalField& field)
{
    std::map<Face, std::size_t> index;
    for (std::size_t i = 0; i < chart.faces.size(); ++i) {
        index.emplace(chart.faces[i].face, i);
    }
    std::map<Edge, bool> edges;
    for (const auto& f : chart.faces) {
        const auto vs = f.face.vertices();
        for (std::size_t s = 0; s < 3; ++s) {
            edges.emplace(canonical_edge(vs[s], vs[(s + 1) % 3]), true);
        }
    }
    const auto metric = EdgeMetric::from_field(field);
    std::vector<DecoratedEdge> out;
    for (const auto& [e, _] : edges) {
        const auto [i, j] = e;
        const auto faces = faces_of_edge(i, j);
        const auto left = index.find(faces[0]);
        const auto right = index.find(faces[1]);
        if (left == index.end() || right == index.end()) {
            continue;
        }
        const auto [k, l] = edge_apexes(i, j);
        DecoratedEdge d;
        d.edge = e;
        d.lcr = length_cross_ratio(metric, i, j);
        d.shear = std::log(d.lcr);
        const double l_ij = metric.length(i, j);
        d.alpha = angles({l_ij, metric.length(j, k), metric.length(i, k)}).a +
                  angles({l_ij, metric.length(j, l), metric.length(i, l)}).a;
        const auto& fl = chart.faces[left->second];
        const auto& fr = chart.faces[right->second];
        const Circle cl = circumcircle(fl.corners[0], fl.corners[1], fl.corners[2]);
        const Circle cr = circumcircle(fr.corners[0], fr.corners[1], fr.corners[2]);
        d.phi = dihedral_angle(cl, cr);
        d.empty_circles = norm(corner_of(fr, l) - cl.center) >= cl.radius * (1.0 - 1e-9) &&
                          norm(corner_of(fl, k) - cr.center) >= cr.radius * (1.0 - 1e-9);
        out.push_back(d);
    }
    return out;
}

ReducedDecomposition reduced_decomposition(const LayoutChart& chart, double tol)
{
    std::map<Face, std::size_t> index;
    for (std::size_t i = 0; i < chart.faces.size(); ++i) {
        index.emplace(chart.faces[i].face, i);
    }
    ReducedDecomposition out;
    UnionFind groups(chart.faces.size());
    std::map<Edge, bool> seen;
    for (const auto& f : chart.faces) {
        const auto vs = f.face.vertices();
        for (std::size_t s = 0; s < 3; ++s) {
            const auto e = canonical_edge(vs[s], vs[(s + 1) % 3]);
            if (!seen.emplace(e, true).second) {
                continue;
            }
            const auto faces = faces_of_edge(e.first, e.second);
            const auto left = index.find(faces[0]);
            const auto right = index.find(faces[1]);
            if (left == index.end() || right == index.end()) {
                continue;
            }
            const auto [k, l] = edge_apexes(e.first, e.second);
            const auto& fl = chart.faces[left->second];
            const auto& fr = chart.faces[right->second];
            const double alpha =
                corner_angle(corner_of(fl, k), corner_of(fl, e.first), corner_of(fl, e.second)) +
                corner_angle(corner_of(fr, l), corner_of(fr, e.first), corner_of(fr, e.second));
            if (std::abs(alpha - std::numbers::pi) <= tol) {
                out.erased.push_back(e);
                groups.unite(left->second, right->second);
            }
        }
    }

    std::map<std::size_t, std::vector<std::size_t>> members;
    for (std::size_t i = 0; i < chart.faces.size(); ++i) {
        members[groups.find(i)].push_back(i);
    }
    const double convex_tol = std::max(1e-9, 10.0 * tol);
    for (const auto& [root, ids] : members) {
        MergedFace merged;
        std::map<LatticeVertex, Vec2> points;
        double area = 0.0;
        for (const auto id : ids) {
            const auto& f = chart.faces[id];
            merged.faces.push_back(f.face);
            const auto vs = f.face.vertices();
            for (std::size_t s = 0; s < 3; ++s) {
                points.emplace(vs[s], f.corners[s]);
            }
            area += 0.5 * cross(f.corners[1] - f.corners[0], f.corners[2] - f.corners[0]);
        }
        const auto& first = chart.faces[ids.front()].corners;
        merged.circle = circumcircle(first[0], first[1], first[2]);
        std::vector<Vec2> pts;
        for (const auto& [v, p] : points) {
            merged.vertices.push_back(v);
            pts.push_back(p);
            merged.concyclicity_residual =
                std::max(merged.concyclicity_residual,
                         std::abs(norm(p - merged.circle.center) - merged.circle.radius) / merged.circle.radius);
        }
        merged.convex = std::abs(hull_area(pts) - area) <= convex_tol * area;
        if (!merged.convex || merged.concyclicity_residual > 10.0 * tol) {
            throw Error(ErrorKind::concyclicity_violation,
                        "merged face with " + std::to_string(ids.size()) + " triangles has residual " +
                            std::to_string(merged.concyclicity_residual));
        }
        out.faces.push_back(std::move(merged));
    }
    return out;
}

Vec2 klein_stereographic(Vec2 p, KleinDirection direction)
{
    const double r2 = dot(p, p);
    if (!(r2 < 1.0)) {
        throw Error(ErrorKind::outside_disk, "point is not inside the unit disk");
    }
    if (direction == KleinDirection::forward) {
        return (2.0 / (1.0 + r2)) * p;
    }
    return (1.0 / (1.0 + std::sqrt(1.0 - r2))) * p;
}

}  // namespace hexconf
