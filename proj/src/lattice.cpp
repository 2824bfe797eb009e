#include "hexconf/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <set>
#include <string>

#include "hexconf/error.hpp"

namespace hexconf {

namespace {
constexpr double kSqrt3Over2 = 0.86602540378443864676;
}  // namespace

double norm(Vec2 a) noexcept { return std::hypot(a.x, a.y); }

Vec2 position(LatticeVertex v) noexcept
{
    const auto m = static_cast<double>(v.m);
    const auto n = static_cast<double>(v.n);
    return {m + 0.5 * n, kSqrt3Over2 * n};
}

std::array<LatticeVertex, 6> neighbors(LatticeVertex v) noexcept
{
    std::array<LatticeVertex, 6> out{};
    for (std::size_t k = 0; k < 6; ++k) {
        out[k] = v + kUnitDirections[k];
    }
    return out;
}

bool adjacent(LatticeVertex a, LatticeVertex b) noexcept
{
    const auto d = b - a;
    return std::find(kUnitDirections.begin(), kUnitDirections.end(), d) != kUnitDirections.end();
}

std::int64_t hex_distance(LatticeVertex a, LatticeVertex b) noexcept
{
    const auto d = b - a;
    return std::max({std::llabs(d.m), std::llabs(d.n), std::llabs(d.m + d.n)});
}

std::array<LatticeVertex, 3> Face::vertices() const noexcept
{
    if (kind == FaceKind::up) {
        return {anchor, anchor + LatticeVertex{1, 0}, anchor + LatticeVertex{0, 1}};
    }
    return {anchor + LatticeVertex{1, 0}, anchor + LatticeVertex{1, 1}, anchor + LatticeVertex{0, 1}};
}

namespace {

// Face containing the counterclockwise corner (v, v + d_k, v + d_{k+1}).
Face corner_face(LatticeVertex v, std::size_t k) noexcept
{
    switch (k % 6) {
        case 0: return {FaceKind::up, v};                                 // v, v+1, v+w
        case 1: return {FaceKind::down, v + LatticeVertex{-1, 0}};        // v, v+w, v+w-1
        case 2: return {FaceKind::up, v + LatticeVertex{-1, 0}};          // v, v+w-1, v-1
        case 3: return {FaceKind::down, v + LatticeVertex{-1, -1}};       // v, v-1, v-w
        case 4: return {FaceKind::up, v + LatticeVertex{0, -1}};          // v, v-w, v-w+1
        default: return {FaceKind::down, v + LatticeVertex{0, -1}};       // v, v-w+1, v+1
    }
}

}  // namespace

std::array<Face, 6> star(LatticeVertex v) noexcept
{
    std::array<Face, 6> out{};
    for (std::size_t k = 0; k < 6; ++k) {
        out[k] = corner_face(v, k);
    }
    return out;
}

std::array<Face, 2> faces_of_edge(LatticeVertex a, LatticeVertex b)
{
    const auto d = b - a;
    const auto it = std::find(kUnitDirections.begin(), kUnitDirections.end(), d);
    if (it == kUnitDirections.end()) {
        throw Error(ErrorKind::domain_error, "vertices are not adjacent");
    }
    const auto k = static_cast<std::size_t>(it - kUnitDirections.begin());
    // left face is corner k, right face is corner k-1
    return {corner_face(a, k), corner_face(a, (k + 5) % 6)};
}

std::vector<LatticeVertex> vertices_within(LatticeVertex center, std::int64_t r)
{
    std::vector<LatticeVertex> out;
    if (r < 0) {
        return out;
    }
    for (std::int64_t dm = -r; dm <= r; ++dm) {
        for (std::int64_t dn = -r; dn <= r; ++dn) {
            if (std::llabs(dm + dn) <= r) {
                out.push_back(center + LatticeVertex{dm, dn});
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

Ball::Ball(LatticeVertex center, std::int64_t radius) : center_(center), radius_(radius)
{
    if (radius < 0) {
        throw Error(ErrorKind::domain_error, "ball radius must be non-negative");
    }
    std::set<LatticeVertex> verts;
    for (std::int64_t dm = -radius - 1; dm <= radius + 1; ++dm) {
        for (std::int64_t dn = -radius - 1; dn <= radius + 1; ++dn) {
            for (auto kind : {FaceKind::up, FaceKind::down}) {
                const Face f{kind, center + LatticeVertex{dm, dn}};
                const auto vs = f.vertices();
                const bool inside = std::all_of(vs.begin(), vs.end(), [&](LatticeVertex v) {
                    return hex_distance(center, v) <= radius;
                });
                if (inside) {
                    faces_.push_back(f);
                    verts.insert(vs.begin(), vs.end());
                }
            }
        }
    }
    std::sort(faces_.begin(), faces_.end());
    vertices_.assign(verts.begin(), verts.end());
}

bool Ball::contains_vertex(LatticeVertex v) const noexcept
{
    return radius_ > 0 && hex_distance(center_, v) <= radius_;
}

bool Ball::contains_face(const Face& f) const noexcept
{
    const auto vs = f.vertices();
    return radius_ > 0 && std::all_of(vs.begin(), vs.end(), [&](LatticeVertex v) {
               return hex_distance(center_, v) <= radius_;
           });
}

bool Ball::is_interior(LatticeVertex v) const noexcept
{
    return radius_ > 0 && hex_distance(center_, v) < radius_;
}

std::vector<LatticeVertex> Ball::interior_vertices() const
{
    return radius_ > 0 ? vertices_within(center_, radius_ - 1) : std::vector<LatticeVertex>{};
}

Ball ball(LatticeVertex center, std::int64_t radius) { return Ball(center, radius); }

}  // namespace hexconf
