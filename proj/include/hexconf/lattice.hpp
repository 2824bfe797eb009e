#pragma once

// Combinatorics of the standard hexagonal triangulation of the plane.
//
// A vertex (m, n) sits at the complex position m + n*w with w = (1 + i*sqrt(3)) / 2.
// Unit directions in (m, n) coordinates, counterclockwise from +1:
//   (1,0) (0,1) (-1,1) (-1,0) (0,-1) (1,-1)

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <vector>

namespace hexconf {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend constexpr Vec2 operator+(Vec2 a, Vec2 b) noexcept { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Vec2 operator-(Vec2 a, Vec2 b) noexcept { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Vec2 operator*(double s, Vec2 a) noexcept { return {s * a.x, s * a.y}; }
    friend constexpr bool operator==(Vec2, Vec2) = default;
};

[[nodiscard]] constexpr double dot(Vec2 a, Vec2 b) noexcept { return a.x * b.x + a.y * b.y; }
[[nodiscard]] constexpr double cross(Vec2 a, Vec2 b) noexcept { return a.x * b.y - a.y * b.x; }
[[nodiscard]] double norm(Vec2 a) noexcept;

struct LatticeVertex {
    std::int64_t m = 0;
    std::int64_t n = 0;

    friend constexpr LatticeVertex operator+(LatticeVertex a, LatticeVertex b) noexcept
    {
        return {a.m + b.m, a.n + b.n};
    }
    friend constexpr LatticeVertex operator-(LatticeVertex a, LatticeVertex b) noexcept
    {
        return {a.m - b.m, a.n - b.n};
    }
    friend constexpr LatticeVertex operator-(LatticeVertex a) noexcept { return {-a.m, -a.n}; }
    friend constexpr auto operator<=>(const LatticeVertex&, const LatticeVertex&) = default;
};

/// Planar position m + n*w of a lattice vertex.
[[nodiscard]] Vec2 position(LatticeVertex v) noexcept;

enum class Direction { one, omega };

[[nodiscard]] constexpr LatticeVertex offset(Direction c) noexcept
{
    return c == Direction::one ? LatticeVertex{1, 0} : LatticeVertex{0, 1};
}

inline constexpr std::array<LatticeVertex, 6> kUnitDirections{{
    {1, 0}, {0, 1}, {-1, 1}, {-1, 0}, {0, -1}, {1, -1},
}};

/// The six neighbours of v, counterclockwise starting from v + 1.
[[nodiscard]] std::array<LatticeVertex, 6> neighbors(LatticeVertex v) noexcept;

[[nodiscard]] bool adjacent(LatticeVertex a, LatticeVertex b) noexcept;

/// Closed-form graph distance max(|dm|, |dn|, |dm + dn|).
[[nodiscard]] std::int64_t hex_distance(LatticeVertex a, LatticeVertex b) noexcept;

enum class FaceKind : std::uint8_t { up, down };

// up   = {v, v+1, v+w}
// down = {v+1, v+1+w, v+w}
// both listed counterclockwise.
struct Face {
    FaceKind kind = FaceKind::up;
    LatticeVertex anchor;

    [[nodiscard]] std::array<LatticeVertex, 3> vertices() const noexcept;

    friend constexpr auto operator<=>(const Face&, const Face&) = default;
};

/// The six faces around v, face k spanned by v, neighbors(v)[k], neighbors(v)[k+1].
[[nodiscard]] std::array<Face, 6> star(LatticeVertex v) noexcept;

/// The two faces sharing the edge {a, b}. Throws domain_error if a, b are not adjacent.
[[nodiscard]] std::array<Face, 2> faces_of_edge(LatticeVertex a, LatticeVertex b);

class Ball {
public:
    Ball() = default;
    Ball(LatticeVertex center, std::int64_t radius);

    [[nodiscard]] LatticeVertex center() const noexcept { return center_; }
    [[nodiscard]] std::int64_t radius() const noexcept { return radius_; }
    [[nodiscard]] const std::vector<Face>& faces() const noexcept { return faces_; }

    /// Vertices of the faces (sorted). Empty for radius 0.
    [[nodiscard]] const std::vector<LatticeVertex>& vertices() const noexcept { return vertices_; }

    [[nodiscard]] bool contains_vertex(LatticeVertex v) const noexcept;
    [[nodiscard]] bool contains_face(const Face& f) const noexcept;

    /// Vertex whose whole star lies in the ball.
    [[nodiscard]] bool is_interior(LatticeVertex v) const noexcept;

    [[nodiscard]] std::vector<LatticeVertex> interior_vertices() const;

private:
    LatticeVertex center_;
    std::int64_t radius_ = 0;
    std::vector<Face> faces_;
    std::vector<LatticeVertex> vertices_;
};

[[nodiscard]] Ball ball(LatticeVertex center, std::int64_t radius);

/// Lattice vertices within graph distance r of center (including center), sorted.
[[nodiscard]] std::vector<LatticeVertex> vertices_within(LatticeVertex center, std::int64_t r);

}  // namespace hexconf

template <>
struct std::hash<hexconf::LatticeVertex> {
    std::size_t operator()(const hexconf::LatticeVertex& v) const noexcept
    {
        auto h = static_cast<std::uint64_t>(v.m) * 0x9E3779B97F4A7C15ULL;
        h ^= static_cast<std::uint64_t>(v.n) + 0x632BE59BD9B4E019ULL + (h << 6) + (h >> 2);
        return static_cast<std::size_t>(h);
    }
};
