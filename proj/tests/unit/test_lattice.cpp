#include "doctest.h"

#include <cmath>
#include <deque>
#include <map>
#include <set>

#include "hexconf/error.hpp"
#include "hexconf/field.hpp"
#include "hexconf/lattice.hpp"

using namespace hexconf;

TEST_CASE("neighbors of the origin are counterclockwise from +1")
{
    const auto nb = neighbors({0, 0});
    const std::array<LatticeVertex, 6> expected{{{1, 0}, {0, 1}, {-1, 1}, {-1, 0}, {0, -1}, {1, -1}}};
    CHECK(nb == expected);
    for (std::size_t k = 0; k < 6; ++k) {
        const auto p = position(nb[k]);
        CHECK(norm(p) == doctest::Approx(1.0));
        const auto q = position(nb[(k + 1) % 6]);
        CHECK(cross(p, q) > 0.0);
    }
}

TEST_CASE("neighbors are translation invariant and symmetric")
{
    const LatticeVertex v{2, -1};
    for (const auto& w : neighbors(v)) {
        CHECK(adjacent(v, w));
        CHECK(hex_distance(v, w) == 1);
    }
    CHECK(neighbors(neighbors(v)[0])[3] == v);
    CHECK_FALSE(adjacent(v, v));
    CHECK_FALSE(adjacent(v, v + LatticeVertex{1, 1}));
}

TEST_CASE("faces are counterclockwise unit triangles")
{
    for (auto kind : {FaceKind::up, FaceKind::down}) {
        const Face f{kind, {3, -2}};
        const auto vs = f.vertices();
        const auto a = position(vs[0]);
        const auto b = position(vs[1]);
        const auto c = position(vs[2]);
        CHECK(cross(b - a, c - a) == doctest::Approx(std::sqrt(3.0) / 2.0));
        CHECK(adjacent(vs[0], vs[1]));
        CHECK(adjacent(vs[1], vs[2]));
        CHECK(adjacent(vs[2], vs[0]));
    }
}

TEST_CASE("star faces contain the center and consecutive neighbors")
{
    const LatticeVertex v{-4, 7};
    const auto nb = neighbors(v);
    const auto st = star(v);
    std::set<Face> distinct(st.begin(), st.end());
    CHECK(distinct.size() == 6);
    for (std::size_t k = 0; k < 6; ++k) {
        const auto vs = st[k].vertices();
        std::set<LatticeVertex> s(vs.begin(), vs.end());
        CHECK(s == std::set<LatticeVertex>{v, nb[k], nb[(k + 1) % 6]});
    }
}

TEST_CASE("every edge lies in exactly two faces and every vertex in six")
{
    const auto b = ball({0, 0}, 6);
    std::map<std::pair<LatticeVertex, LatticeVertex>, int> edge_count;
    std::map<LatticeVertex, int> vertex_count;
    for (const auto& f : b.faces()) {
        const auto vs = f.vertices();
        for (std::size_t i = 0; i < 3; ++i) {
            auto a = vs[i];
            auto c = vs[(i + 1) % 3];
            if (c < a) {
                std::swap(a, c);
            }
            ++edge_count[{a, c}];
            ++vertex_count[vs[i]];
        }
    }
    for (const auto& [e, count] : edge_count) {
        if (b.is_interior(e.first) || b.is_interior(e.second)) {
            CHECK(count == 2);
        }
        const auto pair = faces_of_edge(e.first, e.second);
        CHECK(pair[0] != pair[1]);
    }
    for (const auto& v : b.interior_vertices()) {
        CHECK(vertex_count[v] == 6);
    }
    CHECK_THROWS_AS((void)faces_of_edge({0, 0}, {2, 0}), Error);
}

TEST_CASE("ball sizes and nesting")
{
    CHECK(ball({0, 0}, 0).faces().empty());
    const auto b1 = ball({5, 5}, 1);
    CHECK(b1.faces().size() == 6);
    CHECK(b1.vertices().size() == 7);
    const auto st = star({5, 5});
    for (const auto& f : st) {
        CHECK(b1.contains_face(f));
    }
    CHECK(ball({0, 0}, 2).vertices().size() == 19);
    for (std::int64_t r = 0; r < 8; ++r) {
        const auto inner = ball({1, -2}, r);
        const auto outer = ball({1, -2}, r + 1);
        for (const auto& f : inner.faces()) {
            CHECK(outer.contains_face(f));
        }
        CHECK(outer.faces().size() == static_cast<std::size_t>(6 * (r + 1) * (r + 1)));
    }
}

TEST_CASE("hex distance agrees with breadth-first search")
{
    const LatticeVertex origin{0, 0};
    std::map<LatticeVertex, std::int64_t> dist{{origin, 0}};
    std::deque<LatticeVertex> queue{origin};
    while (!queue.empty()) {
        const auto v = queue.front();
        queue.pop_front();
        if (dist[v] == 10) {
            continue;
        }
        for (const auto& w : neighbors(v)) {
            if (!dist.contains(w)) {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    CHECK(dist.size() == 331);
    for (const auto& [v, d] : dist) {
        CHECK(hex_distance(origin, v) == d);
    }
    CHECK(vertices_within(origin, 10).size() == 331);
}

TEST_CASE("gradients of simple fields")
{
    ConformalField constant(ball({0, 0}, 3));
    for (const auto& [v, _] : constant.values()) {
        constant.set(v, 0.7);
    }
    CHECK(gradient(constant, {0, 0}, Direction::one) == 0.0);
    CHECK(gradient(constant, {0, 0}, Direction::omega) == 0.0);

    ConformalField linear(ball({0, 0}, 3));
    for (const auto& [v, _] : linear.values()) {
        linear.set(v, 0.2 * static_cast<double>(v.m));
    }
    CHECK(gradient(linear, {-1, 1}, Direction::one) == doctest::Approx(0.2));
    CHECK(gradient(linear, {-1, 1}, Direction::omega) == doctest::Approx(0.0));
    const LatticeVertex v{-1, 0};
    CHECK(gradient(linear, v, Direction::one) + gradient(linear, v + LatticeVertex{1, 0}, Direction::one) ==
          doctest::Approx(linear.at({1, 0}) - linear.at(v)));
    CHECK_THROWS_AS((void)gradient(linear, {3, 0}, Direction::one), Error);
    CHECK_THROWS_AS((void)linear.at({9, 9}), Error);

    const auto fan = linear.fan_factors({0, 0});
    REQUIRE(fan.size() == 7);
    CHECK(fan[1] == doctest::Approx(0.2));
    CHECK(fan[4] == doctest::Approx(-0.2));
    CHECK(linear.length({0, 0}, {1, 0}) == doctest::Approx(std::exp(0.2)));
}
