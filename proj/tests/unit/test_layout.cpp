#include "doctest.h"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

#include "hexconf/fan.hpp"
#include "hexconf/harmonic.hpp"
#include "hexconf/layout.hpp"
#include "json.hpp"

using namespace hexconf;

namespace {

nlohmann::json fixture(const char* name)
{
    std::ifstream in(std::string(HEXCONF_FIXTURES) + "/" + name);
    REQUIRE(in.good());
    return nlohmann::json::parse(in);
}

}  // namespace

TEST_CASE("regular field develops onto the unit lattice")
{
    const auto chart = develop(constant_gradient_field(0, 0, 15), {0, 0}, 15);
    CHECK(chart.faces.size() == 6u * 15 * 15);
    CHECK(chart.holonomy_defect < 1e-12);
    CHECK(chart.holonomy_log.empty());
    CHECK(chart.length_error < 1e-13);
    CHECK(chart.positively_oriented());
    for (const auto& [v, p] : chart.placements) {
        const Vec2 q = position(v);
        CHECK(norm(p - q) < 1e-12);
    }
    const auto report = overlap_area(chart);
    CHECK_FALSE(report.found);
    CHECK(report.threshold == doctest::Approx(1e-12 * chart.diameter() * chart.diameter()));
}

TEST_CASE("constant shift scales the chart")
{
    auto field = constant_gradient_field(0, 0, 4);
    for (const auto& [v, u] : field.values()) {
        field.set(v, u + 0.5);
    }
    const auto chart = develop(field, {0, 0}, 4);
    for (const auto& [v, p] : chart.placements) {
        CHECK(norm(p - std::exp(1.0) * position(v)) < 1e-12);
    }
}

TEST_CASE("develop rejects curved and incomplete input")
{
    auto field = constant_gradient_field(0, 0, 3);
    field.set({0, 0}, 0.2);
    try {
        (void)develop(field, {0, 0}, 3);
        FAIL("expected nonflat_input");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::nonflat_input);
    }
    CHECK_THROWS_AS((void)develop(constant_gradient_field(0, 0, 2), {0, 0}, 3), Error);
    CHECK_THROWS_AS((void)develop(constant_gradient_field(0, 0, 2), {0, 0}, 0), Error);
}

TEST_CASE("triangle overlap areas")
{
    const std::array<Vec2, 3> t{{{0, 0}, {1, 0}, {0, 1}}};
    CHECK(triangle_overlap(t, t) == doctest::Approx(0.5));
    const std::array<Vec2, 3> flipped{{{0, 0}, {0, 1}, {1, 0}}};
    CHECK(triangle_overlap(t, flipped) == doctest::Approx(0.5));
    const std::array<Vec2, 3> neighbour{{{1, 0}, {1, 1}, {0, 1}}};
    CHECK(triangle_overlap(t, neighbour) == doctest::Approx(0.0).epsilon(1e-15));
    const std::array<Vec2, 3> shifted{{{0.5, 0}, {1.5, 0}, {0.5, 1}}};
    CHECK(triangle_overlap(t, shifted) == doctest::Approx(0.125));
    const std::array<Vec2, 3> far{{{5, 5}, {6, 5}, {5, 6}}};
    CHECK(triangle_overlap(t, far) == 0.0);
    const std::array<Vec2, 3> flat{{{0, 0}, {1, 0}, {2, 0}}};
    CHECK(triangle_overlap(t, flat) == 0.0);
}

TEST_CASE("synthetic coincident faces are reported")
{
    auto chart = develop(constant_gradient_field(0, 0, 3), {0, 0}, 3);
    chart.faces[5].corners = chart.faces[0].corners;
    const auto report = overlap_area(chart);
    REQUIRE(report.found);
    CHECK(report.area == doctest::Approx(std::sqrt(3.0) / 4.0));
    CHECK(report.witness->first == chart.faces[0].face);
    CHECK(report.witness->second == chart.faces[5].face);
    const auto pairs = overlapping_pairs(chart, report.threshold);
    CHECK(pairs.size() >= 1);
    CHECK(pairs.front().first == 0);
}

TEST_CASE("constant gradient feasibility")
{
    CHECK(gradient_feasibility_limit(0.0) == doctest::Approx(std::log(2.0)).epsilon(1e-10));
    CHECK_THROWS_AS((void)constant_gradient_field(0.7, 0.0, 2), Error);
    try {
        (void)constant_gradient_field(1.0, 0.0, 2);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::infeasible_gradient);
    }
}

TEST_CASE("overlap radius matches the oracle")
{
    for (const auto& row : fixture("layout.json").at("overlap_radius")) {
        const double M = row.at("M");
        const double N = row.at("N");
        const int R_max = row.at("R_max");
        const auto R = find_overlap_radius(M, N, R_max);
        CAPTURE(M);
        CAPTURE(N);
        if (row.at("R").is_null()) {
            CHECK_FALSE(R.has_value());
        } else {
            REQUIRE(R.has_value());
            CHECK(*R == row.at("R").get<int>());
            CHECK_FALSE(overlap_area(develop(constant_gradient_field(M, N, *R - 1), {0, 0}, *R - 1)).found);
        }
    }
}

TEST_CASE("overlap radius shrinks as the gradient grows")
{
    int previous = 1000;
    for (double M : {0.15, 0.2, 0.3, 0.4, 0.6}) {
        const auto R = find_overlap_radius(M, 0.0, 40);
        REQUIRE(R.has_value());
        CHECK(*R <= previous);
        previous = *R;
    }
}

TEST_CASE("linear factor fields are flat")
{
    CHECK(common_curvature({0.3, 0.1}) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(common_curvature({0.0, -0.4}) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK_THROWS_AS((void)common_curvature({3.0, 0.0}), Error);

    const auto field = linear_factor_field({0.2, 0.0}, 0.1, 5);
    CHECK(field.at({3, 0}) == doctest::Approx(0.7));
    CHECK(field.at({0, 2}) == doctest::Approx(0.3));

    const auto locus = flat_linear_locus({1.0, 0.0}, 2.0, 1e-10);
    REQUIRE(locus.feasible_limit.has_value());
    REQUIRE(locus.flat_intervals.size() == 1);
    CHECK(locus.flat_intervals.front().first == 0.0);
    CHECK(locus.flat_intervals.front().second <= *locus.feasible_limit);
    CHECK(locus.roots.empty());
    CHECK(locus.flat_samples.front() == 0.0);
    // Feasibility ends when the longest edge equals the sum of the others.
    const double r = *locus.feasible_limit;
    const auto fan = FanConfiguration(linear_factor_field({r, 0.0}, 0.0, 1).fan_factors({0, 0}));
    CHECK(in_T(fan));
}

TEST_CASE("flattening fixes the rim and zeroes interior curvature")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> noise(-0.05, 0.05);
    auto field = constant_gradient_field(0.1, -0.05, 4);
    for (const auto& [v, u] : field.values()) {
        field.set(v, u + noise(rng));
    }
    const auto flat = flatten_interior(field);
    for (const auto& v : flat.domain().interior_vertices()) {
        CHECK(std::abs(curvature(FanConfiguration(flat.fan_factors(v)))) < 1e-12);
    }
    for (const auto& [v, u] : field.values()) {
        if (hex_distance({0, 0}, v) == 4) {
            CHECK(flat.at(v) == u);
        }
    }
    const auto chart = develop(flat, {0, 0}, 4);
    CHECK(chart.holonomy_defect < 1e-10);
    CHECK(chart.positively_oriented());
}

TEST_CASE("random flat fields are Delaunay and embed")
{
    std::mt19937_64 rng(5);
    const auto field = random_flat_field(rng, 6, {.M = 0.05, .N = 0.02, .amplitude = 0.15});
    for (const auto& v : field.domain().interior_vertices()) {
        const FanConfiguration fan(field.fan_factors(v));
        CHECK(std::abs(curvature(fan)) < 1e-12);
        CHECK(in_D(fan));
    }
    const auto chart = develop(field, {0, 0}, 6);
    CHECK(chart.holonomy_defect < 1e-10);
    CHECK_FALSE(overlap_area(chart).found);

    std::mt19937_64 again(5);
    CHECK(random_flat_field(again, 6, {.M = 0.05, .N = 0.02, .amplitude = 0.15}).values() == field.values());
}

TEST_CASE("bound propagation holds on a flattened field near its gradient maximum")
{
    const auto table = fixture("harmonic_factor.json").at("table");
    std::vector<std::pair<double, double>> entries;
    for (const auto& row : table) {
        entries.emplace_back(row.at("eps").get<double>(), row.at("m").get<double>());
    }
    const auto m_fn = tabulated_factor(entries);
    const double eps = 0.2;
    const int R = 1;
    const auto schedule = epsilon_schedule(eps, R, m_fn);

    std::mt19937_64 rng(3);
    const auto field = random_flat_field(rng, 7, {.amplitude = 0.01});
    int checked = 0;
    for (const auto& i : vertices_within({0, 0}, 4)) {
        double M = -1e300;
        for (const auto& w : vertices_within(i, R)) {
            M = std::max(M, gradient(field, w, Direction::one));
        }
        if (gradient(field, i, Direction::one) < M - schedule.delta()) {
            continue;
        }
        const auto report = propagate_bound_check(field, i, R, M, schedule);
        CHECK(report.passed());
        ++checked;
    }
    CHECK(checked > 0);
}

TEST_CASE("svg output")
{
    const auto chart = develop(constant_gradient_field(0, 0, 1), {0, 0}, 1);
    const auto svg = chart_svg(chart);
    CHECK(svg.starts_with("<svg xmlns=\"http://www.w3.org/2000/svg\""));
    CHECK(svg.find("0.500000,-0.866025") != std::string::npos);
    std::size_t polygons = 0;
    for (auto p = svg.find("<polygon"); p != std::string::npos; p = svg.find("<polygon", p + 1)) {
        ++polygons;
    }
    CHECK(polygons == 6);
    CHECK(svg.find("fill=\"red\"") == std::string::npos);

    OverlapReport report;
    report.witness = std::pair{chart.faces[0].face, chart.faces[1].face};
    CHECK(chart_svg(chart, &report).find("fill=\"red\"") != std::string::npos);
    CHECK(chart_svg(chart) == svg);
}
