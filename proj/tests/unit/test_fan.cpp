#include "doctest.h"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

#include "hexconf/error.hpp"
#include "hexconf/fan.hpp"
#include "json.hpp"

using namespace hexconf;
using std::numbers::pi;

namespace {

nlohmann::json fixture()
{
    std::ifstream in(HEXCONF_FIXTURES "/fan.json");
    return nlohmann::json::parse(in);
}

}  // namespace

TEST_CASE("angles of basic triangles")
{
    const auto eq = angles({1, 1, 1});
    CHECK(eq.a == doctest::Approx(pi / 3));
    CHECK(eq.b == doctest::Approx(pi / 3));
    CHECK(eq.c == doctest::Approx(pi / 3));

    const auto right = angles({5, 3, 4});
    CHECK(right.a == doctest::Approx(pi / 2));

    const auto flat = angles({3, 1, 2});
    CHECK(flat.a == pi);
    CHECK(flat.b == 0.0);
    CHECK(flat.c == 0.0);

    CHECK_THROWS_AS((void)angles({3, 1, 1}), Error);
    CHECK(is_generalized_triangle({2, 1, 1}));
    CHECK_FALSE(is_generalized_triangle({2.1, 1, 1}));
}

TEST_CASE("angle sum and law of cosines on random triangles")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> side(0.01, 10.0);
    for (int i = 0; i < 2000; ++i) {
        GeneralizedTriangle t{side(rng), side(rng), side(rng)};
        if (!is_generalized_triangle(t) || triangle_slack(t) < 1e-6 * (t.a + t.b + t.c)) {
            continue;
        }
        const auto th = angles(t);
        CHECK(std::abs(th.a + th.b + th.c - pi) < 1e-12);
        CHECK(std::abs(std::cos(th.a) - (t.b * t.b + t.c * t.c - t.a * t.a) / (2 * t.b * t.c)) < 1e-10);
    }
}

TEST_CASE("degenerate continuity")
{
    double last = 0.0;
    for (int k = 3; k <= 12; ++k) {
        const double gap = std::pow(10.0, -k);
        const auto th = angles({2.0 - gap, 1.0, 1.0});
        CHECK(th.a > last);
        last = th.a;
        CHECK(pi - th.a < 10.0 * std::sqrt(gap));
    }
}

TEST_CASE("conformal length")
{
    CHECK(conformal_length(1, 0, 0) == 1.0);
    CHECK(conformal_length(1, std::log(2.0), std::log(3.0)) == doctest::Approx(6.0));
    CHECK(conformal_length(2, 0.5, -0.5) == doctest::Approx(2.0));
}

TEST_CASE("curvature values")
{
    CHECK(std::abs(curvature(FanConfiguration::regular(6))) < 1e-14);
    const FanConfiguration mixed({0, 0.1, 0.1, 0.05, -0.05, -0.1, -0.05});
    CHECK(curvature(mixed) == doctest::Approx(fixture()["curvature_mixed"].get<double>()).epsilon(1e-12));
    CHECK(std::abs(curvature(mixed.shifted(0.37)) - curvature(mixed)) < 1e-12);
    const auto a0 = alphas(mixed);
    const auto a1 = alphas(mixed.shifted(-1.3));
    for (std::size_t j = 0; j < a0.size(); ++j) {
        CHECK(std::abs(a0[j] - a1[j]) < 1e-12);
    }
    CHECK_THROWS_AS((void)curvature(FanConfiguration({0, -3, 0, 0, 0, 0, 0})), Error);
}

TEST_CASE("alpha")
{
    const auto reg = FanConfiguration::regular(6);
    for (int j = 1; j <= 6; ++j) {
        CHECK(alpha(reg, j) == doctest::Approx(2 * pi / 3));
    }
    // l_{02} = l_{01} + l_{12} makes triangle (0,1,2) degenerate with the angle pi at vertex 1.
    const double u1 = -1.0;
    const double u2 = std::log(std::exp(u1) / (1.0 - std::exp(u1)));
    const FanConfiguration f({0, u1, u2, -0.8, -0.8, -0.8, -1.0});
    REQUIRE(in_T(f));
    CHECK(fan_triangle_angles(f, 1).b == doctest::Approx(pi));
    CHECK(fan_triangle_angles(f, 1).c == doctest::Approx(0.0));
    CHECK(alpha(f, 2) == doctest::Approx(pi + fan_triangle_angles(f, 2).c));
    CHECK(alpha(f, 2) >= pi);
}

TEST_CASE("Delaunay membership")
{
    CHECK(in_D(FanConfiguration::regular(6)));
    // Lowering one boundary factor opens the opposite angles at its neighbours.
    FanConfiguration f = FanConfiguration::regular(6);
    double crossed = 0.0;
    for (double t = 0.0; t > -3.0; t -= 0.01) {
        f.set_boundary(2, t);
        if (alpha(f, 1) > pi) {
            crossed = t;
            break;
        }
    }
    REQUIRE(crossed < 0.0);
    CHECK_FALSE(in_D(f));
    CHECK(in_D(f, 10.0));

    // Push alpha_1 to within 1e-13 of pi: the two tolerances only differ inside that band.
    double lo = crossed;
    double hi = crossed + 0.01;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        f.set_boundary(2, mid);
        (alpha(f, 1) > pi ? lo : hi) = mid;
    }
    f.set_boundary(2, hi);
    CHECK(std::abs(alpha(f, 1) - pi) < 1e-12);
    CHECK(in_D(f, 1e-12));
    f.set_boundary(2, hi - 0.001);
    CHECK(in_D(f, 0.0) == in_D(f, 1e-12));
    f.set_boundary(2, hi + 0.001);
    CHECK(in_D(f, 0.0) == in_D(f, 1e-12));
    CHECK_FALSE(in_D(FanConfiguration({0, -3, 0, 0, 0, 0, 0})));
}

TEST_CASE("solve_flat")
{
    const auto reg = FanConfiguration({0, 0.4, 0, 0, 0, 0, 0});
    CHECK(std::abs(solve_flat(reg, 1).boundary(1)) < 1e-10);

    const FanConfiguration f({0, 0.0, 0.1, 0.1, 0.1, 0.1, 0.1});
    const auto flat = solve_flat(f, 1);
    CHECK(std::abs(curvature(flat)) <= 1e-12);
    CHECK(flat.boundary(1) == doctest::Approx(fixture()["solve_flat_u1"].get<double>()).epsilon(1e-10));

    SolveOptions opts;
    opts.target = 0.1;
    const auto raised = solve_flat(f, 1, opts);
    CHECK(raised.boundary(1) < flat.boundary(1));
    CHECK(curvature(raised) == doctest::Approx(0.1));

    SolveOptions narrow;
    narrow.lower = 0.5;
    narrow.upper = 0.6;
    CHECK_THROWS_AS((void)solve_flat(f, 1, narrow), Error);
}

TEST_CASE("regular flat factor matches the oracle")
{
    const auto fx = fixture()["regular_flat_factor"];
    for (int n : {5, 6, 7, 8}) {
        CHECK(regular_flat_factor(n) == doctest::Approx(fx[std::to_string(n)].get<double>()).epsilon(1e-14));
        CHECK(std::abs(curvature(FanConfiguration::regular(n, regular_flat_factor(n)))) < 1e-12);
    }
}

TEST_CASE("feasible interval bounds the generalized triangles")
{
    const FanConfiguration f({0.1, 0.3, -0.2, 0.0, 0.4, 0.1});
    const auto iv = feasible_interval(f, 2);
    auto at = [&](double v) {
        auto g = f;
        g.set_boundary(2, v);
        return g;
    };
    CHECK(in_T(at(0.5 * (iv.lower + iv.upper))));
    CHECK_FALSE(in_T(at(iv.lower - 1e-6)));
    CHECK_FALSE(in_T(at(iv.upper + 1e-6)));
}

TEST_CASE("sample_D0")
{
    for (int n : {5, 6, 7, 8}) {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const auto f = sample_D0(seed, n);
            CHECK(f.n() == n);
            CHECK(f.center() == 0.0);
            CHECK(std::abs(curvature(f)) <= 1e-10);
            for (double a : alphas(f)) {
                CHECK(a <= pi + 1e-10);
            }
        }
    }
    const auto a = sample_D0(42, 6);
    const auto b = sample_D0(42, 6);
    CHECK(std::equal(a.factors().begin(), a.factors().end(), b.factors().begin()));

    std::mt19937_64 rng(3);
    SampleOptions opts;
    int accepted = 0;
    int attempts = 0;
    for (int i = 0; i < 200; ++i) {
        const auto out = sample_D0(rng, 6, opts);
        ++accepted;
        attempts += out.attempts;
    }
    CHECK(accepted > 0);
    CHECK(attempts >= accepted);

    SampleOptions hopeless;
    hopeless.half_width = 0.0;
    hopeless.max_attempts = 3;
    hopeless.delaunay_tol = -1.5;
    CHECK_THROWS_AS((void)sample_D0(std::uint64_t{1}, 6, hopeless), Error);
}
