#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "hexconf/calculus.hpp"
#include "hexconf/error.hpp"

using namespace hexconf;
using std::numbers::pi;

namespace {

// Triangle with unit base lengths scaled by vertex factors (x, y, z).
GeneralizedTriangle scaled(double x, double y, double z)
{
    return {std::exp(y + z), std::exp(x + z), std::exp(x + y)};
}

double rel_err(double fd, double an) { return std::abs(fd - an) / std::max(1.0, std::abs(an)); }

FanConfiguration random_fan(std::mt19937_64& rng, int n, double spread)
{
    std::uniform_real_distribution<double> d(-spread, spread);
    while (true) {
        std::vector<double> u(static_cast<std::size_t>(n) + 1);
        for (auto& x : u) {
            x = d(rng);
        }
        FanConfiguration f(u);
        if (in_T(f) && min_angle(f) > 1e-2) {
            return f;
        }
    }
}

}  // namespace

TEST_CASE("angle derivatives of the equilateral triangle")
{
    const auto d = angle_derivatives({1, 1, 1});
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            CHECK(d[i][j] == doctest::Approx(i == j ? -2.0 / std::sqrt(3.0) : 1.0 / std::sqrt(3.0)));
        }
    }
    const auto r = angle_derivatives({5, 3, 4});
    CHECK(r[0][1] == doctest::Approx(1.0 / std::tan(std::asin(0.8))));
    CHECK_THROWS_AS((void)angle_derivatives({2, 1, 1}), Error);
}

TEST_CASE("angle derivatives match finite differences")
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> d(-0.6, 0.6);
    const double h = 1e-6;
    int tested = 0;
    while (tested < 300) {
        std::array<double, 3> u{d(rng), d(rng), d(rng)};
        const auto t = scaled(u[0], u[1], u[2]);
        if (!is_generalized_triangle(t) || std::min({angles(t).a, angles(t).b, angles(t).c}) < 1e-2) {
            continue;
        }
        ++tested;
        const auto an = angle_derivatives(t);
        for (std::size_t j = 0; j < 3; ++j) {
            auto up = u;
            auto dn = u;
            up[j] += h;
            dn[j] -= h;
            const auto tp = angles(scaled(up[0], up[1], up[2]));
            const auto tm = angles(scaled(dn[0], dn[1], dn[2]));
            const std::array<double, 3> fd{(tp.a - tm.a) / (2 * h), (tp.b - tm.b) / (2 * h), (tp.c - tm.c) / (2 * h)};
            for (std::size_t i = 0; i < 3; ++i) {
                CHECK(rel_err(fd[i], an[i][j]) < 1e-6);
            }
        }
        for (std::size_t i = 0; i < 3; ++i) {
            CHECK(std::abs(an[i][0] + an[i][1] + an[i][2]) < 1e-12);
        }
    }
}

TEST_CASE("curvature gradient of the regular hexagon")
{
    const auto g = curvature_gradient(FanConfiguration::regular(6));
    CHECK(g[0] == doctest::Approx(12.0 / std::sqrt(3.0)));
    for (std::size_t j = 1; j <= 6; ++j) {
        CHECK(g[j] == doctest::Approx(-2.0 / std::sqrt(3.0)));
    }
}

TEST_CASE("curvature gradient matches finite differences")
{
    std::mt19937_64 rng(8);
    const double h = 1e-6;
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 3 + trial % 6;
        const auto f = random_fan(rng, n, 0.4);
        const auto g = curvature_gradient(f);
        double sum = 0.0;
        for (std::size_t j = 0; j < g.size(); ++j) {
            sum += g[j];
            std::vector<double> up(f.factors().begin(), f.factors().end());
            auto dn = up;
            up[j] += h;
            dn[j] -= h;
            const double fd = (curvature(FanConfiguration(up)) - curvature(FanConfiguration(dn))) / (2 * h);
            CHECK(rel_err(fd, g[j]) < 1e-6);
        }
        CHECK(std::abs(sum) < 1e-10);
    }
}

TEST_CASE("Delaunay sign law, including alpha exactly pi")
{
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const auto f = sample_D0(seed, 6);
        const auto g = curvature_gradient(f);
        for (std::size_t j = 1; j < g.size(); ++j) {
            CHECK(g[j] <= 1e-12);
        }
    }
    // Lower u_2 until alpha_1 = pi, then check entry 1.
    auto f = FanConfiguration::regular(6);
    double lo = -0.6;
    double hi = 0.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        f.set_boundary(2, mid);
        (alpha(f, 1) > pi ? lo : hi) = mid;
    }
    f.set_boundary(2, hi);
    CHECK(alpha(f, 1) == doctest::Approx(pi).epsilon(1e-12));
    const auto g = curvature_gradient(f);
    CHECK(g[1] <= 0.0);
}

TEST_CASE("edge coefficients")
{
    const auto reg = edge_coefficients(FanConfiguration::regular(6), 3);
    CHECK(reg.A == doctest::Approx(2.0 / std::sqrt(3.0)));
    CHECK(reg.B == doctest::Approx(2.0 / std::sqrt(3.0)));
    CHECK(reg.C == doctest::Approx(2.0 / std::sqrt(3.0)));

    // alpha_1 >= pi forces A_1 >= B_1 + C_1.
    auto f = FanConfiguration::regular(6);
    for (double t : {-0.55, -0.6, -0.65}) {
        f.set_boundary(2, t);
        f.set_boundary(6, 0.05);
        if (alpha(f, 1) >= pi) {
            const auto c = edge_coefficients(f, 1);
            CHECK(c.B > 0.0);
            CHECK(c.C > 0.0);
            CHECK(c.A >= c.B + c.C);
        }
    }
    CHECK(alpha(f, 1) >= pi);
}

TEST_CASE("alpha rate matches finite differences along a path")
{
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> vel(-1.0, 1.0);
    const double h = 1e-6;
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 4 + trial % 5;
        const auto f = random_fan(rng, n, 0.3);
        std::vector<double> v(static_cast<std::size_t>(n) + 1);
        for (std::size_t k = 1; k < v.size(); ++k) {
            v[k] = vel(rng);
        }
        auto moved = [&](double s) {
            std::vector<double> u(f.factors().begin(), f.factors().end());
            for (std::size_t k = 1; k < u.size(); ++k) {
                u[k] += s * v[k];
            }
            return FanConfiguration(u);
        };
        const int j = 1 + trial % n;
        const double fd = (alpha(moved(h), j) - alpha(moved(-h), j)) / (2 * h);
        const double an = alpha_rate(f, j, v[f.wrap(j - 1)], v[f.wrap(j)], v[f.wrap(j + 1)]);
        CHECK(rel_err(fd, an) < 1e-5);
    }
}

TEST_CASE("finite-difference check of the derivative formulas")
{
    for (int n : {3, 6, 9}) {
        CAPTURE(n);
        const auto r = fd_check(42, 300, n);
        CHECK(r.trials == 300);
        CHECK(r.max_angle_error < 1e-6);
        CHECK(r.max_gradient_error < 1e-6);
        CHECK(r.max_row_sum < 1e-12);
        CHECK(r.max_gradient_sum < 1e-12);
    }
    const auto a = fd_check(5, 100, 6);
    const auto b = fd_check(5, 100, 6);
    CHECK(a.max_angle_error == b.max_angle_error);
    CHECK(a.max_gradient_error == b.max_gradient_error);
}
