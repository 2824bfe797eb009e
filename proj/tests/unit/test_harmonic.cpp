#include "doctest.h"

#include <cmath>
#include <fstream>
#include <random>

#include "hexconf/harmonic.hpp"
#include "json.hpp"

using namespace hexconf;

namespace {

double weighted_sum(const QuasiHarmonicCertificate& c, const std::array<double, 6>& a)
{
    double s = 0.0;
    for (std::size_t i = 0; i < 6; ++i) {
        s += c.weights[i] * a[i];
    }
    return s;
}

double total(const QuasiHarmonicCertificate& c)
{
    double s = 0.0;
    for (double m : c.weights) {
        s += m;
    }
    return s;
}

ConformalField linear_field(std::int64_t radius, double gm, double gn)
{
    ConformalField f(ball({0, 0}, radius));
    for (const auto& [v, _] : f.values()) {
        f.set(v, gm * static_cast<double>(v.m) + gn * static_cast<double>(v.n));
    }
    return f;
}

}  // namespace

TEST_CASE("worked weight vectors")
{
    const std::array<double, 6> a{-1, 0.5, 0.5, 0.5, 0.5, 1};
    const auto c = average_weights(a, 1.0, 1.0);
    CHECK(c.weights[0] == doctest::Approx(3.0 / 7.0).epsilon(1e-15));
    for (std::size_t i = 1; i <= 4; ++i) {
        CHECK(c.weights[i] == doctest::Approx(1.0 / 14.0).epsilon(1e-15));
    }
    CHECK(c.weights[5] == doctest::Approx(2.0 / 7.0).epsilon(1e-15));
    CHECK(std::abs(total(c) - 1.0) < 1e-14);
    CHECK(std::abs(weighted_sum(c, a)) < 1e-14);

    const double eps = 0.3;
    const std::array<double, 6> b{-eps, 0, 0, 0, 0, eps};
    const auto d = average_weights(b, eps, 1.0);
    CHECK(d.weights[0] == doctest::Approx(1.0 / 3.0));
    CHECK(d.weights[1] == doctest::Approx(1.0 / 12.0));
    CHECK(d.weights[5] == doctest::Approx(1.0 / 3.0));
    CHECK(d.floor >= d.bound);
}

TEST_CASE("weights are scale invariant and follow the original order")
{
    const std::array<double, 6> a{0.2, -0.4, 0.2, 0.2, 0.2, 0.2};
    const auto c = average_weights(a, 0.2, 0.4, 1.0);
    std::array<double, 6> scaled{};
    for (std::size_t i = 0; i < 6; ++i) {
        scaled[i] = 2.5 * a[i];
    }
    const auto d = average_weights(scaled, 0.5, 1.0, 2.5);
    for (std::size_t i = 0; i < 6; ++i) {
        CHECK(c.weights[i] == doctest::Approx(d.weights[i]));
    }
    CHECK(c.weights[1] > c.weights[0]);
}

TEST_CASE("negative middle mean is handled by negation")
{
    const std::array<double, 6> a{0.9, -0.5, -0.5, -0.5, -0.5, -1.0};
    const auto c = average_weights(a, 0.5, 1.0);
    CHECK(std::abs(total(c) - 1.0) < 1e-14);
    CHECK(std::abs(weighted_sum(c, a)) < 1e-14);
    CHECK(c.floor > 0.0);
}

TEST_CASE("weight hypotheses are enforced")
{
    const std::array<double, 6> one_sided{0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
    CHECK_THROWS_AS((void)average_weights(one_sided, 0.1, 1.0), Error);
    const std::array<double, 6> too_big{-2, 0, 0, 0, 0, 1};
    CHECK_THROWS_AS((void)average_weights(too_big, 0.1, 1.0), Error);
}

TEST_CASE("random certificates")
{
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    int tested = 0;
    while (tested < 5000) {
        std::array<double, 6> a{};
        for (auto& x : a) {
            x = d(rng);
        }
        const auto [lo, hi] = std::minmax_element(a.begin(), a.end());
        if (*hi < 0.01 || *lo > -0.01) {
            continue;
        }
        ++tested;
        const auto c = average_weights(a, 0.01, 1.0);
        CHECK(std::abs(total(c) - 1.0) < 1e-12);
        CHECK(std::abs(weighted_sum(c, a)) < 1e-12);
        CHECK(c.floor >= c.bound);
        CHECK(c.floor > 0.0);
    }
}

TEST_CASE("hexagon dichotomy")
{
    const auto u = sample_D0(std::uint64_t{3}, 6);
    const auto same = hex_dichotomy(u, u, 0.01);
    CHECK(same.kind == DichotomyCase::close);
    for (double x : same.a) {
        CHECK(x == 0.0);
    }
    const auto shifted = hex_dichotomy(u, u.shifted(0.4), 0.01);
    CHECK(shifted.kind == DichotomyCase::close);

    int averaged = 0;
    for (std::uint64_t i = 0; i < 200; ++i) {
        const auto [p, q] = sample_pair(11, i);
        const auto d = hex_dichotomy(p, q, 0.05);
        CHECK_FALSE(d.anomaly);
        if (d.kind == DichotomyCase::quasi_harmonic) {
            ++averaged;
            REQUIRE(d.certificate);
            CHECK(std::abs(weighted_sum(*d.certificate, d.a)) < 1e-12);
        }
    }
    CHECK(averaged > 0);

    CHECK_THROWS_AS((void)hex_dichotomy(FanConfiguration({0, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1}), u, 0.1), Error);
    CHECK_THROWS_AS((void)hex_dichotomy(FanConfiguration::regular(5), u, 0.1), Error);
}

TEST_CASE("harmonic factor estimates")
{
    const double grid[] = {0.05, 0.1, 0.2};
    const auto est = estimate_harmonic_factors(grid, 500, 5);
    REQUIRE(est.size() == 3);
    for (const auto& e : est) {
        CHECK(e.anomalies == 0);
        CHECK(e.close + e.quasi_harmonic == 500);
    }
    REQUIRE(est[0].factor);
    REQUIRE(est[1].factor);
    CHECK(*est[0].factor <= *est[1].factor);
    if (est[2].factor) {
        CHECK(*est[1].factor <= *est[2].factor);
    }
    CHECK(estimate_harmonic_factor(0.1, 500, 5) == est[1].factor);
    CHECK_FALSE(estimate_harmonic_factor(100.0, 1, 5).has_value());
}

TEST_CASE("frozen harmonic factor table")
{
    std::ifstream in(HEXCONF_FIXTURES "/harmonic_factor.json");
    const auto table = nlohmann::json::parse(in);
    const auto samples = table["samples"].get<std::uint64_t>();
    const auto seed = table["seed"].get<std::uint64_t>();
    std::vector<double> grid;
    for (const auto& row : table["table"]) {
        grid.push_back(row["eps"].get<double>());
    }
    const auto est = estimate_harmonic_factors(grid, samples, seed);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        REQUIRE(est[i].factor);
        CHECK(*est[i].factor == doctest::Approx(table["table"][i]["m"].get<double>()).epsilon(1e-9));
    }
}

TEST_CASE("epsilon schedule")
{
    const auto s = epsilon_schedule(0.1, 2, [](double) { return 0.1; });
    REQUIRE(s.eps.size() == 3);
    CHECK(s.eps[2] == doctest::Approx(0.1));
    CHECK(s.eps[1] == doctest::Approx(0.01));
    CHECK(s.eps[0] == doctest::Approx(0.001));
    CHECK(s.delta() == doctest::Approx(0.001));

    const auto half = epsilon_schedule(0.8, 4, [](double) { return 0.7; });
    for (int j = 0; j <= 4; ++j) {
        CHECK(half.eps[static_cast<std::size_t>(j)] == doctest::Approx(0.8 / std::pow(2.0, 4 - j)));
    }
    CHECK(epsilon_schedule(0.3, 0, [](double) { return 0.1; }).delta() == 0.3);

    const auto dec = epsilon_schedule(0.5, 6, [](double e) { return 0.2 + e; });
    for (std::size_t j = 1; j < dec.eps.size(); ++j) {
        CHECK(dec.eps[j - 1] < dec.eps[j]);
    }
    CHECK_THROWS_AS((void)epsilon_schedule(-1.0, 2, [](double) { return 0.1; }), Error);

    const auto step = tabulated_factor({{0.2, 0.03}, {0.05, 0.01}, {0.1, 0.02}});
    CHECK(step(0.01) == 0.01);
    CHECK(step(0.1) == 0.02);
    CHECK(step(0.15) == 0.02);
    CHECK(step(5.0) == 0.03);
}

TEST_CASE("propagation on constant-gradient fields")
{
    const auto field = linear_field(6, 0.05, -0.02);
    const auto s = epsilon_schedule(0.1, 3, [](double) { return 0.1; });
    const auto rep = propagate_bound_check(field, {0, 0}, 3, 0.05, s);
    CHECK(rep.passed());
    REQUIRE(rep.layers.size() == 4);
    for (std::size_t j = 0; j < 4; ++j) {
        CHECK(rep.layers[j].slack == doctest::Approx(s.eps[j]));
    }
    CHECK_THROWS_AS((void)propagate_bound_check(field, {0, 0}, 3, 0.04, s), Error);
    CHECK_THROWS_AS((void)propagate_bound_check(field, {0, 0}, 3, 0.5, s), Error);
    CHECK_THROWS_AS((void)propagate_bound_check(field, {0, 0}, 6, 0.05, epsilon_schedule(0.1, 6, [](double) {
                                                    return 0.1;
                                                })),
                    Error);
}

TEST_CASE("uniform window")
{
    const auto m_fn = [](double) { return 0.1; };
    const auto field = linear_field(8, 0.2, 0.07);
    const auto w = find_uniform_window(field, 0.1, 2, m_fn);
    CHECK(w.N == doctest::Approx(0.07));
    CHECK(w.M == doctest::Approx(0.2));
    CHECK(w.layer == 1);
    CHECK(w.within(1e-12));

    // A bump near the rim, outside the anchor search region.
    auto bumped = linear_field(10, 0.2, 0.07);
    const LatticeVertex far{9, 0};
    bumped.set(far, bumped.at(far) + 0.3);
    const auto wb = find_uniform_window(bumped, 0.1, 2, m_fn);
    CHECK(hex_distance(wb.center, far) > 2);
    CHECK(wb.N == doctest::Approx(0.07));
    CHECK(wb.deviation_omega < 1e-12);
    // M is the sup over the whole field, so the rim bump shows up as the anchor gap.
    CHECK(wb.anchor_gap == doctest::Approx(0.3));
    CHECK(wb.deviation_one == doctest::Approx(0.3));

    // Growing omega-gradient: every layer increments by more than delta.
    ConformalField curved(ball({0, 0}, 6));
    for (const auto& [v, _] : curved.values()) {
        curved.set(v, 0.01 * static_cast<double>(v.n * v.n));
    }
    try {
        (void)find_uniform_window(curved, 0.1, 2, m_fn);
        FAIL("expected DomainTooSmall");
    } catch (const DomainTooSmall& e) {
        CHECK(e.required_radius() > 6);
        CHECK(e.kind() == ErrorKind::domain_too_small);
    }
}
