#include "hexconf/fan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "hexconf/error.hpp"

namespace hexconf {

namespace {

constexpr double kPi = std::numbers::pi;

// Half-angle form of the angle opposite edge `opp`; `d_opp`, `d_1`, `d_2` are s - l.
double half_angle(double s, double d_opp, double d_1, double d_2)
{
    const double num = std::sqrt(std::max(0.0, d_1 * d_2));
    const double den = std::sqrt(std::max(0.0, s * d_opp));
    return 2.0 * std::atan2(num, den);
}

}  // namespace

double degeneracy_tolerance(const GeneralizedTriangle& t) noexcept { return 1e-12 * (t.a + t.b + t.c); }

double triangle_slack(const GeneralizedTriangle& t) noexcept
{
    return std::min({t.b + t.c - t.a, t.c + t.a - t.b, t.a + t.b - t.c});
}

bool is_generalized_triangle(const GeneralizedTriangle& t) noexcept
{
    const bool positive = t.a > 0.0 && t.b > 0.0 && t.c > 0.0 && std::isfinite(t.a) &&
                          std::isfinite(t.b) && std::isfinite(t.c);
    return positive && triangle_slack(t) >= -degeneracy_tolerance(t);
}

TriangleAngles angles(const GeneralizedTriangle& t)
{
    if (!is_generalized_triangle(t)) {
        throw Error(ErrorKind::invalid_triangle,
                    "lengths (" + std::to_string(t.a) + ", " + std::to_string(t.b) + ", " +
                        std::to_string(t.c) + ") violate the triangle inequality");
    }
    const double s = 0.5 * (t.a + t.b + t.c);
    const double da = 0.5 * (t.b + t.c - t.a);
    const double db = 0.5 * (t.c + t.a - t.b);
    const double dc = 0.5 * (t.a + t.b - t.c);
    return {half_angle(s, da, db, dc), half_angle(s, db, dc, da), half_angle(s, dc, da, db)};
}

double conformal_length(double base_length, double u_i, double u_j)
{
    if (!(base_length > 0.0)) {
        throw Error(ErrorKind::domain_error, "base length must be positive");
    }
    return std::exp(u_i + u_j) * base_length;
}

FanConfiguration::FanConfiguration(std::vector<double> factors) : u_(std::move(factors))
{
    if (u_.size() < 4) {
        throw Error(ErrorKind::domain_error, "a fan needs at least 3 boundary vertices");
    }
}

FanConfiguration FanConfiguration::regular(int n, double boundary_factor)
{
    if (n < 3) {
        throw Error(ErrorKind::domain_error, "a fan needs at least 3 boundary vertices");
    }
    std::vector<double> u(static_cast<std::size_t>(n) + 1, boundary_factor);
    u[0] = 0.0;
    return FanConfiguration(std::move(u));
}

std::size_t FanConfiguration::wrap(int j) const noexcept
{
    const int nn = n();
    return static_cast<std::size_t>(((j - 1) % nn + nn) % nn + 1);
}

GeneralizedTriangle FanConfiguration::triangle(int j) const noexcept
{
    const double u0 = u_[0];
    const double uj = u_[wrap(j)];
    const double uk = u_[wrap(j + 1)];
    return {std::exp(uj + uk), std::exp(u0 + uk), std::exp(u0 + uj)};
}

FanConfiguration FanConfiguration::shifted(double c) const
{
    auto u = u_;
    for (auto& x : u) {
        x += c;
    }
    return FanConfiguration(std::move(u));
}

bool in_T(const FanConfiguration& f) noexcept
{
    for (int j = 1; j <= f.n(); ++j) {
        if (!is_generalized_triangle(f.triangle(j))) {
            return false;
        }
    }
    return true;
}

TriangleAngles fan_triangle_angles(const FanConfiguration& f, int j) { return angles(f.triangle(j)); }

double curvature(const FanConfiguration& f)
{
    double sum = 0.0;
    for (int j = 1; j <= f.n(); ++j) {
        sum += fan_triangle_angles(f, j).a;
    }
    return 2.0 * kPi - sum;
}

double alpha(const FanConfiguration& f, int j)
{
    return fan_triangle_angles(f, j - 1).b + fan_triangle_angles(f, j).c;
}

std::vector<double> alphas(const FanConfiguration& f)
{
    std::vector<TriangleAngles> tri;
    tri.reserve(static_cast<std::size_t>(f.n()));
    for (int j = 1; j <= f.n(); ++j) {
        tri.push_back(fan_triangle_angles(f, j));
    }
    std::vector<double> out(tri.size());
    const int n = f.n();
    for (int j = 1; j <= n; ++j) {
        const auto prev = static_cast<std::size_t>((j - 2 + n) % n);
        const auto cur = static_cast<std::size_t>(j - 1);
        out[cur] = tri[prev].b + tri[cur].c;
    }
    return out;
}

bool in_D(const FanConfiguration& f, double tol) noexcept
{
    if (!in_T(f)) {
        return false;
    }
    const auto a = alphas(f);
    return std::all_of(a.begin(), a.end(), [&](double x) { return x <= kPi + tol; });
}

double min_angle(const FanConfiguration& f)
{
    double m = kPi;
    for (int j = 1; j <= f.n(); ++j) {
        const auto t = fan_triangle_angles(f, j);
        m = std::min({m, t.a, t.b, t.c});
    }
    return m;
}

FactorInterval feasible_interval(const FanConfiguration& f, int j)
{
    // Sides P*p, P*Q, p*Q with p = e^{u_j}, P = e^{u_0}, Q = e^{u_neighbor}:
    // PQ/(P+Q) <= p <= PQ/|P-Q|.
    const double lp = f.center();
    FactorInterval out{-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    for (int k : {j - 1, j + 1}) {
        const double lq = f.boundary(k);
        const double lo = lp + lq - (std::max(lp, lq) + std::log1p(std::exp(-std::abs(lp - lq))));
        out.lower = std::max(out.lower, lo);
        if (lp != lq) {
            const double hi = lp + lq - (std::max(lp, lq) + std::log(-std::expm1(-std::abs(lp - lq))));
            out.upper = std::min(out.upper, hi);
        }
    }
    return out;
}

FanConfiguration solve_flat(const FanConfiguration& f, int j, const SolveOptions& opts)
{
    const auto feasible = feasible_interval(f, j);
    const double lo = std::max(opts.lower, feasible.lower);
    const double hi = std::min(opts.upper, feasible.upper);
    if (!(lo <= hi)) {
        throw Error(ErrorKind::no_root, "no feasible value for the free factor in the search interval");
    }

    // Only the two triangles at j move with u_j.
    double rest = 0.0;
    for (int k = 1; k <= f.n(); ++k) {
        const auto idx = f.wrap(k);
        if (idx != f.wrap(j) && idx != f.wrap(j - 1)) {
            rest += fan_triangle_angles(f, k).a;
        }
    }
    auto work = f;
    auto residual = [&](double x) {
        work.set_boundary(j, x);
        return 2.0 * kPi - rest - fan_triangle_angles(work, j - 1).a - fan_triangle_angles(work, j).a -
               opts.target;
    };

    const int points = std::max(opts.scan_points, 1);
    std::vector<double> xs(static_cast<std::size_t>(points) + 1);
    std::vector<double> gs(xs.size());
    for (int k = 0; k <= points; ++k) {
        const auto idx = static_cast<std::size_t>(k);
        xs[idx] = (k == points) ? hi : lo + (hi - lo) * static_cast<double>(k) / points;
        gs[idx] = residual(xs[idx]);
    }
    // Sign changes between consecutive non-zero samples; exact zeros lie inside a bracket.
    int changes = 0;
    std::size_t last_nonzero = xs.size();
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    double g_lo = 0.0;
    std::size_t exact_zero = xs.size();
    for (std::size_t k = 0; k < xs.size(); ++k) {
        if (gs[k] == 0.0) {
            exact_zero = k;
            continue;
        }
        if (last_nonzero < xs.size() && (gs[k] < 0.0) != (gs[last_nonzero] < 0.0)) {
            if (changes == 0) {
                bracket_lo = xs[last_nonzero];
                bracket_hi = xs[k];
                g_lo = gs[last_nonzero];
            }
            ++changes;
        }
        last_nonzero = k;
    }
    if (changes == 0 && exact_zero < xs.size()) {
        work.set_boundary(j, xs[exact_zero]);
        return work;
    }
    if (changes == 0) {
        throw Error(ErrorKind::no_root, "curvature keeps one sign over the search interval");
    }
    if (changes > 1) {
        throw Error(ErrorKind::ambiguous,
                    std::to_string(changes) + " sign changes of the curvature along the free factor");
    }

    double a = bracket_lo;
    double b = bracket_hi;
    double best = a;
    double best_g = g_lo;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (a + b);
        const double g = residual(mid);
        if (std::abs(g) < std::abs(best_g)) {
            best = mid;
            best_g = g;
        }
        if (std::abs(g) <= opts.tolerance || mid <= a || mid >= b) {
            break;
        }
        if ((g < 0.0) == (g_lo < 0.0)) {
            a = mid;
            g_lo = g;
        } else {
            b = mid;
        }
    }
    {
        const double gb = residual(b);
        if (std::abs(gb) < std::abs(best_g)) {
            best = b;
            best_g = gb;
        }
    }
    if (std::abs(best_g) > std::max(opts.tolerance, 1e-9)) {
        throw Error(ErrorKind::no_root, "bisection did not reach the curvature tolerance");
    }
    work.set_boundary(j, best);
    return work;
}

double regular_flat_factor(int n)
{
    if (n < 3) {
        throw Error(ErrorKind::domain_error, "a fan needs at least 3 boundary vertices");
    }
    return std::log(2.0 * std::sin(kPi / n));
}

SampleOutcome sample_D0(std::mt19937_64& rng, int n, const SampleOptions& opts)
{
    const double mid = regular_flat_factor(n);
    std::uniform_real_distribution<double> box(mid - opts.half_width, mid + opts.half_width);
    for (int attempt = 1; attempt <= opts.max_attempts; ++attempt) {
        std::vector<double> u(static_cast<std::size_t>(n) + 1, mid);
        u[0] = 0.0;
        for (int k = 2; k <= n; ++k) {
            u[static_cast<std::size_t>(k)] = box(rng);
        }
        FanConfiguration candidate(std::move(u));
        try {
            candidate = solve_flat(candidate, 1);
        } catch (const Error&) {
            continue;
        }
        if (!in_D(candidate, opts.delaunay_tol)) {
            continue;
        }
        if (!opts.allow_degenerate && min_angle(candidate) < 1e-9) {
            continue;
        }
        return {std::move(candidate), attempt};
    }
    throw Error(ErrorKind::sampling_exhausted,
                "no flat Delaunay fan after " + std::to_string(opts.max_attempts) + " attempts");
}

FanConfiguration sample_D0(std::uint64_t seed, int n, const SampleOptions& opts)
{
    std::mt19937_64 rng(seed);
    return sample_D0(rng, n, opts).fan;
}

}  // namespace hexconf
