#include "hexconf/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "hexconf/error.hpp"
#include "hexconf/parallel.hpp"

namespace hexconf {

namespace {

double cot(double x) { return std::cos(x) / std::sin(x); }

TriangleAngles checked_angles(const GeneralizedTriangle& t)
{
    const auto th = angles(t);
    if (std::min({th.a, th.b, th.c}) < kMinDerivativeAngle) {
        throw Error(ErrorKind::degenerate_triangle, "triangle angle below derivative threshold");
    }
    return th;
}

}  // namespace

AngleJacobian angle_derivatives(const GeneralizedTriangle& t)
{
    const auto th = checked_angles(t);
    const std::array<double, 3> c{cot(th.a), cot(th.b), cot(th.c)};
    AngleJacobian d{};
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            if (i == j) {
                d[i][j] = -(c[(i + 1) % 3] + c[(i + 2) % 3]);
            } else {
                d[i][j] = c[3 - i - j];
            }
        }
    }
    return d;
}

std::vector<double> curvature_gradient(const FanConfiguration& f)
{
    const int n = f.n();
    std::vector<double> g(static_cast<std::size_t>(n) + 1, 0.0);
    for (int j = 1; j <= n; ++j) {
        // Triangle (0, j, j+1); K = 2 pi - sum of center angles.
        const auto th = checked_angles(f.triangle(j));
        const double cot_j = cot(th.b);
        const double cot_k = cot(th.c);
        g[0] += cot_j + cot_k;
        g[f.wrap(j)] -= cot_k;
        g[f.wrap(j + 1)] -= cot_j;
    }
    return g;
}

EdgeCoefficients edge_coefficients(const FanConfiguration& f, int j)
{
    const auto prev = checked_angles(f.triangle(j - 1));  // (0, j-1, j)
    const auto next = checked_angles(f.triangle(j));      // (0, j, j+1)
    return {
        cot(prev.a) + cot(next.a),
        cot(prev.a) + cot(prev.b),
        cot(next.a) + cot(next.c),
    };
}

double alpha_rate(const FanConfiguration& f, int j, double du_prev, double du_j, double du_next)
{
    const auto here = edge_coefficients(f, j);
    const auto after = edge_coefficients(f, j + 1);
    const auto before = edge_coefficients(f, j - 1);
    return here.A * du_j - after.B * du_next - before.C * du_prev;
}

}  // namespace hexconf

namespace hexconf {

namespace {

double relative_error(double fd, double an) { return std::abs(fd - an) / std::max(1.0, std::abs(an)); }

GeneralizedTriangle fan_triangle_with(const FanConfiguration& f, int j, std::size_t which, double du)
{
    std::vector<double> u(f.factors().begin(), f.factors().end());
    const std::size_t idx[3] = {0, f.wrap(j), f.wrap(j + 1)};
    u[idx[which]] += du;
    return FanConfiguration(u).triangle(j);
}

}  // namespace

FdCheckReport fd_check(std::uint64_t seed, std::uint64_t trials, int n, double step)
{
    if (n < 3) {
        throw Error(ErrorKind::domain_error, "fans need n >= 3");
    }
    std::vector<FdCheckReport> per(trials);
    parallel_for(trials, [&](std::size_t t) {
        std::mt19937_64 rng(seed ^ t);
        std::uniform_real_distribution<double> d(-0.4, 0.4);
        FanConfiguration f;
        do {
            std::vector<double> u(static_cast<std::size_t>(n) + 1);
            for (auto& x : u) {
                x = d(rng);
            }
            f = FanConfiguration(u);
        } while (!in_T(f) || min_angle(f) < 5e-2);

        auto& r = per[t];
        for (int j = 1; j <= n; ++j) {
            const auto an = angle_derivatives(f.triangle(j));
            for (std::size_t col = 0; col < 3; ++col) {
                const auto up = angles(fan_triangle_with(f, j, col, step));
                const auto dn = angles(fan_triangle_with(f, j, col, -step));
                const double fd[3] = {(up.a - dn.a) / (2 * step), (up.b - dn.b) / (2 * step),
                                      (up.c - dn.c) / (2 * step)};
                for (std::size_t row = 0; row < 3; ++row) {
                    r.max_angle_error = std::max(r.max_angle_error, relative_error(fd[row], an[row][col]));
                }
            }
            for (const auto& row : an) {
                r.max_row_sum = std::max(r.max_row_sum, std::abs(row[0] + row[1] + row[2]));
            }
        }
        const auto g = curvature_gradient(f);
        double sum = 0.0;
        for (std::size_t k = 0; k < g.size(); ++k) {
            std::vector<double> up(f.factors().begin(), f.factors().end());
            auto dn = up;
            up[k] += step;
            dn[k] -= step;
            const double fd = (curvature(FanConfiguration(up)) - curvature(FanConfiguration(dn))) / (2 * step);
            r.max_gradient_error = std::max(r.max_gradient_error, relative_error(fd, g[k]));
            sum += g[k];
        }
        r.max_gradient_sum = std::abs(sum);
    });
    FdCheckReport out;
    out.trials = trials;
    for (const auto& r : per) {
        out.max_angle_error = std::max(out.max_angle_error, r.max_angle_error);
        out.max_gradient_error = std::max(out.max_gradient_error, r.max_gradient_error);
        out.max_row_sum = std::max(out.max_row_sum, r.max_row_sum);
        out.max_gradient_sum = std::max(out.max_gradient_sum, r.max_gradient_sum);
    }
    return out;
}

}  // namespace hexconf
