#include "hexconf/harmonic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "hexconf/parallel.hpp"

namespace hexconf {

namespace {

QuasiHarmonicCertificate nonnegative_mean_weights(std::span<const double, 6> a)
{
    std::array<std::size_t, 6> order{};
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a[x] < a[y]; });
    const double a1 = a[order[0]];
    const double a6 = a[order[5]];
    const double mean = (a[order[1]] + a[order[2]] + a[order[3]] + a[order[4]]) / 4.0;
    const double tilde = (mean + a6) / 2.0;
    const double W = tilde - a1;

    QuasiHarmonicCertificate cert;
    cert.weights[order[0]] = tilde / W;
    for (std::size_t k = 1; k <= 4; ++k) {
        cert.weights[order[k]] = (-a1 / 8.0) / W;
    }
    cert.weights[order[5]] = (-a1 / 2.0) / W;
    return cert;
}

std::array<double, 6> hexagon_differences(const FanConfiguration& u, const FanConfiguration& v)
{
    std::array<double, 6> a{};
    const double d0 = v.center() - u.center();
    for (int j = 1; j <= 6; ++j) {
        a[static_cast<std::size_t>(j - 1)] = (v.boundary(j) - u.boundary(j)) - d0;
    }
    return a;
}

void require_flat_delaunay_hexagon(const FanConfiguration& f, const char* name, double tol)
{
    if (f.n() != 6) {
        throw Error(ErrorKind::precondition_violation, std::string(name) + " is not a hexagon");
    }
    if (!in_D(f)) {
        throw Error(ErrorKind::precondition_violation, std::string(name) + " is not Delaunay");
    }
    if (std::abs(curvature(f)) > tol) {
        throw Error(ErrorKind::precondition_violation, std::string(name) + " is not flat");
    }
}

// eps_0 of the schedule of length R, without storing the intermediate values.
double schedule_delta(double eps, std::int64_t R, const HarmonicFactorFn& m_fn)
{
    double e = eps;
    for (std::int64_t j = 0; j < R && e > 0.0; ++j) {
        e = std::min(e / 2.0, e * m_fn(e / 2.0));
    }
    return e;
}

std::optional<double> grad(const ConformalField& field, LatticeVertex v, Direction c)
{
    const auto here = field.find(v);
    const auto there = field.find(v + offset(c));
    if (!here || !there) {
        return std::nullopt;
    }
    return *there - *here;
}

}  // namespace

QuasiHarmonicCertificate average_weights(std::span<const double, 6> a, double eps_hi, double eps_lo, double M)
{
    if (!(eps_hi > 0.0) || !(eps_lo > 0.0) || !(M > 0.0)) {
        throw Error(ErrorKind::hypothesis_violation, "thresholds and bound must be positive");
    }
    const auto [lo, hi] = std::minmax_element(a.begin(), a.end());
    for (double x : a) {
        if (!(std::abs(x) <= M)) {
            throw Error(ErrorKind::hypothesis_violation, "|a_i| exceeds M");
        }
    }
    if (!(*hi >= eps_hi) || !(*lo <= -eps_lo)) {
        throw Error(ErrorKind::hypothesis_violation, "need max a >= eps_hi and min a <= -eps_lo");
    }

    std::array<std::size_t, 6> order{};
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a[x] < a[y]; });
    const double middle = a[order[1]] + a[order[2]] + a[order[3]] + a[order[4]];

    QuasiHarmonicCertificate cert;
    if (middle >= 0.0) {
        cert = nonnegative_mean_weights(a);
    } else {
        std::array<double, 6> neg{};
        std::transform(a.begin(), a.end(), neg.begin(), [](double x) { return -x; });
        cert = nonnegative_mean_weights(neg);
    }
    cert.floor = *std::min_element(cert.weights.begin(), cert.weights.end());
    cert.bound = std::min(eps_hi, eps_lo) / (16.0 * M);
    return cert;
}

QuasiHarmonicCertificate average_weights(std::span<const double, 6> a, double eps, double M)
{
    return average_weights(a, eps, eps, M);
}

Dichotomy hex_dichotomy(const FanConfiguration& u, const FanConfiguration& u_tilde, double eps, double tol)
{
    require_flat_delaunay_hexagon(u, "u", tol);
    require_flat_delaunay_hexagon(u_tilde, "u~", tol);
    Dichotomy out;
    out.a = hexagon_differences(u, u_tilde);
    const auto [lo, hi] = std::minmax_element(out.a.begin(), out.a.end());
    if (std::max(std::abs(*lo), std::abs(*hi)) <= eps) {
        out.kind = DichotomyCase::close;
        return out;
    }
    out.kind = DichotomyCase::quasi_harmonic;
    if (!(*lo < 0.0) || !(*hi > 0.0)) {
        out.anomaly = true;
        return out;
    }
    out.certificate = average_weights(out.a, *hi, -*lo, std::max(*hi, -*lo));
    return out;
}

std::pair<FanConfiguration, FanConfiguration> sample_pair(std::uint64_t seed, std::uint64_t index,
                                                           const SampleOptions& opts)
{
    std::mt19937_64 rng(seed ^ index);
    auto first = sample_D0(rng, 6, opts).fan;
    auto second = sample_D0(rng, 6, opts).fan;
    return {std::move(first), std::move(second)};
}

std::vector<HarmonicEstimate> estimate_harmonic_factors(std::span<const double> eps_grid, std::uint64_t samples,
                                                        std::uint64_t seed, const SampleOptions& opts)
{
    struct PairData {
        bool ok = false;
        double spread = 0.0;
        bool anomaly = false;
        double floor = std::numeric_limits<double>::infinity();
    };
    std::vector<PairData> data(static_cast<std::size_t>(samples));
    parallel_for(data.size(), [&](std::size_t i) {
        std::pair<FanConfiguration, FanConfiguration> pair;
        try {
            pair = sample_pair(seed, i, opts);
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::sampling_exhausted) {
                return;
            }
            throw;
        }
        // The smallest positive eps puts every non-identical pair in the averaging case.
        const auto d = hex_dichotomy(pair.first, pair.second, 0.0);
        auto& out = data[i];
        out.ok = true;
        for (double x : d.a) {
            out.spread = std::max(out.spread, std::abs(x));
        }
        out.anomaly = d.anomaly;
        if (d.certificate) {
            out.floor = d.certificate->floor;
        }
    });

    std::vector<HarmonicEstimate> result;
    for (double eps : eps_grid) {
        HarmonicEstimate est;
        est.eps = eps;
        for (const auto& d : data) {
            if (!d.ok) {
                continue;
            }
            if (d.spread <= eps) {
                ++est.close;
                continue;
            }
            ++est.quasi_harmonic;
            if (d.anomaly) {
                ++est.anomalies;
                continue;
            }
            if (!est.factor || d.floor < *est.factor) {
                est.factor = d.floor;
            }
        }
        result.push_back(est);
    }
    return result;
}

std::optional<double> estimate_harmonic_factor(double eps, std::uint64_t samples, std::uint64_t seed)
{
    const double grid[] = {eps};
    return estimate_harmonic_factors(grid, samples, seed).front().factor;
}

EpsilonSchedule epsilon_schedule(double eps, int R, const HarmonicFactorFn& m_fn)
{
    if (!(eps > 0.0) || R < 0) {
        throw Error(ErrorKind::domain_error, "epsilon_schedule needs eps > 0 and R >= 0");
    }
    EpsilonSchedule s;
    s.eps.assign(static_cast<std::size_t>(R) + 1, 0.0);
    s.eps[static_cast<std::size_t>(R)] = eps;
    for (int j = R; j >= 1; --j) {
        const double e = s.eps[static_cast<std::size_t>(j)];
        const double m = m_fn(e / 2.0);
        if (!(m > 0.0)) {
            throw Error(ErrorKind::domain_error, "harmonic factor must be positive");
        }
        s.eps[static_cast<std::size_t>(j - 1)] = std::min(e / 2.0, e * m);
    }
    return s;
}

HarmonicFactorFn tabulated_factor(std::vector<std::pair<double, double>> table)
{
    if (table.empty()) {
        throw Error(ErrorKind::domain_error, "empty harmonic factor table");
    }
    std::sort(table.begin(), table.end());
    return [table = std::move(table)](double eps) {
        double value = table.front().second;
        for (const auto& [e, m] : table) {
            if (e <= eps) {
                value = m;
            }
        }
        return value;
    };
}

bool PropagationReport::passed() const
{
    return std::all_of(layers.begin(), layers.end(), [](const LayerCheck& l) { return l.violations.empty(); });
}

PropagationReport propagate_bound_check(const ConformalField& field, LatticeVertex i, int R, double M,
                                        const EpsilonSchedule& schedule, Direction c, double tol)
{
    if (R < 0 || schedule.eps.size() != static_cast<std::size_t>(R) + 1) {
        throw Error(ErrorKind::precondition_violation, "schedule length must be R + 1");
    }
    for (const auto& v : vertices_within(i, R + 1)) {
        if (!field.contains(v)) {
            throw Error(ErrorKind::precondition_violation, "field does not cover B(i, R + 1)");
        }
    }
    const auto inner = vertices_within(i, R);
    for (const auto& v : inner) {
        const FanConfiguration fan(field.fan_factors(v));
        if (!in_D(fan)) {
            throw Error(ErrorKind::precondition_violation, "field is not Delaunay at a vertex of B(i, R)");
        }
        if (std::abs(curvature(fan)) > tol) {
            throw Error(ErrorKind::precondition_violation, "field is not flat at a vertex of B(i, R)");
        }
        if (gradient(field, v, c) > M + tol) {
            throw Error(ErrorKind::precondition_violation, "gradient exceeds M on B(i, R)");
        }
    }
    if (gradient(field, i, c) < M - schedule.delta() - tol) {
        throw Error(ErrorKind::precondition_violation, "gradient at i is below M - delta");
    }

    PropagationReport report;
    for (int j = 0; j <= R; ++j) {
        LayerCheck layer;
        layer.layer = j;
        layer.threshold = M - schedule.eps[static_cast<std::size_t>(j)];
        layer.slack = std::numeric_limits<double>::infinity();
        for (const auto& v : vertices_within(i, j)) {
            const double s = gradient(field, v, c) - layer.threshold;
            layer.slack = std::min(layer.slack, s);
            if (s < 0.0) {
                layer.violations.push_back(v);
            }
        }
        report.layers.push_back(std::move(layer));
    }
    return report;
}

DomainTooSmall::DomainTooSmall(std::int64_t required, std::int64_t available)
    : Error(ErrorKind::domain_too_small,
            "field radius " + std::to_string(available) + " below the required " + std::to_string(required)),
      required_(required)
{
}

UniformWindow find_uniform_window(const ConformalField& field, double eps, int R, const HarmonicFactorFn& m_fn,
                                  const WindowOptions& opts)
{
    if (!(eps > 0.0) || R < 1) {
        throw Error(ErrorKind::domain_error, "find_uniform_window needs eps > 0 and R >= 1");
    }
    const auto center = field.domain().center();
    const auto radius = field.domain().radius();

    UniformWindow w;
    w.M = -std::numeric_limits<double>::infinity();
    double M0 = 0.0;
    for (const auto& [v, _] : field.values()) {
        for (auto c : {Direction::one, Direction::omega}) {
            if (const auto g = grad(field, v, c)) {
                M0 = std::max(M0, std::abs(*g));
                if (c == Direction::one) {
                    w.M = std::max(w.M, *g);
                }
            }
        }
    }
    w.delta = opts.delta.value_or(epsilon_schedule(eps, R, m_fn).delta());
    const double layers = std::floor(2.0 * M0 / w.delta) + 1.0;
    w.layers_allowed = layers > 1e9 ? 1000000000 : static_cast<int>(layers);
    const auto full_radius = static_cast<std::int64_t>(w.layers_allowed) * R;
    w.delta1 = opts.delta1.value_or(schedule_delta(eps, full_radius, m_fn));

    // Anchor: the largest grad_1 u among vertices whose R-ball keeps both gradients defined.
    std::optional<LatticeVertex> anchor;
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& [v, _] : field.values()) {
        if (hex_distance(center, v) + R + 1 > radius) {
            continue;
        }
        const double g = *grad(field, v, Direction::one);
        if (g > best) {
            best = g;
            anchor = v;
        }
    }
    if (!anchor) {
        throw DomainTooSmall(full_radius + 1, radius);
    }
    w.anchor = *anchor;
    w.anchor_gap = w.M - best;
    const auto anchor_depth = hex_distance(center, *anchor);

    auto layer_max = [&](std::int64_t r) {
        double f = -std::numeric_limits<double>::infinity();
        LatticeVertex arg = *anchor;
        for (const auto& v : vertices_within(*anchor, r)) {
            const double g = *grad(field, v, Direction::omega);
            if (g > f) {
                f = g;
                arg = v;
            }
        }
        return std::pair{f, arg};
    };

    auto [prev, prev_arg] = layer_max(0);
    for (int k = 1; k <= w.layers_allowed; ++k) {
        const auto r = static_cast<std::int64_t>(k) * R;
        if (anchor_depth + r + 1 > radius) {
            throw DomainTooSmall(anchor_depth + full_radius + 1, radius);
        }
        const auto [cur, cur_arg] = layer_max(r);
        if (cur - prev <= w.delta) {
            w.layer = k;
            w.center = prev_arg;
            w.N = cur;
            break;
        }
        prev = cur;
        prev_arg = cur_arg;
    }
    if (w.layer == 0) {
        throw Error(ErrorKind::domain_error, "no layer with a small increment; gradient bound inconsistent");
    }
    for (const auto& v : vertices_within(w.center, R)) {
        w.deviation_one = std::max(w.deviation_one, std::abs(*grad(field, v, Direction::one) - w.M));
        w.deviation_omega = std::max(w.deviation_omega, std::abs(*grad(field, v, Direction::omega) - w.N));
    }
    return w;
}

}  // namespace hexconf
