#include "hexconf/maxprinciple.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "hexconf/error.hpp"
#include "hexconf/parallel.hpp"

namespace hexconf {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double cot(double x) { return std::cos(x) / std::sin(x); }

// Angles of the segment triangle between local t and t+1, ordered (center, t, t+1).
TriangleAngles segment_triangle(const FlowSegment& seg, int t)
{
    return fan_triangle_angles(seg.fan, seg.global(t));
}

bool segment_degenerate(const FlowSegment& seg, int& first_bad)
{
    for (int t = 1; t < seg.m(); ++t) {
        const auto tri = seg.fan.triangle(seg.global(t));
        if (!is_generalized_triangle(tri) || triangle_slack(tri) <= degeneracy_tolerance(tri)) {
            first_bad = t;
            return true;
        }
        const auto th = angles(tri);
        if (std::min({th.a, th.b, th.c}) < kMinDerivativeAngle) {
            first_bad = t;
            return true;
        }
    }
    return false;
}

// Below this angle a collapsed step size is read as the approach to a degenerate triangle.
constexpr double kCollapseAngle = 1e-5;

double segment_min_angle(const FlowSegment& seg)
{
    double out = kPi;
    for (int t = 1; t < seg.m(); ++t) {
        const auto th = segment_triangle(seg, t);
        out = std::min({out, th.a, th.b, th.c});
    }
    return out;
}

std::vector<double> preserved_alphas(const FlowSegment& seg)
{
    std::vector<double> out;
    for (int k = 2; k <= seg.m() - 1; ++k) {
        out.push_back(alpha(seg.fan, seg.global(k)));
    }
    return out;
}

std::vector<double> local_factors(const FlowSegment& seg)
{
    std::vector<double> out;
    for (int k = 1; k <= seg.m(); ++k) {
        out.push_back(seg.local_factor(k));
    }
    return out;
}

}  // namespace

SegmentCoefficients segment_coefficients(const FlowSegment& seg)
{
    const int m = seg.m();
    std::vector<TriangleAngles> tri(static_cast<std::size_t>(m));
    for (int t = 1; t < m; ++t) {
        const auto th = segment_triangle(seg, t);
        if (std::min({th.a, th.b, th.c}) < kMinDerivativeAngle) {
            throw Error(ErrorKind::degenerate_triangle,
                        "segment triangle " + std::to_string(t) + " is degenerate");
        }
        tri[static_cast<std::size_t>(t)] = th;
    }
    SegmentCoefficients c{std::vector<double>(static_cast<std::size_t>(m) + 1, kNaN),
                          std::vector<double>(static_cast<std::size_t>(m) + 1, kNaN),
                          std::vector<double>(static_cast<std::size_t>(m) + 1, kNaN)};
    for (int k = 1; k <= m; ++k) {
        const auto K = static_cast<std::size_t>(k);
        if (k >= 2) {
            const auto& before = tri[K - 1];
            c.B[K] = cot(before.a) + cot(before.b);
        }
        if (k <= m - 1) {
            const auto& after = tri[K];
            c.C[K] = cot(after.a) + cot(after.c);
        }
        if (k >= 2 && k <= m - 1) {
            c.A[K] = cot(tri[K - 1].a) + cot(tri[K].a);
        }
    }
    return c;
}

DirectionField direction_field(const SegmentCoefficients& coeffs, int m)
{
    if (m < 3) {
        throw Error(ErrorKind::domain_error, "a flow segment needs at least one interior vertex");
    }
    const auto& A = coeffs.A;
    const auto& B = coeffs.B;
    const auto& C = coeffs.C;
    const auto M = static_cast<std::size_t>(m);
    if (A.size() <= M || B.size() <= M || C.size() <= M) {
        throw Error(ErrorKind::domain_error, "coefficient vectors shorter than the segment");
    }

    DirectionField out;
    out.X.assign(M + 1, 0.0);
    auto& X = out.X;
    X[1] = 0.0;
    X[2] = 1.0;
    if (m >= 4) {
        X[3] = A[2] * X[2] / B[3];
    }
    for (std::size_t s = 3; s + 2 <= M; ++s) {
        X[s + 1] = (A[s] * X[s] - C[s - 1] * X[s - 1]) / B[s + 1];
    }
    X[M] = 0.0;

    out.hypotheses_hold = true;
    for (std::size_t s = 2; s + 2 <= M; ++s) {
        if (!(B[s] > 0.0 && C[s] > 0.0 && A[s] >= B[s] + C[s])) {
            out.hypotheses_hold = false;
        }
        const double lower_term = (s == 2) ? 0.0 : C[s - 1] * X[s - 1];
        out.residual = std::max(out.residual, std::abs(A[s] * X[s] - B[s + 1] * X[s + 1] - lower_term));
    }
    out.min_interior = std::numeric_limits<double>::infinity();
    for (std::size_t j = 2; j + 1 <= M; ++j) {
        out.min_interior = std::min(out.min_interior, X[j]);
    }
    if (out.hypotheses_hold && !(out.min_interior > 0.0)) {
        throw Error(ErrorKind::hypothesis_violation,
                    "direction field not positive although A_s >= B_s + C_s holds");
    }
    return out;
}

DirectionField direction_field(const FlowSegment& seg) { return direction_field(segment_coefficients(seg), seg.m()); }

std::vector<double> claim_recurrence(std::span<const double> A, std::span<const double> B,
                                     std::span<const double> C, int j)
{
    if (j < 2 || static_cast<std::size_t>(j) >= A.size() || static_cast<std::size_t>(j) >= B.size() ||
        static_cast<std::size_t>(j) >= C.size()) {
        throw Error(ErrorKind::domain_error, "claim index outside the coefficient vectors");
    }
    const auto J = static_cast<std::size_t>(j);
    std::vector<double> f(J);
    f[0] = 1.0;
    f[1] = A[J];
    for (std::size_t s = 1; s + 2 <= J; ++s) {
        f[s + 1] = A[J - s] * f[s] - B[J - s + 1] * C[J - s] * f[s - 1];
    }
    return f;
}

ClaimSequence claim_sequence(std::span<const double> A, std::span<const double> B, std::span<const double> C,
                             int j)
{
    auto f = claim_recurrence(A, B, C, j);
    const auto J = static_cast<std::size_t>(j);
    for (std::size_t k = 2; k <= J; ++k) {
        if (!(B[k] > 0.0 && C[k] > 0.0 && A[k] >= B[k] + C[k])) {
            throw Error(ErrorKind::hypothesis_violation,
                        "A_k >= B_k + C_k with B_k, C_k > 0 fails at k = " + std::to_string(k));
        }
    }
    ClaimSequence out;
    out.min_margin = std::numeric_limits<double>::infinity();
    out.inequalities_hold = true;
    for (std::size_t s = 1; s < J; ++s) {
        const double margin = f[s] - B[J - s + 1] * f[s - 1];
        out.min_margin = std::min(out.min_margin, margin);
        if (!(f[s] > 0.0) || !(margin > 0.0)) {
            out.inequalities_hold = false;
        }
    }
    out.f = std::move(f);
    return out;
}

std::string_view to_string(StopKind kind) noexcept
{
    switch (kind) {
        case StopKind::factor_saturation: return "factor-saturation";
        case StopKind::triangle_degeneration: return "triangle-degeneration";
        case StopKind::max_time: return "max-time";
    }
    return "unknown";
}

std::vector<std::string> segment_violations(const FlowSegment& seg, double alpha_tol)
{
    std::vector<std::string> bad;
    const int n = seg.fan.n();
    if (seg.length < 2 || seg.length > n) {
        bad.push_back("segment length must lie in [2, n]");
        return bad;
    }
    if (seg.upper.size() != static_cast<std::size_t>(n) + 1) {
        bad.push_back("upper bounds must have n + 1 entries");
        return bad;
    }
    const int m = seg.m();
    for (int k : {1, m}) {
        if (seg.local_factor(k) != seg.local_upper(k)) {
            bad.push_back("end " + std::to_string(k) + " not pinned at its upper bound");
        }
    }
    for (int k = 2; k < m; ++k) {
        if (seg.local_factor(k) > seg.local_upper(k)) {
            bad.push_back("interior vertex " + std::to_string(k) + " above its upper bound");
        }
    }
    if (!in_T(seg.fan)) {
        bad.push_back("fan outside T");
        return bad;
    }
    for (int k = 2; k < m; ++k) {
        if (alpha(seg.fan, seg.global(k)) < kPi - alpha_tol) {
            bad.push_back("alpha at interior vertex " + std::to_string(k) + " below pi");
        }
    }
    return bad;
}

FlowSegment sample_flow_segment(std::mt19937_64& rng, int n, const SegmentSampleOptions& opts)
{
    if (n < 3) {
        throw Error(ErrorKind::domain_error, "fans need n >= 3");
    }
    std::uniform_real_distribution<double> factor(opts.low, opts.high);
    std::uniform_real_distribution<double> gap(opts.min_gap, opts.max_gap);
    std::uniform_int_distribution<int> vertex(1, n);
    std::normal_distribution<double> kick(0.0, 0.05);
    const int hi_run = std::min(opts.max_run, n - 2);
    const int lo_run = std::min(opts.min_run, hi_run);
    const int run = std::uniform_int_distribution<int>(lo_run, hi_run)(rng);

    auto score = [&](const FanConfiguration& f) {
        if (!in_T(f) || min_angle(f) < opts.min_angle) {
            return -std::numeric_limits<double>::infinity();
        }
        double worst = std::numeric_limits<double>::infinity();
        for (int k = 1; k <= run; ++k) {
            worst = std::min(worst, alpha(f, k) - kPi);
        }
        return worst;
    };

    for (int attempt = 0; attempt < opts.max_attempts; ++attempt) {
        std::vector<double> u(static_cast<std::size_t>(n) + 1, 0.0);
        for (int k = 1; k <= n; ++k) {
            u[static_cast<std::size_t>(k)] = factor(rng);
        }
        FanConfiguration fan(std::move(u));
        double best = score(fan);
        if (best == -std::numeric_limits<double>::infinity()) {
            continue;
        }
        for (int step = 0; step < opts.climb_steps && best < opts.margin; ++step) {
            auto trial = fan;
            const int k = vertex(rng);
            trial.set_boundary(k, trial.boundary(k) + kick(rng));
            if (const double s = score(trial); s >= best) {
                fan = std::move(trial);
                best = s;
            }
        }
        if (best < opts.margin) {
            continue;
        }
        FlowSegment seg{fan, n, run + 1, {}, 0.0};
        seg.upper.assign(fan.factors().begin(), fan.factors().end());
        for (int k = 1; k <= run; ++k) {
            seg.upper[fan.wrap(k)] += gap(rng);
        }
        if (segment_violations(seg).empty()) {
            return seg;
        }
    }
    throw Error(ErrorKind::sampling_exhausted, "no fan with an alpha >= pi run found");
}

FlowResult integrate_flow(const FlowSegment& seg, const FlowOptions& opts)
{
    if (const auto bad = segment_violations(seg); !bad.empty()) {
        std::string msg;
        for (const auto& b : bad) {
            msg += (msg.empty() ? "" : "; ") + b;
        }
        throw Error(ErrorKind::precondition_violation, msg);
    }
    const int m = seg.m();
    FlowResult result;
    result.segment = seg;
    auto& cur = result.segment;
    const auto alpha0 = preserved_alphas(cur);
    auto record = [&](const FlowSegment& s) {
        result.trace.push_back({s.time, local_factors(s), preserved_alphas(s)});
    };
    record(cur);

    auto saturated = [&](const FlowSegment& s) -> int {
        for (int k = 2; k < m; ++k) {
            if (s.local_upper(k) - s.local_factor(k) <= opts.saturation_tol) {
                return k;
            }
        }
        return 0;
    };
    auto stop = [&](StopKind kind, int index, std::string detail) {
        result.reason = {kind, index, std::move(detail)};
        return result;
    };

    auto advance = [&](const FlowSegment& base, const std::vector<double>& delta, double scale) {
        FlowSegment out = base;
        for (int k = 2; k < m; ++k) {
            out.fan.set_boundary(cur.global(k), base.local_factor(k) + scale * delta[static_cast<std::size_t>(k)]);
        }
        return out;
    };

    double dt_work = opts.dt_max;
    while (true) {
        if (const int k = saturated(cur); k != 0) {
            cur.fan.set_boundary(cur.global(k), cur.local_upper(k));
            return stop(StopKind::factor_saturation, k, "factor reached its upper bound");
        }
        if (int t = 0; segment_degenerate(cur, t)) {
            return stop(StopKind::triangle_degeneration, t, "segment triangle degenerated");
        }
        if (cur.time >= opts.t_max) {
            return stop(StopKind::max_time, 0, "time limit reached");
        }
        if (result.steps >= opts.max_steps) {
            throw Error(ErrorKind::step_failure, "step budget exhausted");
        }

        DirectionField field;
        try {
            field = direction_field(cur);
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::degenerate_triangle) {
                return stop(StopKind::triangle_degeneration, 0, e.what());
            }
            throw;
        }
        double dt_sat = std::numeric_limits<double>::infinity();
        for (int k = 2; k < m; ++k) {
            const double x = field.X[static_cast<std::size_t>(k)];
            if (x > 0.0) {
                dt_sat = std::min(dt_sat, (cur.local_upper(k) - cur.local_factor(k)) / x);
            }
        }
        double dt = std::min({dt_work, opts.dt_max, opts.t_max - cur.time, dt_sat});
        bool halved = false;
        const auto alpha_now = preserved_alphas(cur);

        while (true) {
            if (dt < opts.min_dt) {
                if (segment_min_angle(cur) < kCollapseAngle) {
                    return stop(StopKind::triangle_degeneration, 0, "step size collapsed near a degenerate triangle");
                }
                throw Error(ErrorKind::step_failure, "no step keeps the preserved angles within tolerance");
            }
            bool ok = true;
            FlowSegment next;
            try {
                const auto& k1 = field.X;
                const auto k2 = direction_field(advance(cur, k1, 0.5 * dt)).X;
                const auto k3 = direction_field(advance(cur, k2, 0.5 * dt)).X;
                const auto k4 = direction_field(advance(cur, k3, dt)).X;
                std::vector<double> incr(k1.size(), 0.0);
                for (std::size_t i = 0; i < incr.size(); ++i) {
                    incr[i] = (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) / 6.0;
                }
                next = advance(cur, incr, dt);
                next.time = cur.time + dt;
            } catch (const Error&) {
                ok = false;
            }
            if (ok && !in_T(next.fan)) {
                ok = false;
            }
            if (ok) {
                for (int k = 2; k < m; ++k) {
                    if (next.local_factor(k) > next.local_upper(k) + opts.saturation_tol) {
                        ok = false;
                    }
                }
            }
            if (ok) {
                const auto alpha_next = preserved_alphas(next);
                for (std::size_t i = 0; i + 1 < alpha_next.size(); ++i) {
                    if (std::abs(alpha_next[i] - alpha_now[i]) > opts.step_drift_tol) {
                        ok = false;
                    }
                }
            }
            if (ok) {
                cur = std::move(next);
                break;
            }
            dt *= 0.5;
            halved = true;
        }
        ++result.steps;
        dt_work = halved ? dt : std::min(opts.dt_max, 2.0 * dt_work);
        // Clamp tiny overshoots back onto the bound.
        for (int k = 2; k < m; ++k) {
            if (cur.local_factor(k) > cur.local_upper(k)) {
                cur.fan.set_boundary(cur.global(k), cur.local_upper(k));
            }
        }
        record(cur);
        const auto& a = result.trace.back().alpha;
        for (std::size_t i = 0; i + 1 < a.size(); ++i) {
            result.max_drift = std::max(result.max_drift, std::abs(a[i] - alpha0[i]));
        }
    }
}

SegmentSweep flow_all_segments(const FanConfiguration& fan, std::span<const double> upper, SweepOrder order,
                               const FlowOptions& opts)
{
    const int n = fan.n();
    if (upper.size() != static_cast<std::size_t>(n) + 1) {
        throw Error(ErrorKind::domain_error, "upper bounds must have n + 1 entries");
    }
    SegmentSweep sweep{fan, {}, {}};
    std::vector<double> bound(upper.begin(), upper.end());
    std::vector<bool> stuck(static_cast<std::size_t>(n) + 1, false);

    for (int pass = 0; pass < n * n; ++pass) {
        auto is_saturated = [&](int j) {
            return bound[sweep.fan.wrap(j)] - sweep.fan.boundary(j) <= opts.saturation_tol;
        };
        // Maximal runs of unsaturated vertices, each bounded by saturated ones.
        std::vector<std::pair<int, int>> segments;
        for (int s = 1; s <= n; ++s) {
            if (!is_saturated(s) || is_saturated(s + 1)) {
                continue;
            }
            int e = s + 1;
            while (e < s + n && !is_saturated(e)) {
                ++e;
            }
            if (!is_saturated(e)) {
                continue;
            }
            bool flowable = !stuck[sweep.fan.wrap(s)];
            for (int k = s + 1; k < e && flowable; ++k) {
                flowable = alpha(sweep.fan, k) >= kPi;
            }
            if (flowable) {
                segments.emplace_back(s, e - s);
            }
        }
        if (segments.empty()) {
            break;
        }
        if (order == SweepOrder::decreasing) {
            std::reverse(segments.begin(), segments.end());
        }
        for (const auto& [start, length] : segments) {
            FlowSegment seg{sweep.fan, start, length, bound, 0.0};
            // Pin the ends exactly.
            seg.fan.set_boundary(start, bound[sweep.fan.wrap(start)]);
            seg.fan.set_boundary(start + length, bound[sweep.fan.wrap(start + length)]);
            auto res = integrate_flow(seg, opts);
            sweep.fan = res.segment.fan;
            sweep.starts.push_back(start);
            if (res.reason.kind != StopKind::factor_saturation) {
                stuck[sweep.fan.wrap(start)] = true;
            }
            sweep.reasons.push_back(std::move(res.reason));
        }
    }
    return sweep;
}

std::string_view to_string(Verdict v) noexcept { return v == Verdict::equal ? "equal" : "counterexample"; }

PairCheck check_max_principle(const FanConfiguration& upper, const FanConfiguration& lower, double tol)
{
    PairCheck out;
    if (upper.n() != lower.n()) {
        out.violations.emplace_back("fans have different sizes");
        return out;
    }
    const std::pair<const FanConfiguration*, const char*> fans[] = {{&upper, "upper"}, {&lower, "lower"}};
    for (const auto& [f, name] : fans) {
        if (!in_D(*f)) {
            out.violations.push_back(std::string(name) + " not Delaunay");
            continue;
        }
        if (std::abs(f->center()) > tol) {
            out.violations.push_back(std::string(name) + " has u_0 != 0");
        }
        if (std::abs(curvature(*f)) > tol) {
            out.violations.push_back(std::string(name) + " not flat");
        }
    }
    for (int j = 1; j <= upper.n(); ++j) {
        const double d = upper.boundary(j) - lower.boundary(j);
        out.max_difference = std::max(out.max_difference, std::abs(d));
        if (d < -tol) {
            out.violations.push_back("upper < lower at " + std::to_string(j));
        }
    }
    if (out.violations.empty()) {
        out.verdict = out.max_difference <= tol ? Verdict::equal : Verdict::counterexample;
    }
    return out;
}

Verdict verify_max_principle(const FanConfiguration& upper, const FanConfiguration& lower, double tol)
{
    auto check = check_max_principle(upper, lower, tol);
    if (!check.verdict) {
        std::string msg;
        for (const auto& v : check.violations) {
            msg += (msg.empty() ? "" : "; ") + v;
        }
        throw Error(ErrorKind::precondition_violation, msg);
    }
    return *check.verdict;
}

namespace {

struct TrialOutcome {
    bool sampled = false;
    std::uint64_t constructions = 0;
    std::uint64_t unsolvable = 0;
    std::uint64_t precondition_violations = 0;
    std::uint64_t equal = 0;
    std::uint64_t injected_equal = 0;
    std::uint64_t feasible = 0;
    std::optional<double> min_deficit;
    std::optional<double> closest_feasible;
    std::vector<Counterexample> counterexamples;
};

void keep_min(std::optional<double>& slot, double v)
{
    if (!slot || v < *slot) {
        slot = v;
    }
}

TrialOutcome run_trial(std::uint64_t seed, std::uint64_t trial, int n, const SearchOptions& opts)
{
    TrialOutcome out;
    std::mt19937_64 rng(seed ^ trial);
    FanConfiguration lower;
    try {
        lower = sample_D0(rng, n, opts.sampling).fan;
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::sampling_exhausted) {
            throw;
        }
        return out;
    }
    out.sampled = true;
    std::uniform_real_distribution<double> bump_dist(opts.min_bump, opts.max_bump);
    const double bump = bump_dist(rng);

    if (opts.inject_equal_pairs) {
        const auto check = check_max_principle(lower, lower, opts.tol);
        if (check.verdict == Verdict::equal) {
            ++out.injected_equal;
        } else if (check.verdict == Verdict::counterexample) {
            out.counterexamples.push_back({trial, lower, lower});
        }
    }

    for (int j = 1; j <= n; ++j) {
        for (int i = 1; i <= n; ++i) {
            if (i == j) {
                continue;
            }
            auto candidate = lower;
            candidate.set_boundary(j, lower.boundary(j) + bump);
            try {
                candidate = solve_flat(candidate, i);
            } catch (const Error&) {
                ++out.unsolvable;
                continue;
            }
            ++out.constructions;
            double deficit = -std::numeric_limits<double>::infinity();
            double excess = 0.0;
            for (int k = 1; k <= n; ++k) {
                deficit = std::max(deficit, lower.boundary(k) - candidate.boundary(k));
                excess = std::max(excess, candidate.boundary(k) - lower.boundary(k));
            }
            if (in_D(candidate)) {
                keep_min(out.min_deficit, deficit);
            }
            const auto check = check_max_principle(candidate, lower, opts.tol);
            if (!check.verdict) {
                ++out.precondition_violations;
                continue;
            }
            ++out.feasible;
            keep_min(out.closest_feasible, excess);
            if (*check.verdict == Verdict::equal) {
                ++out.equal;
            } else {
                out.counterexamples.push_back({trial, candidate, lower});
            }
        }
    }
    return out;
}

}  // namespace

SearchReport search_counterexample(std::uint64_t seed, std::uint64_t trials, int n, const SearchOptions& opts)
{
    SearchReport report;
    report.seed = seed;
    report.trials = trials;
    report.n = n;
    std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(trials));
    parallel_for(outcomes.size(), [&](std::size_t t) { outcomes[t] = run_trial(seed, t, n, opts); });
    for (auto& o : outcomes) {
        if (!o.sampled) {
            ++report.sampling_failures;
            continue;
        }
        ++report.samples;
        report.constructions += o.constructions;
        report.unsolvable += o.unsolvable;
        report.precondition_violations += o.precondition_violations;
        report.equal_verdicts += o.equal;
        report.injected_equal += o.injected_equal;
        report.feasible_constructions += o.feasible;
        if (o.min_deficit) {
            keep_min(report.min_deficit, *o.min_deficit);
        }
        if (o.closest_feasible) {
            keep_min(report.closest_feasible, *o.closest_feasible);
        }
        for (auto& c : o.counterexamples) {
            report.counterexamples.push_back(std::move(c));
        }
    }
    return report;
}

}  // namespace hexconf

namespace hexconf {

FlowStressReport flow_stress(std::uint64_t seed, std::uint64_t trials, int n_min, int n_max, const FlowOptions& opts)
{
    if (n_min < 4 || n_max < n_min) {
        throw Error(ErrorKind::domain_error, "flow_stress needs 4 <= n_min <= n_max");
    }
    struct Outcome {
        bool sampled = false;
        bool step_failure = false;
        bool direction_ok = true;
        StopKind kind = StopKind::max_time;
        std::uint64_t alpha_decreases = 0;
        double drift = 0.0;
        double min_X = 0.0;
    };
    std::vector<Outcome> out(static_cast<std::size_t>(trials));
    const auto span = static_cast<std::uint64_t>(n_max - n_min + 1);
    parallel_for(out.size(), [&](std::size_t t) {
        std::mt19937_64 rng(seed ^ t);
        const int n = n_min + static_cast<int>(t % span);
        auto& o = out[t];
        FlowSegment seg;
        try {
            seg = sample_flow_segment(rng, n);
        } catch (const Error&) {
            return;
        }
        o.sampled = true;
        const auto field = direction_field(seg);
        o.direction_ok = field.hypotheses_hold && field.min_interior > 0.0;
        o.min_X = field.min_interior;
        try {
            const auto res = integrate_flow(seg, opts);
            o.kind = res.reason.kind;
            o.drift = res.max_drift;
            for (std::size_t i = 1; i < res.trace.size(); ++i) {
                if (res.trace[i].alpha.back() < res.trace[i - 1].alpha.back() - 1e-12) {
                    ++o.alpha_decreases;
                }
            }
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::step_failure) {
                throw;
            }
            o.step_failure = true;
        }
    });

    FlowStressReport r;
    r.trials = trials;
    bool first = true;
    for (const auto& o : out) {
        if (!o.sampled) {
            ++r.sampling_failures;
            continue;
        }
        r.min_initial_X = first ? o.min_X : std::min(r.min_initial_X, o.min_X);
        first = false;
        r.direction_failures += o.direction_ok ? 0 : 1;
        r.alpha_decreases += o.alpha_decreases;
        r.max_drift = std::max(r.max_drift, o.drift);
        if (o.step_failure) {
            ++r.step_failures;
            continue;
        }
        switch (o.kind) {
            case StopKind::factor_saturation: ++r.saturation; break;
            case StopKind::triangle_degeneration: ++r.degeneration; break;
            case StopKind::max_time: ++r.max_time; break;
        }
    }
    return r;
}

}  // namespace hexconf
