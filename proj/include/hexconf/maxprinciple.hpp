#pragma once

// Maximum-principle engine for flat Delaunay fans.
//
// A segment is the run of boundary vertices start, start+1, ..., start+length of a fan,
// relabelled locally as 1..m with m = length + 1. The two ends are pinned at their upper
// bounds; the interior factors are driven by the direction field X, which keeps
// alpha_2..alpha_{m-2} fixed and makes alpha_{m-1} grow.

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "hexconf/calculus.hpp"
#include "hexconf/fan.hpp"

namespace hexconf {

struct FlowSegment {
    FanConfiguration fan;
    int start = 1;
    int length = 2;
    /// Upper bounds, same layout as the fan factors (index 0 unused).
    std::vector<double> upper;
    double time = 0.0;

    [[nodiscard]] int m() const noexcept { return length + 1; }

    /// Boundary index of local vertex k in 1..m.
    [[nodiscard]] int global(int k) const noexcept { return start + k - 1; }

    [[nodiscard]] double local_factor(int k) const noexcept { return fan.boundary(global(k)); }
    [[nodiscard]] double local_upper(int k) const noexcept
    {
        return upper[fan.wrap(global(k))];
    }
};

/// Coefficient vectors with 1-based local indexing (size m + 1, slot 0 unused).
/// Entries the segment cannot define are NaN.
struct SegmentCoefficients {
    std::vector<double> A;
    std::vector<double> B;
    std::vector<double> C;
};

[[nodiscard]] SegmentCoefficients segment_coefficients(const FlowSegment& seg);

struct DirectionField {
    /// X_1..X_m at indices 1..m.
    std::vector<double> X;
    /// A_s >= B_s + C_s for s = 2..m-2.
    bool hypotheses_hold = false;
    /// Smallest interior X_j (j = 2..m-1).
    double min_interior = 0.0;
    /// Largest |A_s X_s - B_{s+1} X_{s+1} - C_{s-1} X_{s-1}| for s = 2..m-2.
    double residual = 0.0;
};

/// Solves X_1 = 0, X_2 = 1, A_s X_s - B_{s+1} X_{s+1} - C_{s-1} X_{s-1} = 0 (s = 2..m-2), X_m = 0.
/// Throws hypothesis_violation when the hypotheses hold but some interior X_j <= 0.
[[nodiscard]] DirectionField direction_field(const SegmentCoefficients& coeffs, int m);
[[nodiscard]] DirectionField direction_field(const FlowSegment& seg);

struct ClaimSequence {
    /// f_0..f_{j-1}.
    std::vector<double> f;
    /// f_s > 0 and f_s > B_{j-s+1} f_{s-1} for s = 1..j-1.
    bool inequalities_hold = false;
    /// Smallest f_s - B_{j-s+1} f_{s-1}.
    double min_margin = 0.0;
};

/// f_0 = 1, f_1 = A_j, f_{s+1} = A_{j-s} f_s - B_{j-s+1} C_{j-s} f_{s-1}. No checks.
[[nodiscard]] std::vector<double> claim_recurrence(std::span<const double> A, std::span<const double> B,
                                                   std::span<const double> C, int j);

/// Checked recurrence. Requires B, C > 0 and A_k >= B_k + C_k for k = 2..j
/// (1-based vectors); throws hypothesis_violation otherwise.
[[nodiscard]] ClaimSequence claim_sequence(std::span<const double> A, std::span<const double> B,
                                           std::span<const double> C, int j);

enum class StopKind { factor_saturation, triangle_degeneration, max_time };

[[nodiscard]] std::string_view to_string(StopKind kind) noexcept;

struct StopReason {
    StopKind kind = StopKind::max_time;
    /// Local index of the saturated vertex or of the first vertex of the degenerate triangle.
    int index = 0;
    std::string detail;
};

struct FlowOptions {
    double dt_max = 0.05;
    double t_max = 100.0;
    /// Largest change of a preserved alpha allowed in one step.
    double step_drift_tol = 1e-10;
    double min_dt = 1e-14;
    double saturation_tol = 1e-9;
    std::size_t max_steps = 1000000;
};

struct FlowSample {
    double t = 0.0;
    /// Local factors 1..m at indices 0..m-1.
    std::vector<double> u;
    /// alpha_2..alpha_{m-1} at indices 0..m-3.
    std::vector<double> alpha;
};

struct FlowResult {
    FlowSegment segment;
    StopReason reason;
    std::vector<FlowSample> trace;
    /// Largest |alpha_k(t) - alpha_k(0)| over preserved k = 2..m-2.
    double max_drift = 0.0;
    std::size_t steps = 0;
};

/// Checks the segment hypotheses: ends pinned at their bounds, interior below its bounds,
/// interior alphas >= pi - alpha_tol. Returns the list of failures (empty when fine).
[[nodiscard]] std::vector<std::string> segment_violations(const FlowSegment& seg, double alpha_tol = 1e-12);

struct SegmentSampleOptions {
    /// Starting boundary factors are drawn from [low, high] with u_0 = 0.
    double low = -0.8;
    double high = 0.4;
    /// Number of interior vertices, drawn uniformly from [min_run, max_run] (capped at n - 2).
    int min_run = 1;
    int max_run = 4;
    /// Required alpha - pi on the interior vertices.
    double margin = 1e-3;
    /// Interior upper bounds sit this far above the start factors.
    double min_gap = 0.01;
    double max_gap = 1.0;
    double min_angle = 1e-3;
    int climb_steps = 20000;
    int max_attempts = 1000;
};

/// Random segment on boundary vertices n, 1, ..., r + 1 whose interior 1..r has alpha >= pi.
/// The fan is found by hill-climbing min_k (alpha_k - pi) from a random start.
/// Throws sampling_exhausted.
[[nodiscard]] FlowSegment sample_flow_segment(std::mt19937_64& rng, int n, const SegmentSampleOptions& opts = {});

/// Integrates du/dt = X by RK4, halving steps that break the preserved-alpha invariant.
/// Throws precondition_violation on bad segments and step_failure when no admissible step
/// remains above opts.min_dt.
[[nodiscard]] FlowResult integrate_flow(const FlowSegment& seg, const FlowOptions& opts = {});

struct FlowStressReport {
    std::uint64_t trials = 0;
    std::uint64_t sampling_failures = 0;
    std::uint64_t saturation = 0;
    std::uint64_t degeneration = 0;
    std::uint64_t max_time = 0;
    std::uint64_t step_failures = 0;
    /// Segments whose starting direction field failed the hypotheses or had X_j <= 0.
    std::uint64_t direction_failures = 0;
    /// Trace steps where alpha_{m-1} dropped by more than 1e-12.
    std::uint64_t alpha_decreases = 0;
    double max_drift = 0.0;
    /// Smallest interior X_j at the start of a segment.
    double min_initial_X = 0.0;

    [[nodiscard]] bool passed(double drift_tol = 1e-6) const noexcept
    {
        return sampling_failures == 0 && step_failures == 0 && direction_failures == 0 && alpha_decreases == 0 &&
               max_drift < drift_tol;
    }
};

/// Trial t samples a segment on a fan of size n_min + t mod (n_max - n_min + 1) from seed ^ t
/// and integrates it.
[[nodiscard]] FlowStressReport flow_stress(std::uint64_t seed, std::uint64_t trials, int n_min, int n_max,
                                           const FlowOptions& opts = {});

struct SegmentSweep {
    FanConfiguration fan;
    std::vector<StopReason> reasons;
    /// Start index of each flowed segment, in processing order.
    std::vector<int> starts;
};

enum class SweepOrder { increasing, decreasing };

/// Flows every maximal segment of unsaturated vertices with alpha >= pi bounded by saturated ones.
[[nodiscard]] SegmentSweep flow_all_segments(const FanConfiguration& fan, std::span<const double> upper,
                                             SweepOrder order = SweepOrder::increasing,
                                             const FlowOptions& opts = {});

enum class Verdict { equal, counterexample };

[[nodiscard]] std::string_view to_string(Verdict v) noexcept;

struct PairCheck {
    std::optional<Verdict> verdict;
    /// Failed hypotheses when verdict is empty.
    std::vector<std::string> violations;
    double max_difference = 0.0;
};

/// Non-throwing form of verify_max_principle.
[[nodiscard]] PairCheck check_max_principle(const FanConfiguration& upper, const FanConfiguration& lower,
                                            double tol);

/// Throws precondition_violation listing the failed hypotheses.
[[nodiscard]] Verdict verify_max_principle(const FanConfiguration& upper, const FanConfiguration& lower,
                                           double tol);

struct SearchOptions {
    SampleOptions sampling{};
    double tol = 1e-9;
    double min_bump = 1e-3;
    double max_bump = 0.1;
    bool inject_equal_pairs = false;
};

struct Counterexample {
    std::uint64_t trial = 0;
    FanConfiguration upper;
    FanConfiguration lower;
};

struct SearchReport {
    std::uint64_t seed = 0;
    std::uint64_t trials = 0;
    int n = 6;
    std::uint64_t samples = 0;
    std::uint64_t sampling_failures = 0;
    std::uint64_t constructions = 0;
    std::uint64_t unsolvable = 0;
    std::uint64_t precondition_violations = 0;
    std::uint64_t equal_verdicts = 0;
    std::uint64_t injected_equal = 0;
    std::vector<Counterexample> counterexamples;
    /// Over flat Delaunay constructions: min of max_j(lower_j - upper_j), the shortfall from upper >= lower.
    std::optional<double> min_deficit;
    /// Constructions meeting every hypothesis; min over them of max_j(upper_j - lower_j).
    std::uint64_t feasible_constructions = 0;
    std::optional<double> closest_feasible;
};

/// Randomized search for pairs violating the maximum principle. Trial t draws from a
/// generator seeded with seed ^ t. Runs on HEXCONF_THREADS workers.
[[nodiscard]] SearchReport search_counterexample(std::uint64_t seed, std::uint64_t trials, int n,
                                                 const SearchOptions& opts = {});

}  // namespace hexconf
