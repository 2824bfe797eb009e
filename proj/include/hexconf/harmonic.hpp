#pragma once

// Quasi-harmonic machinery: averaging weights, the hexagon dichotomy, empirical
// harmonic factors, the epsilon schedule and the uniform-gradient window search.

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "hexconf/error.hpp"
#include "hexconf/fan.hpp"
#include "hexconf/field.hpp"

namespace hexconf {

struct QuasiHarmonicCertificate {
    /// Weights in the caller's index order.
    std::array<double, 6> weights{};
    /// min_i weights[i].
    double floor = 0.0;
    /// min(eps_hi, eps_lo) / (16 M), the guaranteed lower bound on floor.
    double bound = 0.0;
};

/// Weights m_i >= floor with sum 1 and sum m_i a_i = 0. Requires |a_i| <= M,
/// max a >= eps_hi and min a <= -eps_lo; throws hypothesis_violation otherwise.
[[nodiscard]] QuasiHarmonicCertificate average_weights(std::span<const double, 6> a, double eps_hi, double eps_lo,
                                                       double M);
[[nodiscard]] QuasiHarmonicCertificate average_weights(std::span<const double, 6> a, double eps, double M);

enum class DichotomyCase { close, quasi_harmonic };

struct Dichotomy {
    DichotomyCase kind = DichotomyCase::close;
    /// a_j = (u~_j - u_j) - (u~_0 - u_0), j = 1..6 at index j - 1.
    std::array<double, 6> a{};
    /// Present for the quasi-harmonic case unless anomaly is set.
    std::optional<QuasiHarmonicCertificate> certificate;
    /// Some |a_j| > eps but a has one sign, so no averaging exists.
    bool anomaly = false;
};

/// Case close when |a_j| <= eps for every j, otherwise weights from average_weights with
/// the observed extremes as thresholds. Throws precondition_violation when either fan is
/// not a flat Delaunay hexagon (curvature within tol).
[[nodiscard]] Dichotomy hex_dichotomy(const FanConfiguration& u, const FanConfiguration& u_tilde, double eps,
                                      double tol = 1e-9);

/// Pair i of the estimator: two independent sample_D0 hexagons from seed ^ i.
[[nodiscard]] std::pair<FanConfiguration, FanConfiguration> sample_pair(std::uint64_t seed, std::uint64_t index,
                                                                         const SampleOptions& opts = {});

struct HarmonicEstimate {
    double eps = 0.0;
    /// Minimum certificate floor over quasi-harmonic pairs; empty when none was observed.
    std::optional<double> factor;
    std::uint64_t quasi_harmonic = 0;
    std::uint64_t close = 0;
    std::uint64_t anomalies = 0;
};

/// Estimates for every eps in the grid on one shared set of pairs, so the estimates are
/// non-decreasing in eps.
[[nodiscard]] std::vector<HarmonicEstimate> estimate_harmonic_factors(std::span<const double> eps_grid,
                                                                      std::uint64_t samples, std::uint64_t seed,
                                                                      const SampleOptions& opts = {});

[[nodiscard]] std::optional<double> estimate_harmonic_factor(double eps, std::uint64_t samples, std::uint64_t seed);

using HarmonicFactorFn = std::function<double(double)>;

struct EpsilonSchedule {
    /// eps_0..eps_R.
    std::vector<double> eps;
    [[nodiscard]] double delta() const { return eps.front(); }
};

/// eps_R = eps, eps_{j-1} = min(eps_j / 2, eps_j * m(eps_j / 2)).
[[nodiscard]] EpsilonSchedule epsilon_schedule(double eps, int R, const HarmonicFactorFn& m_fn);

/// Step function through a table {eps -> m}: the value at the largest grid eps not above
/// the argument, or the smallest-eps entry below the grid.
[[nodiscard]] HarmonicFactorFn tabulated_factor(std::vector<std::pair<double, double>> table);

struct LayerCheck {
    int layer = 0;
    double threshold = 0.0;
    /// min over B(i, layer) of grad - (M - eps_layer).
    double slack = 0.0;
    std::vector<LatticeVertex> violations;
};

struct PropagationReport {
    std::vector<LayerCheck> layers;
    [[nodiscard]] bool passed() const;
};

/// Checks grad_c u >= M - eps_j on B(i, j) for j = 0..R. Requires the field on B(i, R + 1),
/// flat and Delaunay at the vertices of B(i, R), grad_c u <= M on B(i, R) and
/// grad_c u(i) >= M - delta; throws precondition_violation otherwise.
[[nodiscard]] PropagationReport propagate_bound_check(const ConformalField& field, LatticeVertex i, int R,
                                                      double M, const EpsilonSchedule& schedule,
                                                      Direction c = Direction::one, double tol = 1e-8);

class DomainTooSmall : public Error {
public:
    DomainTooSmall(std::int64_t required, std::int64_t available);
    [[nodiscard]] std::int64_t required_radius() const noexcept { return required_; }

private:
    std::int64_t required_;
};

struct WindowOptions {
    /// Overrides for the schedule deltas (for R and for n R).
    std::optional<double> delta;
    std::optional<double> delta1;
};

struct UniformWindow {
    LatticeVertex center;
    double M = 0.0;
    double N = 0.0;
    LatticeVertex anchor;
    /// M - grad_1 u(anchor); the search wants this <= delta1.
    double anchor_gap = 0.0;
    int layer = 0;
    int layers_allowed = 0;
    double delta = 0.0;
    double delta1 = 0.0;
    /// max over B(center, R) of |grad_1 u - M| and |grad_w u - N|.
    double deviation_one = 0.0;
    double deviation_omega = 0.0;
    [[nodiscard]] bool within(double eps) const { return deviation_one < eps && deviation_omega < eps; }
};

/// The window search: anchor near sup grad_1 u, scan F(k) = max grad_w u on B(anchor, kR)
/// for the first increment <= delta, center at the maximiser of F(k - 1), N = F(k).
/// Throws DomainTooSmall when the scan leaves the field before finding a layer.
[[nodiscard]] UniformWindow find_uniform_window(const ConformalField& field, double eps, int R,
                                                const HarmonicFactorFn& m_fn, const WindowOptions& opts = {});

}  // namespace hexconf
