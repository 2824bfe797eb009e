#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "hexconf/lattice.hpp"

namespace hexconf {

/// Conformal factors on the vertices of a lattice ball.
class ConformalField {
public:
    ConformalField() = default;
    explicit ConformalField(Ball domain);

    [[nodiscard]] const Ball& domain() const noexcept { return domain_; }
    [[nodiscard]] const std::map<LatticeVertex, double>& values() const noexcept { return u_; }

    [[nodiscard]] bool contains(LatticeVertex v) const noexcept { return u_.contains(v); }

    /// Throws domain_error if v is outside the domain.
    [[nodiscard]] double at(LatticeVertex v) const;
    [[nodiscard]] std::optional<double> find(LatticeVertex v) const noexcept;

    /// Throws domain_error if v is outside the domain.
    void set(LatticeVertex v, double u);

    /// The factors of the star of v ordered (u_v, u_{v+d_0}, ..., u_{v+d_5}).
    [[nodiscard]] std::vector<double> fan_factors(LatticeVertex v) const;

    /// Edge length e^{u_a + u_b} for adjacent a, b.
    [[nodiscard]] double length(LatticeVertex a, LatticeVertex b) const;

private:
    Ball domain_;
    std::map<LatticeVertex, double> u_;
};

/// u(v + c) - u(v). Throws domain_error when either vertex is missing.
[[nodiscard]] double gradient(const ConformalField& field, LatticeVertex v, Direction c);

}  // namespace hexconf
