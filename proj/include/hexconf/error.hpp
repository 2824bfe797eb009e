#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hexconf {

enum class ErrorKind {
    invalid_triangle,
    degenerate_triangle,
    domain_error,
    no_root,
    ambiguous,
    sampling_exhausted,
    hypothesis_violation,
    precondition_violation,
    step_failure,
    nonflat_input,
    reflection_impossible,
    infeasible_gradient,
    domain_too_small,
    boundary_vertex,
    inconsistent_reconstruction,
    collinear_points,
    disjoint_circles,
    concyclicity_violation,
    outside_disk,
    invalid_config,
};

[[nodiscard]] std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind)
    {
    }

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace hexconf
