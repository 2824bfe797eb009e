#include "hexconf/error.hpp"

namespace hexconf {

std::string_view to_string(ErrorKind kind) noexcept
{
    switch (kind) {
        case ErrorKind::invalid_triangle: return "invalid_triangle";
        case ErrorKind::degenerate_triangle: return "degenerate_triangle";
        case ErrorKind::domain_error: return "domain_error";
        case ErrorKind::no_root: return "no_root";
        case ErrorKind::ambiguous: return "ambiguous";
        case ErrorKind::sampling_exhausted: return "sampling_exhausted";
        case ErrorKind::hypothesis_violation: return "hypothesis_violation";
        case ErrorKind::precondition_violation: return "precondition_violation";
        case ErrorKind::step_failure: return "step_failure";
        case ErrorKind::nonflat_input: return "nonflat_input";
        case ErrorKind::reflection_impossible: return "reflection_impossible";
        case ErrorKind::infeasible_gradient: return "infeasible_gradient";
        case ErrorKind::domain_too_small: return "domain_too_small";
        case ErrorKind::boundary_vertex: return "boundary_vertex";
        case ErrorKind::inconsistent_reconstruction: return "inconsistent_reconstruction";
        case ErrorKind::collinear_points: return "collinear_points";
        case ErrorKind::disjoint_circles: return "disjoint_circles";
        case ErrorKind::concyclicity_violation: return "concyclicity_violation";
        case ErrorKind::outside_disk: return "outside_disk";
        case ErrorKind::invalid_config: return "invalid_config";
    }
    return "unknown";
}

}  // namespace hexconf
