#pragma once

#include "stabset/sdp.hpp"

namespace stabset::sdp::detail {

SdpSolution solve_admm(const SdpModel& model, const SolverOptions& options);
SdpSolution solve_interior_point(const SdpModel& model, const SolverOptions& options);

}  // namespace stabset::sdp::detail
