#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mdbt/solvers.hpp"

namespace mdbt {

/// Renders log10 suboptimality (f - f_star, floored at 1e-16) against
/// total oracle calls as one polyline per trace, with a legend. The
/// output is deterministic: fixed viewBox, fixed color cycle, %.6g
/// coordinates. f_star defaults to the smallest `f_star` metadata entry
/// among the traces, else the smallest f value seen (the documented
/// estimator for problems without a computable optimum).
std::string render_convergence_svg(const std::vector<RunTrace>& traces,
                                   const std::vector<std::string>& labels,
                                   std::optional<double> f_star = {});

}  // namespace mdbt
