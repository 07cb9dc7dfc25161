#pragma once

#include <cstddef>
#include <functional>

namespace inhibnet {

struct QuadratureResult {
    double value = 0.0;
    std::size_t evaluations = 0;
    bool converged = true;
};

/// Adaptive Simpson with Richardson correction. Stops refining once `max_evaluations`
/// is hit and reports converged = false.
QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                                  double abs_tol = 1e-10, std::size_t max_evaluations = 1'000'000);

} // namespace inhibnet
