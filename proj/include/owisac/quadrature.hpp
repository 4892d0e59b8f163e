#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "owisac/errors.hpp"

namespace owisac {

/// Adaptive Gauss–Kronrod (G7, K15) integration on [a, b].
///
/// Bisects any panel whose |K15 - G7| estimate exceeds its share of the
/// absolute tolerance. The integrand must be finite on [a, b].
double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double abs_tol, int max_depth = 48);

/// Same, but with interior breakpoints seeded as initial panel boundaries
/// (for integrands with known narrow features, e.g. Gaussian-mixture spikes).
/// Breakpoints outside (a, b) are ignored; they need not be sorted.
double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, std::span<const double> breakpoints,
                          double abs_tol, int max_depth = 48);

}  // namespace owisac
