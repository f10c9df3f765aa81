#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace cavity {

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    double l1 = 0.0;
};

struct QuadratureOptions {
    double relative_tolerance = 1e-10;
    unsigned max_depth = 40;          // bisections of any one initial segment
    std::size_t max_segments = 200000;
};

/// Globally adaptive Gauss-Kronrod (7/15) over [a, b]: the segment with the
/// largest error estimate is bisected first. Every breakpoint inside the open
/// interval starts a new segment. Throws QuadratureError if the error estimate
/// still exceeds the requested relative tolerance of the L1 norm when the
/// depth or segment budget runs out.
QuadratureResult integrate(const std::function<double(double)>& fn, double a, double b,
                           std::span<const double> breakpoints = {},
                           QuadratureOptions options = {});

} // namespace cavity
