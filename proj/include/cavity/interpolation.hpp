#pragma once

#include <vector>

namespace cavity {

/// Monotone piecewise-cubic Hermite interpolant (Fritsch-Carlson). Never
/// overshoots the data, so non-negative samples give a non-negative curve.
class MonotoneCubic {
  public:
    MonotoneCubic(std::vector<double> x, std::vector<double> y);

    double operator()(double x) const;
    double front() const noexcept { return x_.front(); }
    double back() const noexcept { return x_.back(); }

  private:
    std::vector<double> x_, y_, slope_;
};

} // namespace cavity
