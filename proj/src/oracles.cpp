#include "cavity/oracles.hpp"

#include "cavity/errors.hpp"

#include <cmath>
#include <numbers>

namespace cavity::oracles {

namespace {
constexpr double kPi = std::numbers::pi;
}

double SinusoidalForms::omega() const noexcept { return order * kPi / length + detuning; }

StartingPoints sin_starting_points(const SinusoidalForms& forms) {
    if (forms.detuning != 0.0)
        throw PreconditionError("closed-form starting points hold at exact resonance only");
    StartingPoints sp;
    const int n = forms.order;
    for (int m = 0; m < n; ++m) {
        sp.positive.push_back((-n + 2 * m + 1) * forms.length / n);
        sp.negative.push_back((-n + 2 * m) * forms.length / n);
    }
    return sp;
}

double sin_band_parameter(const SinusoidalForms& forms) {
    const double x = forms.omega() * forms.amplitude;
    if (forms.detuning == 0.0)
        return x;
    const double y = forms.length * forms.detuning;
    const double q2 = x * x - y * y;
    if (q2 < 0.0)
        throw DomainError("detuning outside the resonance band: |dw/w| >= dL/L");
    return std::sqrt(q2);
}

double sin_doppler(const SinusoidalForms& forms, std::size_t n, int sign) {
    const double q = sign >= 0 ? sin_band_parameter(forms) : -sin_band_parameter(forms);
    return std::pow((1.0 + q) / (1.0 - q), static_cast<double>(n));
}

double sin_anomaly(const SinusoidalForms& forms, std::size_t n) {
    if (forms.detuning != 0.0)
        throw PreconditionError("closed-form anomaly holds at exact resonance only");
    const double w = forms.omega();
    const double x = w * forms.amplitude;
    const double d = sin_doppler(forms, n, +1);
    return w * w / (48.0 * kPi) / (1.0 - x * x) * (1.0 - 1.0 / (d * d));
}

double sin_growth_coefficient(const SinusoidalForms& forms) {
    const double w = forms.omega();
    const double x = w * forms.amplitude;
    return -kPi / (48.0 * forms.length * forms.length) + w * w / (48.0 * kPi) / (1.0 - x * x);
}

double LawWuForms::omega() const noexcept { return order * kPi / length; }

double LawWuForms::tan_half() const noexcept { return std::tan(0.5 * omega() * amplitude); }

// cot(w (f + L)/2) = cot(w (tau - L)/2) - 2 tan(w dL/2). The arccot branch
// follows the period index of w (tau - L)/2, which keeps f continuous and
// increasing with f(tau) -> tau - 2L as dL -> 0.
double lawwu_billiard(const LawWuForms& forms, double tau) {
    const double w = forms.omega();
    const double t = forms.tan_half();
    const double phase = 0.5 * w * (tau - forms.length);
    const double k = std::floor(phase / kPi);
    const double x = phase - k * kPi;
    const double s = std::sin(x);
    return 2.0 / w * (std::atan2(s, std::cos(x) - 2.0 * t * s) + k * kPi) - forms.length;
}

double lawwu_billiard_inverse(const LawWuForms& forms, double tau) {
    const double w = forms.omega();
    const double t = forms.tan_half();
    const double phase = 0.5 * w * (tau + forms.length);
    const double k = std::floor(phase / kPi);
    const double x = phase - k * kPi;
    const double s = std::sin(x);
    return 2.0 / w * (std::atan2(s, std::cos(x) + 2.0 * t * s) + k * kPi) + forms.length;
}

double lawwu_doppler(const LawWuForms& forms, double tau, std::size_t n) {
    const double w = forms.omega();
    const double t = forms.tan_half();
    const double nn = static_cast<double>(n);
    const double theta = w * (tau + forms.length);
    return 1.0 + 2.0 * nn * nn * t * t * (1.0 - std::cos(theta)) + 2.0 * nn * t * std::sin(theta);
}

double lawwu_anomaly(const LawWuForms& forms, double tau, std::size_t n) {
    const double w = forms.omega();
    const double d = lawwu_doppler(forms, tau, n);
    return w * w / (48.0 * kPi) * (1.0 - 1.0 / (d * d));
}

double lawwu_rho(const LawWuForms& forms, double tau, std::size_t n) {
    const double w = forms.omega();
    const double t = forms.tan_half();
    const double nn = static_cast<double>(n);
    const double parity = forms.order % 2 == 0 ? 1.0 : -1.0;
    const double l2 = forms.length * forms.length;
    const double n2 = static_cast<double>(forms.order) * forms.order;
    const double braces = 1.0 + 2.0 * nn * nn * t * t * (1.0 - parity * std::cos(w * tau)) -
                          2.0 * nn * parity * t * std::sin(w * tau);
    return -n2 * kPi / (48.0 * l2) + (n2 - 1.0) * kPi / (48.0 * l2) / (braces * braces);
}

std::vector<double> lawwu_starting_points(const LawWuForms& forms) {
    std::vector<double> out;
    for (int m = 0; m < forms.order; ++m)
        out.push_back((-forms.order + 2 * m) * forms.length / forms.order);
    return out;
}

} // namespace cavity::oracles
