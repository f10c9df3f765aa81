#pragma once

// Prescribed worldline L(t) of the right mirror. The left mirror sits at x = 0.

#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace cavity {

/// L(t) and its first three time derivatives.
struct MirrorJet {
    double position = 0.0;
    double velocity = 0.0;
    double acceleration = 0.0;
    double jerk = 0.0;
};

enum class TrajectoryKind { Static, Sinusoidal, LawWu, Tabulated };

struct StaticMotion {
    double length;
};

struct SinusoidalMotion {
    double length;
    double amplitude;
    double omega;
};

// L(t) = L + (1/w){ arcsin[sin(w dL/2) cos(w t)] - w dL/2 },  w = N pi / L.
// The principal arcsin branch is enough: |sin(w dL/2) cos(w t)| <= sin(w dL/2) < 1.
struct LawWuMotion {
    double length;
    double amplitude;
    int order;
    double omega;
};

/// Not-a-knot cubic spline through (t_i, L_i). C^2, third derivative
/// piecewise constant.
class CubicSpline {
  public:
    CubicSpline(std::vector<double> t, std::vector<double> y);

    MirrorJet evaluate(double t) const;
    double front() const noexcept { return t_.front(); }
    double back() const noexcept { return t_.back(); }
    std::span<const double> knots() const noexcept { return t_; }

  private:
    std::vector<double> t_, y_;
    std::vector<double> m_; // second derivatives at the knots
};

struct TabulatedMotion {
    std::shared_ptr<const CubicSpline> spline;
};

/// Immutable value type; cheap to copy, safe to share across threads.
class MirrorTrajectory {
  public:
    using Model = std::variant<StaticMotion, SinusoidalMotion, LawWuMotion, TabulatedMotion>;

    TrajectoryKind kind() const noexcept;
    const Model& model() const noexcept { return model_; }

    /// Unperturbed cavity length L (half the resonant round-trip period).
    double unperturbed_length() const noexcept { return length_; }

    MirrorJet evaluate(double t) const;
    double position(double t) const { return evaluate(t).position; }

    /// Time window where L(t) is defined (infinite for analytic kinds).
    std::pair<double, double> window() const noexcept;

    /// Continuity class: 3 means analytic derivatives through third order
    /// exist everywhere; 2 flags a piecewise third derivative.
    int smoothness() const noexcept;

    /// Period of the mirror motion, 0 when aperiodic or static.
    double motion_period() const noexcept;

    std::string describe() const;

  private:
    MirrorTrajectory(Model m, double length) : model_(std::move(m)), length_(length) {}
    friend MirrorTrajectory make_static(double);
    friend MirrorTrajectory make_sinusoidal(double, double, double);
    friend MirrorTrajectory make_law_wu(double, double, int);
    friend MirrorTrajectory make_tabulated(std::vector<std::pair<double, double>>, int);

    Model model_;
    double length_;
};

MirrorTrajectory make_static(double length);

/// L(t) = L0 + dL sin(omega t); requires 0 < dL < L0 and omega dL < 1.
MirrorTrajectory make_sinusoidal(double length, double amplitude, double omega);

/// Resonance frequency omega_N = N pi / L0.
double resonance_frequency(double length, int order);

MirrorTrajectory make_law_wu(double length, double amplitude, int order);

/// Cubic (order 3) spline through the samples; at least four points, strictly
/// increasing times, t = 0 inside the table, |L'| < 1 everywhere sampled.
MirrorTrajectory make_tabulated(std::vector<std::pair<double, double>> samples,
                                int interpolation_order = 3);

/// Two-column whitespace-separated (t, L) file with '#' comments.
std::vector<std::pair<double, double>> read_trajectory_table(const std::filesystem::path& path);

} // namespace cavity
