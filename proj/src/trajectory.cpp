#include "cavity/trajectory.hpp"

#include "cavity/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

namespace cavity {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts> struct overloaded : Ts... { using Ts::operator()...; };
template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

MirrorJet eval_sin(const SinusoidalMotion& m, double t) {
    const double s = std::sin(m.omega * t), c = std::cos(m.omega * t);
    const double w = m.omega;
    return {m.length + m.amplitude * s, w * m.amplitude * c, -w * w * m.amplitude * s,
            -w * w * w * m.amplitude * c};
}

MirrorJet eval_lawwu(const LawWuMotion& m, double t) {
    const double w = m.omega;
    const double half = 0.5 * w * m.amplitude;
    const double s = std::sin(half);
    const double phase = w * t;
    const double cp = std::cos(phase), sp = std::sin(phase);
    const double root = 1.0 / std::sqrt(1.0 - s * s * cp * cp);
    const double r3 = root * root * root;
    const double r5 = r3 * root * root;
    MirrorJet jet;
    jet.position = m.length + (std::asin(s * cp) - half) / w;
    jet.velocity = -s * sp * root;
    jet.acceleration = -w * s * (1.0 - s * s) * cp * r3;
    jet.jerk = w * w * s * (1.0 - s * s) * sp * r5 * (1.0 + 2.0 * s * s * cp * cp);
    return jet;
}

} // namespace

// ---- CubicSpline -------------------------------------------------------------

CubicSpline::CubicSpline(std::vector<double> t, std::vector<double> y)
    : t_(std::move(t)), y_(std::move(y)) {
    const std::size_t n = t_.size();
    if (n != y_.size())
        throw PreconditionError("spline: time and value arrays differ in length");
    if (n < 4)
        throw PreconditionError("spline: not-a-knot cubic needs at least 4 samples, got " +
                                std::to_string(n));
    for (std::size_t i = 1; i < n; ++i)
        if (!(t_[i] > t_[i - 1]))
            throw PreconditionError("spline: times must be strictly increasing (at t = " +
                                    fmt(t_[i]) + ")");

    std::vector<double> h(n - 1), delta(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = t_[i + 1] - t_[i];
        delta[i] = (y_[i + 1] - y_[i]) / h[i];
    }

    // Unknowns M_1..M_{n-2}; not-a-knot rows at both ends eliminate M_0 and
    // M_{n-1}, leaving a tridiagonal system.
    const std::size_t m = n - 2;
    std::vector<double> sub(m, 0.0), diag(m, 0.0), sup(m, 0.0), rhs(m, 0.0);
    for (std::size_t k = 0; k < m; ++k) {
        const std::size_t i = k + 1;
        sub[k] = h[i - 1];
        diag[k] = 2.0 * (h[i - 1] + h[i]);
        sup[k] = h[i];
        rhs[k] = 6.0 * (delta[i] - delta[i - 1]);
    }
    // M_0 = ((h0 + h1) M_1 - h0 M_2) / h1
    {
        const double h0 = h[0], h1 = h[1];
        diag[0] += h0 * (h0 + h1) / h1;
        sup[0] -= h0 * h0 / h1;
    }
    // M_{n-1} = ((ha + hb) M_{n-2} - hb M_{n-3}) / ha, ha = h[n-3], hb = h[n-2]
    {
        const double ha = h[n - 3], hb = h[n - 2];
        diag[m - 1] += hb * (ha + hb) / ha;
        if (m >= 2)
            sub[m - 1] -= hb * hb / ha;
    }
    // Thomas algorithm
    for (std::size_t k = 1; k < m; ++k) {
        const double w = sub[k] / diag[k - 1];
        diag[k] -= w * sup[k - 1];
        rhs[k] -= w * rhs[k - 1];
    }
    std::vector<double> inner(m);
    inner[m - 1] = rhs[m - 1] / diag[m - 1];
    for (std::size_t k = m - 1; k-- > 0;)
        inner[k] = (rhs[k] - sup[k] * inner[k + 1]) / diag[k];

    m_.assign(n, 0.0);
    for (std::size_t k = 0; k < m; ++k)
        m_[k + 1] = inner[k];
    m_[0] = ((h[0] + h[1]) * m_[1] - h[0] * m_[2]) / h[1];
    m_[n - 1] = ((h[n - 3] + h[n - 2]) * m_[n - 2] - h[n - 2] * m_[n - 3]) / h[n - 3];
}

MirrorJet CubicSpline::evaluate(double t) const {
    if (t < t_.front() || t > t_.back())
        throw DomainError("tabulated trajectory evaluated at t = " + fmt(t) +
                          " outside its window [" + fmt(t_.front()) + ", " + fmt(t_.back()) + "]");
    auto it = std::upper_bound(t_.begin(), t_.end(), t);
    std::size_t i = it == t_.begin() ? 0 : static_cast<std::size_t>(it - t_.begin()) - 1;
    i = std::min(i, t_.size() - 2);
    const double h = t_[i + 1] - t_[i];
    const double a = t_[i + 1] - t, b = t - t_[i];
    const double m0 = m_[i], m1 = m_[i + 1];
    MirrorJet jet;
    jet.position = (m0 * a * a * a + m1 * b * b * b) / (6.0 * h) + (y_[i] / h - m0 * h / 6.0) * a +
                   (y_[i + 1] / h - m1 * h / 6.0) * b;
    jet.velocity = (-m0 * a * a + m1 * b * b) / (2.0 * h) + (y_[i + 1] - y_[i]) / h -
                   (m1 - m0) * h / 6.0;
    jet.acceleration = (m0 * a + m1 * b) / h;
    jet.jerk = (m1 - m0) / h;
    return jet;
}

// ---- MirrorTrajectory --------------------------------------------------------

TrajectoryKind MirrorTrajectory::kind() const noexcept {
    return std::visit(overloaded{[](const StaticMotion&) { return TrajectoryKind::Static; },
                                 [](const SinusoidalMotion&) { return TrajectoryKind::Sinusoidal; },
                                 [](const LawWuMotion&) { return TrajectoryKind::LawWu; },
                                 [](const TabulatedMotion&) { return TrajectoryKind::Tabulated; }},
                      model_);
}

MirrorJet MirrorTrajectory::evaluate(double t) const {
    return std::visit(
        overloaded{[](const StaticMotion& m) { return MirrorJet{m.length, 0.0, 0.0, 0.0}; },
                   [t](const SinusoidalMotion& m) { return eval_sin(m, t); },
                   [t](const LawWuMotion& m) { return eval_lawwu(m, t); },
                   [t](const TabulatedMotion& m) { return m.spline->evaluate(t); }},
        model_);
}

std::pair<double, double> MirrorTrajectory::window() const noexcept {
    if (const auto* tab = std::get_if<TabulatedMotion>(&model_))
        return {tab->spline->front(), tab->spline->back()};
    return {-kInf, kInf};
}

int MirrorTrajectory::smoothness() const noexcept {
    return kind() == TrajectoryKind::Tabulated ? 2 : 3;
}

double MirrorTrajectory::motion_period() const noexcept {
    return std::visit(
        overloaded{[](const StaticMotion&) { return 0.0; },
                   [](const SinusoidalMotion& m) { return 2.0 * std::numbers::pi / m.omega; },
                   [](const LawWuMotion& m) { return 2.0 * std::numbers::pi / m.omega; },
                   [](const TabulatedMotion&) { return 0.0; }},
        model_);
}

std::string MirrorTrajectory::describe() const {
    return std::visit(
        overloaded{[](const StaticMotion& m) { return "static(L0=" + fmt(m.length) + ")"; },
                   [](const SinusoidalMotion& m) {
                       return "sinusoidal(L0=" + fmt(m.length) + ", dL=" + fmt(m.amplitude) +
                              ", omega=" + fmt(m.omega) + ")";
                   },
                   [](const LawWuMotion& m) {
                       return "law_wu(L0=" + fmt(m.length) + ", dL=" + fmt(m.amplitude) +
                              ", N=" + std::to_string(m.order) + ")";
                   },
                   [](const TabulatedMotion& m) {
                       return "tabulated(" + std::to_string(m.spline->knots().size()) +
                              " samples)";
                   }},
        model_);
}

MirrorTrajectory make_static(double length) {
    if (!(length > 0.0) || !std::isfinite(length))
        throw PreconditionError("static trajectory requires L0 > 0");
    return MirrorTrajectory(StaticMotion{length}, length);
}

double resonance_frequency(double length, int order) {
    return order * std::numbers::pi / length;
}

MirrorTrajectory make_sinusoidal(double length, double amplitude, double omega) {
    if (!(length > 0.0))
        throw PreconditionError("sinusoidal trajectory requires L0 > 0");
    if (!(amplitude > 0.0))
        throw PreconditionError("sinusoidal trajectory requires dL > 0");
    if (!(amplitude < length))
        throw PreconditionError("sinusoidal trajectory requires dL < L0 (dL = " + fmt(amplitude) +
                                ", L0 = " + fmt(length) + ")");
    if (!(omega > 0.0))
        throw PreconditionError("sinusoidal trajectory requires omega > 0");
    if (!(omega * amplitude < 1.0))
        throw PreconditionError("sinusoidal trajectory requires omega*dL < 1 (omega*dL = " +
                                fmt(omega * amplitude) + ")");
    return MirrorTrajectory(SinusoidalMotion{length, amplitude, omega}, length);
}

MirrorTrajectory make_law_wu(double length, double amplitude, int order) {
    if (!(length > 0.0))
        throw PreconditionError("Law-Wu trajectory requires L0 > 0");
    if (order < 1)
        throw PreconditionError("Law-Wu trajectory requires N >= 1");
    if (!(amplitude > 0.0) || !(amplitude < length))
        throw PreconditionError("Law-Wu trajectory requires 0 < dL < L0");
    const double omega = resonance_frequency(length, order);
    if (!(0.5 * omega * amplitude < 0.5 * std::numbers::pi))
        throw PreconditionError("Law-Wu trajectory requires omega_N*dL/2 < pi/2 (dL < L0/N)");
    return MirrorTrajectory(LawWuMotion{length, amplitude, order, omega}, length);
}

MirrorTrajectory make_tabulated(std::vector<std::pair<double, double>> samples,
                                int interpolation_order) {
    if (interpolation_order != 3)
        throw PreconditionError("tabulated trajectory supports interpolation order 3 only");
    std::vector<double> t, y;
    t.reserve(samples.size());
    y.reserve(samples.size());
    for (auto [ti, li] : samples) {
        t.push_back(ti);
        y.push_back(li);
    }
    auto spline = std::make_shared<const CubicSpline>(std::move(t), std::move(y));
    const double lo = spline->front(), hi = spline->back();
    if (lo > 0.0 || hi < 0.0)
        throw PreconditionError("tabulated trajectory must cover t = 0");

    // Subluminality and positivity on a fine scan of every spline segment.
    const auto knots = spline->knots();
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        constexpr int kSub = 16;
        for (int j = 0; j <= kSub; ++j) {
            const double ti = knots[i] + (knots[i + 1] - knots[i]) * j / kSub;
            const MirrorJet jet = spline->evaluate(ti);
            if (!(std::abs(jet.velocity) < 1.0))
                throw PreconditionError("tabulated trajectory is superluminal at t = " + fmt(ti));
            if (!(jet.position > 0.0))
                throw PreconditionError("tabulated trajectory has L <= 0 at t = " + fmt(ti));
        }
    }
    const double l0 = spline->evaluate(0.0).position;
    return MirrorTrajectory(TabulatedMotion{std::move(spline)}, l0);
}

std::vector<std::pair<double, double>> read_trajectory_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open trajectory table " + path.string());
    std::vector<std::pair<double, double>> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::istringstream ls(line);
        double t, l;
        if (!(ls >> t))
            continue;
        if (!(ls >> l))
            throw IoError(path.string() + ":" + std::to_string(lineno) + ": expected two columns");
        std::string extra;
        if (ls >> extra)
            throw IoError(path.string() + ":" + std::to_string(lineno) + ": trailing data");
        rows.emplace_back(t, l);
    }
    return rows;
}

} // namespace cavity
