#include "cavity/commands.hpp"

#include "cavity/errors.hpp"
#include "cavity/field_quantum.hpp"
#include "cavity/kinematics.hpp"
#include "cavity/oracles.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <random>
#include <sstream>

namespace cavity::app {

namespace {

constexpr double kPi = std::numbers::pi;

/// CSV file with '#' header comments; rows are counted for the manifest.
class CsvWriter {
  public:
    CsvWriter(const std::filesystem::path& dir, std::string name, RunManifest& manifest)
        : name_(std::move(name)), manifest_(manifest) {
        out_.open(dir / name_, std::ios::binary | std::ios::trunc);
        if (!out_)
            throw IoError("cannot write " + (dir / name_).string());
    }
    ~CsvWriter() { close(); }

    void comment(const std::string& text) { out_ << "# " << text << '\n'; }
    void header(const std::string& columns) { out_ << columns << '\n'; }

    void row(std::initializer_list<double> values) {
        bool first = true;
        for (double v : values) {
            if (!first)
                out_ << ',';
            out_ << format_number(v);
            first = false;
        }
        out_ << '\n';
        ++rows_;
    }

    void close() {
        if (closed_)
            return;
        closed_ = true;
        out_.close();
        if (!out_)
            throw IoError("write failed for " + name_);
        manifest_.files.push_back({name_, rows_});
    }

  private:
    std::string name_;
    RunManifest& manifest_;
    std::ofstream out_;
    std::size_t rows_ = 0;
    bool closed_ = false;
};

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot write " + path.string());
    out << j.dump(2) << '\n';
    if (!out)
        throw IoError("write failed for " + path.string());
}

void prepare_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
}

/// Finite doubles go through as numbers; anything else becomes null.
nlohmann::json number_or_null(double v) {
    if (std::isfinite(v))
        return v;
    return nullptr;
}

std::shared_ptr<const BilliardMap> make_map(const RunConfig& config) {
    BilliardOptions opts;
    opts.root_tolerance = config.root_tolerance;
    return std::make_shared<const BilliardMap>(config.build_trajectory(), opts);
}

struct PathSummary {
    std::vector<PeriodicTrajectory> paths;
    std::vector<double> peak_seeds; // positive starts, or marginal ones if none
    std::optional<PeriodicTrajectory> first_positive;
};

PathSummary summarise_paths(const BilliardMap& map, RunManifest& manifest) {
    PathSummary s;
    if (map.trajectory().kind() == TrajectoryKind::Static)
        return s;
    if (map.trajectory().motion_period() <= 0.0) {
        manifest.warnings.push_back(
            "aperiodic mirror motion: no periodic light paths searched, peaks located by sampling only");
        return s;
    }
    try {
        s.paths = find_periodic_trajectories(map);
    } catch (const PreconditionError& e) {
        manifest.warnings.push_back(e.what());
        return s;
    }
    for (const auto& p : s.paths)
        if (p.sign == Stability::Positive) {
            s.peak_seeds.push_back(p.tau0);
            if (!s.first_positive)
                s.first_positive = p;
        }
    if (s.peak_seeds.empty())
        for (const auto& p : s.paths)
            if (p.sign == Stability::Marginal)
                s.peak_seeds.push_back(p.tau0);
    return s;
}

std::function<double(double)> seed_function(const SeedSpec& seed) {
    if (seed.kind == "file") {
        std::vector<double> tau, rho;
        try {
            for (const auto& [t, r] : read_trajectory_table(seed.file)) {
                tau.push_back(t);
                rho.push_back(r);
            }
        } catch (const IoError& e) {
            throw ConfigError("seed.file", e.what());
        }
        try {
            auto profile = InitialProfile::sampled(std::move(tau), std::move(rho));
            return [profile](double t) { return profile(t); };
        } catch (const PreconditionError& e) {
            throw ConfigError("seed.file", e.what());
        }
    }
    const double v = seed.value;
    return [v](double) { return v; };
}

std::vector<std::size_t> snapshot_periods(const RunConfig& config) {
    const std::size_t every =
        config.snapshot_every ? config.snapshot_every : std::max<std::size_t>(1, config.periods / 5);
    std::vector<std::size_t> ks{0};
    for (std::size_t k = every; k <= config.periods; k += every)
        ks.push_back(k);
    return ks;
}

std::string snapshot_name(std::size_t k) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "density_p%05zu.csv", k);
    return buf;
}

double least_squares_residual(const std::vector<double>& energy, const std::vector<double>& fit) {
    double r = 0.0;
    for (std::size_t i = 0; i < energy.size(); ++i)
        r = std::max(r, std::abs(fit[i] - energy[i]) / std::max(std::abs(energy[i]), 1e-300));
    return r;
}

/// Slope and intercept of y = a + b x.
std::pair<double, double> linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0)
        throw PreconditionError("energy fit needs at least two distinct points");
    const double b = sxy / sxx;
    return {my - b * mx, b};
}

} // namespace

std::string format_number(double v) {
    if (v == 0.0)
        v = 0.0; // fold -0
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

nlohmann::json RunManifest::to_json() const {
    nlohmann::json j;
    j["command"] = command;
    j["engine_version"] = engine_version;
    j["config"] = config;
    j["wall_clock_seconds"] = wall_clock_seconds;
    j["files"] = nlohmann::json::array();
    for (const auto& f : files)
        j["files"].push_back({{"name", f.name}, {"rows", f.rows}});
    j["metrics"] = metrics;
    j["warnings"] = warnings;
    return j;
}

EnergyFit fit_quadratic(const std::vector<double>& n, const std::vector<double>& energy) {
    if (n.size() != energy.size() || n.size() < 2)
        throw PreconditionError("energy fit needs matching samples, at least two");
    std::vector<double> n2(n.size());
    std::transform(n.begin(), n.end(), n2.begin(), [](double v) { return v * v; });
    const auto [a, b] = linear_fit(n2, energy);
    std::vector<double> fit(n.size());
    for (std::size_t i = 0; i < n.size(); ++i)
        fit[i] = a + b * n2[i];
    return {"quadratic", a, b, least_squares_residual(energy, fit)};
}

EnergyFit fit_exponential(const std::vector<double>& n, const std::vector<double>& energy) {
    if (n.size() != energy.size() || n.size() < 2)
        throw PreconditionError("energy fit needs matching samples, at least two");
    std::vector<double> logs(n.size());
    for (std::size_t i = 0; i < n.size(); ++i) {
        if (!(energy[i] > 0.0))
            throw PreconditionError("exponential fit needs positive energies");
        logs[i] = std::log(energy[i]);
    }
    const auto [a, b] = linear_fit(n, logs);
    std::vector<double> fit(n.size());
    for (std::size_t i = 0; i < n.size(); ++i)
        fit[i] = std::exp(a + b * n[i]);
    return {"exponential", a, b, least_squares_residual(energy, fit)};
}

EnergyFit fit_energy(const std::vector<double>& n, const std::vector<double>& energy) {
    EnergyFit best = fit_quadratic(n, energy);
    if (std::all_of(energy.begin(), energy.end(), [](double e) { return e > 0.0; })) {
        EnergyFit e = fit_exponential(n, energy);
        if (e.residual < best.residual)
            best = e;
    }
    return best;
}

RunManifest cmd_simulate(const RunConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    config.validate();
    RunManifest manifest;
    manifest.command = "simulate";
    manifest.config = config.echo();
    prepare_dir(config.out_dir);

    const auto map = make_map(config);
    const bool quantum = config.mode == Mode::Quantum;
    const PathSummary paths = summarise_paths(*map, manifest);
    if (quantum && map->trajectory().smoothness() < 3)
        manifest.warnings.push_back(
            "tabulated trajectory is C2 only: the Schwarzian has jumps at the table knots");

    QuadratureOptions quad;
    quad.relative_tolerance = config.quad_tolerance;

    std::unique_ptr<ExtendedProfile> classical;
    std::unique_ptr<QuantumProfile> vacuum;
    if (quantum) {
        vacuum = config.seed.kind == "default"
                     ? std::make_unique<QuantumProfile>(map)
                     : std::make_unique<QuantumProfile>(map, seed_function(config.seed));
        vacuum->set_peak_seeds(paths.peak_seeds);
        vacuum->set_quadrature(quad);
    } else {
        auto fn = seed_function(config.seed);
        classical = std::make_unique<ExtendedProfile>(
            map, config.seed.kind == "file" ? InitialProfile::closed_form(fn)
                                            : InitialProfile::uniform(config.seed.value));
        classical->set_peak_seeds(paths.peak_seeds);
        classical->set_quadrature(quad);
    }
    auto energy_density = [&](double t, double x) {
        return quantum ? vacuum->energy_density(t, x) : classical->energy_density(t, x);
    };

    const double round_trip = 2.0 * map->unperturbed_length();

    if (!paths.paths.empty()) {
        CsvWriter csv(config.out_dir, "periodic.csv", manifest);
        csv.comment("periodic light paths: tau0 [time], period [time], stability (+1 positive, "
                    "-1 negative, 0 marginal), D1 = per-period Doppler factor [1]");
        csv.header("tau0,period,stability,D1");
        for (const auto& p : paths.paths)
            csv.row({p.tau0, p.period,
                     p.sign == Stability::Positive   ? 1.0
                     : p.sign == Stability::Negative ? -1.0
                                                     : 0.0,
                     p.per_period_doppler});
        csv.close();
    }

    // Density snapshots, evaluated concurrently, written in order.
    const auto ks = snapshot_periods(config);
    struct Snapshot {
        double t = 0.0, length = 0.0;
        std::vector<double> x, density;
        std::vector<Peak> peaks;
    };
    std::vector<Snapshot> snaps(ks.size());
    detail::parallel_for(ks.size(), [&](std::size_t i) {
        Snapshot& s = snaps[i];
        s.t = (static_cast<double>(ks[i]) + config.snapshot_phase) * round_trip;
        s.length = map->trajectory().position(s.t);
        const std::size_t m = config.density_points;
        s.x.resize(m);
        s.density.resize(m);
        for (std::size_t j = 0; j < m; ++j) {
            s.x[j] = s.length * static_cast<double>(j) / static_cast<double>(m - 1);
            s.density[j] = energy_density(s.t, s.x[j]);
        }
        s.peaks = quantum ? vacuum->peak_metrics(s.t) : classical->peak_metrics(s.t);
    });
    const std::string density_unit = quantum ? "renormalised vacuum T00" : "classical T00";
    for (std::size_t i = 0; i < ks.size(); ++i) {
        CsvWriter csv(config.out_dir, snapshot_name(ks[i]), manifest);
        csv.comment("snapshot after " + std::to_string(ks[i]) + " round trips, t = " +
                    format_number(snaps[i].t) + " [time], L(t) = " + format_number(snaps[i].length));
        csv.comment("x [length], T00 [" + density_unit + ", energy/length]");
        csv.header("x,T00");
        for (std::size_t j = 0; j < snaps[i].x.size(); ++j)
            csv.row({snaps[i].x[j], snaps[i].density[j]});
        csv.close();
    }
    {
        CsvWriter csv(config.out_dir, "peaks.csv", manifest);
        csv.comment("peaks per snapshot: period [round trips], t [time], x [length], "
                    "height [energy/length], fwhm [length]");
        csv.header("period,t,x,height,fwhm");
        for (std::size_t i = 0; i < ks.size(); ++i)
            for (const auto& p : snaps[i].peaks)
                csv.row({static_cast<double>(ks[i]), snaps[i].t, p.position, p.height, p.width});
        csv.close();
    }

    // Energy at the bounce instants T*_n(L(0)), one per round trip.
    const double tau0 = map->seed_half_width();
    const BounceSequence seq = map->iterate_bounces(tau0, config.periods);
    std::vector<double> ns(config.periods), energy(config.periods);
    detail::parallel_for(config.periods, [&](std::size_t i) {
        const std::size_t n = i + 1;
        ns[i] = static_cast<double>(n);
        energy[i] = quantum ? vacuum->total_energy(tau0, n)
                            : classical->total_energy_recursive(tau0, n);
    });
    {
        CsvWriter csv(config.out_dir, "energy.csv", manifest);
        csv.comment("total field energy at the n-th bounce on the moving mirror: n [bounces], "
                    "t = T*_n(L(0)) [time], E [energy]");
        csv.header("n,t,E");
        for (std::size_t i = 0; i < ns.size(); ++i)
            csv.row({ns[i], seq.retarded[i + 1], energy[i]});
        csv.close();
    }

    nlohmann::json fit_json = nullptr;
    const std::size_t first = std::max<std::size_t>(1, (config.periods + 9) / 10);
    if (config.periods >= first + 2) {
        std::vector<double> fn(ns.begin() + static_cast<long>(first - 1), ns.end());
        std::vector<double> fe(energy.begin() + static_cast<long>(first - 1), energy.end());
        try {
            const EnergyFit fit = fit_energy(fn, fe);
            fit_json = {{"model", fit.model}, {"a", fit.a}, {"b", fit.b},
                        {"residual", fit.residual}, {"n_first", first}, {"n_last", config.periods}};
        } catch (const PreconditionError& e) {
            manifest.warnings.push_back(std::string("energy fit skipped: ") + e.what());
        }
    }

    const std::size_t last_peaks = snaps.back().peaks.size();
    manifest.metrics["peak_count"] = last_peaks;
    manifest.metrics["energy_fit"] = fit_json;
    manifest.metrics["growth_exponent"] =
        paths.first_positive ? nlohmann::json(std::log(paths.first_positive->per_period_doppler))
                             : nlohmann::json(nullptr);

    if (quantum) {
        nlohmann::json coefficient = nullptr;
        std::size_t n_max = 0;
        if (paths.first_positive) {
            try {
                const GrowthCoefficient g =
                    growth_coefficient(*vacuum, *paths.first_positive, 4000);
                coefficient = number_or_null(g.value);
                n_max = g.n;
            } catch (const ConvergenceError& e) {
                manifest.warnings.push_back(e.what());
            }
        }
        nlohmann::json summary;
        const auto& tr = config.trajectory;
        summary["trajectory"] = tr.kind;
        summary["L0"] = tr.length;
        if (tr.kind == "sin" || tr.kind == "lawwu") {
            summary["N"] = tr.order;
            summary["dL"] = tr.amplitude;
        }
        summary["n_max"] = n_max;
        summary["growth_coefficient"] = coefficient;
        summary["energy_fit"] = fit_json;
        write_json(config.out_dir / "summary.json", summary);
        manifest.files.push_back({"summary.json", 1});
        manifest.metrics["growth_coefficient"] = coefficient;
    }

    manifest.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_json(config.out_dir / "manifest.json", manifest.to_json());
    return manifest;
}

RunManifest cmd_scan_band(const RunConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    config.validate();
    RunManifest manifest;
    manifest.command = "scan-band";
    manifest.config = config.echo();
    const auto& tr = config.trajectory;
    if (tr.kind != "sin" && tr.kind != "static")
        throw ConfigError("trajectory.kind", "scan-band needs a sinusoidal (or static) mirror");
    prepare_dir(config.out_dir);

    const double amplitude = tr.kind == "static" ? 0.0 : tr.amplitude;
    const double lo = config.omega_min.value_or(
        omega_from_detuning_ratio(tr.length, tr.order, -config.detuning_span));
    const double hi = config.omega_max.value_or(
        omega_from_detuning_ratio(tr.length, tr.order, config.detuning_span));
    const BandScanResult scan = scan_band(tr.length, amplitude, lo, hi, config.samples);

    {
        CsvWriter csv(config.out_dir, "band.csv", manifest);
        csv.comment("sinusoidal mirror L0 = " + format_number(tr.length) + ", dL = " +
                    format_number(amplitude));
        csv.comment("omega [1/time], delta_omega_over_omega [1] relative to the nearest "
                    "resonance, has_return_points [0/1], growth_exponent [log D per period]");
        csv.header("omega,delta_omega_over_omega,has_return_points,growth_exponent");
        for (const auto& s : scan.samples)
            csv.row({s.omega, s.detuning_ratio, s.has_return_points ? 1.0 : 0.0,
                     s.growth_exponent});
        csv.close();
    }

    // Band edges: the extreme detuning ratios that still carry return points.
    double lower = 0.0, upper = 0.0;
    bool any = false;
    for (const auto& s : scan.samples)
        if (s.has_return_points && s.growth_exponent > 0.0) {
            if (!any) {
                lower = upper = s.detuning_ratio;
                any = true;
            }
            lower = std::min(lower, s.detuning_ratio);
            upper = std::max(upper, s.detuning_ratio);
        }
    manifest.metrics["theoretical_half_width"] = amplitude / tr.length;
    manifest.metrics["band_lower"] = any ? nlohmann::json(lower) : nlohmann::json(nullptr);
    manifest.metrics["band_upper"] = any ? nlohmann::json(upper) : nlohmann::json(nullptr);
    manifest.metrics["measured_half_width"] =
        any ? nlohmann::json(0.5 * (upper - lower)) : nlohmann::json(nullptr);
    double max_exponent = 0.0;
    for (const auto& s : scan.samples)
        max_exponent = std::max(max_exponent, s.growth_exponent);
    manifest.metrics["max_growth_exponent"] = max_exponent;

    manifest.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_json(config.out_dir / "manifest.json", manifest.to_json());
    return manifest;
}

RunManifest cmd_trajectory(const RunConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    config.validate();
    RunManifest manifest;
    manifest.command = "trajectory";
    manifest.config = config.echo();
    prepare_dir(config.out_dir);

    const auto map = make_map(config);
    const double tau0 = config.tau0.value_or(0.0);
    const BounceSequence seq = map->iterate_bounces(tau0, config.bounces);
    const QuantumProfile vacuum(map);
    const AnomalyAccumulator acc = vacuum.anomaly_accumulate(tau0, config.bounces);
    const double first_bounce = map->retarded_time(tau0);

    CsvWriter csv(config.out_dir, "bounces.csv", manifest);
    csv.comment("bounce sequence from tau0 = " + format_number(tau0) + " [time]");
    csv.comment("k [bounces], T_k arrival at x = 0 [time], T*_k reflection on the moving mirror "
                "[time], D_k cumulative Doppler factor [1], A_k anomaly [energy/length]");
    csv.header("k,T_k,T*_k,D_k,A_k");
    for (std::size_t k = 0; k <= config.bounces; ++k)
        csv.row({static_cast<double>(k), seq.times[k], k == 0 ? first_bounce : seq.retarded[k],
                 seq.dopplers[k], acc.values[k]});
    csv.close();

    manifest.metrics["final_doppler"] = seq.dopplers.back();
    manifest.metrics["final_log_doppler"] = seq.log_dopplers.back();
    manifest.metrics["final_anomaly"] = acc.values.back();
    manifest.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_json(config.out_dir / "manifest.json", manifest.to_json());
    return manifest;
}

namespace {

/// One oracle comparison: the largest relative (or absolute) residual over a
/// batch of cases against a fixed tolerance.
class VerifyRun {
  public:
    explicit VerifyRun(const VerifyOptions& options) : options_(options) {}

    /// Oracle value with the optional injected relative error.
    double oracle(double v) const { return v * (1.0 + options_.inject_relative_error); }

    void check(const std::string& name, double residual, double tolerance, const char* kind) {
        const bool ok = std::isfinite(residual) && residual <= tolerance;
        if (!ok)
            ++failures_;
        std::ostringstream os;
        os << (ok ? "[PASS] " : "[FAIL] ") << name << ": max " << kind << " residual "
           << std::setprecision(3) << std::scientific << residual << " (tol " << tolerance << ")";
        emit(os.str());
    }

    void error(const std::string& name, const std::string& what) {
        ++failures_;
        emit("[FAIL] " + name + ": " + what);
    }

    int failures() const noexcept { return failures_; }

  private:
    void emit(const std::string& line) {
        if (options_.sink)
            options_.sink(line);
    }
    VerifyOptions options_;
    int failures_ = 0;
};

double rel(double engine, double reference) {
    return std::abs(engine - reference) / std::max(std::abs(reference), 1e-300);
}

template <class Fn>
void guarded(VerifyRun& run, const std::string& name, Fn&& fn) {
    try {
        fn();
    } catch (const std::exception& e) {
        run.error(name, e.what());
    }
}

} // namespace

int cmd_verify(const VerifyOptions& options) {
    VerifyRun run(options);
    std::mt19937_64 rng(20240601);

    guarded(run, "reflection laws", [&] {
        using namespace kinematics;
        const double r = reflect_relativistic(SubluminalVelocity(-0.5), SubluminalVelocity(0.5),
                                              SubluminalVelocity(0.5));
        const double e = photon_energy_after(1.0, SubluminalVelocity(0.0), TargetMass::finite(10.0));
        run.check("reflection laws", std::max(rel(r, run.oracle(13.0 / 14.0)),
                                               rel(e, run.oracle(1.0 / 1.2))),
                  1e-12, "relative");
    });

    for (int order : {1, 2}) {
        const std::string tag = " (sinusoidal N=" + std::to_string(order) + ")";
        const oracles::SinusoidalForms forms{1.0, 0.01, order, 0.0};
        const auto map = std::make_shared<const BilliardMap>(
            make_sinusoidal(forms.length, forms.amplitude, forms.omega()));

        guarded(run, "periodic starting points" + tag, [&] {
            const auto sp = oracles::sin_starting_points(forms);
            const auto paths = find_periodic_trajectories(*map);
            double worst = paths.size() == sp.positive.size() + sp.negative.size() ? 0.0 : 1.0;
            for (const auto& p : paths) {
                const auto& refs = p.sign == Stability::Positive ? sp.positive : sp.negative;
                double best = 1.0;
                for (double r : refs)
                    best = std::min(best, std::abs(p.tau0 - run.oracle(r)));
                worst = std::max(worst, best);
            }
            run.check("periodic starting points" + tag, worst, 1e-9, "absolute");
        });

        guarded(run, "cumulative Doppler D_n, n <= 50" + tag, [&] {
            double worst = 0.0;
            const auto sp = oracles::sin_starting_points(forms);
            for (double tau : sp.positive) {
                const auto seq = map->iterate_bounces(tau, 50);
                for (std::size_t n = 1; n <= 50; ++n)
                    worst = std::max(worst, rel(seq.dopplers[n],
                                                run.oracle(oracles::sin_doppler(forms, n, +1))));
            }
            for (double tau : sp.negative) {
                const auto seq = map->iterate_bounces(tau, 50);
                for (std::size_t n = 1; n <= 50; ++n)
                    worst = std::max(worst, rel(seq.dopplers[n],
                                                run.oracle(oracles::sin_doppler(forms, n, -1))));
            }
            run.check("cumulative Doppler D_n, n <= 50" + tag, worst, 1e-8, "relative");
        });

        guarded(run, "anomaly A_n, n <= 30" + tag, [&] {
            const QuantumProfile vacuum(map);
            double worst = 0.0;
            for (double tau : oracles::sin_starting_points(forms).positive) {
                const auto acc = vacuum.anomaly_accumulate(tau, 30);
                for (std::size_t n = 1; n <= 30; ++n)
                    worst = std::max(worst, rel(acc.values[n],
                                                run.oracle(oracles::sin_anomaly(forms, n))));
            }
            run.check("anomaly A_n, n <= 30" + tag, worst, 1e-5, "relative");
        });

        guarded(run, "growth coefficient" + tag, [&] {
            const QuantumProfile vacuum(map);
            double worst = 0.0;
            for (const auto& p : find_periodic_trajectories(*map))
                if (p.sign == Stability::Positive)
                    worst = std::max(worst,
                                     rel(growth_coefficient(vacuum, p, 4000).value,
                                         run.oracle(oracles::sin_growth_coefficient(forms))));
            run.check("growth coefficient" + tag, worst, 1e-6, "relative");
        });
    }

    guarded(run, "detuned band exponents", [&] {
        double worst = 0.0;
        for (double ratio : {-0.008, -0.004, 0.0, 0.003, 0.0075}) {
            const double omega = omega_from_detuning_ratio(1.0, 1, ratio);
            const BandSample s = band_sample(1.0, 0.01, omega);
            const oracles::SinusoidalForms forms{1.0, 0.01, 1, omega - kPi};
            const double q = oracles::sin_band_parameter(forms);
            worst = std::max(worst, rel(s.growth_exponent,
                                        run.oracle(std::log((1.0 + q) / (1.0 - q)))));
        }
        run.check("detuned band exponents", worst, 1e-6, "relative");
    });

    const oracles::LawWuForms lw{1.0, 0.1, 2};
    const auto lw_map = std::make_shared<const BilliardMap>(
        make_law_wu(lw.length, lw.amplitude, lw.order));

    guarded(run, "Law-Wu billiard function", [&] {
        double worst = 0.0;
        const double span = 3.0 * 2.0 * lw.length / lw.order;
        for (int i = 0; i < 1000; ++i) {
            const double tau = -lw.length + span * i / 999.0;
            worst = std::max(worst, std::abs(lw_map->f(tau) -
                                             run.oracle(oracles::lawwu_billiard(lw, tau))));
        }
        run.check("Law-Wu billiard function", worst, 1e-9, "absolute");
    });

    guarded(run, "Law-Wu Doppler D_n", [&] {
        std::uniform_real_distribution<double> tau_dist(-lw.length, lw.length);
        std::uniform_int_distribution<int> n_dist(1, 30);
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            const double tau = tau_dist(rng);
            const auto n = static_cast<std::size_t>(n_dist(rng));
            const double engine = lw_map->iterate_bounces(tau, n).dopplers[n];
            worst = std::max(worst, rel(engine, run.oracle(oracles::lawwu_doppler(lw, tau, n))));
        }
        run.check("Law-Wu Doppler D_n", worst, 1e-8, "relative");
    });

    guarded(run, "Law-Wu marginal starting points", [&] {
        double worst = 0.0;
        for (double tau : oracles::lawwu_starting_points(lw))
            worst = std::max(worst, std::abs(lw_map->iterate_bounces(tau, 20).dopplers[20] -
                                             run.oracle(1.0)));
        run.check("Law-Wu marginal starting points", worst, 1e-9, "absolute");
    });

    guarded(run, "Law-Wu vacuum density", [&] {
        const QuantumProfile vacuum(lw_map);
        std::uniform_real_distribution<double> tau_dist(-lw.length, lw.length);
        std::uniform_int_distribution<int> n_dist(0, 30);
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            const double sigma = tau_dist(rng);
            const auto n = static_cast<std::size_t>(n_dist(rng));
            const double tau = n ? lw_map->iterate_bounces(sigma, n).times[n] : sigma;
            const Pullback pb = pull_back(*lw_map, tau);
            worst = std::max(worst, rel(vacuum.rho_at(tau),
                                        run.oracle(oracles::lawwu_rho(lw, tau, pb.n))));
        }
        run.check("Law-Wu vacuum density", worst, 1e-6, "relative");
    });

    guarded(run, "static vacuum", [&] {
        const auto map = std::make_shared<const BilliardMap>(make_static(1.0));
        const QuantumProfile vacuum(map);
        const double ref = run.oracle(-kPi / 48.0);
        double worst = 0.0;
        for (double tau : {-0.9, 0.3, 7.7, 41.2})
            worst = std::max(worst, std::abs(vacuum.rho_at(tau) - ref));
        worst = std::max(worst, std::abs(vacuum.total_energy_at(5.5) - run.oracle(-kPi / 24.0)));
        run.check("static vacuum", worst, 1e-12, "absolute");
    });

    return run.failures();
}

} // namespace cavity::app
