#include "cavity/cavity.h"

#include "cavity/commands.hpp"
#include "cavity/errors.hpp"
#include "cavity/field_quantum.hpp"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <span>
#include <string>
#include <type_traits>
#include <variant>

using namespace cavity;

struct cb_trajectory {
    MirrorTrajectory value;
};

struct cb_billiard {
    std::shared_ptr<const BilliardMap> map;
};

struct cb_field {
    std::variant<ExtendedProfile, QuantumProfile> profile;
};

struct cb_config {
    app::RunConfig value;
};

namespace {

thread_local std::string last_error;

cb_status fail(cb_status status, const char* what) {
    last_error = what;
    return status;
}

// Runs fn, mapping the engine's exception taxonomy onto status codes.
template <class Fn>
cb_status guard(Fn&& fn) noexcept {
    try {
        fn();
        return CB_OK;
    } catch (const ConfigError& e) {
        return fail(CB_ERR_CONFIG, e.what());
    } catch (const PreconditionError& e) {
        return fail(CB_ERR_INVALID_ARGUMENT, e.what());
    } catch (const DomainError& e) {
        return fail(CB_ERR_DOMAIN, e.what());
    } catch (const BracketError& e) {
        return fail(CB_ERR_BRACKET, e.what());
    } catch (const QuadratureError& e) {
        return fail(CB_ERR_QUADRATURE, e.what());
    } catch (const ConvergenceError& e) {
        return fail(CB_ERR_QUADRATURE, e.what());
    } catch (const IoError& e) {
        return fail(CB_ERR_IO, e.what());
    } catch (const std::bad_alloc&) {
        return fail(CB_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(CB_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(CB_ERR_INTERNAL, "unknown error");
    }
}

cb_status null_handle() { return fail(CB_ERR_NULL_HANDLE, "null handle or output pointer"); }

char* duplicate(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out)
        throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

template <class Fn>
cb_status make_trajectory(cb_trajectory** out, Fn&& build) {
    if (!out)
        return null_handle();
    return guard([&] { *out = new cb_trajectory{build()}; });
}

template <class Fn>
decltype(auto) visit_field(const cb_field* field, Fn&& fn) {
    return std::visit(std::forward<Fn>(fn), field->profile);
}

const QuantumProfile& quantum_of(const cb_field* field) {
    if (const auto* q = std::get_if<QuantumProfile>(&field->profile))
        return *q;
    throw PreconditionError("operation needs a quantum field");
}

} // namespace

extern "C" {

const char* cb_last_error(void) { return last_error.c_str(); }

const char* cb_status_string(cb_status status) {
    switch (status) {
    case CB_OK: return "ok";
    case CB_ERR_INVALID_ARGUMENT: return "invalid argument";
    case CB_ERR_DOMAIN: return "domain error";
    case CB_ERR_BRACKET: return "root bracketing failed";
    case CB_ERR_QUADRATURE: return "numerical convergence failed";
    case CB_ERR_CONFIG: return "configuration error";
    case CB_ERR_IO: return "i/o error";
    case CB_ERR_VERIFY: return "verification failed";
    case CB_ERR_NULL_HANDLE: return "null handle";
    case CB_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* cb_version(void) { return app::kEngineVersion; }

void cb_string_free(char* s) { std::free(s); }

cb_status cb_trajectory_static(double length, cb_trajectory** out) {
    return make_trajectory(out, [&] { return make_static(length); });
}

cb_status cb_trajectory_sinusoidal(double length, double amplitude, double omega,
                                   cb_trajectory** out) {
    return make_trajectory(out, [&] { return make_sinusoidal(length, amplitude, omega); });
}

cb_status cb_trajectory_law_wu(double length, double amplitude, int order, cb_trajectory** out) {
    return make_trajectory(out, [&] { return make_law_wu(length, amplitude, order); });
}

cb_status cb_trajectory_tabulated(const double* t, const double* length, size_t count,
                                  cb_trajectory** out) {
    if (!t || !length)
        return null_handle();
    return make_trajectory(out, [&] {
        std::vector<std::pair<double, double>> rows(count);
        for (size_t i = 0; i < count; ++i)
            rows[i] = {t[i], length[i]};
        return make_tabulated(std::move(rows));
    });
}

cb_status cb_trajectory_from_file(const char* path, cb_trajectory** out) {
    if (!path)
        return null_handle();
    return make_trajectory(out, [&] { return make_tabulated(read_trajectory_table(path)); });
}

cb_status cb_trajectory_eval(const cb_trajectory* traj, double t, cb_mirror_jet* out) {
    if (!traj || !out)
        return null_handle();
    return guard([&] {
        const MirrorJet j = traj->value.evaluate(t);
        *out = {j.position, j.velocity, j.acceleration, j.jerk};
    });
}

void cb_trajectory_free(cb_trajectory* traj) { delete traj; }

cb_status cb_billiard_new(const cb_trajectory* traj, double root_tolerance, cb_billiard** out) {
    if (!traj || !out)
        return null_handle();
    return guard([&] {
        BilliardOptions opts;
        if (root_tolerance > 0.0)
            opts.root_tolerance = root_tolerance;
        *out = new cb_billiard{std::make_shared<const BilliardMap>(traj->value, opts)};
    });
}

void cb_billiard_free(cb_billiard* map) { delete map; }

cb_status cb_billiard_retarded_time(const cb_billiard* map, double tau, double* out) {
    if (!map || !out)
        return null_handle();
    return guard([&] { *out = map->map->retarded_time(tau); });
}

cb_status cb_billiard_f(const cb_billiard* map, double tau, double* out) {
    if (!map || !out)
        return null_handle();
    return guard([&] { *out = map->map->f(tau); });
}

cb_status cb_billiard_f_inverse(const cb_billiard* map, double tau, double* out) {
    if (!map || !out)
        return null_handle();
    return guard([&] { *out = map->map->f_inverse(tau); });
}

cb_status cb_billiard_f_derivatives(const cb_billiard* map, double tau, double* out) {
    if (!map || !out)
        return null_handle();
    return guard([&] {
        const Jet3 j = map->map->f_jet(tau);
        out[0] = j.d1;
        out[1] = j.d2;
        out[2] = j.d3;
    });
}

cb_status cb_billiard_schwarzian(const cb_billiard* map, double tau, double* out) {
    if (!map || !out)
        return null_handle();
    return guard([&] { *out = map->map->schwarzian_f(tau); });
}

cb_status cb_billiard_iterate(const cb_billiard* map, double tau0, size_t n, cb_bounce* rows) {
    if (!map || !rows)
        return null_handle();
    return guard([&] {
        const BounceSequence seq = map->map->iterate_bounces(tau0, n);
        const QuantumProfile vacuum(map->map);
        const AnomalyAccumulator acc = vacuum.anomaly_accumulate(tau0, n);
        for (size_t k = 0; k <= n; ++k)
            rows[k] = {seq.times[k], seq.retarded[k], seq.dopplers[k], seq.log_dopplers[k],
                       acc.values[k]};
    });
}

cb_status cb_find_periodic(const cb_billiard* map, cb_periodic_path* out, size_t capacity,
                           size_t* count) {
    if (!map || !count || (capacity && !out))
        return null_handle();
    return guard([&] {
        const auto paths = find_periodic_trajectories(*map->map);
        *count = paths.size();
        for (size_t i = 0; i < paths.size() && i < capacity; ++i) {
            const cb_stability s = paths[i].sign == Stability::Positive   ? CB_POSITIVE
                                   : paths[i].sign == Stability::Negative ? CB_NEGATIVE
                                                                          : CB_MARGINAL;
            out[i] = {paths[i].tau0, paths[i].period, paths[i].per_period_doppler, s};
        }
    });
}

cb_status cb_scan_band(double length, double amplitude, double omega_lo, double omega_hi,
                       size_t samples, cb_band_sample* out) {
    if (!out)
        return null_handle();
    return guard([&] {
        const BandScanResult r = scan_band(length, amplitude, omega_lo, omega_hi, samples);
        for (size_t i = 0; i < r.samples.size(); ++i) {
            const BandSample& s = r.samples[i];
            out[i] = {s.omega, s.detuning_ratio, s.order, s.has_return_points ? 1 : 0,
                      s.growth_exponent};
        }
    });
}

cb_status cb_field_classical_uniform(const cb_billiard* map, double rho0, cb_field** out) {
    if (!map || !out)
        return null_handle();
    return guard([&] {
        *out = new cb_field{ExtendedProfile(map->map, InitialProfile::uniform(rho0))};
    });
}

cb_status cb_field_classical_callback(const cb_billiard* map, cb_profile_fn fn, void* user,
                                      cb_field** out) {
    if (!map || !fn || !out)
        return null_handle();
    return guard([&] {
        auto profile = InitialProfile::closed_form([fn, user](double tau) { return fn(tau, user); });
        *out = new cb_field{ExtendedProfile(map->map, std::move(profile))};
    });
}

cb_status cb_field_quantum_vacuum(const cb_billiard* map, cb_field** out) {
    if (!map || !out)
        return null_handle();
    return guard([&] { *out = new cb_field{QuantumProfile(map->map)}; });
}

void cb_field_free(cb_field* field) { delete field; }

int cb_field_is_quantum(const cb_field* field) {
    return field && std::holds_alternative<QuantumProfile>(field->profile) ? 1 : 0;
}

cb_status cb_field_set_peak_seeds(cb_field* field, const double* seeds, size_t count) {
    if (!field || (count && !seeds))
        return null_handle();
    return guard([&] {
        std::vector<double> v(seeds, seeds + count);
        std::visit([&](auto& p) { p.set_peak_seeds(v); }, field->profile);
    });
}

cb_status cb_field_rho(const cb_field* field, double tau, double* out) {
    if (!field || !out)
        return null_handle();
    return guard([&] { *out = visit_field(field, [&](const auto& p) { return p.rho_at(tau); }); });
}

cb_status cb_field_energy_density(const cb_field* field, double t, double x, double* out) {
    if (!field || !out)
        return null_handle();
    return guard([&] {
        *out = visit_field(field, [&](const auto& p) { return p.energy_density(t, x); });
    });
}

cb_status cb_field_total_energy(const cb_field* field, double t, double* out) {
    if (!field || !out)
        return null_handle();
    return guard([&] {
        *out = std::visit(
            [&](const auto& p) {
                if constexpr (std::is_same_v<std::decay_t<decltype(p)>, QuantumProfile>)
                    return p.total_energy_at(t);
                else
                    return p.total_energy(t);
            },
            field->profile);
    });
}

cb_status cb_field_total_energy_recursive(const cb_field* field, double tau0, size_t n,
                                          double* out) {
    if (!field || !out)
        return null_handle();
    return guard([&] {
        *out = std::visit(
            [&](const auto& p) {
                if constexpr (std::is_same_v<std::decay_t<decltype(p)>, QuantumProfile>)
                    return p.total_energy(tau0, n);
                else
                    return p.total_energy_recursive(tau0, n);
            },
            field->profile);
    });
}

cb_status cb_field_peaks(const cb_field* field, double t, cb_peak* out, size_t capacity,
                         size_t* count) {
    if (!field || !count || (capacity && !out))
        return null_handle();
    return guard([&] {
        const auto peaks = visit_field(field, [&](const auto& p) { return p.peak_metrics(t); });
        *count = peaks.size();
        for (size_t i = 0; i < peaks.size() && i < capacity; ++i)
            out[i] = {peaks[i].position, peaks[i].height, peaks[i].width};
    });
}

cb_status cb_field_moore_phase(const cb_field* field, double tau, double* out) {
    if (!field || !out)
        return null_handle();
    return guard([&] { *out = quantum_of(field).moore_phase(tau); });
}

cb_status cb_field_anomaly(const cb_field* field, double tau, size_t n, double* out) {
    if (!field || !out)
        return null_handle();
    return guard([&] { *out = quantum_of(field).anomaly_accumulate(tau, n).values.back(); });
}

cb_status cb_field_growth_coefficient(const cb_field* field, double tau_plus, size_t n_max,
                                      double* out) {
    if (!field || !out)
        return null_handle();
    return guard([&] {
        const QuantumProfile& q = quantum_of(field);
        const auto paths = classify_candidates(q.map(), std::span<const double>(&tau_plus, 1),
                                               2.0 * q.map().unperturbed_length());
        if (paths.empty() || paths.front().sign != Stability::Positive)
            throw PreconditionError("tau_plus is not the start of a positive periodic path");
        *out = growth_coefficient(q, paths.front(), n_max).value;
    });
}

cb_status cb_config_new(cb_config** out) {
    if (!out)
        return null_handle();
    return guard([&] { *out = new cb_config{}; });
}

void cb_config_free(cb_config* cfg) { delete cfg; }

cb_status cb_config_set(cb_config* cfg, const char* key, const char* value) {
    if (!cfg || !key || !value)
        return null_handle();
    return guard([&] { cfg->value.set(key, value); });
}

cb_status cb_config_load(cb_config* cfg, const char* path) {
    if (!cfg || !path)
        return null_handle();
    return guard([&] { cfg->value.load_file(path); });
}

namespace {
cb_status run_command(const cb_config* cfg, char** manifest_json,
                      app::RunManifest (*cmd)(const app::RunConfig&)) {
    if (!cfg || !manifest_json)
        return null_handle();
    return guard([&] { *manifest_json = duplicate(cmd(cfg->value).to_json().dump(2)); });
}
} // namespace

cb_status cb_run_simulate(const cb_config* cfg, char** manifest_json) {
    return run_command(cfg, manifest_json, app::cmd_simulate);
}

cb_status cb_run_scan_band(const cb_config* cfg, char** manifest_json) {
    return run_command(cfg, manifest_json, app::cmd_scan_band);
}

cb_status cb_run_trajectory(const cb_config* cfg, char** manifest_json) {
    return run_command(cfg, manifest_json, app::cmd_trajectory);
}

cb_status cb_run_verify(double inject_relative_error, cb_line_sink sink, void* user,
                        int* failures) {
    if (!failures)
        return null_handle();
    cb_status status = guard([&] {
        app::VerifyOptions opts;
        opts.inject_relative_error = inject_relative_error;
        if (sink)
            opts.sink = [sink, user](const std::string& line) { sink(line.c_str(), user); };
        *failures = app::cmd_verify(opts);
    });
    if (status == CB_OK && *failures > 0)
        return fail(CB_ERR_VERIFY, (std::to_string(*failures) + " verification check(s) failed").c_str());
    return status;
}

} // extern "C"
