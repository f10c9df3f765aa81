#include "cavity/config.hpp"

#include "cavity/errors.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace cavity::app {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
    double out = 0.0;
    const char* end = v.data() + v.size();
    auto [p, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc{} || p != end)
        throw ConfigError(key, "expected a number, got '" + v + "'");
    return out;
}

long long to_integer(const std::string& key, const std::string& v) {
    long long out = 0;
    const char* end = v.data() + v.size();
    auto [p, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc{} || p != end)
        throw ConfigError(key, "expected an integer, got '" + v + "'");
    return out;
}

std::size_t to_count(const std::string& key, const std::string& v) {
    const long long n = to_integer(key, v);
    if (n < 0)
        throw ConfigError(key, "must be non-negative");
    return static_cast<std::size_t>(n);
}

} // namespace

const std::vector<std::string>& known_keys() {
    static const std::vector<std::string> keys = {
        "trajectory.kind",  "trajectory.L0",        "trajectory.dL",
        "trajectory.N",     "trajectory.domega",    "trajectory.file",
        "run.mode",         "run.periods",          "run.out",
        "run.tau0",         "run.n",                "seed.kind",
        "seed.value",       "seed.file",            "output.snapshot_every",
        "output.snapshot_phase", "output.density_points", "tolerance.root",
        "tolerance.quad",   "scan.omega_min",       "scan.omega_max",
        "scan.detuning_span", "scan.samples",
    };
    return keys;
}

void RunConfig::set(const std::string& key, const std::string& raw_value) {
    const auto& keys = known_keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end())
        throw ConfigError(key, "unknown key");
    const std::string v = trim(raw_value);

    if (key == "trajectory.kind") {
        if (v.rfind("file:", 0) == 0) {
            trajectory.kind = "file";
            trajectory.file = v.substr(5);
        } else if (v == "static" || v == "sin" || v == "lawwu" || v == "file") {
            trajectory.kind = v;
        } else {
            throw ConfigError(key, "expected static, sin, lawwu or file:PATH");
        }
    } else if (key == "trajectory.L0") {
        trajectory.length = to_double(key, v);
    } else if (key == "trajectory.dL") {
        trajectory.amplitude = to_double(key, v);
    } else if (key == "trajectory.N") {
        const long long n = to_integer(key, v);
        if (n < 1 || n > 1000000)
            throw ConfigError(key, "resonance order must be a positive integer");
        trajectory.order = static_cast<int>(n);
    } else if (key == "trajectory.domega") {
        trajectory.detuning = to_double(key, v);
    } else if (key == "trajectory.file") {
        trajectory.file = v;
    } else if (key == "run.mode") {
        if (v == "classical")
            mode = Mode::Classical;
        else if (v == "quantum")
            mode = Mode::Quantum;
        else
            throw ConfigError(key, "expected classical or quantum");
    } else if (key == "run.periods") {
        periods = to_count(key, v);
    } else if (key == "run.out") {
        out_dir = v;
    } else if (key == "run.tau0") {
        tau0 = to_double(key, v);
    } else if (key == "run.n") {
        bounces = to_count(key, v);
    } else if (key == "seed.kind") {
        if (v != "default" && v != "uniform" && v != "file")
            throw ConfigError(key, "expected default, uniform or file");
        seed.kind = v;
    } else if (key == "seed.value") {
        seed.value = to_double(key, v);
    } else if (key == "seed.file") {
        seed.file = v;
    } else if (key == "output.snapshot_every") {
        snapshot_every = to_count(key, v);
    } else if (key == "output.snapshot_phase") {
        snapshot_phase = to_double(key, v);
    } else if (key == "output.density_points") {
        density_points = to_count(key, v);
    } else if (key == "tolerance.root") {
        root_tolerance = to_double(key, v);
    } else if (key == "tolerance.quad") {
        quad_tolerance = to_double(key, v);
    } else if (key == "scan.omega_min") {
        omega_min = to_double(key, v);
    } else if (key == "scan.omega_max") {
        omega_max = to_double(key, v);
    } else if (key == "scan.detuning_span") {
        detuning_span = to_double(key, v);
    } else if (key == "scan.samples") {
        samples = to_count(key, v);
    }
    raw_[key] = v;
}

void RunConfig::load_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("config", "cannot open " + path.string());
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config", path.string() + ":" + std::to_string(lineno) +
                                                ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config", path.string() + ":" + std::to_string(lineno) +
                                            ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        if (section.empty())
            throw ConfigError(key, "key outside any [section]");
        try {
            set(section + "." + key, line.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError(e.field(), path.string() + ":" + std::to_string(lineno) + ": " +
                                             e.what());
        }
    }
}

void RunConfig::validate() const {
    if (!(trajectory.length > 0.0))
        throw ConfigError("trajectory.L0", "must be positive");
    if (trajectory.kind == "file" && trajectory.file.empty())
        throw ConfigError("trajectory.file", "file trajectory needs a path");
    if (periods == 0)
        throw ConfigError("run.periods", "must be at least 1");
    if (density_points < 2)
        throw ConfigError("output.density_points", "must be at least 2");
    if (!(snapshot_phase >= 0.0 && snapshot_phase < 1.0))
        throw ConfigError("output.snapshot_phase", "must lie in [0, 1)");
    if (root_tolerance && !(*root_tolerance > 0.0))
        throw ConfigError("tolerance.root", "must be positive");
    if (!(quad_tolerance > 0.0 && quad_tolerance < 1.0))
        throw ConfigError("tolerance.quad", "must lie in (0, 1)");
    if (seed.kind == "file" && seed.file.empty())
        throw ConfigError("seed.file", "file seed needs a path");
    if (samples < 2)
        throw ConfigError("scan.samples", "must be at least 2");
    if (!(detuning_span > 0.0 && detuning_span < 1.0))
        throw ConfigError("scan.detuning_span", "must lie in (0, 1)");
    if (omega_min && omega_max && !(*omega_min < *omega_max))
        throw ConfigError("scan.omega_max", "must exceed scan.omega_min");
    if (omega_min && !(*omega_min > 0.0))
        throw ConfigError("scan.omega_min", "must be positive");
    (void)build_trajectory();
}

MirrorTrajectory RunConfig::build_trajectory() const {
    const auto& t = trajectory;
    const std::string field = t.kind == "static" ? "trajectory.L0"
                              : t.kind == "file" ? "trajectory.file"
                                                 : "trajectory.dL";
    try {
        if (t.kind == "static")
            return make_static(t.length);
        if (t.kind == "sin") {
            const double omega = resonance_frequency(t.length, t.order) + t.detuning;
            return make_sinusoidal(t.length, t.amplitude, omega);
        }
        if (t.kind == "lawwu")
            return make_law_wu(t.length, t.amplitude, t.order);
        return make_tabulated(read_trajectory_table(t.file));
    } catch (const PreconditionError& e) {
        throw ConfigError(field, e.what());
    } catch (const DomainError& e) {
        throw ConfigError(field, e.what());
    } catch (const IoError& e) {
        throw ConfigError(field, e.what());
    }
}

std::map<std::string, std::string> RunConfig::echo() const {
    std::map<std::string, std::string> out;
    auto num = [](double v) {
        std::ostringstream os;
        os.precision(17);
        os << v;
        return os.str();
    };
    out["trajectory.kind"] = trajectory.kind;
    out["trajectory.L0"] = num(trajectory.length);
    if (trajectory.kind != "static" && trajectory.kind != "file") {
        out["trajectory.dL"] = num(trajectory.amplitude);
        out["trajectory.N"] = std::to_string(trajectory.order);
    }
    if (trajectory.kind == "sin")
        out["trajectory.domega"] = num(trajectory.detuning);
    if (trajectory.kind == "file")
        out["trajectory.file"] = trajectory.file.string();
    out["run.mode"] = mode == Mode::Quantum ? "quantum" : "classical";
    out["run.periods"] = std::to_string(periods);
    out["run.out"] = out_dir.string();
    if (tau0)
        out["run.tau0"] = num(*tau0);
    out["run.n"] = std::to_string(bounces);
    out["seed.kind"] = seed.kind;
    out["seed.value"] = num(seed.value);
    if (seed.kind == "file")
        out["seed.file"] = seed.file.string();
    out["output.snapshot_every"] = std::to_string(snapshot_every);
    out["output.snapshot_phase"] = num(snapshot_phase);
    out["output.density_points"] = std::to_string(density_points);
    if (root_tolerance)
        out["tolerance.root"] = num(*root_tolerance);
    out["tolerance.quad"] = num(quad_tolerance);
    if (omega_min)
        out["scan.omega_min"] = num(*omega_min);
    if (omega_max)
        out["scan.omega_max"] = num(*omega_max);
    out["scan.detuning_span"] = num(detuning_span);
    out["scan.samples"] = std::to_string(samples);
    return out;
}

} // namespace cavity::app
