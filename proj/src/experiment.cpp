#include "lyaplab/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <vector>

#include "lyaplab/equidist.hpp"
#include "lyaplab/errors.hpp"
#include "lyaplab/parallel.hpp"
#include "lyaplab/projective.hpp"

namespace lyaplab {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

} // namespace

Config Config::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_string(ss.str());
}

Config Config::parse_string(const std::string& text) {
    Config cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) +
                              " is not of the form key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("empty key on config line " + std::to_string(lineno));
        cfg.kv_[key] = value;
    }
    return cfg;
}

bool Config::has(const std::string& key) const { return kv_.count(key) > 0; }

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
    const auto it = kv_.find(key);
    return it == kv_.end() ? fallback : it->second;
}

std::string Config::require_string(const std::string& key) const {
    const auto it = kv_.find(key);
    if (it == kv_.end()) throw ConfigError("missing required config key: " + key);
    return it->second;
}

double Config::get_double(const std::string& key, double fallback) const {
    const auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    try {
        std::size_t pos = 0;
        const double v = std::stod(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key " + key + " is not a number: " + it->second);
    }
}

long long Config::get_int(const std::string& key, long long fallback) const {
    const auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key " + key + " is not an integer: " + it->second);
    }
}

std::uint64_t Config::get_u64(const std::string& key, std::uint64_t fallback) const {
    const auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    try {
        std::size_t pos = 0;
        const unsigned long long v = std::stoull(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key " + key + " is not an unsigned integer: " + it->second);
    }
}

void Config::set(const std::string& key, const std::string& value) { kv_[key] = value; }

void Config::require_known(const std::set<std::string>& allowed) const {
    for (const auto& [key, value] : kv_) {
        (void)value;
        if (allowed.find(key) == allowed.end())
            throw ConfigError("unknown config key: " + key);
    }
}

std::string Config::canonical() const {
    std::string out;
    for (const auto& [key, value] : kv_) out += key + "=" + value + "\n";
    return out;
}

std::uint64_t Config::hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const char c : canonical()) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

const std::set<std::string>& known_config_keys() {
    static const std::set<std::string> keys = {
        "system.kind", "system.surface", "system.radius", "system.a", "system.b",
        "system.amplitude", "system.mode", "system.K", "system.kick", "system.kick_K",
        "system.kick_c", "noise.kind", "noise.epsilon", "noise.sigma", "run.n_steps",
        "run.renorm_interval", "run.seed", "run.replicas", "run.y1", "run.y2",
        "sweep.parameter", "sweep.values", "equidist.bins", "equidist.stride",
        "projective.n_push", "classify.grid", "output.path",
    };
    return keys;
}

NoiseModel noise_from_config(const Config& cfg) {
    const std::string kind = cfg.get_string("noise.kind", "degenerate");
    if (kind == "degenerate") return NoiseModel::degenerate();
    if (kind == "uniform_ball") return NoiseModel::uniform_ball(cfg.get_double("noise.epsilon", 0.05));
    if (kind == "wrapped_gaussian")
        return NoiseModel::wrapped_gaussian(cfg.get_double("noise.sigma", 0.05));
    if (kind == "singular_vertical")
        return NoiseModel::singular_vertical(cfg.get_double("noise.epsilon", 0.1));
    throw ConfigError("unknown noise.kind: " + kind);
}

namespace {

SurfaceKind surface_from_config(const Config& cfg) {
    const std::string name = cfg.get_string("system.surface", "euclidean");
    if (name == "euclidean") return SurfaceKind::Euclidean;
    if (name == "sphere") return SurfaceKind::Sphere;
    if (name == "hyperbolic") return SurfaceKind::Hyperbolic;
    throw ConfigError("unknown system.surface: " + name);
}

bool is_billiard_kind(const std::string& kind) {
    return kind == "disk" || kind == "ellipse" || kind == "perturbed_disk";
}

} // namespace

Table table_from_config(const Config& cfg) {
    const std::string kind = cfg.require_string("system.kind");
    const SurfaceKind surface = surface_from_config(cfg);
    if (kind == "disk") {
        const double r = cfg.get_double("system.radius", unit_perimeter_disk_radius(surface));
        return build_table(DiskSpec{r}, surface);
    }
    if (kind == "ellipse") {
        return build_table(EllipseSpec{cfg.get_double("system.a", 1.5),
                                       cfg.get_double("system.b", 1.0)},
                           surface);
    }
    if (kind == "perturbed_disk") {
        const double r = cfg.get_double("system.radius", unit_perimeter_disk_radius(surface));
        return build_table(
            PerturbedDiskSpec{r, cfg.get_double("system.amplitude", 0.1),
                              static_cast<int>(cfg.get_int("system.mode", 3))},
            surface);
    }
    throw ConfigError("system.kind is not a billiard table: " + kind);
}

RandomSystem system_from_config(const Config& cfg) {
    const std::string kind = cfg.require_string("system.kind");
    const NoiseModel noise = noise_from_config(cfg);
    if (kind == "standard") {
        return RandomSystem::standard(cfg.get_double("system.K", 1.0), noise);
    }
    if (kind == "gv") {
        const std::string kick = cfg.get_string("system.kick", "sine");
        if (kick == "sine")
            return RandomSystem::gv(KickFunction::sine(cfg.get_double("system.kick_K", 1.0)), noise);
        if (kick == "constant")
            return RandomSystem::gv(KickFunction::constant(cfg.get_double("system.kick_c", 0.0)),
                                    noise);
        throw ConfigError("unknown system.kick: " + kick);
    }
    if (is_billiard_kind(kind)) {
        auto table = std::make_shared<const Table>(table_from_config(cfg));
        return RandomSystem::billiard(std::move(table), noise);
    }
    throw ConfigError("unknown system.kind: " + kind);
}

namespace {

std::string artifact_header(const Config& cfg, const std::string& what) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(cfg.hash()));
    std::string out = "# lyaplab " + what + "\n";
    out += "# config_hash=" + std::string(buf) + "\n";
    out += "# seed=" + std::to_string(cfg.get_u64("run.seed", 1)) + "\n";
    return out;
}

struct RunParams {
    long long n = 0;
    int renorm = 8;
    std::uint64_t seed = 1;
    int replicas = 1;
    TorusPoint y0;
};

RunParams run_params(const Config& cfg, const RandomSystem& sys) {
    RunParams p;
    p.n = cfg.get_int("run.n_steps", 100000);
    p.renorm = static_cast<int>(cfg.get_int("run.renorm_interval", 8));
    p.seed = cfg.get_u64("run.seed", 1);
    p.replicas = static_cast<int>(cfg.get_int("run.replicas", 1));
    p.y0 = sys.wrap({cfg.get_double("run.y1", 0.2), cfg.get_double("run.y2", 0.1)});
    if (p.n <= 0) throw ConfigError("run.n_steps must be positive");
    if (p.renorm < 1 || p.renorm > 64)
        throw ConfigError("run.renorm_interval must be in [1, 64]");
    if (p.replicas < 1) throw ConfigError("run.replicas must be >= 1");
    return p;
}

std::vector<double> parse_values(const std::string& csv) {
    std::vector<double> out;
    std::istringstream in(csv);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        tok = trim(tok);
        if (tok.empty()) continue;
        out.push_back(std::stod(tok));
    }
    if (out.empty()) throw ConfigError("sweep.values is empty");
    return out;
}

} // namespace

std::string run_lyapunov(const Config& cfg) {
    cfg.require_known(known_config_keys());
    const RandomSystem sys = system_from_config(cfg);
    const RunParams p = run_params(cfg, sys);

    std::vector<LyapunovEstimate> ests(p.replicas);
    const RngStream root(p.seed);
    for_each_index(p.replicas, true, [&](std::int64_t r) {
        RngStream rng = root.split(static_cast<std::uint64_t>(r));
        ests[static_cast<std::size_t>(r)] =
            estimate_lyapunov(sys, p.y0, p.n, p.renorm, rng);
    });

    std::string out = artifact_header(cfg, "lyapunov");
    out += "system,noise,n,renorm_interval,replica,seed,lambda_plus,lambda_minus,std_error\n";
    double mean_p = 0.0, mean_m = 0.0, var = 0.0;
    for (int r = 0; r < p.replicas; ++r) {
        const auto& e = ests[static_cast<std::size_t>(r)];
        out += sys.id + "," + sys.noise.label() + "," + std::to_string(p.n) + "," +
               std::to_string(p.renorm) + "," + std::to_string(r) + "," +
               std::to_string(p.seed) + "," + num(e.lambda_plus) + "," +
               num(e.lambda_minus) + "," + num(e.std_error) + "\n";
        mean_p += e.lambda_plus;
        mean_m += e.lambda_minus;
        var += e.std_error * e.std_error;
    }
    mean_p /= p.replicas;
    mean_m /= p.replicas;
    const double se = std::sqrt(var) / p.replicas;
    out += sys.id + "," + sys.noise.label() + "," + std::to_string(p.n) + "," +
           std::to_string(p.renorm) + ",mean," + std::to_string(p.seed) + "," +
           num(mean_p) + "," + num(mean_m) + "," + num(se) + "\n";
    return out;
}

std::string run_orbit(const Config& cfg) {
    cfg.require_known(known_config_keys());
    const RandomSystem sys = system_from_config(cfg);
    const RunParams p = run_params(cfg, sys);

    RngStream rng = RngStream(p.seed).split(0);
    const auto orbit = random_orbit(sys, p.y0, p.n, rng);

    std::string out = artifact_header(cfg, "orbit");
    out += "step,y1,y2\n";
    for (std::size_t k = 0; k < orbit.size(); ++k)
        out += std::to_string(k) + "," + num(orbit[k].y1) + "," + num(orbit[k].y2) + "\n";
    return out;
}

std::string run_projective(const Config& cfg) {
    cfg.require_known(known_config_keys());
    const RandomSystem sys = system_from_config(cfg);
    const RunParams p = run_params(cfg, sys);
    const long long n_push = cfg.get_int("projective.n_push", 100000);

    RngStream rng = RngStream(p.seed).split(0);
    const AngleHistogram hist = stationary_measure(sys, p.y0, p.n, rng);
    RngStream rng_push = RngStream(p.seed).split(1);
    const double defect = invariance_defect(sys, hist, n_push, rng_push);

    std::string out = artifact_header(cfg, "projective");
    out += "# mass_within_0.05_of_ehat=" + num(hist.mass_within(0.0, 0.05)) + "\n";
    out += "# invariance_defect=" + num(defect) + "\n";
    out += "bin_center,mass\n";
    for (int i = 0; i < AngleHistogram::kBins; ++i)
        out += num(AngleHistogram::bin_center(i)) + "," + num(hist.bin_mass(i)) + "\n";
    return out;
}

std::string run_classify(const Config& cfg) {
    cfg.require_known(known_config_keys());
    const std::string kind = cfg.require_string("system.kind");
    const int grid = static_cast<int>(cfg.get_int("classify.grid", 80));
    if (grid < 64) throw ConfigError("classify.grid must be >= 64");

    ClassifierVerdict verdict;
    if (is_billiard_kind(kind)) {
        const Table table = table_from_config(cfg);
        verdict = classify_billiard(table, grid);
    } else if (kind == "standard") {
        const double K = cfg.get_double("system.K", 1.0);
        verdict = classify_toral(
            [K](const TorusPoint& y) { return standard_map_derivative(K, y); }, grid);
    } else if (kind == "gv") {
        const std::string kick_name = cfg.get_string("system.kick", "sine");
        const KickFunction kick =
            kick_name == "constant" ? KickFunction::constant(cfg.get_double("system.kick_c", 0.0))
                                    : KickFunction::sine(cfg.get_double("system.kick_K", 1.0));
        verdict = classify_toral(
            [kick](const TorusPoint& y) { return gv_map_derivative(kick, y); }, grid);
    } else {
        throw ConfigError("unknown system.kind: " + kind);
    }

    std::string out = artifact_header(cfg, "classify");
    out += verdict.describe();
    return out;
}

std::string run_equidist(const Config& cfg) {
    cfg.require_known(known_config_keys());
    const RandomSystem sys = system_from_config(cfg);
    const RunParams p = run_params(cfg, sys);
    const int bins = static_cast<int>(cfg.get_int("equidist.bins", 16));
    const long long stride = cfg.get_int("equidist.stride", 1);
    if (bins < 2) throw ConfigError("equidist.bins must be >= 2");
    if (stride < 1) throw ConfigError("equidist.stride must be >= 1");

    OccupancyGrid grid(bins, sys.second_lo, sys.second_period);
    RngStream rng = RngStream(p.seed).split(0);
    TorusPoint y = p.y0;
    for (long long k = 0; k < p.n; ++k) {
        const auto [gy, dgy] = sys.step(y);
        (void)dgy;
        const Vec2 x = sys.draw(rng);
        y = sys.wrap({gy.y1 + x.x, gy.y2 + x.y});
        if ((k + 1) % stride == 0) grid.add(y);
    }

    std::string out = artifact_header(cfg, "equidist");
    const double empty = empty_cell_fraction(grid);
    out += "# total_samples=" + std::to_string(grid.total()) + "\n";
    out += "# empty_cell_fraction=" + num(empty) + "\n";
    try {
        const ChiSquareResult chi = chi_square_uniform(grid);
        out += "# chi_square=" + num(chi.statistic) + "\n";
        out += "# p_value=" + num(chi.p_value) + "\n";
    } catch (const InsufficientSamples&) {
        out += "# chi_square=insufficient_samples\n";
    }
    out += "cell_i,cell_j,count\n";
    for (int i = 0; i < bins; ++i)
        for (int j = 0; j < bins; ++j)
            out += std::to_string(i) + "," + std::to_string(j) + "," +
                   std::to_string(grid.counts()[static_cast<std::size_t>(i) * bins + j]) + "\n";
    return out;
}

std::string run_dichotomy(const Config& cfg) {
    cfg.require_known(known_config_keys());
    const std::string parameter = cfg.get_string("sweep.parameter", "K");
    const std::vector<double> values = parse_values(cfg.require_string("sweep.values"));
    const NoiseModel noise = noise_from_config(cfg);

    const long long n = cfg.get_int("run.n_steps", 1000000);
    const int renorm = static_cast<int>(cfg.get_int("run.renorm_interval", 8));
    const std::uint64_t seed = cfg.get_u64("run.seed", 1);
    const int replicas = static_cast<int>(cfg.get_int("run.replicas", 1));

    struct Job {
        double value = 0.0;
        int replica = 0;
        LyapunovEstimate est;
    };
    std::vector<Job> jobs;
    for (std::size_t vi = 0; vi < values.size(); ++vi)
        for (int r = 0; r < replicas; ++r)
            jobs.push_back({values[vi], r, {}});

    const SurfaceKind surface = surface_from_config(cfg);
    const double radius = cfg.get_double("system.radius", unit_perimeter_disk_radius(surface));
    const int mode = static_cast<int>(cfg.get_int("system.mode", 3));

    // Tables are immutable and shareable; build one per sweep value up front.
    std::vector<RandomSystem> systems(values.size());
    for (std::size_t vi = 0; vi < values.size(); ++vi) {
        if (parameter == "K") {
            systems[vi] = RandomSystem::standard(values[vi], noise);
        } else if (parameter == "amplitude") {
            auto table = std::make_shared<const Table>(
                build_table(PerturbedDiskSpec{radius, values[vi], mode}, surface));
            systems[vi] = RandomSystem::billiard(std::move(table), noise);
        } else {
            throw ConfigError("sweep.parameter must be K or amplitude");
        }
    }

    const RngStream root(seed);
    const TorusPoint y0{cfg.get_double("run.y1", 0.2), cfg.get_double("run.y2", 0.1)};
    for_each_index(static_cast<std::int64_t>(jobs.size()), true, [&](std::int64_t idx) {
        Job& job = jobs[static_cast<std::size_t>(idx)];
        const std::size_t vi = static_cast<std::size_t>(idx) / replicas;
        RngStream rng = root.split(static_cast<std::uint64_t>(idx));
        job.est = estimate_lyapunov(systems[vi], systems[vi].wrap(y0), n, renorm, rng);
    });

    std::string out = artifact_header(cfg, "dichotomy");
    out += "parameter,value,lambda_plus,lambda_minus,std_error\n";
    for (std::size_t vi = 0; vi < values.size(); ++vi) {
        double mean_p = 0.0, mean_m = 0.0, var = 0.0;
        for (int r = 0; r < replicas; ++r) {
            const auto& e = jobs[vi * replicas + r].est;
            mean_p += e.lambda_plus;
            mean_m += e.lambda_minus;
            var += e.std_error * e.std_error;
        }
        mean_p /= replicas;
        mean_m /= replicas;
        const double se = std::sqrt(var) / replicas;
        out += parameter + "," + num(values[vi]) + "," + num(mean_p) + "," + num(mean_m) +
               "," + num(se) + "\n";
    }
    return out;
}

} // namespace lyaplab
