#include "kfrac/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "kfrac/error.hpp"

namespace kfrac {

namespace {

constexpr std::string_view kDefaults = R"(# kfrac default configuration
domain.shape = interval
domain.length = 1
domain.radius = 1
domain.angle = 1.0471975511965976
domain.center_x = 0
domain.center_y = 0
domain.pole_x = -1
domain.pole_y = 0

grid.n_radial = 512
grid.n_dirs = 32
grid.n_radial_2d = 128

frac.alpha = 0.5
frac.alphas = 0.25, 0.5, 0.75

kernels.alphas = 0.1, 0.25, 0.5, 0.75, 0.9
kernels.cutoff = 50
kernels.n_max = 12
oracle.betas = 0, 1, 1.5

study.levels = 3
study.base_n = 64
study.base_n_2d = 16
study.min_factor = 1.5

coeff.a.preset = constant
coeff.a.value = 1
coeff.a.amplitude = 0
coeff.a.exponent = 1
coeff.rho.preset = constant
coeff.rho.value = 1
coeff.rho.amplitude = 0
coeff.rho.exponent = 1

spectral.n_angles = 64
spectral.n_random = 100
spectral.n_coarse = 256
spectral.n_fine = 512

comparator.a_lo = auto
comparator.rho_lo = auto
comparator.a_hi = auto
comparator.rho_hi = auto

# the eps = h inversion error decays like h^(1 - alpha)
inversion.frac.alphas = 0.25
adjoint.study.base_n = 32
norm-bound.frac.alphas = 0.1, 0.25, 0.5, 0.75, 0.9
)";

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

// key set of the default text, without subcommand overrides
const std::map<std::string, std::string>& known_keys() {
    static const std::map<std::string, std::string> keys = [] {
        std::map<std::string, std::string> m;
        std::istringstream in{std::string(kDefaults)};
        std::string line;
        while (std::getline(in, line)) {
            const std::string t = trim(line.substr(0, line.find('#')));
            if (t.empty()) continue;
            const auto eq = t.find('=');
            const std::string key = trim(t.substr(0, eq));
            const auto& subs = subcommand_names();
            const auto dot = key.find('.');
            if (std::find(subs.begin(), subs.end(), key.substr(0, dot)) != subs.end()) continue;
            m[key] = trim(t.substr(eq + 1));
        }
        return m;
    }();
    return keys;
}

double parse_number(const std::string& key, const std::string& v) {
    double out = 0.0;
    const char* b = v.data();
    const char* e = v.data() + v.size();
    const auto r = std::from_chars(b, e, out);
    if (r.ec != std::errc() || r.ptr != e) throw ConfigError("config key '" + key + "': '" + v + "' is not a number");
    return out;
}

}  // namespace

const std::vector<std::string>& subcommand_names() {
    static const std::vector<std::string> names = {"verify-kernels", "inversion", "representability",
                                                   "adjoint",        "restriction", "norm-bound",
                                                   "accretivity",    "sector",      "eigen-bounds"};
    return names;
}

std::string_view default_config_text() { return kDefaults; }

void Config::set(const std::string& key, const std::string& value) {
    const auto& known = known_keys();
    if (known.count(key)) {
        kv_[key] = value;
        return;
    }
    const auto dot = key.find('.');
    if (dot != std::string::npos) {
        const std::string sub = key.substr(0, dot), rest = key.substr(dot + 1);
        const auto& subs = subcommand_names();
        if (std::find(subs.begin(), subs.end(), sub) != subs.end() && known.count(rest)) {
            overrides_[sub][rest] = value;
            return;
        }
    }
    throw ConfigError("unknown config key '" + key + "'");
}

void Config::apply(std::string_view text, const std::string& origin) {
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line.substr(0, line.find('#')));
        if (t.empty()) continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = trim(t.substr(0, eq)), value = trim(t.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key or value");
        try {
            set(key, value);
        } catch (const ConfigError& e) {
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
}

Config Config::defaults() {
    Config c;
    c.kv_ = known_keys();
    c.apply(kDefaults, "<defaults>");
    return c;
}

Config Config::parse(std::string_view text, const std::string& origin) {
    Config c = defaults();
    c.apply(text, origin);
    return c;
}

Config Config::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path.string());
}

Config Config::scoped(const std::string& sub) const {
    Config c;
    c.kv_ = kv_;
    if (auto it = overrides_.find(sub); it != overrides_.end())
        for (const auto& [k, v] : it->second) c.kv_[k] = v;
    return c;
}

std::string Config::get_string(const std::string& key) const {
    const auto it = kv_.find(key);
    if (it == kv_.end()) throw ConfigError("unknown config key '" + key + "'");
    return it->second;
}

double Config::get_double(const std::string& key) const { return parse_number(key, get_string(key)); }

long Config::get_int(const std::string& key) const {
    const double v = get_double(key);
    if (v != static_cast<double>(static_cast<long>(v)))
        throw ConfigError("config key '" + key + "' must be an integer");
    return static_cast<long>(v);
}

std::vector<double> Config::get_list(const std::string& key) const {
    std::vector<double> out;
    std::istringstream in(get_string(key));
    std::string item;
    while (std::getline(in, item, ',')) out.push_back(parse_number(key, trim(item)));
    if (out.empty()) throw ConfigError("config key '" + key + "' is an empty list");
    return out;
}

bool Config::is_auto(const std::string& key) const { return get_string(key) == "auto"; }

}  // namespace kfrac
