#include "slitfano/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "slitfano/csv.hpp"

namespace slitfano {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& v, int line, const std::string& key) {
    double out = 0.0;
    const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
    if (r.ec != std::errc() || r.ptr != v.data() + v.size())
        throw ConfigError(line, "'" + key + "' expects a number, got '" + v + "'");
    return out;
}

long to_long(const std::string& v, int line, const std::string& key) {
    long out = 0;
    const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
    if (r.ec != std::errc() || r.ptr != v.data() + v.size())
        throw ConfigError(line, "'" + key + "' expects an integer, got '" + v + "'");
    return out;
}

bool to_bool(const std::string& v, int line, const std::string& key) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError(line, "'" + key + "' expects true or false, got '" + v + "'");
}

std::vector<double> to_list(const std::string& v, int line, const std::string& key) {
    std::vector<double> out;
    std::stringstream ss(v);
    for (std::string item; std::getline(ss, item, ',');) out.push_back(to_double(trim(item), line, key));
    if (out.empty()) throw ConfigError(line, "'" + key + "' expects a comma-separated list");
    return out;
}

std::string list_text(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + format_number(v[i]);
    return s;
}

using Setter = std::function<void(RunConfig&, const std::string&, int, const std::string&)>;
using Getter = std::function<std::string(const RunConfig&)>;

struct Key {
    const char* name;
    Setter set;
    Getter get;
};

#define NUM(name, field)                                                                                    \
    Key {                                                                                                   \
        name, [](RunConfig& c, const std::string& v, int l, const std::string& k) { c.field = to_double(v, l, k); }, \
            [](const RunConfig& c) { return format_number(c.field); }                                      \
    }
#define INT(name, field)                                                                                    \
    Key {                                                                                                   \
        name,                                                                                               \
            [](RunConfig& c, const std::string& v, int l, const std::string& k) {                           \
                c.field = static_cast<decltype(c.field)>(to_long(v, l, k));                                 \
            },                                                                                              \
            [](const RunConfig& c) { return std::to_string(c.field); }                                      \
    }
#define BOOL(name, field)                                                                                   \
    Key {                                                                                                   \
        name, [](RunConfig& c, const std::string& v, int l, const std::string& k) { c.field = to_bool(v, l, k); }, \
            [](const RunConfig& c) { return std::string(c.field ? "true" : "false"); }                     \
    }
#define LIST(name, field)                                                                                   \
    Key {                                                                                                   \
        name, [](RunConfig& c, const std::string& v, int l, const std::string& k) { c.field = to_list(v, l, k); }, \
            [](const RunConfig& c) { return list_text(c.field); }                                          \
    }

const std::vector<Key>& keys() {
    static const std::vector<Key> table = {
        NUM("geometry.d", geometry.d),
        NUM("geometry.d0", geometry.d0),
        NUM("geometry.eps", geometry.eps),
        NUM("spectral.kappa", kappa),
        NUM("spectral.k", k),
        NUM("spectral.k_min", k_min),
        NUM("spectral.k_max", k_max),
        NUM("spectral.k_step", k_step),
        INT("numerics.N", N),
        INT("numerics.threads", threads),
        NUM("numerics.series_tol", tol.series),
        NUM("numerics.wood_margin", tol.wood_margin),
        INT("numerics.max_terms", tol.max_terms),
        INT("resonances.m_max", m_max),
        BOOL("resonances.use_full", use_full),
        BOOL("resonances.verify", verify),
        Key{"spectrum.source",
            [](RunConfig& c, const std::string& v, int l, const std::string&) {
                if (v != "direct" && v != "asymptotic")
                    throw ConfigError(l, "'spectrum.source' must be direct or asymptotic, got '" + v + "'");
                c.source = v;
            },
            [](const RunConfig& c) { return c.source; }},
        NUM("spectrum.density", density),
        INT("spectrum.refine", refine),
        NUM("spectrum.window", window),
        BOOL("spectrum.fano", fano),
        LIST("enhance.kappa_list", kappa_list),
        LIST("enhance.eps_list", eps_list),
        Key{"enhance.family",
            [](RunConfig& c, const std::string& v, int l, const std::string&) {
                if (v != "Embedded" && v != "FabryPerot")
                    throw ConfigError(l, "'enhance.family' must be Embedded or FabryPerot, got '" + v + "'");
                c.family = v;
            },
            [](const RunConfig& c) { return c.family; }},
        NUM("selfcheck.tol_scale", tol_scale),
        Key{"output.path", [](RunConfig& c, const std::string& v, int, const std::string&) { c.out = v; },
            [](const RunConfig& c) { return c.out; }},
    };
    return table;
}

#undef NUM
#undef INT
#undef BOOL
#undef LIST

} // namespace

void set_config_value(RunConfig& cfg, const std::string& key, const std::string& value, int line) {
    for (const auto& k : keys())
        if (key == k.name) {
            k.set(cfg, value, line, key);
            return;
        }
    throw ConfigError(line, "unknown key '" + key + "'");
}

RunConfig parse_config(std::istream& in) {
    RunConfig cfg;
    std::map<std::string, int> seen;
    int line_no = 0;
    for (std::string raw; std::getline(in, raw);) {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(line_no, "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(line_no, "missing key");
        if (auto it = seen.find(key); it != seen.end())
            throw ConfigError(line_no, "duplicate key '" + key + "' (first on line " + std::to_string(it->second) + ")");
        seen[key] = line_no;
        set_config_value(cfg, key, value, line_no);
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(0, "cannot open config file '" + path + "'");
    return parse_config(in);
}

std::string config_text(const RunConfig& cfg) {
    std::string out;
    for (const auto& k : keys()) out += std::string(k.name) + " = " + k.get(cfg) + "\n";
    return out;
}

} // namespace slitfano
