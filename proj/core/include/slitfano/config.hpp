#pragma once
#include <iosfwd>
#include <string>
#include <vector>

#include "slitfano/types.hpp"

namespace slitfano {

// Thrown for malformed configuration; line is 0 when not tied to a line.
class ConfigError : public Error {
public:
    ConfigError(int line, const std::string& what)
        : Error(ErrorKind::ConfigError, line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

struct RunConfig {
    PhysicalConfig geometry;

    double kappa = 0.1;
    double k = 2.0;
    double k_min = 2.5;
    double k_max = 3.1;
    double k_step = 0.05; // betas grid

    int N = 48;
    int threads = 0;
    Tolerances tol;

    int m_max = 1;
    bool use_full = true;
    bool verify = true;

    std::string source = "direct"; // direct | asymptotic
    double density = 400.0;        // base points per unit k
    int refine = 64;
    double window = 0.01;          // half-width of each refined window
    bool fano = true;

    std::vector<double> kappa_list{0.1, 0.05, 0.025};
    std::vector<double> eps_list{0.05, 0.035, 0.025};
    std::string family = "Embedded";

    double tol_scale = 1.0; // multiplies every selfcheck tolerance

    std::string out;
};

// `key = value` per line, `#` starts a comment, dotted keys. Unknown keys and bad values
// throw ConfigError with the line number. Keys not given keep their defaults.
RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::string& path);

// Applies one key; `line` is used for error messages.
void set_config_value(RunConfig& cfg, const std::string& key, const std::string& value, int line = 0);

// All keys in a fixed order; parse_config(config_text(c)) reproduces c.
std::string config_text(const RunConfig& cfg);

} // namespace slitfano
