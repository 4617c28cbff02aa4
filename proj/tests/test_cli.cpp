#include <catch_amalgamated.hpp>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "slitfano/config.hpp"
#include "slitfano/csv.hpp"

using namespace slitfano;

namespace {

struct Run {
    int status = -1;
    std::string out;
};

// Runs the CLI with stderr folded into stdout.
Run run_cli(const std::string& args) {
    const std::string cmd = std::string(SLITFANO_CLI) + " " + args + " 2>&1";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    Run r;
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
    const int st = pclose(p);
    r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

// Data rows of a single-block CSV as name -> column values.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    double at(std::size_t row, const std::string& col) const {
        for (std::size_t j = 0; j < header.size(); ++j)
            if (header[j] == col) return std::stod(rows.at(row).at(j));
        throw std::runtime_error("no column " + col);
    }
};

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string c;
    while (std::getline(ss, c, ',')) cells.push_back(c);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

Table parse_csv(const std::string& text) {
    Table t;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (t.header.empty()) t.header = split(line);
        else t.rows.push_back(split(line));
    }
    return t;
}

int config_error_line(const std::string& text) {
    std::istringstream in(text);
    try {
        parse_config(in);
    } catch (const ConfigError& e) {
        return e.line();
    }
    return -1;
}

} // namespace

TEST_CASE("config text round-trips", "[cli]") {
    RunConfig c;
    c.geometry.eps = 0.0317;
    c.kappa = -0.07;
    c.N = 40;
    c.use_full = false;
    c.source = "asymptotic";
    c.kappa_list = {0.2, 0.1};
    c.family = "FabryPerot";
    c.out = "x.csv";
    std::istringstream in(config_text(c));
    const RunConfig d = parse_config(in);
    CHECK(config_text(d) == config_text(c));
    CHECK(d.geometry.eps == c.geometry.eps);
    CHECK(d.kappa == c.kappa);
    CHECK(d.kappa_list == c.kappa_list);
}

TEST_CASE("config errors carry line numbers", "[cli]") {
    CHECK(config_error_line("# comment\ngeometry.eps = 0.05\nbogus.key = 1\n") == 3);
    CHECK(config_error_line("geometry.eps 0.05\n") == 1);
    CHECK(config_error_line("numerics.N = 32\n\nnumerics.N = 48\n") == 3);
    CHECK(config_error_line("numerics.N = 3.5\n") == 1);
    CHECK(config_error_line("spectrum.source = guess\n") == 1);
    CHECK(config_error_line("geometry.eps = 0.02 # trailing comment\n") == -1);
}

TEST_CASE("csv writer", "[cli]") {
    std::ostringstream os;
    CsvWriter w(os, "a = 1\n", {"x", "y"});
    w.row({format_number(0.1), format_number(3)});
    CHECK(os.str().rfind(std::string("# format: ") + kCsvFormatVersion, 0) == 0);
    CHECK(os.str().find("# a = 1\n") != std::string::npos);
    CHECK(os.str().find("x,y\n0.10000000000000001,3\n") != std::string::npos);
    CHECK_THROWS(w.row({"1"}));
}

TEST_CASE("cli exit codes", "[cli]") {
    CHECK(run_cli("solve --set no.such=1").status == 2);
    CHECK(run_cli("solve --set numerics.N").status == 2);
    CHECK(run_cli("").status == 2);
    CHECK(run_cli("--help").status == 0);
    const auto r = run_cli("print-config --set geometry.eps=0.02");
    CHECK(r.status == 0);
    CHECK(r.out.find("geometry.eps = 0.02") != std::string::npos);
}

TEST_CASE("cli betas", "[cli]") {
    SECTION("interior constant at k = pi/2") {
        std::ostringstream set;
        set << "--set spectral.k_min=" << format_number(pi / 2) << " --set spectral.k_max=" << format_number(pi / 2);
        const auto r = run_cli("betas " + set.str());
        REQUIRE(r.status == 0);
        const auto t = parse_csv(r.out);
        REQUIRE(t.rows.size() == 1);
        CHECK(t.at(0, "beta_i_re") == Catch::Approx(2.0 * std::log(2.0) / pi).epsilon(1e-12));
    }
    SECTION("beta+ equals beta- at normal incidence") {
        const auto r = run_cli("betas --set spectral.kappa=0 --set spectral.k_min=1 --set spectral.k_max=2 "
                               "--set spectral.k_step=0.25");
        REQUIRE(r.status == 0);
        const auto t = parse_csv(r.out);
        REQUIRE(t.rows.size() == 5);
        for (std::size_t i = 0; i < t.rows.size(); ++i) {
            CHECK(t.at(i, "beta_plus_re") == t.at(i, "beta_minus_re"));
            CHECK(t.at(i, "beta_plus_im") == t.at(i, "beta_minus_im"));
        }
    }
}

TEST_CASE("cli solve", "[cli]") {
    const auto r = run_cli("solve --set numerics.N=32");
    REQUIRE(r.status == 0);
    const auto t = parse_csv(r.out);
    REQUIRE(t.rows.size() == 1);
    CHECK(t.at(0, "energy_residual") < 1e-6);
    const double R2 = std::norm(cplx(t.at(0, "R_re"), t.at(0, "R_im")));
    const double T2 = std::norm(cplx(t.at(0, "T_re"), t.at(0, "T_im")));
    CHECK(R2 + T2 == Catch::Approx(1.0).margin(1e-6));
    // config is echoed as comments
    CHECK(r.out.find("# numerics.N = 32") != std::string::npos);
}

TEST_CASE("cli selfcheck", "[cli]") {
    const auto ok = run_cli("selfcheck");
    CHECK(ok.status == 0);
    CHECK(ok.out.find("FAIL") == std::string::npos);
    const auto bad = run_cli("selfcheck --set selfcheck.tol_scale=1e-20");
    CHECK(bad.status == 1);
    CHECK(bad.out.find("invariant beta_i_at_half_pi failed") != std::string::npos);
}

TEST_CASE("cli output is reproducible", "[cli]") {
    const std::string path = "test_cli_repeat.csv";
    const std::string args = "betas --set numerics.threads=2 --out " + path;
    auto slurp = [&] {
        std::ifstream f(path, std::ios::binary);
        return std::string(std::istreambuf_iterator<char>(f), {});
    };
    REQUIRE(run_cli(args).status == 0);
    const std::string a = slurp();
    REQUIRE(run_cli(args + " --emit-plot-script").status == 0);
    CHECK(slurp() == a);
    CHECK(std::ifstream(path + ".gp").good());
    std::remove(path.c_str());
    std::remove((path + ".gp").c_str());
}
