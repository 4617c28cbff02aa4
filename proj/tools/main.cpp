#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "slitfano/config.hpp"
#include "slitfano/csv.hpp"
#include "slitfano/selfcheck.hpp"
#include "slitfano/spectra.hpp"

using namespace slitfano;

namespace {

std::string num(double v) { return format_number(v); }

struct Output {
    std::string csv;
    bool row_errors = false;
    std::string plot_x = "1", plot_y = "2", plot_title;
};

std::vector<double> k_range(const RunConfig& rc) {
    if (!(rc.k_step > 0.0) || !(rc.k_max >= rc.k_min))
        throw ConfigError(0, "need spectral.k_step > 0 and spectral.k_max >= spectral.k_min");
    std::vector<double> ks;
    const int n = static_cast<int>(std::floor((rc.k_max - rc.k_min) / rc.k_step + 1e-9));
    for (int i = 0; i <= n; ++i) ks.push_back(rc.k_min + i * rc.k_step);
    return ks;
}

Output cmd_betas(const RunConfig& rc) {
    std::ostringstream os;
    CsvWriter w(os, config_text(rc),
                {"k", "kappa", "beta_e_re", "beta_e_im", "beta_plus_re", "beta_plus_im", "beta_minus_re",
                 "beta_minus_im", "beta_i_re", "beta_i_im", "beta_tilde_re", "beta_tilde_im", "beta_re", "beta_im",
                 "gamma_re", "gamma_im", "beta_hat_re", "beta_hat_im", "eta_re", "eta_im", "error_flag"});
    Output out;
    for (double k : k_range(rc)) {
        std::vector<std::string> row{num(k), num(rc.kappa)};
        try {
            const auto b = beta_constants({k, rc.kappa}, rc.geometry, rc.tol);
            for (cplx v : {b.beta_e, b.beta_plus, b.beta_minus, b.beta_i, b.beta_tilde, b.beta, b.gamma, b.beta_hat,
                           b.eta}) {
                row.push_back(num(v.real()));
                row.push_back(num(v.imag()));
            }
            row.push_back("");
        } catch (const Error& e) {
            row.resize(2, "");
            row.resize(20, "nan");
            row.push_back(to_string(e.kind()));
            out.row_errors = true;
        }
        w.row(row);
    }
    out.csv = os.str();
    return out;
}

Output cmd_solve(const RunConfig& rc) {
    const Discretization disc(rc.geometry, rc.kappa, rc.N, rc.tol);
    const auto s = disc.solve(rc.k);
    std::ostringstream os;
    CsvWriter w(os, config_text(rc),
                {"k", "kappa", "N", "R_re", "R_im", "T_re", "T_im", "energy_residual", "condition", "near_singular",
                 "avg1_minus_re", "avg1_minus_im", "avg1_plus_re", "avg1_plus_im", "avg2_minus_re", "avg2_minus_im",
                 "avg2_plus_re", "avg2_plus_im"});
    std::vector<std::string> row{num(rc.k),
                                 num(rc.kappa),
                                 format_number(rc.N),
                                 num(s.coefficients.R.real()),
                                 num(s.coefficients.R.imag()),
                                 num(s.coefficients.T.real()),
                                 num(s.coefficients.T.imag()),
                                 num(s.coefficients.energy_residual),
                                 num(s.condition_estimate),
                                 s.near_singular ? "1" : "0"};
    for (cplx a : s.densities.averages) {
        row.push_back(num(a.real()));
        row.push_back(num(a.imag()));
    }
    w.row(row);
    Output out;
    out.csv = os.str();
    return out;
}

ResonanceSearch search_options(const RunConfig& rc) {
    ResonanceSearch o;
    o.N = rc.N;
    o.threads = rc.threads;
    o.verify = rc.verify;
    return o;
}

Output cmd_resonances(const RunConfig& rc) {
    const auto opts = search_options(rc);
    std::vector<ResonanceBranch> rows = predicted_resonances(rc.geometry, rc.kappa, rc.m_max, default_alpha());
    const auto hat = find_resonances(rc.geometry, rc.kappa, rc.m_max, false, opts);
    rows.insert(rows.end(), hat.begin(), hat.end());
    if (rc.use_full) {
        const auto full = find_resonances(rc.geometry, rc.kappa, rc.m_max, true, opts);
        rows.insert(rows.end(), full.begin(), full.end());
    }
    std::ostringstream os;
    CsvWriter w(os, config_text(rc), {"m", "family", "parity", "re_k", "im_k", "kappa", "eps", "method", "residual"});
    for (const auto& b : rows)
        w.row({format_number(b.m), to_string(b.family), format_number(b.parity), num(b.k.real()), num(b.k.imag()),
               num(b.kappa), num(b.eps), to_string(b.method), num(b.residual)});
    Output out;
    out.csv = os.str();
    out.plot_x = "4", out.plot_y = "5", out.plot_title = "resonances";
    return out;
}

SpectrumOptions spectrum_options(const RunConfig& rc) {
    SpectrumOptions o;
    o.N = rc.N;
    o.threads = rc.threads;
    o.tol = rc.tol;
    return o;
}

Output cmd_spectrum(const RunConfig& rc) {
    const SpectrumSolver solver(rc.geometry, rc.kappa, spectrum_options(rc));
    // the closed-form roots sit within ~1e-3 of the discrete ones and cost nothing
    ResonanceSearch so = search_options(rc);
    so.verify = false;
    const auto hat = find_resonances(rc.geometry, rc.kappa, rc.m_max, false, so);
    std::vector<double> centers;
    for (const auto& b : hat) centers.push_back(b.k.real());
    const auto grid = adaptive_grid(rc.k_min, rc.k_max, centers, rc.window, rc.density, rc.refine);
    const Source src = rc.source == "direct" ? Source::direct : Source::asymptotic;
    const auto rows = sweep(solver, grid, src);

    std::ostringstream os;
    CsvWriter w(os, config_text(rc),
                {"k", "T_abs", "R_abs", "T_arg", "energy_residual", "max_slit_amp", "source", "error_flag"});
    Output out;
    for (const auto& r : rows) {
        w.row({num(r.k), num(r.T_abs), num(r.R_abs), num(r.T_arg), num(r.energy_residual), num(r.max_slit_amp),
               to_string(r.source), r.error_flag});
        if (!r.error_flag.empty()) out.row_errors = true;
    }
    if (rc.fano && rc.kappa != 0.0) {
        so.N = rc.N;
        const auto full = find_resonances(rc.geometry, rc.kappa, rc.m_max, true, so);
        for (const auto& b : full) {
            if (b.family != Family::Embedded) continue;
            const std::string tag = "fano.m" + std::to_string(b.m) + ".";
            try {
                const auto f = detect_fano(solver, b);
                w.comment(tag + "k_star = " + num(f.k_star));
                w.comment(tag + "k_dip = " + num(f.k_dip));
                w.comment(tag + "k_peak = " + num(f.k_peak));
                w.comment(tag + "T_dip = " + num(f.T_dip));
                w.comment(tag + "T_peak = " + num(f.T_peak));
                w.comment(tag + "window_c = " + num(f.window_c));
            } catch (const FeatureNotFound& e) {
                w.comment(tag + "error = " + std::string(to_string(e.kind())));
                w.comment(tag + "best_T_dip = " + num(e.best().T_dip));
                w.comment(tag + "best_T_peak = " + num(e.best().T_peak));
                out.row_errors = true;
            }
        }
    }
    out.csv = os.str();
    out.plot_title = "|T|";
    return out;
}

Output cmd_enhance(const RunConfig& rc) {
    const Family fam = rc.family == "Embedded" ? Family::Embedded : Family::FabryPerot;
    const auto rep = enhancement_scan(rc.geometry, rc.kappa_list, rc.eps_list, fam, spectrum_options(rc));
    std::ostringstream os;
    CsvWriter w(os, config_text(rc),
                {"scan", "kappa", "eps", "re_k", "im_k", "max_slit_amp", "prefactor", "T_abs", "shape_overlap",
                 "slit_correlation"});
    auto emit = [&](const char* scan, const std::vector<EnhancementPoint>& pts) {
        for (const auto& p : pts)
            w.row({scan, num(p.kappa), num(p.eps), num(p.k), num(p.im_k), num(p.amplitude), num(p.prefactor),
                   num(p.T_abs), num(p.shape_overlap), num(p.slit_correlation)});
    };
    emit("kappa", rep.kappa_scan);
    emit("eps", rep.eps_scan);
    w.comment("fit.kappa.slope = " + num(rep.kappa_fit.slope));
    w.comment("fit.kappa.r2 = " + num(rep.kappa_fit.r2));
    w.comment("fit.eps.slope = " + num(rep.eps_fit.slope));
    w.comment("fit.eps.r2 = " + num(rep.eps_fit.r2));
    Output out;
    out.csv = os.str();
    out.plot_x = "2", out.plot_y = "6", out.plot_title = "max |u|";
    return out;
}

Output cmd_selfcheck(const RunConfig& rc) {
    const auto results = run_selfcheck(rc);
    std::ostringstream os;
    CsvWriter w(os, config_text(rc), {"invariant", "deviation", "tolerance", "result", "error"});
    Output out;
    for (const auto& r : results) {
        w.row({r.name, num(r.value), num(r.tolerance), r.pass ? "PASS" : "FAIL", r.error});
        if (!r.pass) {
            out.row_errors = true;
            std::cerr << "selfcheck: invariant " << r.name << " failed (deviation " << r.value << ", tolerance "
                      << r.tolerance << ")" << (r.error.empty() ? "" : ": " + r.error) << '\n';
        }
    }
    out.csv = os.str();
    return out;
}

void write_plot_script(const std::string& csv_path, const Output& o) {
    std::ofstream gp(csv_path + ".gp");
    gp << "# gnuplot script for " << csv_path << "\n"
       << "set datafile separator ','\n"
       << "set datafile commentschars '#'\n"
       << "set key autotitle columnhead\n"
       << "plot '" << csv_path << "' using " << o.plot_x << ":" << o.plot_y << " with linespoints"
       << (o.plot_title.empty() ? "" : " title '" + o.plot_title + "'") << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Scattering, resonances and Fano spectra of a periodic two-slit grating"};
    app.require_subcommand(1);
    app.fallthrough(); // global options may follow the subcommand
    std::string config_path, out_path;
    std::vector<std::string> overrides;
    bool plot = false;
    app.add_option("--config", config_path, "config file (key = value per line)");
    app.add_option("--out", out_path, "CSV output path (default: stdout)");
    app.add_option("--set", overrides, "override one config key, key=value");
    app.add_flag("--emit-plot-script", plot, "write a gnuplot script next to the CSV");
    app.add_subcommand("betas", "constants over spectral.k_min..k_max");
    app.add_subcommand("solve", "direct scattering solve at spectral.k");
    app.add_subcommand("resonances", "predicted and numeric resonance roots");
    app.add_subcommand("spectrum", "transmission sweep with Fano detection");
    app.add_subcommand("enhance", "slit-field enhancement scaling");
    app.add_subcommand("print-config", "print the effective config");
    app.add_subcommand("selfcheck", "run the invariant suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    RunConfig rc;
    try {
        if (!config_path.empty()) rc = load_config(config_path);
        for (const auto& kv : overrides) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) throw ConfigError(0, "--set expects key=value, got '" + kv + "'");
            auto trim = [](std::string s) {
                s.erase(0, s.find_first_not_of(' '));
                s.erase(s.find_last_not_of(' ') + 1);
                return s;
            };
            set_config_value(rc, trim(kv.substr(0, eq)), trim(kv.substr(eq + 1)));
        }
        if (!out_path.empty()) rc.out = out_path;
        rc.geometry.validate();
        if (plot && rc.out.empty()) throw ConfigError(0, "--emit-plot-script needs an output path");
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    }

    const std::string cmd = app.get_subcommands().front()->get_name();
    Output o;
    try {
        if (cmd == "betas") o = cmd_betas(rc);
        else if (cmd == "solve") o = cmd_solve(rc);
        else if (cmd == "resonances") o = cmd_resonances(rc);
        else if (cmd == "spectrum") o = cmd_spectrum(rc);
        else if (cmd == "enhance") o = cmd_enhance(rc);
        else if (cmd == "selfcheck") o = cmd_selfcheck(rc);
        else {
            std::cout << config_text(rc);
            return 0;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }

    if (rc.out.empty()) {
        std::cout << o.csv;
    } else {
        std::ofstream f(rc.out, std::ios::binary);
        if (!f) {
            std::cerr << "error: cannot write " << rc.out << '\n';
            return 1;
        }
        f << o.csv;
        if (plot) write_plot_script(rc.out, o);
    }
    return o.row_errors ? 1 : 0;
}
