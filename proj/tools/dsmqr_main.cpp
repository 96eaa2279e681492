// Command-line front end: single solves, N-sweeps with CSV output, basis
// tabulation, and the oracle self-checks.
//
// Exit codes: 0 success, 1 verification failure, 2 config error.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dsmqr/dsmqr.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitConfigError = 2;

void write_text(const std::string& out, const std::string& text) {
    if (out.empty() || out == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(out, std::ios::binary);
    if (!f) throw dsmqr::ConfigError("cannot open output file: " + out);
    f << text;
}

std::string optional_str(const std::optional<double>& v) {
    return v ? dsmqr::format_real17(*v) : std::string("-");
}

int cmd_solve(const std::string& config_path, int l_override) {
    dsmqr::ExperimentConfig cfg = dsmqr::parse_config_file(config_path);
    if (l_override > 0) {
        cfg.l_min = l_override;
        cfg.l_max = l_override;
    } else {
        cfg.l_max = cfg.l_min;
    }
    const std::vector<dsmqr::SweepRow> rows = dsmqr::run_sweep(cfg);
    for (const dsmqr::SweepRow& r : rows) {
        std::cout << "method=" << r.method << "\n"
                  << "geometry=" << r.geometry << "\n"
                  << "N=" << r.N << "\n"
                  << "P=" << r.P << "\n"
                  << "rho=" << dsmqr::format_real17(r.rho) << "\n"
                  << "R=" << dsmqr::format_real17(r.R) << "\n"
                  << "kappa=" << dsmqr::format_real17(r.kappa) << "\n"
                  << "cond2=" << (r.cond2.saturated ? "SAT" : dsmqr::format_real17(r.cond2.value)) << "\n"
                  << "cond2_closed_form=" << optional_str(r.cond2_closed_form) << "\n"
                  << "residual_linf=" << dsmqr::format_real17(r.residual_linf) << "\n"
                  << "interior_error_linf=" << optional_str(r.interior_error_linf) << "\n"
                  << "bound_value=" << optional_str(r.bound_value) << "\n"
                  << "coeff_max=" << dsmqr::format_real17(r.coeff_max) << "\n"
                  << "wall_ms=" << dsmqr::format_real17(r.wall_ms) << "\n"
                  << "note=" << r.note << "\n\n";
    }
    return kExitOk;
}

int cmd_sweep(const std::string& config_path, const std::string& out_override) {
    dsmqr::ExperimentConfig cfg = dsmqr::parse_config_file(config_path);
    if (!out_override.empty()) cfg.out = out_override;
    const std::vector<dsmqr::SweepRow> rows = dsmqr::run_sweep(cfg);
    write_text(cfg.out, dsmqr::rows_to_csv(rows));
    return kExitOk;
}

int cmd_basis_dump(const std::string& geometry, int N, double rho, double R, int ns, int ntheta,
                   const std::string& out) {
    const dsmqr::GeometryKind geo = dsmqr::parse_geometry(geometry);
    const dsmqr::ConformalMapSpec map = dsmqr::geometry_map(geo);
    const double rho_eff = (geo == dsmqr::GeometryKind::Disk) ? rho : 1.0;
    const dsmqr::DiskParams params(rho_eff, R, N);
    const dsmqr::PointLayout layout = dsmqr::build_layout(map, N, N, rho_eff, R);

    std::string csv = "k,s,theta,value\n";
    for (int k = 1; k <= N; ++k) {
        for (int i = 0; i < ns; ++i) {
            const double s = (ns == 1) ? 1.0 : static_cast<double>(i) / (ns - 1);
            for (int j = 0; j < ntheta; ++j) {
                const double theta = dsmqr::kTwoPi * j / ntheta;
                const double v = (geo == dsmqr::GeometryKind::Disk)
                                     ? dsmqr::psi_eval(k, s, theta, params)
                                     : dsmqr::jordan_basis_eval(k, s, theta, map, layout, params);
                csv += std::to_string(k);
                csv += ',';
                csv += dsmqr::format_real17(s);
                csv += ',';
                csv += dsmqr::format_real17(theta);
                csv += ',';
                csv += dsmqr::format_real17(v);
                csv += '\n';
            }
        }
    }
    write_text(out, csv);
    return kExitOk;
}

int cmd_verify() {
    const dsmqr::VerifyReport rep = dsmqr::run_verify();
    for (const dsmqr::VerifyCheck& c : rep.checks)
        std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << (c.detail.empty() ? "" : ": " + c.detail)
                  << "\n";
    std::cout << (rep.all_pass ? "verify: all checks passed\n" : "verify: FAILURES present\n");
    return rep.all_pass ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Well-conditioned dipole simulation method (DSM-QR) experiment harness"};
    app.require_subcommand(1);

    std::string config_path;
    int l_override = 0;
    CLI::App* solve = app.add_subcommand("solve", "run a single (N, method) case and print key=value lines");
    solve->add_option("--config", config_path, "config file")->required();
    solve->add_option("--l", l_override, "index l (N = 2l+1); defaults to the config's l_min");

    std::string sweep_config;
    std::string sweep_out;
    CLI::App* sweep = app.add_subcommand("sweep", "run the configured N-sweep and emit CSV");
    sweep->add_option("--config", sweep_config, "config file")->required();
    sweep->add_option("--out", sweep_out, "output CSV path override ('-' for stdout)");

    std::string dump_geometry = "disk";
    int dump_N = 9;
    double dump_rho = 1.0;
    double dump_R = 1.5;
    int dump_ns = 11;
    int dump_ntheta = 16;
    std::string dump_out = "-";
    CLI::App* dump = app.add_subcommand("basis-dump", "tabulate basis values as CSV rows (k,s,theta,value)");
    dump->add_option("--geometry", dump_geometry, "disk | poly5 | joukowski");
    dump->add_option("--N", dump_N, "number of basis functions (odd)");
    dump->add_option("--rho", dump_rho, "boundary radius (disk only)");
    dump->add_option("--R", dump_R, "source radius");
    dump->add_option("--ns", dump_ns, "radial sample count");
    dump->add_option("--ntheta", dump_ntheta, "angular sample count");
    dump->add_option("--out", dump_out, "output path");

    app.add_subcommand("verify", "run the oracle cross-checks; exit 0 iff all pass");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfigError;
    }

    try {
        if (solve->parsed()) return cmd_solve(config_path, l_override);
        if (sweep->parsed()) return cmd_sweep(sweep_config, sweep_out);
        if (dump->parsed())
            return cmd_basis_dump(dump_geometry, dump_N, dump_rho, dump_R, dump_ns, dump_ntheta, dump_out);
        return cmd_verify();
    } catch (const dsmqr::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitVerifyFailed;
    }
}
