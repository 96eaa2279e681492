#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "dsmqr/harness.hpp"

using namespace dsmqr;

namespace {

ExperimentConfig config_from(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
}

// drop the run-dependent wall_ms column (second to last)
std::string strip_wall_ms(const std::string& csv) {
    std::istringstream in(csv);
    std::string line, out;
    while (std::getline(in, line)) {
        const auto last = line.rfind(',');
        const auto prev = line.rfind(',', last - 1);
        out += line.substr(0, prev) + line.substr(last);
        out += '\n';
    }
    return out;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(DSMQR_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("config parsing round trip") {
    const ExperimentConfig cfg = config_from(
        "# comment\n"
        "geometry = disk\n"
        "rho = 1.0\n"
        "R = 1.5\n"
        "alpha = 2\n"
        "l_min = 2\n"
        "l_max = 9\n"
        "methods = dsm-qr, dsm, mfs\n"
        "data = geometric:0.5\n"
        "samples = 200\n"
        "out = rows.csv\n");
    CHECK(cfg.geometry == GeometryKind::Disk);
    CHECK(cfg.alpha == 2);
    CHECK(cfg.l_min == 2);
    CHECK(cfg.l_max == 9);
    REQUIRE(cfg.methods.size() == 3);
    CHECK(cfg.methods[1] == Method::Dsm);
    CHECK(cfg.data.kind == DataKind::Geometric);
    CHECK(cfg.data.param == 0.5);
    CHECK(cfg.samples == 200);
    CHECK(cfg.out == "rows.csv");
}

TEST_CASE("config errors") {
    CHECK_THROWS_AS(config_from("geometry = torus\nR = 1.5\n"), ConfigError);
    CHECK_THROWS_AS(config_from("R = 1.5\nbogus_key = 3\n"), ConfigError);
    CHECK_THROWS_AS(config_from("R = 1.5\nl_min = 5\nl_max = 2\n"), ConfigError);
    CHECK_THROWS_AS(config_from("R = 1.5\nmethods = dsm-qr-jordan\n"), ConfigError);  // disk vs jordan
    CHECK_THROWS_AS(config_from("geometry = poly5\nR = 1.05\nmethods = dsm\n"), ConfigError);
    CHECK_THROWS_AS(config_from("R = 1.5\ndata = geometric:1.5\n"), ConfigError);
    CHECK_THROWS_AS(config_from("R = 1.5\ndata = algebraic:0.5\n"), ConfigError);
    CHECK_THROWS_AS(config_from("R = 1.5\nsamples = 10\nl_max = 3\n"), ConfigError);
    CHECK_THROWS_AS(config_from("R = abc\n"), ConfigError);
    CHECK_THROWS_AS(config_from("geometry = poly5\nR = 1.05\nrho = 0.5\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_file("definitely_missing.cfg"), ConfigError);
}

TEST_CASE("boundary residual basics") {
    const int N = 9;
    const DiskParams params(1.0, 1.5, N);
    const PointLayout lay = build_layout(ConformalMapSpec::disk(), N, N, 1.0, 1.5);

    // constant data is exactly representable by psi_1
    const auto constant = [](double) { return 2.5; };
    std::vector<double> f(N, 2.5);
    const CollocationSystem sys = assemble(Method::DsmQr, params, ConformalMapSpec::disk(), lay, f);
    const SolveResult res = solve_square(sys);
    CHECK(boundary_residual(res, sys, constant, 10 * N) <= 1e-12);

    CHECK_THROWS_AS(boundary_residual(res, sys, constant, N), std::invalid_argument);

    // sampling at the collocation angles themselves reproduces the solver residual
    const auto wavy = [](double t) { return std::cos(2 * t) + 0.1 * std::sin(4 * t); };
    std::vector<double> fw(N);
    for (int j = 0; j < N; ++j) fw[j] = wavy(lay.collocation_angles[j]);
    const CollocationSystem sysw = assemble(Method::DsmQr, params, ConformalMapSpec::disk(), lay, fw);
    const SolveResult resw = solve_square(sysw);
    const double at_nodes = detail::boundary_residual_at(resw.coeffs, Method::DsmQr, params,
                                                         ConformalMapSpec::disk(), lay, wavy, N,
                                                         kTwoPi / N);
    CHECK(at_nodes <= resw.residual_linf + 1e-12);
}

TEST_CASE("interior error basics") {
    const int N = 9;
    const DiskParams params(1.0, 1.5, N);
    const PointLayout lay = build_layout(ConformalMapSpec::disk(), N, N, 1.0, 1.5);

    {  // zero data
        FourierSeries zero(0);
        const CollocationSystem sys =
            assemble(Method::DsmQr, params, ConformalMapSpec::disk(), lay, std::vector<double>(N, 0.0));
        const SolveResult res = solve_square(sys);
        CHECK(interior_error(res.coeffs, Method::DsmQr, params, lay, zero) == 0.0);
    }

    {  // single cosine mode: the error is governed by phi_1
        FourierSeries cosine(1);
        cosine.set(1, Complex{0.5, 0.0});
        cosine.set(-1, Complex{0.5, 0.0});
        std::vector<double> f(N);
        for (int j = 0; j < N; ++j) f[j] = std::cos(lay.collocation_angles[j]);
        const CollocationSystem sys = assemble(Method::DsmQr, params, ConformalMapSpec::disk(), lay, f);
        const SolveResult res = solve_square(sys);
        const double measured = interior_error(res.coeffs, Method::DsmQr, params, lay, cosine);

        double oracle = 0.0;  // same grid, deviation of Re(phi_1) from the harmonic Re(w)
        for (int i = 0; i <= 20; ++i)
            for (int j = 0; j < 200; ++j) {
                const double s = i / 20.0;
                const double theta = kTwoPi * j / 200.0;
                const Complex w = std::polar(s, theta);
                oracle = std::max(oracle, std::abs(w.real() - phi_n(1, params, s, theta).real()));
            }
        CHECK(measured == Catch::Approx(oracle).epsilon(0.05));
    }
}

TEST_CASE("interior error is tiny once all data modes are unaliased and damped") {
    // kappa^{N-10} < 1e-15 at N = 97 for R = 1.5
    ExperimentConfig cfg;
    cfg.R = 1.5;
    cfg.l_min = 48;
    cfg.l_max = 48;
    const std::vector<SweepRow> rows = run_sweep(cfg);
    REQUIRE(rows.size() == 1);
    REQUIRE(rows[0].N == 97);
    CHECK(rows[0].interior_error_linf.value() <= 1e-12);
}

TEST_CASE("maximum principle: interior error below the boundary residual") {
    for (const char* data : {"x2y3", "geometric:0.5"}) {
        ExperimentConfig cfg = config_from(std::string("R = 1.5\nl_max = 12\ndata = ") + data + "\n");
        for (const SweepRow& row : run_sweep(cfg))
            REQUIRE(row.interior_error_linf.value() <= row.residual_linf + 1e-10);
    }
}

TEST_CASE("fit_log_slope reference cases") {
    std::vector<double> xs, ys, consty;
    for (int i = 0; i < 20; ++i) {
        xs.push_back(i);
        ys.push_back(std::exp(-0.5 * i));
        consty.push_back(3.0);
    }
    const FitResult fit = fit_log_slope(xs, ys, [](double, double) { return true; });
    CHECK(fit.slope == Catch::Approx(-0.5).margin(1e-12));
    CHECK(fit.r_squared == Catch::Approx(1.0).margin(1e-12));
    CHECK(fit.n_points == 20);

    const FitResult flat = fit_log_slope(xs, consty, [](double, double) { return true; });
    CHECK(flat.slope == Catch::Approx(0.0).margin(1e-14));

    CHECK_THROWS_AS(fit_log_slope(xs, ys, [](double x, double) { return x < 3; }), std::runtime_error);
}

TEST_CASE("run_sweep row structure and invariants") {
    ExperimentConfig cfg = config_from("R = 1.5\nl_max = 20\nmethods = dsm-qr,dsm\n");
    const std::vector<SweepRow> rows = run_sweep(cfg);
    REQUIRE(rows.size() == 40);

    double prev_dsm_cond = 0.0;
    int prev_n = 0;
    for (const SweepRow& row : rows) {
        REQUIRE(row.N >= prev_n);  // ascending N
        prev_n = row.N;
        if (row.method == "dsm-qr") {
            REQUIRE_FALSE(row.cond2.saturated);
            REQUIRE(row.cond2.value <= 2.0 + 1e-9);
            REQUIRE(std::abs(row.cond2.value - row.cond2_closed_form.value()) <=
                    1e-9 * row.cond2_closed_form.value());
        } else {
            REQUIRE_FALSE(row.cond2_closed_form.has_value());
            REQUIRE(row.cond2.value > prev_dsm_cond);  // exponential growth, pre-saturation
            prev_dsm_cond = row.cond2.value;
        }
    }
}

TEST_CASE("run_sweep single-row config and jordan geometry") {
    ExperimentConfig cfg = config_from(
        "geometry = joukowski\nR = 1.1\nl_min = 3\nl_max = 3\nmethods = dsm-qr-jordan,dsm-jordan\n");
    const std::vector<SweepRow> rows = run_sweep(cfg);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].N == 7);
    CHECK(rows[0].geometry == "joukowski");
    CHECK_FALSE(rows[0].interior_error_linf.has_value());
    CHECK_FALSE(rows[0].bound_value.has_value());
    CHECK(rows[0].residual_linf < 1.0);
}

TEST_CASE("sweep CSV is deterministic modulo wall time") {
    ExperimentConfig cfg = config_from("R = 1.5\nl_max = 6\nmethods = dsm-qr,dsm\ndata = geometric:0.4\n");
    const std::string a = rows_to_csv(run_sweep(cfg));
    const std::string b = rows_to_csv(run_sweep(cfg));
    CHECK(strip_wall_ms(a) == strip_wall_ms(b));

    std::istringstream in(a);
    std::string header;
    std::getline(in, header);
    CHECK(header ==
          "method,geometry,N,P,rho,R,kappa,cond2,cond2_closed_form,residual_linf,"
          "interior_error_linf,bound_value,coeff_max,wall_ms,note");
}

TEST_CASE("CSV field formats") {
    CHECK(format_real17(1.0) == "1.0000000000000000e+00");
    CHECK(format_real17(-0.5) == "-5.0000000000000000e-01");

    SweepRow row;
    row.method = "dsm";
    row.geometry = "disk";
    row.N = 3;
    row.P = 3;
    row.cond2 = Cond2::saturated_flag();
    row.note = "singular-pivot";
    const std::string line = row_to_csv(row);
    CHECK(line.find(",SAT,") != std::string::npos);
    CHECK(line.find("singular-pivot") != std::string::npos);
    CHECK(line.find("1e140") == std::string::npos);
}

TEST_CASE("boundary data for jordan x2y3 is the physical trace") {
    ExperimentConfig cfg = config_from("geometry = poly5\nR = 1.05\nmethods = dsm-qr-jordan\n");
    const ConformalMapSpec map = geometry_map(cfg.geometry);
    const BoundaryData bd = make_boundary_data(cfg, map, 5, std::nullopt);
    CHECK_FALSE(bd.series.has_value());
    const double theta = 0.7;
    const Complex z = map_eval(map, std::polar(1.0, theta));
    CHECK(bd.fn(theta) == Catch::Approx(x2y3_physical(z)).margin(1e-15));
}

TEST_CASE("verify passes") {
    const VerifyReport rep = run_verify();
    for (const VerifyCheck& c : rep.checks) {
        INFO(c.name << " " << c.detail);
        CHECK(c.pass);
    }
    CHECK(rep.all_pass);
}

TEST_CASE("error bound dominates the measured boundary error") {
    ExperimentConfig cfg = config_from("R = 1.5\nl_max = 10\ndata = geometric:0.5\n");
    for (const SweepRow& row : run_sweep(cfg))
        REQUIRE(row.residual_linf <= row.bound_value.value() + 1e-10);
}

TEST_CASE("cli exit codes and outputs") {
    CHECK(run_cli("verify") == 0);
    CHECK(run_cli("sweep --config no_such_file.cfg") == 2);
    CHECK(run_cli("nonsense-subcommand") == 2);

    const std::string cfg_path = std::string(DSMQR_TEST_DATA_DIR) + "/smoke_disk.cfg";
    CHECK(run_cli("sweep --config " + cfg_path + " --out harness_cli_smoke.csv") == 0);
    std::ifstream csv("harness_cli_smoke.csv");
    REQUIRE(csv.good());
    std::string header;
    std::getline(csv, header);
    CHECK(header.rfind("method,geometry,N,P", 0) == 0);
    std::remove("harness_cli_smoke.csv");

    CHECK(run_cli("solve --config " + cfg_path + " --l 2") == 0);
    CHECK(run_cli("basis-dump --N 5 --R 1.5 --out harness_cli_dump.csv") == 0);
    std::ifstream dump("harness_cli_dump.csv");
    REQUIRE(dump.good());
    std::getline(dump, header);
    CHECK(header == "k,s,theta,value");
    std::remove("harness_cli_dump.csv");

    const std::string jcfg = std::string(DSMQR_TEST_DATA_DIR) + "/joukowski_small.cfg";
    CHECK(run_cli("sweep --config " + jcfg + " --out harness_cli_j.csv") == 0);
    std::remove("harness_cli_j.csv");
}

TEST_CASE("file-backed boundary data") {
    const std::string path = std::string(DSMQR_TEST_DATA_DIR) + "/coeffs_cos2.csv";
    ExperimentConfig cfg = config_from("R = 1.5\nl_min = 10\nl_max = 10\ndata = file:" + path + "\n");
    const std::vector<SweepRow> rows = run_sweep(cfg);
    REQUIRE(rows.size() == 1);
    REQUIRE(rows[0].N == 21);
    // cos(2 theta): the single unaliased mode leaves an error of about
    // 2 kappa^{N-4}, a couple of 1e-3 here
    CHECK(rows[0].residual_linf < 0.01);
    CHECK(rows[0].interior_error_linf.has_value());
    CHECK(rows[0].residual_linf <= rows[0].bound_value.value() + 1e-10);
}
