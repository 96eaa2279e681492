#pragma once

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dsmqr/basis.hpp"
#include "dsmqr/geometry.hpp"
#include "dsmqr/oracle.hpp"
#include "dsmqr/solver.hpp"
#include "dsmqr/spectral.hpp"

namespace dsmqr {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class GeometryKind { Disk, Poly5, Joukowski };

inline std::string geometry_name(GeometryKind g) {
    switch (g) {
        case GeometryKind::Disk: return "disk";
        case GeometryKind::Poly5: return "poly5";
        case GeometryKind::Joukowski: return "joukowski";
    }
    throw std::logic_error("geometry_name: unhandled kind");
}

inline GeometryKind parse_geometry(const std::string& s) {
    if (s == "disk") return GeometryKind::Disk;
    if (s == "poly5") return GeometryKind::Poly5;
    if (s == "joukowski") return GeometryKind::Joukowski;
    throw ConfigError("unknown geometry: " + s);
}

inline ConformalMapSpec geometry_map(GeometryKind g) {
    switch (g) {
        case GeometryKind::Disk: return ConformalMapSpec::disk();
        case GeometryKind::Poly5: return ConformalMapSpec::poly5();
        case GeometryKind::Joukowski: return ConformalMapSpec::example_joukowski();
    }
    throw std::logic_error("geometry_map: unhandled kind");
}

// Boundary data selector: one of the synthetic families or a coefficient file.
struct DataSpec {
    enum class Source { Synthetic, File } source = Source::Synthetic;
    DataKind kind = DataKind::X2Y3;
    double param = 0.0;
    std::string path;
};

struct ExperimentConfig {
    GeometryKind geometry = GeometryKind::Disk;
    double rho = 1.0;
    double R = 1.5;
    int alpha = 1;
    int l_min = 1;
    int l_max = 150;
    std::vector<Method> methods{Method::DsmQr};
    DataSpec data;
    int samples = 0;  // residual sample count; 0 means the default 10*P per row
    std::string out = "-";
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

inline double to_real(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': not a real number: " + v);
    }
}

inline int to_int(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const int x = std::stoi(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': not an integer: " + v);
    }
}

}  // namespace detail

inline DataSpec parse_data_spec(const std::string& value) {
    DataSpec d;
    if (value == "x2y3") {
        d.kind = DataKind::X2Y3;
        return d;
    }
    const auto colon = value.find(':');
    if (colon == std::string::npos) throw ConfigError("unknown data spec: " + value);
    const std::string head = value.substr(0, colon);
    const std::string tail = value.substr(colon + 1);
    if (head == "file") {
        d.source = DataSpec::Source::File;
        d.path = tail;
        if (d.path.empty()) throw ConfigError("data=file: missing path");
        return d;
    }
    if (head == "geometric") {
        d.kind = DataKind::Geometric;
        d.param = detail::to_real("data", tail);
        if (!(d.param > 0.0 && d.param < 1.0)) throw ConfigError("data=geometric: ratio must lie in (0,1)");
        return d;
    }
    if (head == "algebraic") {
        d.kind = DataKind::Algebraic;
        d.param = detail::to_real("data", tail);
        if (!(d.param > 1.0)) throw ConfigError("data=algebraic: exponent must exceed 1");
        return d;
    }
    throw ConfigError("unknown data spec: " + value);
}

inline void validate_config(const ExperimentConfig& cfg) {
    if (cfg.geometry == GeometryKind::Disk) {
        if (!(cfg.rho > 0.0 && cfg.R > cfg.rho)) throw ConfigError("disk geometry requires 0 < rho < R");
    } else {
        if (cfg.rho != 1.0) throw ConfigError("map geometries fix rho = 1");
        if (!(cfg.R > 1.0)) throw ConfigError("map geometries require R > 1");
    }
    if (cfg.l_min < 1 || cfg.l_max < cfg.l_min) throw ConfigError("need 1 <= l_min <= l_max");
    if (cfg.alpha < 1) throw ConfigError("alpha must be >= 1");
    if (cfg.methods.empty()) throw ConfigError("methods list is empty");
    for (Method m : cfg.methods) {
        const bool wants_map = is_jordan_method(m);
        const bool has_map = cfg.geometry != GeometryKind::Disk;
        if (wants_map != has_map)
            throw ConfigError("method " + method_name(m) + " does not match geometry " +
                              geometry_name(cfg.geometry));
    }
    if (cfg.samples != 0) {
        const int max_p = (2 * cfg.l_max + 1) * cfg.alpha;
        if (cfg.samples < 2 * max_p)
            throw ConfigError("samples must be at least 2*P for every row (need >= " +
                              std::to_string(2 * max_p) + ")");
    }
}

// Line-oriented `key = value` config. Blank lines and lines starting with '#'
// are skipped.
inline ExperimentConfig parse_config(std::istream& in) {
    ExperimentConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = detail::trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = detail::trim(t.substr(0, eq));
        const std::string value = detail::trim(t.substr(eq + 1));
        if (value.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty value for " + key);

        if (key == "geometry") {
            cfg.geometry = parse_geometry(value);
        } else if (key == "rho") {
            cfg.rho = detail::to_real(key, value);
        } else if (key == "R") {
            cfg.R = detail::to_real(key, value);
        } else if (key == "alpha") {
            cfg.alpha = detail::to_int(key, value);
        } else if (key == "l_min") {
            cfg.l_min = detail::to_int(key, value);
        } else if (key == "l_max") {
            cfg.l_max = detail::to_int(key, value);
        } else if (key == "methods") {
            cfg.methods.clear();
            std::stringstream ss(value);
            std::string item;
            while (std::getline(ss, item, ',')) {
                const std::string name = detail::trim(item);
                if (name.empty()) continue;
                try {
                    cfg.methods.push_back(parse_method(name));
                } catch (const std::invalid_argument& e) {
                    throw ConfigError(e.what());
                }
            }
        } else if (key == "data") {
            cfg.data = parse_data_spec(value);
        } else if (key == "samples") {
            cfg.samples = detail::to_int(key, value);
        } else if (key == "out") {
            cfg.out = value;
        } else {
            throw ConfigError("line " + std::to_string(lineno) + ": unknown key: " + key);
        }
    }
    validate_config(cfg);
    return cfg;
}

inline ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    return parse_config(in);
}

// Boundary data for one sweep row: the trace as a function of the preimage
// angle, plus the Fourier series when one represents the data exactly (disk
// geometries; Jordan x2y3 has no preimage series).
struct BoundaryData {
    std::function<double(double)> fn;
    std::optional<FourierSeries> series;
};

inline double x2y3_physical(Complex z) {
    const double x = z.real();
    const double y = z.imag();
    return x * x * y * y * y;
}

inline BoundaryData make_boundary_data(const ExperimentConfig& cfg, const ConformalMapSpec& map, int N,
                                       const std::optional<FourierSeries>& file_series) {
    BoundaryData bd;
    if (cfg.data.source == DataSpec::Source::File) {
        bd.series = *file_series;
    } else if (cfg.data.kind == DataKind::X2Y3) {
        if (cfg.geometry == GeometryKind::Disk) {
            FourierSeries fs = synthetic_data(DataKind::X2Y3, 0.0, 5);
            const double scale = std::pow(cfg.rho, 5);  // x^2 y^3 on the circle of radius rho
            for (int n = -fs.K; n <= fs.K; ++n) fs.set(n, scale * fs.coeff(n));
            bd.series = std::move(fs);
        } else {
            bd.fn = [map](double theta) { return x2y3_physical(map_eval(map, std::polar(1.0, theta))); };
            return bd;
        }
    } else {
        // truncation 8N keeps the tail negligible against the kappa^N error scale
        bd.series = synthetic_data(cfg.data.kind, cfg.data.param, 8 * N);
    }
    const FourierSeries& fs = *bd.series;
    bd.fn = [fs](double theta) { return series_eval(fs, theta); };
    return bd;
}

namespace detail {

// Max boundary deviation over n_samples angles offset by `offset` from zero;
// the public entry point fixes the half-spacing offset. `boundary_values`,
// when present, holds the data trace at those angles (saves re-evaluating
// long series inside sweeps).
inline double boundary_residual_at(const std::vector<double>& coeffs, Method method,
                                   const DiskParams& params, const ConformalMapSpec& map,
                                   const PointLayout& layout,
                                   const std::function<double(double)>& boundary_fn, int n_samples,
                                   double offset, const std::vector<double>* boundary_values = nullptr) {
    double worst = 0.0;
    for (int i = 0; i < n_samples; ++i) {
        const double theta = kTwoPi * i / n_samples + offset;
        const double u = evaluate_solution(coeffs, method, params, map, layout, 1.0, theta);
        const double f = boundary_values ? (*boundary_values)[i] : boundary_fn(theta);
        worst = std::max(worst, std::abs(u - f));
    }
    return worst;
}

}  // namespace detail

// Max |u^{(N)} - f| over boundary samples placed half a collocation spacing
// away from the collocation angles. The error of the approximation is
// harmonic, so by the maximum principle this bounds the interior error; it is
// the error metric for Jordan regions, where no exact solution is available.
inline double boundary_residual(const std::vector<double>& coeffs, Method method,
                                const DiskParams& params, const ConformalMapSpec& map,
                                const PointLayout& layout,
                                const std::function<double(double)>& boundary_fn, int n_samples) {
    if (n_samples < 2 * params.P)
        throw std::invalid_argument("boundary_residual: need at least 2P samples");
    return detail::boundary_residual_at(coeffs, method, params, map, layout, boundary_fn, n_samples,
                                        kPi / params.P);
}

inline double boundary_residual(const SolveResult& res, const CollocationSystem& sys,
                                const std::function<double(double)>& boundary_fn, int n_samples) {
    return boundary_residual(res.coeffs, sys.method, sys.params, sys.map, sys.layout, boundary_fn,
                             n_samples);
}

// Max |exact - approximate| over a polar grid (n_r radii x n_theta angles)
// plus a boundary ring sampled with the residual convention (n_ring = 0 picks
// the 10 P default; negative skips the ring, for callers that already hold
// the ring deviations as a boundary residual). Disk geometry only: the exact
// solution comes from the Fourier series of the data.
inline double interior_error(const std::vector<double>& coeffs, Method method, const DiskParams& params,
                             const PointLayout& layout, const FourierSeries& fs, int n_r = 20,
                             int n_theta = 72, int n_ring = 0) {
    if (is_jordan_method(method)) throw std::invalid_argument("interior_error: disk geometry required");
    const ConformalMapSpec disk_map = ConformalMapSpec::disk();
    double worst = 0.0;
    for (int i = 0; i < n_r; ++i) {
        const double s = static_cast<double>(i) / n_r;
        for (int j = 0; j < n_theta; ++j) {
            const double theta = kTwoPi * j / n_theta;
            const double exact = exact_disk_solution(fs, params.rho, s * params.rho, theta);
            const double approx = evaluate_solution(coeffs, method, params, disk_map, layout, s, theta);
            worst = std::max(worst, std::abs(exact - approx));
        }
    }
    if (n_ring >= 0) {
        const int ring = (n_ring > 0) ? n_ring : 10 * params.P;
        for (int i = 0; i < ring; ++i) {
            const double theta = kTwoPi * i / ring + kPi / params.P;
            const double exact = exact_disk_solution(fs, params.rho, params.rho, theta);
            const double approx = evaluate_solution(coeffs, method, params, disk_map, layout, 1.0, theta);
            worst = std::max(worst, std::abs(exact - approx));
        }
    }
    return worst;
}

// One record of a sweep: everything the convergence/conditioning figures need.
struct SweepRow {
    std::string method;
    std::string geometry;
    int N = 0;
    int P = 0;
    double rho = 1.0;
    double R = 1.5;
    double kappa = 1.0 / 1.5;
    Cond2 cond2{};
    std::optional<double> cond2_closed_form;
    double residual_linf = 0.0;
    std::optional<double> interior_error_linf;
    std::optional<double> bound_value;
    double coeff_max = 0.0;
    double wall_ms = 0.0;
    std::string note;
};

inline std::string format_real17(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

inline const char* sweep_csv_header() {
    return "method,geometry,N,P,rho,R,kappa,cond2,cond2_closed_form,residual_linf,"
           "interior_error_linf,bound_value,coeff_max,wall_ms,note";
}

inline std::string row_to_csv(const SweepRow& r) {
    std::string s;
    s += r.method;
    s += ',';
    s += r.geometry;
    s += ',';
    s += std::to_string(r.N);
    s += ',';
    s += std::to_string(r.P);
    s += ',';
    s += format_real17(r.rho);
    s += ',';
    s += format_real17(r.R);
    s += ',';
    s += format_real17(r.kappa);
    s += ',';
    s += r.cond2.saturated ? std::string("SAT") : format_real17(r.cond2.value);
    s += ',';
    s += r.cond2_closed_form ? format_real17(*r.cond2_closed_form) : std::string();
    s += ',';
    s += format_real17(r.residual_linf);
    s += ',';
    s += r.interior_error_linf ? format_real17(*r.interior_error_linf) : std::string();
    s += ',';
    s += r.bound_value ? format_real17(*r.bound_value) : std::string();
    s += ',';
    s += format_real17(r.coeff_max);
    s += ',';
    s += format_real17(r.wall_ms);
    s += ',';
    s += r.note;
    return s;
}

inline std::string rows_to_csv(const std::vector<SweepRow>& rows) {
    std::string s = sweep_csv_header();
    s += '\n';
    for (const SweepRow& r : rows) {
        s += row_to_csv(r);
        s += '\n';
    }
    return s;
}

// Runs every (N, method) combination of the config in ascending N and
// collects one row each. Solver warnings land in the row note; they never
// abort the sweep.
inline std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg) {
    validate_config(cfg);
    const ConformalMapSpec map = geometry_map(cfg.geometry);
    const bool disk = cfg.geometry == GeometryKind::Disk;

    std::optional<FourierSeries> file_series;
    if (cfg.data.source == DataSpec::Source::File) file_series = load_series_csv(cfg.data.path);

    std::vector<SweepRow> rows;
    for (int l = cfg.l_min; l <= cfg.l_max; ++l) {
        const int N = 2 * l + 1;
        const DiskParams params(cfg.rho, cfg.R, N, N - 1, cfg.alpha);
        const PointLayout layout = build_layout(map, N, params.P, cfg.rho, cfg.R);
        const BoundaryData bd = make_boundary_data(cfg, map, N, file_series);

        std::vector<double> f(params.P);
        for (int j = 0; j < params.P; ++j) f[j] = bd.fn(layout.collocation_angles[j]);

        const int n_samples = (cfg.samples > 0) ? cfg.samples : 10 * params.P;
        std::vector<double> sample_values(n_samples);
        for (int i = 0; i < n_samples; ++i)
            sample_values[i] = bd.fn(kTwoPi * i / n_samples + kPi / params.P);
        const std::optional<double> row_bound =
            (disk && bd.series) ? std::optional<double>(error_bound(*bd.series, params)) : std::nullopt;

        for (Method method : cfg.methods) {
            const auto t0 = std::chrono::steady_clock::now();
            const CollocationSystem sys = assemble(method, params, map, layout, f);
            const SolveResult res = (cfg.alpha == 1) ? solve_square(sys) : solve_least_squares(sys);

            SweepRow row;
            row.method = method_name(method);
            row.geometry = geometry_name(cfg.geometry);
            row.N = N;
            row.P = params.P;
            row.rho = cfg.rho;
            row.R = cfg.R;
            row.kappa = params.kappa;
            row.cond2 = res.cond2;
            row.note = res.note;
            if (method == Method::DsmQr && disk) row.cond2_closed_form = cond2_closed_form(params);
            row.residual_linf = detail::boundary_residual_at(res.coeffs, method, params, map, layout,
                                                             bd.fn, n_samples, kPi / params.P,
                                                             &sample_values);
            if (disk && bd.series) {
                // on the boundary exact = data trace, so the residual samples
                // are exactly the ring part of the interior grid
                const double inner =
                    interior_error(res.coeffs, method, params, layout, *bd.series, 20, 72, -1);
                row.interior_error_linf = std::max(inner, row.residual_linf);
                row.bound_value = row_bound;
            }
            for (double q : res.coeffs) row.coeff_max = std::max(row.coeff_max, std::abs(q));
            row.wall_ms =
                std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

struct FitResult {
    double slope = 0.0;
    double r_squared = 0.0;
    int n_points = 0;
};

// Least-squares slope of ln(y) against x over the points passing the window
// predicate. Callers pass x = N for semi-log rates and x = ln N for log-log
// rates.
inline FitResult fit_log_slope(const std::vector<double>& xs, const std::vector<double>& ys,
                               const std::function<bool(double, double)>& window) {
    if (xs.size() != ys.size()) throw std::invalid_argument("fit_log_slope: size mismatch");
    std::vector<double> x, ly;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!window(xs[i], ys[i])) continue;
        if (!(ys[i] > 0.0)) continue;
        x.push_back(xs[i]);
        ly.push_back(std::log(ys[i]));
    }
    const int n = static_cast<int>(x.size());
    if (n < 4) throw std::runtime_error("fit_log_slope: fewer than 4 points pass the window");

    double sx = 0.0, sy = 0.0;
    for (int i = 0; i < n; ++i) {
        sx += x[i];
        sy += ly[i];
    }
    const double mx = sx / n;
    const double my = sy / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (int i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    if (!(sxx > 0.0)) throw std::runtime_error("fit_log_slope: degenerate abscissa");

    FitResult fit;
    fit.slope = sxy / sxx;
    fit.n_points = n;
    if (syy > 0.0) {
        double ss_res = 0.0;
        const double b = my - fit.slope * mx;
        for (int i = 0; i < n; ++i) {
            const double pred = fit.slope * x[i] + b;
            ss_res += (ly[i] - pred) * (ly[i] - pred);
        }
        fit.r_squared = 1.0 - ss_res / syy;
    } else {
        fit.r_squared = 1.0;  // constant y fitted exactly by slope 0
    }
    return fit;
}

// ---------------------------------------------------------------------------
// Oracle cross-checks behind the `verify` CLI mode.

struct VerifyCheck {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct VerifyReport {
    std::vector<VerifyCheck> checks;
    bool all_pass = true;

    void add(const std::string& name, bool pass, const std::string& detail = "") {
        checks.push_back({name, pass, detail});
        all_pass = all_pass && pass;
    }
};

inline VerifyReport run_verify() {
    VerifyReport rep;

    {  // reference_qr against the Householder path on the trigonometric matrices
        double worst = 0.0;
        double worst_orth = 0.0;
        for (int N = 3; N <= 41; N += 2) {
            const Matrix b = build_B(N, N - 1);
            const QrFactors ref = reference_qr(b);
            const QrFactors hh = qr_positive(b);
            worst = std::max(worst, max_abs_diff(ref.Q, hh.Q));
            worst = std::max(worst, max_abs_diff(ref.R, hh.R));
            const Matrix qtq = gram_matrix(ref.Q);
            double orth = 0.0;
            for (int i = 0; i < N; ++i)
                for (int j = 0; j < N; ++j) orth = std::max(orth, std::abs(qtq(i, j) - (i == j ? 1.0 : 0.0)));
            worst_orth = std::max(worst_orth, orth);
        }
        rep.add("reference_qr vs qr_positive (N <= 41)", worst <= 1e-11,
                "max factor deviation " + format_real17(worst));
        rep.add("reference_qr orthogonality", worst_orth <= 1e-13,
                "max |Q^T Q - I| " + format_real17(worst_orth));
    }

    {  // singular values: closed-form extremes and the Frobenius identity
        const DiskParams params(1.0, 1.5, 21);
        const PointLayout layout = build_layout(ConformalMapSpec::disk(), 21, 21, 1.0, 1.5);
        const CollocationSystem sys =
            assemble(Method::DsmQr, params, ConformalMapSpec::disk(), layout, std::vector<double>(21, 0.0));
        const std::vector<double> sv = reference_singular_values(sys.G);
        const double smax_expect = 21.0;
        const double smin_expect = 10.5 * (1.0 + std::pow(params.kappa, 19));
        const double err = std::max(std::abs(sv.front() - smax_expect) / smax_expect,
                                    std::abs(sv.back() - smin_expect) / smin_expect);
        rep.add("reference_singular_values closed-form extremes", err <= 1e-10,
                "relative deviation " + format_real17(err));

        Matrix rnd(20, 10);
        unsigned state = 12345u;
        for (double& v : rnd.data) {
            state = state * 1664525u + 1013904223u;
            v = static_cast<double>(state) / 4294967296.0 - 0.5;
        }
        const std::vector<double> rsv = reference_singular_values(rnd);
        double sum_sq = 0.0;
        for (double s : rsv) sum_sq += s * s;
        const double fro = frobenius_norm(rnd);
        const double frob_err = std::abs(sum_sq - fro * fro) / (fro * fro);
        rep.add("singular values vs Frobenius norm", frob_err <= 1e-10,
                "relative deviation " + format_real17(frob_err));
    }

    {  // brute-force Gram against the closed form
        double worst = 0.0;
        for (double R : {1.5, 1.1}) {
            for (int N = 3; N <= 21; N += 2) {
                const DiskParams params(1.0, R, N);
                const Matrix g = brute_force_gram(params);
                const std::vector<double> diag = gram_diagonal_closed_form(params);
                for (int i = 0; i < N; ++i)
                    for (int j = 0; j < N; ++j) {
                        const double expect = (i == j) ? diag[i] : 0.0;
                        worst = std::max(worst, std::abs(g(i, j) - expect) / (1e0 * N * N));
                    }
            }
        }
        rep.add("brute_force_gram vs closed form", worst <= 1e-10,
                "max scaled deviation " + format_real17(worst));
    }

    {  // quadrature coefficients of x^2 y^3 against the exact five-mode series
        std::vector<double> samples(64);
        for (int j = 0; j < 64; ++j) {
            const double theta = kTwoPi * j / 64;
            const double c = std::cos(theta), s = std::sin(theta);
            samples[j] = c * c * s * s * s;
        }
        const FourierSeries quad = fourier_coeffs(samples, 8);
        const FourierSeries exact = synthetic_data(DataKind::X2Y3, 0.0, 0);
        double worst = 0.0;
        for (int n = -8; n <= 8; ++n) worst = std::max(worst, std::abs(quad.coeff(n) - exact.coeff(n)));
        rep.add("x2y3 quadrature vs closed-form coefficients", worst <= 1e-13,
                "max coefficient deviation " + format_real17(worst));
    }

    return rep;
}

}  // namespace dsmqr
