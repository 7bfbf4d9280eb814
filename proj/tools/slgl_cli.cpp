// slgl: forward, inverse and validation workflows for Sturm-Liouville spectral data.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "slgl/forward_solver.hpp"
#include "slgl/gl_inverse.hpp"
#include "slgl/io.hpp"
#include "slgl/series_engine.hpp"
#include "slgl/validator.hpp"

namespace {

using namespace slgl;

enum ExitCode : int { ok = 0, input_failure = 2, validation_failure = 3, numerical_failure = 4 };

struct RunConfig {
    std::string q_source = "zero";
    double alpha = pi / 2;
    double beta = pi / 2;
    bool degrees = false;
    std::size_t N = 64;
    std::size_t m = 401;
    std::size_t ode_m = default_ode_points;
    std::size_t K = default_product_terms;
    std::string in;
    std::string out;
    std::string q_out = "q.csv";
    std::string a_csv;
    std::string f_csv;
    std::optional<double> expect_alpha;
    std::optional<double> expect_beta;
    double tolerance_floor = 1e-3;
    double eigen_threshold = 0.05;
    double norming_threshold = 0.05;
    std::size_t beta_window = 10;
};

double to_radians(double v, bool degrees) { return degrees ? v * pi / 180 : v; }

void normalize_angles(RunConfig& cfg) {
    cfg.alpha = to_radians(cfg.alpha, cfg.degrees);
    cfg.beta = to_radians(cfg.beta, cfg.degrees);
    if (cfg.expect_alpha) cfg.expect_alpha = to_radians(*cfg.expect_alpha, cfg.degrees);
    if (cfg.expect_beta) cfg.expect_beta = to_radians(*cfg.expect_beta, cfg.degrees);
}

/// Named potentials are sampled four times finer than the ODE grid.
GridFunction resolve_potential(const std::string& source, std::size_t ode_m) {
    const std::size_t points = 4 * (ode_m - 1) + 1;
    if (source == "zero") return GridFunction::sample(0.0, pi, points, [](double) { return 0.0; });
    if (source == "cos2x") return GridFunction::sample(0.0, pi, points, [](double x) { return std::cos(2 * x); });
    if (source.rfind("const:", 0) == 0) {
        const std::string text = source.substr(6);
        std::size_t used = 0;
        double c = 0;
        try {
            c = std::stod(text, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != text.size() || !std::isfinite(c)) {
            throw Error(ErrorKind::input, "bad constant in q source \"" + source + "\"");
        }
        return GridFunction::sample(0.0, pi, points, [c](double) { return c; });
    }
    if (source.rfind("file:", 0) == 0) {
        GridFunction q = read_grid_csv(source.substr(5));
        if (std::abs(q.lower()) > 1e-12 || std::abs(q.upper() - pi) > 1e-9) {
            throw Error(ErrorKind::input, "q file must cover [0, pi]");
        }
        return q;
    }
    throw Error(ErrorKind::input, "unknown q source \"" + source + "\" (zero, const:c, cos2x, file:path)");
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
    } else {
        write_text(path, text);
    }
}

ValidatorOptions validator_options(const RunConfig& cfg) {
    ValidatorOptions opt;
    opt.product_terms = cfg.K;
    opt.tolerance_floor = cfg.tolerance_floor;
    opt.thresholds.eigen = cfg.eigen_threshold;
    opt.thresholds.norming = cfg.norming_threshold;
    return opt;
}

InverseOptions inverse_options(const RunConfig& cfg) {
    InverseOptions opt;
    opt.m = cfg.m;
    opt.window.last = cfg.beta_window;
    opt.expected_alpha = cfg.expect_alpha;
    opt.expected_beta = cfg.expect_beta;
    return opt;
}

int cmd_forward(RunConfig cfg) {
    normalize_angles(cfg);
    const BoundaryAngles angles(cfg.alpha, cfg.beta);
    const GridFunction q = resolve_potential(cfg.q_source, cfg.ode_m);
    const ForwardResult fr = forward(q, angles, cfg.N, {cfg.ode_m, false});
    emit(cfg.out, dump_json(spectral_to_json(fr.spectral, &fr.b.b)));

    std::fprintf(stderr, "first eigenvalues mu_n:");
    for (std::size_t n = 0; n < std::min<std::size_t>(5, fr.spectral.size()); ++n) {
        std::fprintf(stderr, " %.12g", fr.spectral.mu(n));
    }
    const IdentityResidual r = check_alpha_identity(fr.spectral, cfg.alpha, validator_options(cfg));
    std::fprintf(stderr, "\nalpha identity residual: %.6g (tolerance %.6g)\n", r.residual, r.tolerance + r.tail);
    return ok;
}

/// a(x) on [0, 2 pi] and F(x, t) on the triangle, for plotting.
void dump_kernel(const SpectralData& data, const RunConfig& cfg) {
    const ATable table = tabulate_a(data, decompose(data), cfg.m);
    if (!cfg.a_csv.empty()) {
        std::string out = "x,value\n";
        for (std::size_t k = 0; k < table.size(); ++k) {
            const double x = k + 1 == table.size() ? 2 * pi : static_cast<double>(k) * table.half_step();
            out += format_real(x) + "," + format_real(table.node(k)) + "\n";
        }
        write_text(cfg.a_csv, out);
    }
    if (!cfg.f_csv.empty()) {
        const TriangularKernel F = build_F(table);
        std::string out = "x,t,value\n";
        for (std::size_t i = 0; i < F.size(); ++i) {
            for (std::size_t j = 0; j <= i; ++j) {
                out += format_real(F.x(i)) + "," + format_real(F.x(j)) + "," + format_real(F(i, j)) + "\n";
            }
        }
        write_text(cfg.f_csv, out);
    }
}

int cmd_inverse(RunConfig cfg) {
    normalize_angles(cfg);
    const SpectralFile file = read_spectral_json(cfg.in);
    const ValidationReport hard = check_hard(file.data);
    if (!hard.overall) {
        for (const auto& e : hard.entries) {
            if (e.status == CheckStatus::fail) std::fprintf(stderr, "%s: %s\n", e.name.c_str(), e.detail.c_str());
        }
        return validation_failure;
    }
    const InverseResult result = inverse_solve(file.data, inverse_options(cfg));
    write_text(cfg.q_out, grid_to_csv(result.q));
    if (!cfg.a_csv.empty() || !cfg.f_csv.empty()) dump_kernel(file.data, cfg);
    emit(cfg.out, dump_json(inverse_to_json(result, cfg.q_out)));
    if (result.alpha_deviation) std::fprintf(stderr, "alpha deviation: %.6g\n", *result.alpha_deviation);
    if (result.beta_deviation) std::fprintf(stderr, "beta deviation: %.6g\n", *result.beta_deviation);
    if (!result.origin_converged) std::fprintf(stderr, "warning: kernel value at the origin not converged\n");
    return ok;
}

int cmd_validate(RunConfig cfg) {
    normalize_angles(cfg);
    const SpectralFile file = read_spectral_json(cfg.in);
    const ValidationReport report = validate(file.data, BoundaryAngles(cfg.alpha, cfg.beta), validator_options(cfg));
    emit(cfg.out, dump_json(report_to_json(report)));
    return report.overall ? ok : validation_failure;
}

int cmd_roundtrip(RunConfig cfg) {
    normalize_angles(cfg);
    const BoundaryAngles angles(cfg.alpha, cfg.beta);
    const GridFunction q = resolve_potential(cfg.q_source, cfg.ode_m);
    const ForwardResult fr = forward(q, angles, cfg.N, {cfg.ode_m, false});
    const InverseResult inv = inverse_solve(fr.spectral, inverse_options(cfg));

    constexpr double margin = 0.1;
    double max_err = 0, l1 = 0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < inv.q.size(); ++i) {
        const double x = inv.q.x(i);
        if (x < margin || x > pi - margin) continue;
        const double e = std::abs(inv.q[i] - q.interpolate(x));
        max_err = std::max(max_err, e);
        l1 += e;
        ++count;
    }
    l1 *= inv.q.step();

    Json doc = Json::object();
    doc["N"] = cfg.N;
    doc["m"] = cfg.m;
    doc["q_max_error"] = max_err;
    doc["q_l1_error"] = l1;
    doc["interior_points"] = count;
    doc["alpha"] = inv.alpha;
    doc["beta"] = inv.beta;
    doc["alpha_error"] = std::abs(inv.alpha - cfg.alpha);
    doc["beta_error"] = std::abs(inv.beta - cfg.beta);
    doc["residual"] = inv.residual;
    doc["beta_spread"] = inv.beta_spread;
    emit(cfg.out, dump_json(doc));
    return ok;
}

int cmd_bconvert(RunConfig cfg) {
    const SpectralFile file = read_spectral_json(cfg.in);
    const ValidationReport hard = check_hard(file.data);
    if (!hard.overall) {
        for (const auto& e : hard.entries) {
            if (e.status == CheckStatus::fail) std::fprintf(stderr, "%s: %s\n", e.name.c_str(), e.detail.c_str());
        }
        return validation_failure;
    }
    const NormingB b = b_from_a(file.data, cfg.K);
    emit(cfg.out, dump_json(spectral_to_json(file.data, &b.b)));
    return ok;
}

int exit_code(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::input:
        case ErrorKind::invalid_argument: return input_failure;
        default: return numerical_failure;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sturm-Liouville spectral data: forward problem, Gelfand-Levitan inverse, validation"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto angle_opts = [&](CLI::App* sub) {
        sub->add_option("--alpha", cfg.alpha, "left boundary angle (radians unless --degrees)");
        sub->add_option("--beta", cfg.beta, "right boundary angle (radians unless --degrees)");
        sub->add_flag("--degrees", cfg.degrees, "interpret angles in degrees");
    };
    auto q_opt = [&](CLI::App* sub) {
        sub->add_option("--q", cfg.q_source, "potential: zero, const:c, cos2x or file:path.csv");
        sub->add_option("--N", cfg.N, "number of eigenvalues")->check(CLI::Range(std::size_t{1}, std::size_t{100000}));
        sub->add_option("--ode-m", cfg.ode_m, "ODE grid points")->check(CLI::Range(std::size_t{3}, std::size_t{10000000}));
    };
    auto gl_opts = [&](CLI::App* sub) {
        sub->add_option("--m", cfg.m, "Gelfand-Levitan grid points")->check(CLI::Range(std::size_t{5}, std::size_t{100000}));
        sub->add_option("--beta-window", cfg.beta_window, "largest n used to estimate beta");
        sub->add_option("--expect-alpha", cfg.expect_alpha, "report deviation from this alpha");
        sub->add_option("--expect-beta", cfg.expect_beta, "report deviation from this beta");
    };
    auto product_opt = [&](CLI::App* sub) {
        sub->add_option("--K", cfg.K, "product truncation")->check(CLI::Range(std::size_t{100}, std::size_t{100000000}));
    };
    auto tol_opts = [&](CLI::App* sub) {
        sub->add_option("--tol-floor", cfg.tolerance_floor, "absolute floor of the identity tolerance");
        sub->add_option("--eigen-threshold", cfg.eigen_threshold, "decay threshold for max |n l_n|");
        sub->add_option("--norming-threshold", cfg.norming_threshold, "decay threshold for max |n s_n|");
    };
    auto input_opt = [&](CLI::App* sub) { sub->add_option("--in", cfg.in, "SpectralData JSON")->required(); };
    auto output_opt = [&](CLI::App* sub) { sub->add_option("--out", cfg.out, "output JSON (stdout when omitted)"); };

    CLI::App* fwd = app.add_subcommand("forward", "eigenvalues and norming constants of L(q, alpha, beta)");
    angle_opts(fwd), q_opt(fwd), tol_opts(fwd), output_opt(fwd);
    CLI::App* inv = app.add_subcommand("inverse", "recover q, alpha, beta from spectral data");
    input_opt(inv), gl_opts(inv), output_opt(inv);
    inv->add_flag("--degrees", cfg.degrees, "interpret expected angles in degrees");
    inv->add_option("--q-out", cfg.q_out, "recovered potential CSV");
    inv->add_option("--a-csv", cfg.a_csv, "also write a(x) on [0, 2pi] as CSV");
    inv->add_option("--F-csv", cfg.f_csv, "also write F(x, t) on the triangle as CSV");
    CLI::App* val = app.add_subcommand("validate", "check spectral data against the necessary conditions");
    input_opt(val), angle_opts(val), product_opt(val), tol_opts(val), output_opt(val);
    CLI::App* rt = app.add_subcommand("roundtrip", "forward then inverse, with recovery errors");
    angle_opts(rt), q_opt(rt), gl_opts(rt), output_opt(rt);
    CLI::App* bc = app.add_subcommand("bconvert", "norming constants b_n from (lambda, a) through products");
    input_opt(bc), product_opt(bc), output_opt(bc);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return input_failure;
    }

    try {
        if (*fwd) return cmd_forward(cfg);
        if (*inv) return cmd_inverse(cfg);
        if (*val) return cmd_validate(cfg);
        if (*rt) return cmd_roundtrip(cfg);
        if (*bc) return cmd_bconvert(cfg);
    } catch (const Error& e) {
        std::fprintf(stderr, "slgl: %s\n", e.what());
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::fprintf(stderr, "slgl: internal error: %s\n", e.what());
        return numerical_failure;
    }
    return input_failure;
}
