#include "slgl/gl_inverse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/LU>

#include "parallel.hpp"

namespace slgl {

namespace {

double trapezoid_weight(std::size_t j, std::size_t i, double h) {
    return (j == 0 || j == i) ? 0.5 * h : h;
}

template <class Fn>
auto staged(const char* stage, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const Error& e) {
        throw Error(e.kind(), std::string(stage) + ": " + e.what());
    }
}

}  // namespace

GlRow solve_gl_row(const TriangularKernel& F, std::size_t i) {
    if (i >= F.size()) throw Error(ErrorKind::invalid_argument, "solve_gl_row: row out of range");
    GlRow row;
    if (i == 0) {
        row.g = {-F(0, 0)};
        return row;
    }
    const std::size_t n = i + 1;
    const double h = F.step();
    Eigen::VectorXd root_w(n), f(n);
    for (std::size_t j = 0; j < n; ++j) {
        root_w(static_cast<Eigen::Index>(j)) = std::sqrt(trapezoid_weight(j, i, h));
        f(static_cast<Eigen::Index>(j)) = F(i, j);
    }

    // With D = diag(sqrt(w)) the system (I + F W) g = -f becomes the symmetric
    // (I + D F D) D g = -D f, positive definite for admissible data.
    Eigen::MatrixXd S(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const auto kk = static_cast<Eigen::Index>(k);
        for (std::size_t j = 0; j <= k; ++j) {
            const auto jj = static_cast<Eigen::Index>(j);
            const double v = root_w(kk) * F(k, j) * root_w(jj);
            S(kk, jj) = v;
            S(jj, kk) = v;
        }
        S(kk, kk) += 1.0;
    }
    const Eigen::VectorXd rhs = -(root_w.array() * f.array()).matrix();

    Eigen::VectorXd u;
    double rcond = 0;
    Eigen::LLT<Eigen::MatrixXd> llt(S);
    if (llt.info() == Eigen::Success) {
        rcond = llt.rcond();
        u = llt.solve(rhs);
    }
    if (llt.info() != Eigen::Success || !(rcond > 0)) {
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(S);
        rcond = lu.rcond();
        u = lu.solve(rhs);
    }
    row.condition = rcond > 0 ? 1 / rcond : std::numeric_limits<double>::infinity();
    if (!(row.condition <= max_condition)) {
        std::ostringstream os;
        os << "solve_gl_row: condition estimate " << row.condition << " at row " << i
           << " exceeds " << max_condition << " (invalid spectral data or truncation too coarse)";
        throw Error(ErrorKind::ill_posed, os.str());
    }

    row.g.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        const auto jj = static_cast<Eigen::Index>(j);
        row.g[j] = u(jj) / root_w(jj);
    }
    for (std::size_t k = 0; k < n; ++k) {
        double r = row.g[k] + F(i, k);
        for (std::size_t j = 0; j < n; ++j) r += trapezoid_weight(j, i, h) * row.g[j] * F.symmetric(j, k);
        row.residual = std::max(row.residual, std::abs(r));
    }
    return row;
}

GlSolution solve_gl(const TriangularKernel& F) {
    const std::size_t m = F.size();
    GlSolution out{TriangularKernel(m), 0.0, 1.0};
    std::vector<double> residuals(m), conditions(m);
    // Largest rows first so the tail of the schedule is cheap.
    detail::parallel_for(m, [&](std::size_t k) {
        const std::size_t i = m - 1 - k;
        GlRow row = solve_gl_row(F, i);
        std::copy(row.g.begin(), row.g.end(), out.G.row(i));
        residuals[i] = row.residual;
        conditions[i] = row.condition;
    });
    out.residual = *std::max_element(residuals.begin(), residuals.end());
    out.condition = *std::max_element(conditions.begin(), conditions.end());
    return out;
}

GridFunction recover_potential(const TriangularKernel& G) {
    const std::size_t m = G.size();
    if (m < 3) throw Error(ErrorKind::invalid_argument, "recover_potential: need at least 3 grid points");
    const double h = G.step();
    std::vector<double> q(m);
    q[0] = 2 * (-3 * G(0, 0) + 4 * G(1, 1) - G(2, 2)) / (2 * h);
    for (std::size_t i = 1; i + 1 < m; ++i) q[i] = 2 * (G(i + 1, i + 1) - G(i - 1, i - 1)) / (2 * h);
    q[m - 1] = 2 * (3 * G(m - 1, m - 1) - 4 * G(m - 2, m - 2) + G(m - 3, m - 3)) / (2 * h);
    return GridFunction(0.0, pi, std::move(q));
}

SolutionTrace build_phi(const TriangularKernel& G, double lambda) {
    const std::size_t m = G.size();
    if (m < 5) throw Error(ErrorKind::invalid_argument, "build_phi: need at least 5 grid points");
    const double h = G.step();
    std::vector<double> c(m);
    for (std::size_t j = 0; j < m; ++j) c[j] = cos_lambda(lambda, G.x(j));

    // phi = cos(lambda x) + I(x); the cosine is differentiated exactly, only I by differences.
    std::vector<double> I(m, 0.0);
    for (std::size_t i = 1; i < m; ++i) {
        const double* row = G.row(i);
        double s = 0;
        for (std::size_t j = 1; j < i; ++j) s += row[j] * c[j];
        I[i] = h * (s + 0.5 * (row[0] * c[0] + row[i] * c[i]));
    }

    SolutionTrace t;
    t.mu = lambda * std::abs(lambda);
    t.step = h;
    t.y.resize(m);
    t.yprime.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double x = G.x(i);
        t.y[i] = c[i] + I[i];
        t.yprime[i] = lambda >= 0 ? -lambda * std::sin(lambda * x) : -lambda * std::sinh(-lambda * x);
    }

    const auto& f = I;
    const double d = 12 * h;
    t.yprime[0] += (-25 * f[0] + 48 * f[1] - 36 * f[2] + 16 * f[3] - 3 * f[4]) / d;
    t.yprime[1] += (-3 * f[0] - 10 * f[1] + 18 * f[2] - 6 * f[3] + f[4]) / d;
    for (std::size_t i = 2; i + 2 < m; ++i) t.yprime[i] += (f[i - 2] - 8 * f[i - 1] + 8 * f[i + 1] - f[i + 2]) / d;
    const std::size_t e = m - 1;
    t.yprime[e - 1] += (3 * f[e] + 10 * f[e - 1] - 18 * f[e - 2] + 6 * f[e - 3] - f[e - 4]) / d;
    t.yprime[e] += (25 * f[e] - 48 * f[e - 1] + 36 * f[e - 2] - 16 * f[e - 3] + 3 * f[e - 4]) / d;
    return t;
}

BetaEstimate recover_beta(const TriangularKernel& G, const SpectralData& spectral, const BetaWindow& window) {
    BetaEstimate est;
    const std::size_t last = std::min(window.last, spectral.size() - 1);
    for (std::size_t n = window.first; n <= last && n < spectral.size(); ++n) {
        const SolutionTrace phi = build_phi(G, spectral.lambda(n));
        if (std::abs(phi.y.back()) < 1e-8) continue;
        est.ratios.push_back(phi.yprime.back() / phi.y.back());
        est.indices.push_back(n);
    }
    if (est.ratios.empty()) {
        throw Error(ErrorKind::ill_posed, "recover_beta: phi_n(pi) vanishes for every n in the window; data is "
                                          "inconsistent with beta in (0, pi)");
    }
    std::vector<double> sorted = est.ratios;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t mid = sorted.size() / 2;
    const double median = sorted.size() % 2 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
    est.beta = arccot(-median);
    est.spread = sorted.back() - sorted.front();
    return est;
}

NormingB b_from_a(const SpectralData& spectral, std::size_t K) {
    const std::size_t N = spectral.size();
    double omega = 0;
    if (N >= min_decomposition_size) {
        omega = decompose(spectral).omega;
    } else if (N >= 2) {
        const double top = static_cast<double>(N - 1);
        omega = (spectral.lambda(N - 1) - top) * top;
    }
    const MuSequence mu(spectral.mu(), omega);
    NormingB out{std::vector<double>(N), std::vector<double>(N)};
    const double pi2 = pi * pi;
    for (std::size_t n = 0; n < N; ++n) {
        const ProductValue p = regularized_product(mu, n, K);
        double inv_b;
        if (n == 0) {
            inv_b = spectral.a(0) / (pi2 * p.value * p.value);
        } else {
            const double gap = mu(0) - mu(n);
            if (gap == 0) throw Error(ErrorKind::degenerate_spectrum, "b_from_a: mu_0 equals mu_" + std::to_string(n));
            const double n2 = static_cast<double>(n) * static_cast<double>(n);
            inv_b = spectral.a(n) * n2 * n2 / (pi2 * gap * gap * p.value * p.value);
        }
        out.b[n] = 1 / inv_b;
        out.error[n] = out.b[n] * 2 * p.error_bound / std::abs(p.value);
    }
    return out;
}

InverseResult inverse_solve(const SpectralData& spectral, const InverseOptions& options) {
    staged("input", [&] {
        for (std::size_t n = 0; n < spectral.size(); ++n) {
            if (!(spectral.a(n) > 0)) {
                throw Error(ErrorKind::invalid_argument, "norming constant a_" + std::to_string(n) + " is not positive");
            }
            if (n > 0 && !(spectral.mu(n) > spectral.mu(n - 1))) {
                throw Error(ErrorKind::invalid_argument, "eigenvalues not strictly increasing at n = " + std::to_string(n));
            }
        }
        return 0;
    });
    const AsymptoticDecomposition dec = staged("decompose", [&] { return decompose(spectral); });
    const ATable table = staged("kernel", [&] { return tabulate_a(spectral, dec, options.m); });
    const TriangularKernel F = build_F(table);
    GlSolution sol = staged("gelfand-levitan", [&] { return solve_gl(F); });
    GridFunction q = staged("potential", [&] { return recover_potential(sol.G); });
    const double alpha = recover_alpha(sol.G(0, 0));
    const BetaEstimate beta = staged("beta", [&] { return recover_beta(sol.G, spectral, options.window); });

    InverseResult result{std::move(q), alpha, beta.beta, std::move(sol.G), sol.residual, sol.condition,
                         beta.spread, table.origin_converged(), std::nullopt, std::nullopt};
    if (options.expected_alpha) result.alpha_deviation = alpha - *options.expected_alpha;
    if (options.expected_beta) result.beta_deviation = beta.beta - *options.expected_beta;
    return result;
}

}  // namespace slgl
