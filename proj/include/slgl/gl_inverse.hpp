#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "slgl/forward_solver.hpp"
#include "slgl/series_engine.hpp"
#include "slgl/spectral_core.hpp"

namespace slgl {

inline constexpr double max_condition = 1e12;

struct GlRow {
    std::vector<double> g;  // G(x_i, t_j), j = 0..i
    double residual = 0;    // max |g + f + sum_j w_j g_j F(t_j, t_k)| over k
    double condition = 1;   // reciprocal of the LU condition estimate
};

/// Row i of the discretized equation G(x,t) + F(x,t) + int_0^x G(x,s) F(s,t) ds = 0,
/// trapezoid weights on [0, x_i]. Throws ill_posed when the condition
/// estimate exceeds max_condition.
[[nodiscard]] GlRow solve_gl_row(const TriangularKernel& F, std::size_t i);

struct GlSolution {
    TriangularKernel G;
    double residual = 0;   // max over rows
    double condition = 1;  // worst over rows
};

[[nodiscard]] GlSolution solve_gl(const TriangularKernel& F);

/// q(x) = 2 d/dx G(x, x): central differences inside, second-order one-sided at the ends.
[[nodiscard]] GridFunction recover_potential(const TriangularKernel& G);

/// G(0, 0) = -cot(alpha).
[[nodiscard]] inline double recover_alpha(double g00) noexcept { return arccot(-g00); }

/// phi(x, lambda^2) = cos(lambda x) + int_0^x G(x, t) cos(lambda t) dt. In phi'
/// the cosine is differentiated exactly and the integral by fourth-order differences.
[[nodiscard]] SolutionTrace build_phi(const TriangularKernel& G, double lambda);

struct BetaEstimate {
    double beta = 0;
    double spread = 0;                // max - min of the accepted ratios
    std::vector<double> ratios;       // phi_n'(pi) / phi_n(pi) for accepted n
    std::vector<std::size_t> indices; // the accepted n
};

struct BetaWindow {
    std::size_t first = 1;
    std::size_t last = 10;  // inclusive; clipped to N - 1
};

/// beta from the ratio phi_n'(pi)/phi_n(pi) = -cot(beta), median over the window.
[[nodiscard]] BetaEstimate recover_beta(const TriangularKernel& G, const SpectralData& spectral,
                                        const BetaWindow& window = {});

inline constexpr std::size_t default_product_terms = 2000;

/// b_n from mu_k and a_n through the regularized products. When N is large
/// enough to decompose, omega comes from the asymptotic fit; otherwise from the
/// last supplied eigenvalue.
[[nodiscard]] NormingB b_from_a(const SpectralData& spectral, std::size_t K = default_product_terms);

struct InverseOptions {
    std::size_t m = 401;
    BetaWindow window;
    std::optional<double> expected_alpha;
    std::optional<double> expected_beta;
};

struct InverseResult {
    GridFunction q;
    double alpha = 0;
    double beta = 0;
    TriangularKernel G;
    double residual = 0;
    double condition = 1;
    double beta_spread = 0;
    bool origin_converged = false;
    std::optional<double> alpha_deviation;
    std::optional<double> beta_deviation;
};

/// F from the spectral data, the equation row by row, then q, alpha and beta.
/// Stage failures are rethrown with the stage name prefixed.
[[nodiscard]] InverseResult inverse_solve(const SpectralData& spectral, const InverseOptions& options = {});

}  // namespace slgl
