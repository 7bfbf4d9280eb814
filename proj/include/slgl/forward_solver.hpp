#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "slgl/spectral_core.hpp"

namespace slgl {

inline constexpr std::size_t default_ode_points = 2001;

/// Solution of -y'' + q y = mu y sampled on a uniform grid over [0, pi].
struct SolutionTrace {
    double mu = 0;
    double step = 0;
    std::vector<double> y;
    std::vector<double> yprime;

    [[nodiscard]] std::size_t size() const noexcept { return y.size(); }
    [[nodiscard]] double x(std::size_t i) const noexcept {
        return i + 1 == y.size() ? pi : static_cast<double>(i) * step;
    }
};

/// phi(x, mu): phi(0) = 1, phi'(0) = -cot(alpha), integrated left to right.
///
/// Each grid interval is advanced by the fourth-order Magnus propagator of
/// the first-order system (y, y')' = [[0, 1], [q - mu, 0]] (y, y'), with q
/// taken piecewise linear between its samples. The propagator is the exact
/// 2x2 exponential, so piecewise-constant q is integrated without truncation
/// error.
[[nodiscard]] SolutionTrace solve_phi(const GridFunction& q, double alpha, double mu,
                                      std::size_t m = default_ode_points);

/// psi(x, mu): psi(pi) = 1, psi'(pi) = -cot(beta), integrated right to left.
[[nodiscard]] SolutionTrace solve_psi(const GridFunction& q, double beta, double mu,
                                      std::size_t m = default_ode_points);

struct DeltaPair {
    double via_phi;  // phi(pi) cot(beta) + phi'(pi)
    double via_psi;  // -(psi(0) cot(alpha) + psi'(0))
};

[[nodiscard]] DeltaPair characteristic_delta_pair(const GridFunction& q, const BoundaryAngles& angles,
                                                  double mu, std::size_t m = default_ode_points);

/// Delta(mu); its zeros are the eigenvalues.
[[nodiscard]] double characteristic_delta(const GridFunction& q, const BoundaryAngles& angles, double mu,
                                          std::size_t m = default_ode_points);

/// Continuous Pruefer angle theta(pi) of phi(., mu), with tan(theta) = y / y'
/// and theta(0) = pi - alpha. Strictly increasing in mu; mu is the n-th
/// eigenvalue exactly when theta(pi) + beta = (n + 1) pi.
[[nodiscard]] double prufer_angle(const GridFunction& q, double alpha, double mu,
                                  std::size_t m = default_ode_points);

/// Number of sign changes of phi(., mu) on the open interval (0, pi).
[[nodiscard]] std::size_t oscillation_count(const GridFunction& q, double alpha, double mu,
                                            std::size_t m = default_ode_points);

struct EigenOptions {
    std::size_t m = default_ode_points;
};

/// The N smallest eigenvalues, strictly increasing.
[[nodiscard]] std::vector<double> compute_eigenvalues(const GridFunction& q, const BoundaryAngles& angles,
                                                      std::size_t count, const EigenOptions& options = {});

struct NormingConstants {
    std::vector<double> a;
    std::vector<double> b;
};

/// a_n = int |phi_n|^2, b_n = int |psi_n|^2 by the trapezoid rule on the ODE grid.
/// Throws invalid_argument when an input is not an eigenvalue to solver tolerance.
[[nodiscard]] NormingConstants norming_constants(const GridFunction& q, const BoundaryAngles& angles,
                                                 std::span<const double> mus,
                                                 std::size_t m = default_ode_points);

struct ForwardOptions {
    std::size_t m = default_ode_points;
    bool keep_traces = false;
};

struct ForwardResult {
    SpectralData spectral;
    NormingB b;
    std::vector<SolutionTrace> phi;
    std::vector<SolutionTrace> psi;
};

[[nodiscard]] ForwardResult forward(const GridFunction& q, const BoundaryAngles& angles, std::size_t count,
                                    const ForwardOptions& options = {});

}  // namespace slgl
