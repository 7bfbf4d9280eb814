#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace slgl {

inline constexpr double pi = std::numbers::pi;

enum class ErrorKind {
    invalid_argument,
    degenerate_spectrum,
    overflow,
    ill_posed,
    internal,
    input,
};

/// Library error. `kind()` lets callers (the CLI in particular) map failures
/// onto exit codes without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// m equispaced abscissae on [a, b], both endpoints included.
[[nodiscard]] std::vector<double> uniform_grid(double a, double b, std::size_t m);

/// Samples of a real function on a uniform grid over [lower, upper].
class GridFunction {
public:
    GridFunction(double lower, double upper, std::vector<double> values);

    template <class F>
    [[nodiscard]] static GridFunction sample(double lower, double upper, std::size_t m, F&& f) {
        std::vector<double> xs = uniform_grid(lower, upper, m);
        std::vector<double> v(m);
        for (std::size_t i = 0; i < m; ++i) v[i] = f(xs[i]);
        return GridFunction(lower, upper, std::move(v));
    }

    [[nodiscard]] double lower() const noexcept { return lower_; }
    [[nodiscard]] double upper() const noexcept { return upper_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] double step() const noexcept { return step_; }
    [[nodiscard]] double x(std::size_t i) const noexcept {
        return i + 1 == values_.size() ? upper_ : lower_ + static_cast<double>(i) * step_;
    }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] double operator[](std::size_t i) const noexcept { return values_[i]; }

    /// Piecewise-linear interpolation; arguments outside the interval are clamped.
    [[nodiscard]] double interpolate(double x) const noexcept;

    [[nodiscard]] double max_abs() const noexcept;

private:
    double lower_;
    double upper_;
    double step_;
    std::vector<double> values_;
};

/// Composite trapezoid rule over the whole interval of f.
[[nodiscard]] double integrate_trapezoid(const GridFunction& f);

/// Same rule on raw samples with spacing h.
[[nodiscard]] double integrate_trapezoid(std::span<const double> values, double h);

/// Boundary angles of the separated conditions at x = 0 and x = pi.
/// Both must lie strictly inside (0, pi).
class BoundaryAngles {
public:
    BoundaryAngles(double alpha, double beta);

    [[nodiscard]] double alpha() const noexcept { return alpha_; }
    [[nodiscard]] double beta() const noexcept { return beta_; }
    [[nodiscard]] double cot_alpha() const noexcept { return std::cos(alpha_) / std::sin(alpha_); }
    [[nodiscard]] double cot_beta() const noexcept { return std::cos(beta_) / std::sin(beta_); }

private:
    double alpha_;
    double beta_;
};

/// arccot onto (0, pi).
[[nodiscard]] inline double arccot(double y) noexcept { return pi / 2 - std::atan(y); }

/// cos(lambda x), continued to cosh(|lambda| x) for the signed-negative
/// representation of a negative eigenvalue.
[[nodiscard]] inline double cos_lambda(double lambda, double x) noexcept {
    return lambda >= 0 ? std::cos(lambda * x) : std::cosh(-lambda * x);
}

/// Paired sequences lambda_n and a_n, n = 0..N-1.
///
/// lambda_n is the signed square root of mu_n: mu_n = lambda_n * |lambda_n|,
/// so a negative eigenvalue -t^2 is stored as -t. Only structural invariants
/// (equal lengths, finite entries) are enforced here; ordering and positivity
/// are reported by the validator so that bad data can still be inspected.
class SpectralData {
public:
    SpectralData(std::vector<double> lambda, std::vector<double> a);

    [[nodiscard]] static SpectralData from_mu(std::span<const double> mu, std::vector<double> a);

    [[nodiscard]] std::size_t size() const noexcept { return lambda_.size(); }
    [[nodiscard]] std::span<const double> lambda() const noexcept { return lambda_; }
    [[nodiscard]] std::span<const double> a() const noexcept { return a_; }
    [[nodiscard]] double lambda(std::size_t n) const noexcept { return lambda_[n]; }
    [[nodiscard]] double a(std::size_t n) const noexcept { return a_[n]; }
    [[nodiscard]] double mu(std::size_t n) const noexcept { return lambda_[n] * std::abs(lambda_[n]); }
    [[nodiscard]] std::vector<double> mu() const;

private:
    std::vector<double> lambda_;
    std::vector<double> a_;
};

[[nodiscard]] double lambda_from_mu(double mu) noexcept;

struct NormingB {
    std::vector<double> b;
    /// Propagated absolute error estimate per entry; empty when b was integrated directly.
    std::vector<double> error;
};

/// Eigenvalue accessor over an infinite index range: supplied values for
/// k < N, the asymptotic model k^2 + 2 omega beyond.
class MuSequence {
public:
    MuSequence(std::vector<double> mu, double omega);

    [[nodiscard]] double operator()(std::size_t k) const noexcept {
        if (k < mu_.size()) return mu_[k];
        const double kk = static_cast<double>(k);
        return kk * kk + 2 * omega_;
    }
    [[nodiscard]] std::size_t supplied() const noexcept { return mu_.size(); }
    [[nodiscard]] double omega() const noexcept { return omega_; }

    /// max |mu_k - k^2 - 2 omega| over supplied k >= from.
    [[nodiscard]] double model_mismatch(std::size_t from) const noexcept;

private:
    std::vector<double> mu_;
    double omega_;
};

struct ProductValue {
    double value;
    double error_bound;
};

/// prod_{k>=1, k != n} (mu_k - mu_n) / k^2.
///
/// Factors with k <= K are multiplied out; the rest use the model tail
/// mu_k = k^2 + 2 omega, summed in closed form through
/// sin(pi z)/(pi z) = prod (1 - z^2/k^2). The bound is C/min(N, K) where C
/// measures how far the supplied eigenvalues sit from the tail model.
[[nodiscard]] ProductValue regularized_product(const MuSequence& mu, std::size_t n, std::size_t K);

/// prod_{k>K} (1 - c/k^2), exact in floating point up to rounding.
[[nodiscard]] double product_tail(double c, std::size_t K);

}  // namespace slgl
