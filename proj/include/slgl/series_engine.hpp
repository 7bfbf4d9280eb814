#pragma once

#include <cstddef>
#include <vector>

#include "slgl/spectral_core.hpp"

namespace slgl {

/// Unperturbed norming constants: pi for n = 0, pi/2 otherwise.
[[nodiscard]] inline double unperturbed_norming(std::size_t n) noexcept { return n == 0 ? pi : pi / 2; }

struct DecayThresholds {
    double eigen = 0.05;     // bound on |n l_n| over the top quartile
    double norming = 0.05;   // bound on |n s_n| over the top quartile
};

/// lambda_n = n + omega/n + l_n and a_n = pi/2 + s_n, read off finite data.
struct AsymptoticDecomposition {
    double omega = 0;
    std::vector<double> rho;  // lambda_n - n, n = 0..N-1
    std::vector<double> l;    // rho_n - omega/n for n >= 1; l[0] is unused and zero
    std::vector<double> s;    // a_n - pi/2 for n >= 1; s[0] is unused and zero
    double s0 = 0;            // a_0 - pi

    double eigen_decay = 0;    // max |n l_n| over the top quartile
    double norming_decay = 0;  // max |n s_n| over the top quartile
    bool eigen_decay_ok = false;
    bool norming_decay_ok = false;
    DecayThresholds thresholds;

    [[nodiscard]] std::size_t size() const noexcept { return rho.size(); }
};

inline constexpr std::size_t min_decomposition_size = 16;

/// omega is the median of n rho_n over the top half of the indices.
[[nodiscard]] AsymptoticDecomposition decompose(const SpectralData& spectral, const DecayThresholds& thresholds = {});

/// Truncated series value and the taper that produced it.
struct SeriesValue {
    double value = 0;
    std::size_t terms = 0;        // highest index used is terms
    std::size_t taper_start = 0;  // first index whose weight is below one
};

/// Raised-cosine weight for index n of a series with indices 1..terms: one up
/// to terms - w, then 0.5 (1 + cos(pi (n - terms + w) / (w + 1))), with
/// w = max(1, terms / 10).
[[nodiscard]] double taper_weight(std::size_t n, std::size_t terms) noexcept;
[[nodiscard]] std::size_t taper_start(std::size_t terms) noexcept;

/// sum l_n sin(n x), tapered. `terms` = 0 means every available index.
[[nodiscard]] SeriesValue eval_l(double x, const AsymptoticDecomposition& dec, std::size_t terms = 0);

/// sum s_n cos(n x), tapered.
[[nodiscard]] SeriesValue eval_s(double x, const AsymptoticDecomposition& dec, std::size_t terms = 0);

/// Plain partial sum over n < terms of cos(lambda_n x)/a_n - cos(n x)/a_n^0.
[[nodiscard]] double eval_a_direct(const SpectralData& spectral, double x, std::size_t terms);

/// Same function through the split into a slowly convergent part, summed in
/// closed form plus the tapered l and s series, and an absolutely convergent
/// remainder. Indices beyond the data follow lambda_n = n + omega/n,
/// a_n = pi/2. Valid on [0, 2 pi]; at 2 pi it returns the limit from the left.
[[nodiscard]] double eval_a_accelerated(const SpectralData& spectral, const AsymptoticDecomposition& dec, double x);

/// a(.) sampled on [0, 2 pi] with spacing h/2, h = pi/(m-1), so that every
/// x + t and x - t of the m-point grid on [0, pi] falls on a node.
class ATable {
public:
    ATable(std::size_t m, std::vector<double> values, bool origin_converged);

    [[nodiscard]] std::size_t base_points() const noexcept { return m_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] double half_step() const noexcept { return half_step_; }
    [[nodiscard]] double node(std::size_t k) const noexcept { return values_[k]; }
    /// Linear interpolation on [0, 2 pi].
    [[nodiscard]] double at(double x) const noexcept;
    /// a(0) from the partial sums of 1/a_n - 1/a_n^0 settled to tolerance.
    [[nodiscard]] bool origin_converged() const noexcept { return origin_converged_; }

private:
    std::size_t m_;
    double half_step_;
    std::vector<double> values_;
    bool origin_converged_;
};

/// Partial sums of sum (1/a_n - 1/a_n^0).
struct OriginSum {
    double value = 0;
    double previous = 0;  // partial sum over the first half of the terms
    bool converged = false;
};
[[nodiscard]] OriginSum origin_sum(const SpectralData& spectral, double tolerance = 1e-2);

[[nodiscard]] ATable tabulate_a(const SpectralData& spectral, const AsymptoticDecomposition& dec, std::size_t m);

/// Values on the triangle 0 <= t_j <= x_i <= pi of an m-point grid, packed by rows.
class TriangularKernel {
public:
    explicit TriangularKernel(std::size_t m);

    [[nodiscard]] std::size_t size() const noexcept { return m_; }
    [[nodiscard]] double step() const noexcept { return step_; }
    [[nodiscard]] double x(std::size_t i) const noexcept {
        return i + 1 == m_ ? pi : static_cast<double>(i) * step_;
    }
    /// Entry (i, j) with j <= i.
    [[nodiscard]] double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * (i + 1) / 2 + j]; }
    [[nodiscard]] double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * (i + 1) / 2 + j]; }
    /// Symmetric extension to the square: K(i, j) = K(j, i).
    [[nodiscard]] double symmetric(std::size_t i, std::size_t j) const noexcept {
        return j <= i ? (*this)(i, j) : (*this)(j, i);
    }
    [[nodiscard]] const double* row(std::size_t i) const noexcept { return data_.data() + i * (i + 1) / 2; }
    [[nodiscard]] double* row(std::size_t i) noexcept { return data_.data() + i * (i + 1) / 2; }
    [[nodiscard]] double max_abs() const noexcept;

private:
    std::size_t m_;
    double step_;
    std::vector<double> data_;
};

/// F(x, t) = (a(x + t) + a(x - t)) / 2 from the accelerated table of a.
[[nodiscard]] TriangularKernel build_F(const ATable& table);
[[nodiscard]] TriangularKernel build_F(const SpectralData& spectral, const AsymptoticDecomposition& dec, std::size_t m);

/// The defining double-cosine sum over n < terms, term by term.
[[nodiscard]] TriangularKernel build_F_direct(const SpectralData& spectral, std::size_t m, std::size_t terms);

struct DiagonalDerivative {
    GridFunction f;        // d/dx F(x, x) on [0, pi]
    double origin = 0;     // a(0)
    bool origin_converged = false;
};

/// d/dx F(x, x) = a'(2x) by central differences on the table, one-sided at the ends.
[[nodiscard]] DiagonalDerivative f_diagonal(const ATable& table);
[[nodiscard]] DiagonalDerivative f_diagonal(const SpectralData& spectral, const AsymptoticDecomposition& dec,
                                            std::size_t m);

/// Total variation of the tapered l- or s-series on [delta, 2 pi - delta],
/// with all terms and with half of them. Only a diagnostic for absolute continuity.
struct VariationProxy {
    double full = 0;
    double half = 0;
};
enum class RemainderSeries { eigen, norming };
[[nodiscard]] VariationProxy variation_proxy(const AsymptoticDecomposition& dec, RemainderSeries which,
                                             double delta = 0.05, std::size_t points = 1024);

}  // namespace slgl
