#include "slgl/series_engine.hpp"

#include <algorithm>
#include <cmath>

#include "parallel.hpp"

namespace slgl {

namespace {

// How far past the data the model tail of the absolutely convergent part is summed.
constexpr std::size_t model_tail_factor = 8;

double median(std::vector<double> v) {
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    const double upper = v[mid];
    if (v.size() % 2 == 1) return upper;
    const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

// sin(y) - y without cancellation for small y.
double sin_minus_arg(double y) {
    if (std::abs(y) < 1e-3) {
        const double y2 = y * y;
        return y * y2 * (-1.0 / 6 + y2 / 120);
    }
    return std::sin(y) - y;
}

std::size_t series_terms(const AsymptoticDecomposition& dec, std::size_t requested) {
    const std::size_t available = dec.size() == 0 ? 0 : dec.size() - 1;
    return requested == 0 ? available : std::min(requested, available);
}

}  // namespace

AsymptoticDecomposition decompose(const SpectralData& spectral, const DecayThresholds& thresholds) {
    const std::size_t N = spectral.size();
    if (N < min_decomposition_size) {
        throw Error(ErrorKind::invalid_argument, "decompose: need at least " + std::to_string(min_decomposition_size)
                                                     + " eigenvalues, got " + std::to_string(N));
    }
    AsymptoticDecomposition dec;
    dec.thresholds = thresholds;
    dec.rho.resize(N);
    dec.l.assign(N, 0.0);
    dec.s.assign(N, 0.0);
    for (std::size_t n = 0; n < N; ++n) dec.rho[n] = spectral.lambda(n) - static_cast<double>(n);

    std::vector<double> scaled;
    for (std::size_t n = N / 2; n < N; ++n) scaled.push_back(static_cast<double>(n) * dec.rho[n]);
    dec.omega = median(std::move(scaled));

    for (std::size_t n = 1; n < N; ++n) {
        const double nn = static_cast<double>(n);
        dec.l[n] = dec.rho[n] - dec.omega / nn;
        dec.s[n] = spectral.a(n) - pi / 2;
    }
    dec.s0 = spectral.a(0) - pi;

    for (std::size_t n = N - N / 4; n < N; ++n) {
        const double nn = static_cast<double>(n);
        dec.eigen_decay = std::max(dec.eigen_decay, std::abs(nn * dec.l[n]));
        dec.norming_decay = std::max(dec.norming_decay, std::abs(nn * dec.s[n]));
    }
    dec.eigen_decay_ok = dec.eigen_decay < thresholds.eigen;
    dec.norming_decay_ok = dec.norming_decay < thresholds.norming;
    return dec;
}

std::size_t taper_start(std::size_t terms) noexcept {
    const std::size_t width = std::max<std::size_t>(1, terms / 10);
    return terms > width ? terms - width + 1 : 1;
}

double taper_weight(std::size_t n, std::size_t terms) noexcept {
    const std::size_t width = std::max<std::size_t>(1, terms / 10);
    if (n + width <= terms) return 1.0;
    if (n > terms) return 0.0;
    const double offset = static_cast<double>(n + width - terms);
    return 0.5 * (1 + std::cos(pi * offset / static_cast<double>(width + 1)));
}

SeriesValue eval_l(double x, const AsymptoticDecomposition& dec, std::size_t terms) {
    const std::size_t T = series_terms(dec, terms);
    double sum = 0;
    for (std::size_t n = 1; n <= T; ++n) sum += taper_weight(n, T) * dec.l[n] * std::sin(static_cast<double>(n) * x);
    return {sum, T, taper_start(T)};
}

SeriesValue eval_s(double x, const AsymptoticDecomposition& dec, std::size_t terms) {
    const std::size_t T = series_terms(dec, terms);
    double sum = 0;
    for (std::size_t n = 1; n <= T; ++n) sum += taper_weight(n, T) * dec.s[n] * std::cos(static_cast<double>(n) * x);
    return {sum, T, taper_start(T)};
}

double eval_a_direct(const SpectralData& spectral, double x, std::size_t terms) {
    const std::size_t T = std::min(terms, spectral.size());
    double sum = 0;
    for (std::size_t n = 0; n < T; ++n) {
        sum += cos_lambda(spectral.lambda(n), x) / spectral.a(n)
               - std::cos(static_cast<double>(n) * x) / unperturbed_norming(n);
    }
    return sum;
}

double eval_a_accelerated(const SpectralData& spectral, const AsymptoticDecomposition& dec, double x) {
    const std::size_t N = spectral.size();
    const double omega = dec.omega;
    const double two_over_pi = 2 / pi;
    const double four_over_pi2 = 4 / (pi * pi);

    // sum_{n>=1} sin(nx)/n = (pi - x)/2 on (0, 2 pi); the factor x removes the jump at 0.
    const double sawtooth = x == 0 ? 0.0 : (pi - x) / 2;
    double slow = -two_over_pi * omega * x * sawtooth;
    slow -= two_over_pi * x * eval_l(x, dec).value;
    slow -= four_over_pi2 * eval_s(x, dec).value;

    double fast = cos_lambda(spectral.lambda(0), x) / spectral.a(0) - 1 / pi;
    for (std::size_t n = 1; n < N; ++n) {
        const double nn = static_cast<double>(n);
        const double c = std::cos(nn * x);
        const double s = std::sin(nn * x);
        const double inv_a = 1 / spectral.a(n);
        const double e = inv_a - two_over_pi;
        const double r = e + four_over_pi2 * dec.s[n];
        if (spectral.lambda(n) < 0) {
            const double exact = cos_lambda(spectral.lambda(n), x) * inv_a - c * two_over_pi;
            fast += exact + two_over_pi * x * (omega / nn + dec.l[n]) * s + four_over_pi2 * dec.s[n] * c;
            continue;
        }
        const double rho = dec.rho[n];
        const double half = std::sin(0.5 * rho * x);
        fast += -inv_a * 2 * half * half * c - inv_a * sin_minus_arg(rho * x) * s - e * rho * x * s + r * c;
    }
    if (omega != 0) {
        for (std::size_t n = std::max<std::size_t>(N, 1); n < model_tail_factor * N; ++n) {
            const double nn = static_cast<double>(n);
            const double rho = omega / nn;
            const double half = std::sin(0.5 * rho * x);
            fast -= two_over_pi * (2 * half * half * std::cos(nn * x) + sin_minus_arg(rho * x) * std::sin(nn * x));
        }
    }
    return slow + fast;
}

ATable::ATable(std::size_t m, std::vector<double> values, bool origin_converged)
    : m_(m), half_step_(pi / (2 * static_cast<double>(m - 1))), values_(std::move(values)),
      origin_converged_(origin_converged) {
    if (values_.size() != 4 * (m - 1) + 1) throw Error(ErrorKind::invalid_argument, "ATable: wrong node count");
}

double ATable::at(double x) const noexcept {
    const std::size_t last = values_.size() - 1;
    if (x <= 0) return values_.front();
    if (x >= 2 * pi) return values_.back();
    const double s = x / half_step_;
    std::size_t k = std::min(static_cast<std::size_t>(s), last - 1);
    const double w = s - static_cast<double>(k);
    return (1 - w) * values_[k] + w * values_[k + 1];
}

OriginSum origin_sum(const SpectralData& spectral, double tolerance) {
    OriginSum out;
    const std::size_t N = spectral.size();
    const std::size_t half = (N + 1) / 2;
    double sum = 0;
    for (std::size_t n = 0; n < N; ++n) {
        if (n == half) out.previous = sum;
        sum += 1 / spectral.a(n) - 1 / unperturbed_norming(n);
    }
    if (N == 1) out.previous = sum;
    out.value = sum;
    out.converged = std::abs(out.value - out.previous) <= tolerance;
    return out;
}

ATable tabulate_a(const SpectralData& spectral, const AsymptoticDecomposition& dec, std::size_t m) {
    if (m < 2) throw Error(ErrorKind::invalid_argument, "tabulate_a: need m >= 2");
    const std::size_t count = 4 * (m - 1) + 1;
    const double hh = pi / (2 * static_cast<double>(m - 1));
    std::vector<double> values(count);
    detail::parallel_for(count, [&](std::size_t k) {
        const double x = k + 1 == count ? 2 * pi : static_cast<double>(k) * hh;
        values[k] = eval_a_accelerated(spectral, dec, x);
    });
    const OriginSum origin = origin_sum(spectral);
    values[0] = origin.value;
    return ATable(m, std::move(values), origin.converged);
}

TriangularKernel::TriangularKernel(std::size_t m)
    : m_(m), step_(pi / static_cast<double>(m - 1)), data_(m * (m + 1) / 2, 0.0) {
    if (m < 2) throw Error(ErrorKind::invalid_argument, "TriangularKernel: need m >= 2");
}

double TriangularKernel::max_abs() const noexcept {
    double r = 0;
    for (double v : data_) r = std::max(r, std::abs(v));
    return r;
}

TriangularKernel build_F(const ATable& table) {
    const std::size_t m = table.base_points();
    TriangularKernel F(m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j <= i; ++j) F(i, j) = 0.5 * (table.node(2 * (i + j)) + table.node(2 * (i - j)));
    }
    return F;
}

TriangularKernel build_F(const SpectralData& spectral, const AsymptoticDecomposition& dec, std::size_t m) {
    return build_F(tabulate_a(spectral, dec, m));
}

TriangularKernel build_F_direct(const SpectralData& spectral, std::size_t m, std::size_t terms) {
    TriangularKernel F(m);
    const std::size_t T = std::min(terms, spectral.size());
    std::vector<double> perturbed(m), plain(m);
    for (std::size_t n = 0; n < T; ++n) {
        for (std::size_t i = 0; i < m; ++i) {
            perturbed[i] = cos_lambda(spectral.lambda(n), F.x(i));
            plain[i] = std::cos(static_cast<double>(n) * F.x(i));
        }
        const double wp = 1 / spectral.a(n);
        const double w0 = 1 / unperturbed_norming(n);
        for (std::size_t i = 0; i < m; ++i) {
            double* row = F.row(i);
            for (std::size_t j = 0; j <= i; ++j) row[j] += wp * perturbed[i] * perturbed[j] - w0 * plain[i] * plain[j];
        }
    }
    return F;
}

DiagonalDerivative f_diagonal(const ATable& table) {
    const std::size_t m = table.base_points();
    const std::size_t last = table.size() - 1;
    const double h = 2 * table.half_step();
    std::vector<double> f(m);
    f[0] = (-3 * table.node(0) + 4 * table.node(1) - table.node(2)) / h;
    for (std::size_t i = 1; i + 1 < m; ++i) f[i] = (table.node(4 * i + 1) - table.node(4 * i - 1)) / h;
    f[m - 1] = (3 * table.node(last) - 4 * table.node(last - 1) + table.node(last - 2)) / h;
    return {GridFunction(0.0, pi, std::move(f)), table.node(0), table.origin_converged()};
}

DiagonalDerivative f_diagonal(const SpectralData& spectral, const AsymptoticDecomposition& dec, std::size_t m) {
    return f_diagonal(tabulate_a(spectral, dec, m));
}

VariationProxy variation_proxy(const AsymptoticDecomposition& dec, RemainderSeries which, double delta,
                               std::size_t points) {
    const std::size_t T = series_terms(dec, 0);
    auto variation = [&](std::size_t terms) {
        double total = 0;
        double previous = 0;
        for (std::size_t k = 0; k < points; ++k) {
            const double x = delta + (2 * pi - 2 * delta) * static_cast<double>(k) / static_cast<double>(points - 1);
            const double v = which == RemainderSeries::eigen ? eval_l(x, dec, terms).value : eval_s(x, dec, terms).value;
            if (k > 0) total += std::abs(v - previous);
            previous = v;
        }
        return total;
    };
    return {variation(T), variation(std::max<std::size_t>(1, T / 2))};
}

}  // namespace slgl
