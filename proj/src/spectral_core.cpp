#include "slgl/spectral_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace slgl {

std::vector<double> uniform_grid(double a, double b, std::size_t m) {
    if (m < 2) throw Error(ErrorKind::invalid_argument, "uniform_grid: need at least 2 points");
    if (!(b > a)) throw Error(ErrorKind::invalid_argument, "uniform_grid: need b > a");
    std::vector<double> xs(m);
    const double h = (b - a) / static_cast<double>(m - 1);
    for (std::size_t i = 0; i + 1 < m; ++i) xs[i] = a + static_cast<double>(i) * h;
    xs[m - 1] = b;
    return xs;
}

GridFunction::GridFunction(double lower, double upper, std::vector<double> values)
    : lower_(lower), upper_(upper), values_(std::move(values)) {
    if (values_.size() < 2) throw Error(ErrorKind::invalid_argument, "GridFunction: need at least 2 samples");
    if (!(upper_ > lower_)) throw Error(ErrorKind::invalid_argument, "GridFunction: empty interval");
    for (double v : values_) {
        if (!std::isfinite(v)) throw Error(ErrorKind::invalid_argument, "GridFunction: non-finite sample");
    }
    step_ = (upper_ - lower_) / static_cast<double>(values_.size() - 1);
}

double GridFunction::interpolate(double x) const noexcept {
    const std::size_t last = values_.size() - 1;
    if (x <= lower_) return values_.front();
    if (x >= upper_) return values_.back();
    const double s = (x - lower_) / step_;
    std::size_t i = static_cast<std::size_t>(s);
    if (i >= last) i = last - 1;
    const double w = s - static_cast<double>(i);
    return (1 - w) * values_[i] + w * values_[i + 1];
}

double GridFunction::max_abs() const noexcept {
    double r = 0;
    for (double v : values_) r = std::max(r, std::abs(v));
    return r;
}

double integrate_trapezoid(std::span<const double> values, double h) {
    if (values.size() < 2) return 0.0;
    double inner = 0;
    for (std::size_t i = 1; i + 1 < values.size(); ++i) inner += values[i];
    return h * (inner + 0.5 * (values.front() + values.back()));
}

double integrate_trapezoid(const GridFunction& f) {
    return integrate_trapezoid(f.values(), f.step());
}

BoundaryAngles::BoundaryAngles(double alpha, double beta) : alpha_(alpha), beta_(beta) {
    auto inside = [](double t) { return t > 0 && t < pi; };
    if (!inside(alpha_) || !inside(beta_)) {
        std::ostringstream os;
        os << "boundary angles must lie in (0, pi); got alpha = " << alpha_ << ", beta = " << beta_;
        throw Error(ErrorKind::invalid_argument, os.str());
    }
}

double lambda_from_mu(double mu) noexcept {
    return mu >= 0 ? std::sqrt(mu) : -std::sqrt(-mu);
}

SpectralData::SpectralData(std::vector<double> lambda, std::vector<double> a)
    : lambda_(std::move(lambda)), a_(std::move(a)) {
    if (lambda_.size() != a_.size()) {
        throw Error(ErrorKind::invalid_argument, "SpectralData: lambda and a differ in length");
    }
    if (lambda_.empty()) throw Error(ErrorKind::invalid_argument, "SpectralData: empty");
    for (std::size_t n = 0; n < lambda_.size(); ++n) {
        if (!std::isfinite(lambda_[n]) || !std::isfinite(a_[n])) {
            throw Error(ErrorKind::invalid_argument, "SpectralData: non-finite entry at n = " + std::to_string(n));
        }
    }
}

SpectralData SpectralData::from_mu(std::span<const double> mu, std::vector<double> a) {
    std::vector<double> lambda(mu.size());
    std::transform(mu.begin(), mu.end(), lambda.begin(), lambda_from_mu);
    return SpectralData(std::move(lambda), std::move(a));
}

std::vector<double> SpectralData::mu() const {
    std::vector<double> out(size());
    for (std::size_t n = 0; n < size(); ++n) out[n] = mu(n);
    return out;
}

MuSequence::MuSequence(std::vector<double> mu, double omega) : mu_(std::move(mu)), omega_(omega) {}

double MuSequence::model_mismatch(std::size_t from) const noexcept {
    double d = 0;
    for (std::size_t k = std::max<std::size_t>(from, 1); k < mu_.size(); ++k) {
        const double kk = static_cast<double>(k);
        d = std::max(d, std::abs(mu_[k] - kk * kk - 2 * omega_));
    }
    return d;
}

namespace {

// log|1 - c/k^2| with the sign of the factor accumulated separately.
void accumulate_factor(double factor, double& log_abs, int& sign) {
    if (factor < 0) sign = -sign;
    log_abs += std::log(std::abs(factor));
}

double log_sinh(double y) {
    return y + std::log1p(-std::exp(-2 * y)) - std::log(2.0);
}

}  // namespace

double product_tail(double c, std::size_t K) {
    if (c == 0) return 1.0;
    double log_abs = 0;
    int sign = 1;
    std::size_t skip = 0;

    if (c < 0) {
        const double y = pi * std::sqrt(-c);
        log_abs = log_sinh(y) - std::log(y);
    } else {
        const double z = std::sqrt(c);
        const double j = std::round(z);
        if (j >= 1 && j <= static_cast<double>(K)) {
            // sin(pi z)/(pi z) divided by (1 - c/j^2): the common zero cancels.
            const double d = z - j;
            const double sinc = d == 0 ? 1.0 : std::sin(pi * d) / (pi * d);
            const double ratio = sinc * j * j / (z * (j + z));
            const bool odd = static_cast<long long>(j) % 2 != 0;
            accumulate_factor(odd ? ratio : -ratio, log_abs, sign);
            skip = static_cast<std::size_t>(j);
        } else {
            const double s = std::sin(pi * z) / (pi * z);
            if (s == 0) return 0.0;
            accumulate_factor(s, log_abs, sign);
        }
    }
    for (std::size_t k = 1; k <= K; ++k) {
        if (k == skip) continue;
        const double kk = static_cast<double>(k);
        const double r = c / (kk * kk);
        if (std::abs(r) < 0.5) {
            log_abs -= std::log1p(-r);
        } else {
            const double f = 1 - r;
            if (f < 0) sign = -sign;
            log_abs -= std::log(std::abs(f));
        }
    }
    return sign * std::exp(log_abs);
}

ProductValue regularized_product(const MuSequence& mu, std::size_t n, std::size_t K) {
    if (K <= std::max<std::size_t>(n, 10)) {
        throw Error(ErrorKind::invalid_argument,
                    "regularized_product: truncation K = " + std::to_string(K) + " must exceed max(n, 10)");
    }
    const double mu_n = mu(n);
    double log_abs = 0;
    int sign = 1;
    for (std::size_t k = 1; k <= K; ++k) {
        if (k == n) continue;
        const double diff = mu(k) - mu_n;
        if (diff == 0) {
            throw Error(ErrorKind::degenerate_spectrum,
                        "regularized_product: mu_" + std::to_string(k) + " equals mu_" + std::to_string(n));
        }
        const double kk = static_cast<double>(k);
        accumulate_factor(diff / (kk * kk), log_abs, sign);
    }
    const double tail = product_tail(mu_n - 2 * mu.omega(), K);
    const double value = sign * std::exp(log_abs) * tail;

    // Model error: supplied eigenvalues stop at N, so the tail model takes over at min(N, K).
    const std::size_t data_end = std::min(mu.supplied(), K);
    const double mismatch = mu.model_mismatch(data_end / 2);
    const double rounding = 64 * std::numeric_limits<double>::epsilon() * (static_cast<double>(n) + 1)
                            * std::log(static_cast<double>(K));
    const double bound = std::abs(value) * (2 * mismatch / static_cast<double>(std::max<std::size_t>(data_end, 1)) + rounding);
    return {value, bound};
}

}  // namespace slgl
