#include "slgl/validator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "slgl/gl_inverse.hpp"

namespace slgl {

namespace {

void append(ValidationReport& into, const ValidationReport& from) {
    into.entries.insert(into.entries.end(), from.entries.begin(), from.entries.end());
}

std::string index_list(const std::vector<std::size_t>& idx) {
    std::ostringstream os;
    for (std::size_t k = 0; k < idx.size() && k < 20; ++k) os << (k ? ", " : "") << idx[k];
    if (idx.size() > 20) os << ", ...";
    return os.str();
}

}  // namespace

const char* to_string(CheckStatus status) noexcept {
    switch (status) {
        case CheckStatus::pass: return "pass";
        case CheckStatus::fail: return "fail";
        case CheckStatus::diagnostic: return "diagnostic";
    }
    return "unknown";
}

const CheckEntry* ValidationReport::find(const std::string& name) const noexcept {
    for (const auto& e : entries) {
        if (e.name == name) return &e;
    }
    return nullptr;
}

void ValidationReport::settle() noexcept {
    overall = std::all_of(entries.begin(), entries.end(),
                          [](const CheckEntry& e) { return e.status != CheckStatus::fail; });
}

ValidationReport check_hard(const SpectralData& spectral) {
    ValidationReport report;
    std::vector<std::size_t> unordered, nonpositive;
    for (std::size_t n = 0; n < spectral.size(); ++n) {
        if (n + 1 < spectral.size() && !(spectral.mu(n + 1) > spectral.mu(n))) unordered.push_back(n);
        if (!(spectral.a(n) > 0)) nonpositive.push_back(n);
    }
    CheckEntry ordering{"ordering", unordered.empty() ? CheckStatus::pass : CheckStatus::fail,
                        static_cast<double>(unordered.size()), 0, ""};
    if (!unordered.empty()) ordering.detail = "mu_n >= mu_{n+1} at n = " + index_list(unordered);
    CheckEntry positivity{"positivity", nonpositive.empty() ? CheckStatus::pass : CheckStatus::fail,
                          static_cast<double>(nonpositive.size()), 0, ""};
    if (!nonpositive.empty()) positivity.detail = "a_n <= 0 at n = " + index_list(nonpositive);
    report.entries = {ordering, positivity};
    report.settle();
    return report;
}

ValidationReport check_asymptotics(const SpectralData& spectral, const ValidatorOptions& options) {
    ValidationReport report;
    if (spectral.size() < min_decomposition_size) {
        const std::string why = "need at least " + std::to_string(min_decomposition_size) + " terms";
        report.entries = {{"eigenvalue_asymptotics", CheckStatus::fail, 0, options.thresholds.eigen, why},
                          {"norming_asymptotics", CheckStatus::fail, 0, options.thresholds.norming, why}};
        report.settle();
        return report;
    }
    const AsymptoticDecomposition dec = decompose(spectral, options.thresholds);
    report.omega = dec.omega;
    std::ostringstream omega;
    omega << "omega = " << dec.omega << "; max |n l_n| over the top quartile";
    report.entries.push_back({"eigenvalue_asymptotics", dec.eigen_decay_ok ? CheckStatus::pass : CheckStatus::fail,
                              dec.eigen_decay, options.thresholds.eigen, omega.str()});
    report.entries.push_back({"norming_asymptotics", dec.norming_decay_ok ? CheckStatus::pass : CheckStatus::fail,
                              dec.norming_decay, options.thresholds.norming, "max |n s_n| over the top quartile"});

    const VariationProxy lv = variation_proxy(dec, RemainderSeries::eigen);
    const VariationProxy sv = variation_proxy(dec, RemainderSeries::norming);
    auto describe = [](const VariationProxy& v) {
        std::ostringstream os;
        os << "total variation on [0.05, 2pi - 0.05]: " << v.full << " (half the terms: " << v.half
           << "); proxy only, absolute continuity is not decidable from finite data";
        return os.str();
    };
    report.entries.push_back({"eigenvalue_remainder_regularity", CheckStatus::diagnostic, lv.full, 0, describe(lv)});
    report.entries.push_back({"norming_remainder_regularity", CheckStatus::diagnostic, sv.full, 0, describe(sv)});
    report.settle();
    return report;
}

IdentityResidual norming_identity(std::span<const double> norming, double target, double tolerance_floor) {
    IdentityResidual out;
    const std::size_t N = norming.size();
    double sum = 1 / norming[0] - 1 / pi;
    for (std::size_t n = 1; n < N; ++n) sum += 1 / norming[n] - 2 / pi;
    out.partial_sum = sum;
    out.residual = std::abs(sum - target);

    double first_moment = 0, second_moment = 0;
    for (std::size_t n = std::max<std::size_t>(1, N - N / 4); n < N; ++n) {
        const double nn = static_cast<double>(n);
        const double dev = std::abs(norming[n] - pi / 2);
        first_moment = std::max(first_moment, nn * dev);
        second_moment = std::max(second_moment, nn * nn * dev);
    }
    out.tolerance = 10 * first_moment / static_cast<double>(N) + tolerance_floor;
    // Omitted terms behave like -(4/pi^2)(a_n - pi/2); bounded assuming the quadratic decay seen at the top.
    out.tail = N > 1 ? 4 / (pi * pi) * second_moment / static_cast<double>(N - 1) : 0.0;
    out.pass = out.residual < out.tolerance + out.tail;
    return out;
}

IdentityResidual check_alpha_identity(const SpectralData& spectral, double alpha, const ValidatorOptions& options) {
    return norming_identity(spectral.a(), std::cos(alpha) / std::sin(alpha), options.tolerance_floor);
}

IdentityResidual check_beta_identity(const SpectralData& spectral, double beta, const ValidatorOptions& options) {
    const NormingB b = b_from_a(spectral, options.product_terms);
    IdentityResidual out = norming_identity(b.b, -std::cos(beta) / std::sin(beta), options.tolerance_floor);
    for (std::size_t n = 0; n < b.b.size(); ++n) out.product_error += b.error[n] / (b.b[n] * b.b[n]);
    out.pass = out.residual < out.tolerance + out.tail + out.product_error;
    return out;
}

ValidationReport validate(const SpectralData& spectral, const BoundaryAngles& angles,
                          const ValidatorOptions& options) {
    ValidationReport report = check_hard(spectral);
    const bool hard_ok = report.overall;
    if (hard_ok) {
        const ValidationReport asym = check_asymptotics(spectral, options);
        report.omega = asym.omega;
        append(report, asym);
    }

    auto identity_entry = [&](const char* name, auto&& compute) {
        if (!hard_ok) {
            report.entries.push_back({name, CheckStatus::fail, 0, 0, "skipped: ordering or positivity failed"});
            return;
        }
        try {
            const IdentityResidual r = compute();
            std::ostringstream os;
            os << "partial sum " << r.partial_sum << ", tail estimate " << r.tail;
            if (r.product_error > 0) os << ", product truncation " << r.product_error;
            report.entries.push_back({name, r.pass ? CheckStatus::pass : CheckStatus::fail, r.residual,
                                      r.tolerance + r.tail + r.product_error, os.str()});
        } catch (const Error& e) {
            report.entries.push_back({name, CheckStatus::fail, 0, 0, e.what()});
        }
    };
    identity_entry("alpha_identity", [&] { return check_alpha_identity(spectral, angles.alpha(), options); });
    identity_entry("beta_identity", [&] { return check_beta_identity(spectral, angles.beta(), options); });
    report.settle();
    return report;
}

}  // namespace slgl
