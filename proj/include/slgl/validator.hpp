#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "slgl/series_engine.hpp"
#include "slgl/spectral_core.hpp"

namespace slgl {

enum class CheckStatus { pass, fail, diagnostic };

[[nodiscard]] const char* to_string(CheckStatus status) noexcept;

struct CheckEntry {
    std::string name;
    CheckStatus status = CheckStatus::fail;
    double value = 0;      // residual or measured statistic
    double tolerance = 0;  // threshold the value was compared against (0 for diagnostics)
    std::string detail;
};

struct ValidationReport {
    std::vector<CheckEntry> entries;
    double omega = 0;
    bool overall = false;

    [[nodiscard]] const CheckEntry* find(const std::string& name) const noexcept;
    /// Recomputes `overall` from the non-diagnostic entries.
    void settle() noexcept;
};

struct ValidatorOptions {
    DecayThresholds thresholds;
    std::size_t product_terms = 2000;
    double tolerance_floor = 1e-3;
};

struct IdentityResidual {
    double partial_sum = 0;
    double residual = 0;
    double tolerance = 0;  // calibrated from the measured decay
    double tail = 0;       // estimate of the omitted terms
    double product_error = 0;
    bool pass = false;
};

/// Strict increase of mu_n and positivity of a_n; entries "ordering" and "positivity".
[[nodiscard]] ValidationReport check_hard(const SpectralData& spectral);

/// Decay of l_n and s_n, plus the total-variation diagnostics for their series.
[[nodiscard]] ValidationReport check_asymptotics(const SpectralData& spectral, const ValidatorOptions& options = {});

/// |1/a_0 - 1/pi + sum_{n>=1} (1/a_n - 2/pi) - cot(alpha)| over the supplied terms.
[[nodiscard]] IdentityResidual check_alpha_identity(const SpectralData& spectral, double alpha,
                                                    const ValidatorOptions& options = {});

/// The same sum over b_n obtained from (mu, a) through regularized products,
/// compared with -cot(beta).
[[nodiscard]] IdentityResidual check_beta_identity(const SpectralData& spectral, double beta,
                                                   const ValidatorOptions& options = {});

/// Identity residual for an explicit norming sequence against `target`.
[[nodiscard]] IdentityResidual norming_identity(std::span<const double> norming, double target,
                                                double tolerance_floor = 1e-3);

[[nodiscard]] ValidationReport validate(const SpectralData& spectral, const BoundaryAngles& angles,
                                        const ValidatorOptions& options = {});

}  // namespace slgl
