#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "slgl/gl_inverse.hpp"
#include "slgl/spectral_core.hpp"
#include "slgl/validator.hpp"

namespace slgl {

using Json = nlohmann::json;

struct SpectralFile {
    SpectralData data;
    std::optional<std::vector<double>> b;
};

/// {"N": int, "lambda": [...], "a": [...]} with an optional "b": [...].
/// Schema violations throw Error with kind input.
[[nodiscard]] SpectralFile parse_spectral_json(const std::string& text);
[[nodiscard]] SpectralFile read_spectral_json(const std::filesystem::path& path);
[[nodiscard]] Json spectral_to_json(const SpectralData& data, const std::vector<double>* b = nullptr);

/// Two columns x,value after a header line; x must be a uniform grid.
[[nodiscard]] GridFunction parse_grid_csv(const std::string& text);
[[nodiscard]] GridFunction read_grid_csv(const std::filesystem::path& path);
[[nodiscard]] std::string grid_to_csv(const GridFunction& f);

/// Reals at 17 significant digits, object keys sorted, two-space indent.
[[nodiscard]] std::string dump_json(const Json& value);
[[nodiscard]] std::string format_real(double v);

[[nodiscard]] Json report_to_json(const ValidationReport& report);
[[nodiscard]] Json inverse_to_json(const InverseResult& result, const std::string& q_csv);

[[nodiscard]] std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace slgl
