#include "slgl/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace slgl {

namespace {

[[noreturn]] void input_error(const std::string& what) { throw Error(ErrorKind::input, what); }

std::vector<double> real_array(const Json& doc, const char* key) {
    if (!doc.contains(key)) input_error(std::string("missing field \"") + key + "\"");
    const Json& arr = doc.at(key);
    if (!arr.is_array()) input_error(std::string("field \"") + key + "\" is not an array");
    std::vector<double> out;
    out.reserve(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i) {
        if (!arr[i].is_number()) input_error(std::string(key) + "[" + std::to_string(i) + "] is not a number");
        out.push_back(arr[i].get<double>());
    }
    return out;
}

Json real_array_json(std::span<const double> v) {
    Json arr = Json::array();
    for (double x : v) arr.push_back(x);
    return arr;
}

void dump(const Json& v, int depth, std::string& out) {
    const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
    const std::string close(static_cast<std::size_t>(2 * depth), ' ');
    switch (v.type()) {
        case Json::value_t::object: {
            if (v.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (const auto& [key, item] : v.items()) {
                if (!first) out += ",\n";
                first = false;
                out += pad + Json(key).dump() + ": ";
                dump(item, depth + 1, out);
            }
            out += "\n" + close + "}";
            return;
        }
        case Json::value_t::array: {
            if (v.empty()) {
                out += "[]";
                return;
            }
            out += "[\n";
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (i) out += ",\n";
                out += pad;
                dump(v[i], depth + 1, out);
            }
            out += "\n" + close + "]";
            return;
        }
        case Json::value_t::number_float: out += format_real(v.get<double>()); return;
        default: out += v.dump(); return;
    }
}

}  // namespace

std::string format_real(double v) {
    if (!std::isfinite(v)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    std::string s(buf);
    if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
    return s;
}

std::string dump_json(const Json& value) {
    std::string out;
    dump(value, 0, out);
    out += "\n";
    return out;
}

SpectralFile parse_spectral_json(const std::string& text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::parse_error& e) {
        input_error(std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) input_error("spectral data must be a JSON object");
    std::vector<double> lambda = real_array(doc, "lambda");
    std::vector<double> a = real_array(doc, "a");
    if (lambda.size() != a.size()) {
        input_error("\"lambda\" has " + std::to_string(lambda.size()) + " entries but \"a\" has "
                    + std::to_string(a.size()));
    }
    if (lambda.empty()) input_error("spectral data is empty");
    if (doc.contains("N")) {
        const Json& N = doc.at("N");
        if (!N.is_number_integer() || N.get<long long>() != static_cast<long long>(lambda.size())) {
            input_error("\"N\" does not match the array lengths");
        }
    } else {
        input_error("missing field \"N\"");
    }
    std::optional<std::vector<double>> b;
    if (doc.contains("b")) {
        b = real_array(doc, "b");
        if (b->size() != lambda.size()) input_error("\"b\" length does not match \"lambda\"");
    }
    try {
        return {SpectralData(std::move(lambda), std::move(a)), std::move(b)};
    } catch (const Error& e) {
        input_error(e.what());
    }
}

SpectralFile read_spectral_json(const std::filesystem::path& path) {
    try {
        return parse_spectral_json(read_text(path));
    } catch (const Error& e) {
        throw Error(ErrorKind::input, path.string() + ": " + e.what());
    }
}

Json spectral_to_json(const SpectralData& data, const std::vector<double>* b) {
    Json doc = Json::object();
    doc["N"] = data.size();
    doc["lambda"] = real_array_json(data.lambda());
    doc["a"] = real_array_json(data.a());
    if (b) doc["b"] = real_array_json(*b);
    return doc;
}

GridFunction parse_grid_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<double> xs, vs;
    std::size_t lineno = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!header) {
            if (line.rfind("x,", 0) != 0) input_error("CSV line 1: expected header \"x,value\"");
            header = true;
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) input_error("CSV line " + std::to_string(lineno) + ": expected two columns");
        auto parse = [&](std::string_view field) {
            while (!field.empty() && field.front() == ' ') field.remove_prefix(1);
            while (!field.empty() && field.back() == ' ') field.remove_suffix(1);
            double v = 0;
            const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
            if (ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(v)) {
                input_error("CSV line " + std::to_string(lineno) + ": not a finite number");
            }
            return v;
        };
        const std::string_view view(line);
        xs.push_back(parse(view.substr(0, comma)));
        vs.push_back(parse(view.substr(comma + 1)));
    }
    if (!header) input_error("CSV is empty");
    if (xs.size() < 2) input_error("CSV needs at least two rows");
    const double lower = xs.front();
    const double upper = xs.back();
    if (!(upper > lower)) input_error("CSV grid must be increasing");
    const double h = (upper - lower) / static_cast<double>(xs.size() - 1);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (std::abs(xs[i] - (lower + static_cast<double>(i) * h)) > 1e-8 * (upper - lower)) {
            input_error("CSV grid is not uniform at row " + std::to_string(i + 1));
        }
    }
    return GridFunction(lower, upper, std::move(vs));
}

GridFunction read_grid_csv(const std::filesystem::path& path) {
    try {
        return parse_grid_csv(read_text(path));
    } catch (const Error& e) {
        throw Error(ErrorKind::input, path.string() + ": " + e.what());
    }
}

std::string grid_to_csv(const GridFunction& f) {
    std::string out = "x,value\n";
    for (std::size_t i = 0; i < f.size(); ++i) out += format_real(f.x(i)) + "," + format_real(f[i]) + "\n";
    return out;
}

Json report_to_json(const ValidationReport& report) {
    Json checks = Json::object();
    for (const auto& e : report.entries) {
        Json entry = Json::object();
        entry["status"] = to_string(e.status);
        entry["value"] = e.value;
        entry["tolerance"] = e.tolerance;
        entry["detail"] = e.detail;
        checks[e.name] = entry;
    }
    Json doc = Json::object();
    doc["checks"] = checks;
    doc["omega"] = report.omega;
    doc["overall"] = report.overall ? "pass" : "fail";
    return doc;
}

Json inverse_to_json(const InverseResult& result, const std::string& q_csv) {
    Json doc = Json::object();
    doc["alpha"] = result.alpha;
    doc["beta"] = result.beta;
    doc["q_csv"] = q_csv;
    doc["residual"] = result.residual;
    doc["beta_spread"] = result.beta_spread;
    doc["condition"] = result.condition;
    doc["origin_converged"] = result.origin_converged;
    if (result.alpha_deviation) doc["alpha_deviation"] = *result.alpha_deviation;
    if (result.beta_deviation) doc["beta_deviation"] = *result.beta_deviation;
    return doc;
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::input, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::input, "cannot write " + path.string());
    out << text;
    if (!out) throw Error(ErrorKind::input, "write failed for " + path.string());
}

}  // namespace slgl
