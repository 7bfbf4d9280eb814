#include <doctest.h>

#include <cmath>
#include <random>

#include "slgl/io.hpp"

using namespace slgl;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an exception");
    return ErrorKind::internal;
}

}  // namespace

TEST_CASE("spectral JSON round-trips bit for bit") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1e3, 1e3);
    std::vector<double> lambda(25), a(25), b(25);
    for (std::size_t n = 0; n < 25; ++n) {
        lambda[n] = u(rng);
        a[n] = std::abs(u(rng)) * 1e-7;
        b[n] = u(rng) * 1e12;
    }
    const SpectralData d(lambda, a);
    const std::string text = dump_json(spectral_to_json(d, &b));
    const SpectralFile back = parse_spectral_json(text);
    for (std::size_t n = 0; n < 25; ++n) {
        CHECK(back.data.lambda(n) == lambda[n]);
        CHECK(back.data.a(n) == a[n]);
        CHECK((*back.b)[n] == b[n]);
    }
    CHECK(dump_json(spectral_to_json(back.data, &*back.b)) == text);
}

TEST_CASE("reals are printed with 17 significant digits") {
    CHECK(format_real(0.1) == "0.10000000000000001");
    CHECK(format_real(1.0) == "1.0");
    CHECK(format_real(-1.0 / 3) == "-0.33333333333333331");
    CHECK(std::stod(format_real(-2.5e-300)) == -2.5e-300);
    CHECK(format_real(std::nan("")) == "null");
}

TEST_CASE("schema violations are input errors") {
    CHECK(kind_of([] { (void)parse_spectral_json(R"({"N": 2, "lambda": [0, 1], "a": [1]})"); }) == ErrorKind::input);
    CHECK(kind_of([] { (void)parse_spectral_json(R"({"N": 3, "lambda": [0, 1], "a": [1, 1]})"); }) == ErrorKind::input);
    CHECK(kind_of([] { (void)parse_spectral_json(R"({"lambda": [0, 1], "a": [1, 1]})"); }) == ErrorKind::input);
    CHECK(kind_of([] { (void)parse_spectral_json(R"({"N": 1, "lambda": ["x"], "a": [1]})"); }) == ErrorKind::input);
    CHECK(kind_of([] { (void)parse_spectral_json("{not json"); }) == ErrorKind::input);
    CHECK(kind_of([] { (void)parse_spectral_json("[1, 2]"); }) == ErrorKind::input);
    CHECK(kind_of([] { (void)parse_spectral_json(R"({"N": 0, "lambda": [], "a": []})"); }) == ErrorKind::input);
    CHECK(kind_of([] { (void)read_spectral_json("/nonexistent/file.json"); }) == ErrorKind::input);
    const SpectralFile ok = parse_spectral_json(R"({"N": 2, "lambda": [0, 1], "a": [3.14, 1.57]})");
    CHECK(ok.data.size() == 2);
    CHECK_FALSE(ok.b.has_value());
}

TEST_CASE("grid CSV round-trips and checks its shape") {
    const auto f = GridFunction::sample(0.0, pi, 33, [](double x) { return std::sin(3 * x) / 7; });
    const GridFunction back = parse_grid_csv(grid_to_csv(f));
    CHECK(back.size() == f.size());
    CHECK(back.upper() == pi);
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(back[i] == f[i]);
    CHECK(grid_to_csv(f).rfind("x,value\n", 0) == 0);

    CHECK(kind_of([] { (void)parse_grid_csv("0,1\n1,2\n"); }) == ErrorKind::input);
    CHECK(kind_of([] { (void)parse_grid_csv("x,value\n0,1\n1,2\n3,4\n"); }) == ErrorKind::input);
    CHECK(kind_of([] { (void)parse_grid_csv("x,value\n0,1\n1,abc\n"); }) == ErrorKind::input);
    CHECK(kind_of([] { (void)parse_grid_csv("x,value\n0,1\n"); }) == ErrorKind::input);
    CHECK(parse_grid_csv("x,value\r\n0,1\r\n0.5,2\r\n1,3\r\n").size() == 3);
}

TEST_CASE("report JSON uses stable names") {
    ValidationReport r;
    r.entries = {{"ordering", CheckStatus::pass, 0, 0, ""}, {"alpha_identity", CheckStatus::fail, 0.5, 0.1, "d"}};
    r.settle();
    const Json j = report_to_json(r);
    CHECK(j["overall"] == "fail");
    CHECK(j["checks"]["alpha_identity"]["status"] == "fail");
    CHECK(j["checks"]["alpha_identity"]["value"] == 0.5);
    CHECK(j["checks"]["ordering"]["status"] == "pass");
    CHECK(dump_json(j) == dump_json(report_to_json(r)));
}
