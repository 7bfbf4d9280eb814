#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <string>

#include "slgl/io.hpp"

using namespace slgl;
namespace fs = std::filesystem;

namespace {

const fs::path work = fs::path(SLGL_WORK_DIR);

int run(const std::string& args) {
    fs::create_directories(work);
    const std::string cmd = std::string("cd '") + work.string() + "' && '" + SLGL_CLI + "' " + args
                            + " 2> '" + (work / "stderr.txt").string() + "'";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Json load(const std::string& name) { return Json::parse(read_text(work / name)); }

void write_spectral(const std::string& name, const std::vector<double>& lambda, const std::vector<double>& a) {
    fs::create_directories(work);
    write_text(work / name, dump_json(spectral_to_json(SpectralData(lambda, a))));
}

std::pair<std::vector<double>, std::vector<double>> neumann(std::size_t N, double c = 0) {
    std::vector<double> lambda(N), a(N);
    for (std::size_t n = 0; n < N; ++n) {
        lambda[n] = static_cast<double>(n);
        a[n] = n == 0 ? pi / (1 + pi * c) : pi / 2;
    }
    return {lambda, a};
}

}  // namespace

TEST_CASE("forward on the zero potential gives the Neumann spectrum") {
    REQUIRE(run("forward --q zero --alpha 1.5707963 --beta 1.5707963 --N 5 --out zero.json") == 0);
    const Json j = load("zero.json");
    CHECK(j["N"] == 5);
    for (std::size_t n = 0; n < 5; ++n) {
        CHECK(std::abs(j["lambda"][n].get<double>() - static_cast<double>(n)) < 1e-6);
        CHECK(std::abs(j["a"][n].get<double>() - (n == 0 ? pi : pi / 2)) < 1e-6);
    }
}

TEST_CASE("forward on a constant potential shifts mu") {
    REQUIRE(run("forward --q const:1 --N 3 --out const.json") == 0);
    const SpectralFile f = read_spectral_json(work / "const.json");
    const double expect[] = {1, 2, 5};
    for (std::size_t n = 0; n < 3; ++n) CHECK(std::abs(f.data.mu(n) - expect[n]) < 1e-9);
}

TEST_CASE("forward on cos 2x matches the stored finite-difference reference") {
    REQUIRE(run("forward --q cos2x --N 8 --out cos2x.json") == 0);
    const SpectralFile f = read_spectral_json(work / "cos2x.json");
    const Json ref = Json::parse(read_text(fs::path(SLGL_FIXTURES) / "cos2x_neumann_N8.json"));
    for (std::size_t n = 0; n < 8; ++n) CHECK(std::abs(f.data.mu(n) - ref["mu"][n].get<double>()) < 1e-5);
}

TEST_CASE("angles in degrees are converted") {
    REQUIRE(run("forward --q zero --alpha 60 --beta 120 --degrees --N 4 --out deg.json") == 0);
    REQUIRE(run("forward --q zero --alpha 1.0471975511965976 --beta 2.0943951023931953 --N 4 --out rad.json") == 0);
    CHECK(read_text(work / "deg.json") == read_text(work / "rad.json"));
}

TEST_CASE("outputs are byte-identical across runs") {
    REQUIRE(run("forward --q cos2x --N 20 --alpha 1 --beta 2 --out det1.json") == 0);
    REQUIRE(run("forward --q cos2x --N 20 --alpha 1 --beta 2 --out det2.json") == 0);
    CHECK(read_text(work / "det1.json") == read_text(work / "det2.json"));
}

TEST_CASE("inverse on Neumann data recovers q = 0 and right angles") {
    const auto [lambda, a] = neumann(32);
    write_spectral("neumann.json", lambda, a);
    REQUIRE(run("inverse --in neumann.json --m 101 --q-out neumann_q.csv --out neumann_inv.json "
                "--expect-alpha 1.5707963267948966 --expect-beta 1.5707963267948966") == 0);
    const Json j = load("neumann_inv.json");
    CHECK(std::abs(j["alpha"].get<double>() - pi / 2) < 1e-9);
    CHECK(std::abs(j["beta"].get<double>() - pi / 2) < 1e-6);
    CHECK(j["q_csv"] == "neumann_q.csv");
    CHECK(read_grid_csv(work / "neumann_q.csv").max_abs() < 1e-12);
}

TEST_CASE("inverse on a0-perturbed data matches the closed-form potential") {
    const double c = 0.5;
    const auto [lambda, a] = neumann(64, c);
    write_spectral("a0.json", lambda, a);
    REQUIRE(run("inverse --in a0.json --m 201 --q-out a0_q.csv --out a0_inv.json --a-csv a0_a.csv --F-csv a0_F.csv")
            == 0);
    const GridFunction q = read_grid_csv(work / "a0_q.csv");
    for (std::size_t i = 1; i + 1 < q.size(); ++i) {
        CHECK(std::abs(q[i] - 2 * c * c / std::pow(1 + c * q.x(i), 2)) < 1e-4);
    }
    const GridFunction acurve = read_grid_csv(work / "a0_a.csv");
    CHECK(acurve.upper() == doctest::Approx(2 * pi));
    for (std::size_t k = 0; k < acurve.size(); k += 37) CHECK(acurve[k] == doctest::Approx(c));
    CHECK(fs::file_size(work / "a0_F.csv") > 0);
}

TEST_CASE("inverse refuses unordered data with the validation exit code") {
    write_spectral("unordered.json", {0, 2, 1, 3}, {pi, pi / 2, pi / 2, pi / 2});
    CHECK(run("inverse --in unordered.json --out x.json") == 3);
}

TEST_CASE("validate verdict drives the exit code") {
    REQUIRE(run("forward --q cos2x --alpha 1.0471975511965976 --beta 2.0943951023931953 --N 64 --out v.json") == 0);
    CHECK(run("validate --in v.json --alpha 1.0471975511965976 --beta 2.0943951023931953 --out report.json") == 0);
    const Json good = load("report.json");
    CHECK(good["overall"] == "pass");
    for (const char* name : {"ordering", "positivity", "eigenvalue_asymptotics", "norming_asymptotics",
                             "alpha_identity", "beta_identity", "eigenvalue_remainder_regularity",
                             "norming_remainder_regularity"}) {
        CHECK(good["checks"].contains(name));
    }
    CHECK(run("validate --in v.json --alpha 1.0471975511965976 --beta 2.3943951023931953 --out bad.json") == 3);
    CHECK(load("bad.json")["checks"]["beta_identity"]["status"] == "fail");
}

TEST_CASE("bconvert on Neumann data gives pi, pi/2, ...") {
    const auto [lambda, a] = neumann(20);
    write_spectral("bc.json", lambda, a);
    REQUIRE(run("bconvert --in bc.json --out bc_out.json") == 0);
    const Json j = load("bc_out.json");
    for (std::size_t n = 0; n < 20; ++n) CHECK(std::abs(j["b"][n].get<double>() - (n ? pi / 2 : pi)) < 1e-3);
}

TEST_CASE("bconvert on forward cos 2x data matches the integrated b") {
    REQUIRE(run("forward --q cos2x --alpha 1.0471975511965976 --beta 2.0943951023931953 --N 64 --out bf.json") == 0);
    REQUIRE(run("bconvert --in bf.json --out bf_out.json") == 0);
    const Json direct = load("bf.json"), converted = load("bf_out.json");
    for (std::size_t n = 0; n <= 8; ++n) {
        CHECK(std::abs(converted["b"][n].get<double>() / direct["b"][n].get<double>() - 1) < 1e-3);
    }
}

TEST_CASE("input errors exit with code 2") {
    fs::create_directories(work);
    write_text(work / "mismatch.json", R"({"N": 3, "lambda": [0, 1, 2], "a": [3.14, 1.57]})");
    CHECK(run("bconvert --in mismatch.json") == 2);
    CHECK(run("validate --in missing.json") == 2);
    CHECK(run("forward --q wobble --N 3") == 2);
    CHECK(run("forward --q const:abc --N 3") == 2);
    CHECK(run("forward --q zero --N 0") == 2);
    CHECK(run("forward --q zero --alpha 4 --N 3") == 2);
    CHECK(run("bconvert --in mismatch.json --K 10") == 2);
    CHECK(run("") == 2);
}

TEST_CASE("undersized requests are input errors") {
    CHECK(run("forward --q zero --N 400 --ode-m 101") == 2);
    write_text(work / "short.json", dump_json(spectral_to_json(SpectralData({0, 1, 2}, {pi, pi / 2, pi / 2}))));
    CHECK(run("inverse --in short.json") == 2);
}

TEST_CASE("file potentials round-trip through the CLI") {
    const auto q = GridFunction::sample(0.0, pi, 2001, [](double x) { return std::cos(2 * x); });
    write_text(work / "q_in.csv", grid_to_csv(q));
    REQUIRE(run("forward --q file:q_in.csv --N 8 --out file.json") == 0);
    REQUIRE(run("forward --q cos2x --N 8 --out named.json") == 0);
    const SpectralFile a = read_spectral_json(work / "file.json"), b = read_spectral_json(work / "named.json");
    for (std::size_t n = 0; n < 8; ++n) CHECK(std::abs(a.data.mu(n) - b.data.mu(n)) < 1e-5);
}

TEST_CASE("round trips through the CLI") {
    REQUIRE(run("roundtrip --q zero --N 32 --m 201 --out rt_zero.json") == 0);
    CHECK(load("rt_zero.json")["q_max_error"].get<double>() < 1e-3);
    REQUIRE(run("roundtrip --q const:1 --N 64 --m 201 --out rt_const.json") == 0);
    CHECK(load("rt_const.json")["q_max_error"].get<double>() < 0.02);
    REQUIRE(run("roundtrip --q cos2x --N 100 --m 401 --out rt_cos.json") == 0);
    CHECK(load("rt_cos.json")["q_max_error"].get<double>() < 0.05);
}
