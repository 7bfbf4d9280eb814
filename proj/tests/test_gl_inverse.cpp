#include <doctest.h>

#include <cmath>

#include "slgl/forward_solver.hpp"
#include "slgl/gl_inverse.hpp"

using namespace slgl;

namespace {

SpectralData a0_perturbed(std::size_t N, double c) {
    std::vector<double> lambda(N), a(N);
    for (std::size_t n = 0; n < N; ++n) {
        lambda[n] = static_cast<double>(n);
        a[n] = unperturbed_norming(n);
    }
    a[0] = pi / (1 + pi * c);
    return {lambda, a};
}

TriangularKernel constant_kernel(std::size_t m, double c) {
    TriangularKernel F(m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j <= i; ++j) F(i, j) = c;
    }
    return F;
}

}  // namespace

TEST_CASE("zero kernel gives zero transformation kernel") {
    const GlSolution s = solve_gl(TriangularKernel(51));
    CHECK(s.G.max_abs() == 0.0);
    CHECK(s.residual == 0.0);
    CHECK(recover_alpha(s.G(0, 0)) == doctest::Approx(pi / 2));
    CHECK(recover_potential(s.G).max_abs() == 0.0);
}

TEST_CASE("constant kernel has the discrete solution -c/(1 + c x)") {
    for (double c : {0.5, -0.2, 2.0}) {
        CAPTURE(c);
        const std::size_t m = 121;
        const GlSolution s = solve_gl(constant_kernel(m, c));
        CHECK(s.residual < 1e-12);
        for (std::size_t i = 0; i < m; ++i) {
            const double expect = -c / (1 + c * s.G.x(i));
            for (std::size_t j = 0; j <= i; ++j) CHECK(std::abs(s.G(i, j) - expect) < 1e-12);
        }
    }
}

TEST_CASE("row residual is small for a generic symmetric kernel") {
    const std::size_t m = 81;
    TriangularKernel F(m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j <= i; ++j) F(i, j) = 0.3 * std::cos(F.x(i) - 2 * F.x(j)) * std::cos(2 * F.x(i) - F.x(j));
    }
    for (std::size_t i : {0, 1, 40, 80}) {
        const GlRow row = solve_gl_row(F, i);
        CHECK(row.g.size() == i + 1);
        CHECK(row.residual < 1e-12);
        CHECK(row.condition >= 1.0);
    }
}

TEST_CASE("singular discrete operator is reported as ill-posed") {
    try {
        (void)solve_gl(constant_kernel(41, -1 / pi));
        FAIL("expected an exception");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ill_posed);
    }
}

TEST_CASE("potential is twice the derivative of the diagonal") {
    const std::size_t m = 201;
    TriangularKernel G(m);
    for (std::size_t i = 0; i < m; ++i) G(i, i) = 0.5 * std::sin(G.x(i));
    const GridFunction q = recover_potential(G);
    for (std::size_t i = 0; i < m; ++i) CHECK(std::abs(q[i] - std::cos(q.x(i))) < 2e-4);
}

TEST_CASE("build_phi with zero kernel is cos(lambda x)") {
    const TriangularKernel G(101);
    for (double lambda : {0.0, 1.0, 3.5, -0.7}) {
        const SolutionTrace phi = build_phi(G, lambda);
        for (std::size_t i = 0; i < phi.size(); i += 10) {
            CHECK(phi.y[i] == doctest::Approx(cos_lambda(lambda, phi.x(i))));
            const double d = lambda >= 0 ? -lambda * std::sin(lambda * phi.x(i))
                                         : -lambda * std::sinh(-lambda * phi.x(i));
            // Fourth-order stencils: error about h^4 |lambda|^5 / 30 at the one-sided ends.
            const double h = G.step();
            CHECK(std::abs(phi.yprime[i] - d) < 1e-10 + h * h * h * h * std::pow(std::abs(lambda), 5));
        }
    }
}

TEST_CASE("b from a on Neumann data is pi, pi/2, ...") {
    std::vector<double> lambda(40), a(40);
    for (std::size_t n = 0; n < 40; ++n) {
        lambda[n] = static_cast<double>(n);
        a[n] = unperturbed_norming(n);
    }
    const NormingB b = b_from_a(SpectralData(lambda, a));
    for (std::size_t n = 0; n < 40; ++n) CHECK(b.b[n] == doctest::Approx(unperturbed_norming(n)).epsilon(1e-10));
    const NormingB small = b_from_a(SpectralData({0.0, 1.0, 2.0, 3.0, 4.0}, {pi, pi / 2, pi / 2, pi / 2, pi / 2}));
    for (std::size_t n = 0; n < 5; ++n) CHECK(small.b[n] == doctest::Approx(unperturbed_norming(n)).epsilon(1e-10));
}

TEST_CASE("b from a matches directly integrated b for cos 2x") {
    const auto q = GridFunction::sample(0.0, pi, 8001, [](double x) { return std::cos(2 * x); });
    for (const auto& [alpha, beta] : {std::pair{pi / 2, pi / 2}, std::pair{pi / 3, 2 * pi / 3}}) {
        const ForwardResult fr = forward(q, BoundaryAngles(alpha, beta), 64);
        const NormingB b = b_from_a(fr.spectral, 2000);
        for (std::size_t n = 0; n <= 8; ++n) {
            CAPTURE(n);
            CHECK(std::abs(b.b[n] / fr.b.b[n] - 1) < 1e-3);
        }
    }
}

TEST_CASE("degenerate kernel inverse recovers the closed-form potential") {
    const double c = 0.5;
    const InverseResult r = inverse_solve(a0_perturbed(64, c), {201, {}, std::nullopt, std::nullopt});
    CHECK(r.residual < 1e-8);
    CHECK(r.alpha == doctest::Approx(arccot(c)).epsilon(1e-10));
    CHECK(std::abs(r.beta - arccot(c / (1 + c * pi))) < 1e-3);
    for (std::size_t i = 1; i + 1 < r.q.size(); ++i) {
        const double x = r.q.x(i);
        CHECK(std::abs(r.q[i] - 2 * c * c / ((1 + c * x) * (1 + c * x))) < 1e-4);
    }
    CHECK(r.origin_converged);
}

TEST_CASE("inverse of Neumann data is the zero potential") {
    const InverseResult r = inverse_solve(a0_perturbed(32, 0.0), {101, {}, pi / 2, pi / 2});
    CHECK(r.q.max_abs() < 1e-12);
    CHECK(*r.alpha_deviation == doctest::Approx(0.0).scale(1));
    CHECK(std::abs(*r.beta_deviation) < 1e-9);
}

TEST_CASE("inverse rejects inadmissible data with a stage tag") {
    SpectralData good = a0_perturbed(20, 0.1);
    std::vector<double> lambda(good.lambda().begin(), good.lambda().end());
    std::vector<double> a(good.a().begin(), good.a().end());
    a[4] = -1;
    try {
        (void)inverse_solve(SpectralData(lambda, a));
        FAIL("expected an exception");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::invalid_argument);
        CHECK(std::string(e.what()).rfind("input:", 0) == 0);
    }
    a[4] = pi / 2;
    std::swap(lambda[3], lambda[4]);
    CHECK_THROWS_AS((void)inverse_solve(SpectralData(lambda, a)), Error);
    CHECK_THROWS_AS((void)inverse_solve(a0_perturbed(10, 0.1)), Error);
}
