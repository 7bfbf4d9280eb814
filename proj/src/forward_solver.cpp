#include "slgl/forward_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/tools/roots.hpp>

#include "parallel.hpp"

namespace slgl {

namespace {

struct Mat2 {
    double a, b, c, d;
};

void require_unit_interval(const GridFunction& q) {
    if (std::abs(q.lower()) > 1e-12 || std::abs(q.upper() - pi) > 1e-9) {
        throw Error(ErrorKind::invalid_argument, "potential must be sampled on [0, pi]");
    }
}

void require_points(std::size_t m) {
    if (m < 3) throw Error(ErrorKind::invalid_argument, "ODE grid needs at least 3 points");
}

double min_value(const GridFunction& q) {
    return *std::min_element(q.values().begin(), q.values().end());
}

// Rotation per step must stay well below pi for the angle unwrap and for the
// propagator accuracy to mean anything.
void require_resolved(const GridFunction& q, double mu, double h) {
    const double excess = mu - min_value(q);
    if (excess > 0 && std::sqrt(excess) * h > 2.0) {
        std::ostringstream os;
        os << "ODE grid too coarse for mu = " << mu << " (sqrt(mu - min q) * h = " << std::sqrt(excess) * h << ")";
        throw Error(ErrorKind::invalid_argument, os.str());
    }
}

// Fourth-order Magnus step over [x, x + h] for (y, y')' = [[0, 1], [q - mu, 0]] (y, y').
Mat2 magnus_step(const GridFunction& q, double mu, double x, double h) {
    static const double c1 = 0.5 - std::sqrt(3.0) / 6;
    static const double c2 = 0.5 + std::sqrt(3.0) / 6;
    static const double commutator_weight = std::sqrt(3.0) / 12;
    const double v1 = q.interpolate(x + c1 * h) - mu;
    const double v2 = q.interpolate(x + c2 * h) - mu;
    const double w11 = commutator_weight * h * h * (v1 - v2);
    const double w21 = 0.5 * h * (v1 + v2);
    const double s2 = w11 * w11 + h * w21;
    double ch, sh;
    if (s2 > 0) {
        const double s = std::sqrt(s2);
        ch = std::cosh(s);
        sh = s < 1e-8 ? 1.0 + s2 / 6 : std::sinh(s) / s;
    } else {
        const double t = std::sqrt(-s2);
        ch = std::cos(t);
        sh = t < 1e-8 ? 1.0 - (-s2) / 6 : std::sin(t) / t;
    }
    return {ch + sh * w11, sh * h, sh * w21, ch - sh * w11};
}

double grid_x(std::size_t i, std::size_t m, double h) {
    return i + 1 == m ? pi : static_cast<double>(i) * h;
}

void require_finite_trace(const SolutionTrace& t) {
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (!std::isfinite(t.y[i]) || !std::isfinite(t.yprime[i])) {
            std::ostringstream os;
            os << "solution overflow at mu = " << t.mu << "; bracket mu more tightly";
            throw Error(ErrorKind::overflow, os.str());
        }
    }
}

}  // namespace

SolutionTrace solve_phi(const GridFunction& q, double alpha, double mu, std::size_t m) {
    require_unit_interval(q);
    require_points(m);
    const double h = pi / static_cast<double>(m - 1);
    require_resolved(q, mu, h);
    SolutionTrace t{mu, h, std::vector<double>(m), std::vector<double>(m)};
    t.y[0] = 1.0;
    t.yprime[0] = -std::cos(alpha) / std::sin(alpha);
    for (std::size_t i = 0; i + 1 < m; ++i) {
        const Mat2 p = magnus_step(q, mu, grid_x(i, m, h), h);
        t.y[i + 1] = p.a * t.y[i] + p.b * t.yprime[i];
        t.yprime[i + 1] = p.c * t.y[i] + p.d * t.yprime[i];
    }
    require_finite_trace(t);
    return t;
}

SolutionTrace solve_psi(const GridFunction& q, double beta, double mu, std::size_t m) {
    require_unit_interval(q);
    require_points(m);
    const double h = pi / static_cast<double>(m - 1);
    require_resolved(q, mu, h);
    SolutionTrace t{mu, h, std::vector<double>(m), std::vector<double>(m)};
    t.y[m - 1] = 1.0;
    t.yprime[m - 1] = -std::cos(beta) / std::sin(beta);
    for (std::size_t i = m - 1; i-- > 0;) {
        // Inverse of the unimodular forward propagator on [x_i, x_{i+1}].
        const Mat2 p = magnus_step(q, mu, grid_x(i, m, h), h);
        t.y[i] = p.d * t.y[i + 1] - p.b * t.yprime[i + 1];
        t.yprime[i] = -p.c * t.y[i + 1] + p.a * t.yprime[i + 1];
    }
    require_finite_trace(t);
    return t;
}

DeltaPair characteristic_delta_pair(const GridFunction& q, const BoundaryAngles& angles, double mu,
                                    std::size_t m) {
    const SolutionTrace phi = solve_phi(q, angles.alpha(), mu, m);
    const SolutionTrace psi = solve_psi(q, angles.beta(), mu, m);
    return {phi.y.back() * angles.cot_beta() + phi.yprime.back(),
            -(psi.y.front() * angles.cot_alpha() + psi.yprime.front())};
}

double characteristic_delta(const GridFunction& q, const BoundaryAngles& angles, double mu, std::size_t m) {
    const SolutionTrace phi = solve_phi(q, angles.alpha(), mu, m);
    return phi.y.back() * angles.cot_beta() + phi.yprime.back();
}

double prufer_angle(const GridFunction& q, double alpha, double mu, std::size_t m) {
    require_unit_interval(q);
    require_points(m);
    const double h = pi / static_cast<double>(m - 1);
    require_resolved(q, mu, h);

    // The angle is tracked for (y', k y); the scale k keeps the rotation per
    // step close to uniform so that consecutive angles unwrap unambiguously.
    const double k = std::max(1.0, std::sqrt(std::abs(mu)));
    double y = 1.0;
    double p = -std::cos(alpha) / std::sin(alpha);
    double angle = std::atan2(k * y, p);
    for (std::size_t i = 0; i + 1 < m; ++i) {
        const Mat2 s = magnus_step(q, mu, grid_x(i, m, h), h);
        const double yn = s.a * y + s.b * p;
        const double pn = s.c * y + s.d * p;
        angle += std::atan2(p * k * yn - k * y * pn, p * pn + k * k * y * yn);
        const double r = std::hypot(pn, k * yn);
        y = yn / r;
        p = pn / r;
    }
    const double turns = std::floor(angle / pi);
    const double base = angle - turns * pi;
    return turns * pi + std::atan2(std::sin(base), k * std::cos(base));
}

std::size_t oscillation_count(const GridFunction& q, double alpha, double mu, std::size_t m) {
    const SolutionTrace t = solve_phi(q, alpha, mu, m);
    std::size_t changes = 0;
    for (std::size_t i = 1; i + 1 < t.size(); ++i) {
        if ((t.y[i] > 0) != (t.y[i - 1] > 0) && t.y[i - 1] != 0) ++changes;
    }
    if (t.size() >= 2 && t.y.back() != 0 && (t.y.back() > 0) != (t.y[t.size() - 2] > 0)) {
        // A sign change inside the last interval is still interior to (0, pi).
        ++changes;
    }
    return changes;
}

std::vector<double> compute_eigenvalues(const GridFunction& q, const BoundaryAngles& angles, std::size_t count,
                                        const EigenOptions& options) {
    if (count < 1) throw Error(ErrorKind::invalid_argument, "compute_eigenvalues: need N >= 1");
    const std::size_t m = options.m;
    std::vector<double> abs_q(q.values().begin(), q.values().end());
    for (double& v : abs_q) v = std::abs(v);
    const double q_l1 = integrate_trapezoid(abs_q, q.step());
    const double cots = std::abs(angles.cot_alpha()) + std::abs(angles.cot_beta());
    const double beta = angles.beta();

    // mismatch(n, mu) < 0 below the n-th eigenvalue and > 0 above it.
    auto mismatch = [&](std::size_t n, double mu) {
        return prufer_angle(q, angles.alpha(), mu, m) + beta - static_cast<double>(n + 1) * pi;
    };

    double lower = -std::pow(q_l1 + cots + 1, 2);
    double f_lower = mismatch(0, lower);
    for (int widen = 0; f_lower >= 0 && widen < 30; ++widen) {
        lower *= 2;
        f_lower = mismatch(0, lower);
    }
    if (f_lower >= 0) {
        std::ostringstream os;
        os << "compute_eigenvalues: no bracket below the ground state down to mu = " << lower
           << " (|q|_1 = " << q_l1 << ", |cot a| + |cot b| = " << cots << ")";
        throw Error(ErrorKind::internal, os.str());
    }

    // The angle carries absolute rounding of order 1e-14; Delta is accurate relative to
    // its own size, so a short bracket around the angle root is re-solved on Delta.
    auto polish = [&](double mu) {
        const double delta = 1e-9 * std::max(1.0, std::abs(mu));
        double lo = mu - delta, hi = mu + delta;
        const double f_lo = characteristic_delta(q, angles, lo, m);
        const double f_hi = characteristic_delta(q, angles, hi, m);
        if (f_lo == 0) return lo;
        if (f_hi == 0) return hi;
        if ((f_lo < 0) == (f_hi < 0)) return mu;
        auto tol = [](double a, double b) {
            return std::abs(b - a) <= 4 * std::numeric_limits<double>::epsilon() * std::max(std::abs(a), std::abs(b))
                                          + std::numeric_limits<double>::min();
        };
        boost::uintmax_t iterations = 200;
        const auto root = boost::math::tools::toms748_solve(
            [&](double x) { return characteristic_delta(q, angles, x, m); }, lo, hi, f_lo, f_hi, tol, iterations);
        return 0.5 * (root.first + root.second);
    };

    const double spread = q.max_abs() + cots + 1;
    std::vector<double> mus(count);
    detail::parallel_for(count, [&](std::size_t n) {
        const double nn = static_cast<double>(n);
        double lo = lower;
        double f_lo = f_lower - nn * pi;
        if (n > 0) {
            const double guess = (nn - 1) * (nn - 1) - spread;
            if (guess > lo) {
                const double f = mismatch(n, guess);
                if (f < 0) {
                    lo = guess;
                    f_lo = f;
                }
            }
        }
        double hi = std::max(lo + 1, (nn + 1) * (nn + 1) + spread);
        double f_hi = mismatch(n, hi);
        for (int grow = 0; f_hi <= 0; ++grow) {
            if (grow > 60) {
                throw Error(ErrorKind::internal, "compute_eigenvalues: cannot bracket eigenvalue " + std::to_string(n));
            }
            lo = hi;
            f_lo = f_hi;
            hi += std::max(1.0, std::abs(hi));
            f_hi = mismatch(n, hi);
        }
        auto tol = [](double a, double b) {
            return std::abs(b - a) <= 1e-13 * std::max({1.0, std::abs(a), std::abs(b)});
        };
        boost::uintmax_t iterations = 200;
        const auto root = boost::math::tools::toms748_solve(
            [&](double mu) { return mismatch(n, mu); }, lo, hi, f_lo, f_hi, tol, iterations);
        if (iterations >= 200) {
            throw Error(ErrorKind::internal, "compute_eigenvalues: refinement of eigenvalue " + std::to_string(n)
                                                 + " did not converge");
        }
        mus[n] = polish(0.5 * (root.first + root.second));
    });

    for (std::size_t n = 1; n < count; ++n) {
        if (!(mus[n] > mus[n - 1])) {
            throw Error(ErrorKind::internal, "compute_eigenvalues: eigenvalues not strictly increasing at n = "
                                                 + std::to_string(n));
        }
    }
    return mus;
}

NormingConstants norming_constants(const GridFunction& q, const BoundaryAngles& angles, std::span<const double> mus,
                                   std::size_t m) {
    NormingConstants out{std::vector<double>(mus.size()), std::vector<double>(mus.size())};
    detail::parallel_for(mus.size(), [&](std::size_t n) {
        const SolutionTrace phi = solve_phi(q, angles.alpha(), mus[n], m);
        // |Delta| sin(beta) / |(phi, phi')(pi)| = |sin(theta(pi) + beta)|: scale-free eigen-residual.
        const double residual = std::abs(phi.y.back() * angles.cot_beta() + phi.yprime.back()) * std::sin(angles.beta())
                                / std::hypot(phi.y.back(), phi.yprime.back());
        if (residual > 1e-6) {
            std::ostringstream os;
            os << "norming_constants: mu = " << mus[n] << " is not an eigenvalue (boundary residual " << residual
               << ")";
            throw Error(ErrorKind::invalid_argument, os.str());
        }
        const SolutionTrace psi = solve_psi(q, angles.beta(), mus[n], m);
        std::vector<double> sq(m);
        for (std::size_t i = 0; i < m; ++i) sq[i] = phi.y[i] * phi.y[i];
        out.a[n] = integrate_trapezoid(sq, phi.step);
        for (std::size_t i = 0; i < m; ++i) sq[i] = psi.y[i] * psi.y[i];
        out.b[n] = integrate_trapezoid(sq, psi.step);
    });
    return out;
}

ForwardResult forward(const GridFunction& q, const BoundaryAngles& angles, std::size_t count,
                      const ForwardOptions& options) {
    const std::vector<double> mus = compute_eigenvalues(q, angles, count, {options.m});
    NormingConstants norms = norming_constants(q, angles, mus, options.m);
    ForwardResult result{SpectralData::from_mu(mus, std::move(norms.a)), NormingB{std::move(norms.b), {}}, {}, {}};
    if (options.keep_traces) {
        for (double mu : mus) {
            result.phi.push_back(solve_phi(q, angles.alpha(), mu, options.m));
            result.psi.push_back(solve_psi(q, angles.beta(), mu, options.m));
        }
    }
    return result;
}

}  // namespace slgl
