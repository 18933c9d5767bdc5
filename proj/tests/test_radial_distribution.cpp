#include "hbm/radial_distribution.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace hbm;

// Reference values: tests/oracles/compute_oracles.py.  Tails there integrate
// the radial density with kernels built from their definitions.

TEST_CASE("normal tail") {
    CHECK(normal_tail(0.0) == 0.5);
    CHECK(normal_tail(INFINITY) == 0.0);
    CHECK(normal_tail(-INFINITY) == 1.0);
    CHECK(normal_tail(1.0) == doctest::Approx(0.15865525393145705).epsilon(1e-14));
    CHECK(normal_tail(-2.0) == doctest::Approx(0.97724986805182079).epsilon(1e-14));
    CHECK(normal_tail(5.0) == doctest::Approx(2.8665157187919391e-7).epsilon(1e-13));
    CHECK(normal_tail(10.0) == doctest::Approx(7.6198530241605261e-24).epsilon(1e-13));
    CHECK(normal_tail(30.0) == doctest::Approx(4.9067139271481871e-198).epsilon(1e-12));
}

TEST_CASE("log normal tail past the subnormal range") {
    CHECK(log_normal_tail(38.0) == doctest::Approx(-726.55721601882013).epsilon(1e-14));
    CHECK(log_normal_tail(40.0) == doctest::Approx(-804.60844201375379).epsilon(1e-14));
    CHECK(log_normal_tail(36.999) == doctest::Approx(log_normal_tail(37.001)).epsilon(1e-3));
    CHECK(std::exp(log_normal_tail(2.0)) == doctest::Approx(normal_tail(2.0)).epsilon(1e-14));
    CHECK(log_normal_tail(-40.0) == 0.0);
}

TEST_CASE("fluctuation point threshold") {
    const FluctuationPoint p{Dimension(4), 4.0, -1.0};
    CHECK(p.threshold() == doctest::Approx(-2.0 + 6.0));
    CHECK(FluctuationPoint{Dimension(4), 4.0, -3.0}.threshold() == 0.0);
    // T = 0 exactly when x <= -(d-1) sqrt(t)/2
    CHECK(FluctuationPoint{Dimension(5), 1.0, -2.0}.threshold() == 0.0);
    CHECK(FluctuationPoint{Dimension(5), 1.0, -1.999}.threshold() > 0.0);
    CHECK_THROWS_AS(FluctuationPoint({Dimension(3), 1e-4, 0.0}).validate(), std::invalid_argument);
    CHECK_THROWS_AS(FluctuationPoint({Dimension(3), 1.0, NAN}).validate(), std::invalid_argument);
}

TEST_CASE("radial density") {
    CHECK(radial_density(Dimension(3), {1.0, 0.0}) == 0.0);
    // mode of the d = 3 law near the drift line r = t
    double best_r = 0.0;
    double best = 0.0;
    for (double r = 0.05; r < 40.0; r += 0.05) {
        const double v = radial_density(Dimension(3), {20.0, r});
        if (v > best) {
            best = v;
            best_r = r;
        }
    }
    CHECK(std::fabs(best_r - 20.0) < 1.0);
    const TailEstimate mass = direct_kernel_quadrature(Dimension(3), 1.0, -10.0);
    CHECK(mass.value == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("d = 3 tail") {
    CHECK(tail_d3(1.0, 0.0).value == doctest::Approx(0.86770144583642383).epsilon(1e-13));
    CHECK(tail_d3(5.0, 1.3).value == doctest::Approx(0.1734388423148485).epsilon(1e-13));
    CHECK(tail_d3(100.0, 0.0).value == doctest::Approx(0.53989422804014327).epsilon(1e-13));
    CHECK(tail_d3(1.0, -1e6).value == 1.0);
    CHECK(tail_d3(1.0, 1e6).value == 0.0);
    CHECK(tail_d3(1.0, -INFINITY).value == 1.0);
    CHECK(tail_d3(1.0, 0.0).method == TailMethod::closed_form_d3);
    // x = 0: 1/2 + Phi(2 sqrt t) + (1 - e^{-2t}) / sqrt(2 pi t)
    const double t = 3.0;
    const double expected = 0.5 + normal_tail(2.0 * std::sqrt(t)) + -std::expm1(-2.0 * t) / std::sqrt(2.0 * std::numbers::pi * t);
    CHECK(tail_d3(t, 0.0).value == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("d = 3 closed form matches quadrature of its two integrals") {
    const QuadratureSpec spec;
    for (double t : {0.01, 1.0, 7.0, 400.0}) {
        for (double x : {-2.0, -0.5, 0.0, 0.8, 3.0}) {
            const double st = std::sqrt(t);
            const double v0 = std::max(x, -st);
            auto factor = [&](double v) { return -std::expm1(-2.0 * (t + v * st)); };
            auto i1 = [&](double v) { return std::exp(-0.5 * v * v) * factor(v); };
            auto i2 = [&](double v) { return v * std::exp(-0.5 * v * v) * factor(v) / st; };
            const double a = integrate_adaptive(i1, v0, INFINITY, spec, GaussianTail{0.0, 1.0}).value;
            const double b = integrate_adaptive(i2, v0, INFINITY, spec, GaussianTail{0.0, 1.0}).value;
            CAPTURE(t);
            CAPTURE(x);
            CHECK(tail_d3(t, x).value == doctest::Approx((a + b) / std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-9));
        }
    }
}

TEST_CASE("odd-dimensional reduction") {
    CHECK(tail_odd(Dimension(5), 2.0, 0.5).value == doctest::Approx(0.53064748252377428).epsilon(1e-11));
    CHECK(tail_odd(Dimension(7), 1.0, -0.5).value == doctest::Approx(0.92642406714150737).epsilon(1e-11));
    CHECK(tail_odd(Dimension(5), 2.0, 0.5).method == TailMethod::odd_reduction);
    // d = 3 is the plain closed form
    CHECK(tail_odd(Dimension(3), 2.0, 0.5).value == tail_d3(2.0, 0.5).value);
    // T = 0: the boundary terms vanish and only the reduced d = 3 tail remains
    const double t = 2.0;
    CHECK(tail_odd(Dimension(5), t, -2.0 * std::sqrt(t) - 0.1).value == tail_d3(4.0 * t, -2.0 * std::sqrt(t) - 0.1).value);
    CHECK_THROWS_AS(tail_odd(Dimension(4), 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("even-dimensional decomposition") {
    CHECK(tail_even(Dimension(2), 5.0, 0.3).value == doctest::Approx(0.59411586455834323).epsilon(1e-10));
    CHECK(tail_even(Dimension(2), 1.0, 0.0).value == doctest::Approx(0.89924190070444224).epsilon(1e-10));
    CHECK(tail_even(Dimension(4), 2.0, 1.0).value == doctest::Approx(0.32494731972305535).epsilon(1e-8));
    CHECK(tail_even(Dimension(4), 2.0, 1.0).method == TailMethod::even_decomposition);

    const EvenTailParts d2 = even_tail_parts(Dimension(2), 5.0, 0.3);
    CHECK(d2.boundary.is_zero());
    CHECK(d2.singular_free.is_zero());
    CHECK_FALSE(d2.zero_threshold);
    CHECK_THROWS_AS(tail_even(Dimension(5), 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("even T = 0 branch carries the whole mass") {
    for (int d : {2, 4, 6, 8}) {
        for (double t : {0.5, 3.0, 40.0}) {
            const double x = -(d / 2 - 0.5) * std::sqrt(t) - 0.5;
            const EvenTailParts parts = even_tail_parts(Dimension(d), t, x);
            CHECK(parts.zero_threshold);
            CHECK(parts.boundary.is_zero());
            CAPTURE(d);
            CAPTURE(t);
            CHECK((parts.singular_free + parts.gaussian).value() == doctest::Approx(1.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("even branches join continuously") {
    constexpr double eps = 1e-6;
    for (int d : {2, 4, 6}) {
        for (double t : {1.0, 5.0, 20.0}) {
            const double x0 = -(d / 2 - 0.5) * std::sqrt(t);
            const double below = tail(Dimension(d), t, x0 - eps).value;
            const double above = tail(Dimension(d), t, x0 + eps).value;
            const double slope = std::fabs(tail(Dimension(d), t, x0 + 1e-3).value - above) / 1e-3;
            CAPTURE(d);
            CAPTURE(t);
            CHECK(std::fabs(below - above) <= 1e-6 + slope * 2.0 * eps);
        }
    }
}

TEST_CASE("stabilized even integrand bounds") {
    for (int d : {2, 4, 6}) {
        const double c = d / 2 - 0.5;
        for (double t : {0.5, 1.0, 10.0, 500.0}) {
            for (double x : {-0.3 * c * std::sqrt(t), 0.0, 1.5}) {
                for (double u = x; u < x + 8.0; u += 0.1) {
                    const double f = even_stabilized_integrand(Dimension(d), t, x, u);
                    // (1 + e^{-2y})^{n-1/2} <= 2^{n-1/2} and the cosh ratio factor is <= 1
                    const double bound = (1.0 + std::fabs(u) / (c * std::sqrt(t))) * std::exp(-0.5 * u * u) * std::pow(2.0, c);
                    CHECK(f >= 0.0);
                    CHECK(f <= bound * (1.0 + 1e-12));
                    if (c * std::sqrt(t) >= 1.0) {
                        CHECK(f <= (1.0 + std::fabs(u)) * std::exp(-0.5 * u * u) * std::pow(2.0, c) * (1.0 + 1e-12));
                    }
                }
            }
        }
    }
    CHECK_THROWS_AS(even_stabilized_integrand(Dimension(4), 1.0, -5.0, 0.0), std::domain_error);
}

TEST_CASE("reductions agree with direct quadrature") {
    for (int d = 2; d <= 7; ++d) {
        const double tol = (d % 2 == 0 && d >= 4) ? 1e-4 : 1e-5;
        for (double t : {1.0, 5.0}) {
            for (double x : {-1.0, 0.0, 1.0}) {
                CAPTURE(d);
                CAPTURE(t);
                CAPTURE(x);
                const TailEstimate a = tail(Dimension(d), t, x);
                const TailEstimate b = direct_kernel_quadrature(Dimension(d), t, x);
                CHECK(b.method == TailMethod::direct_kernel_quadrature);
                CHECK(std::fabs(a.value - b.value) <= tol);
            }
        }
    }
    CHECK_THROWS_AS(direct_kernel_quadrature(Dimension(8), 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(direct_kernel_quadrature(Dimension(3), 51.0, 0.0), std::invalid_argument);
}

TEST_CASE("tails are bounded, monotone and reach 1 at T = 0") {
    for (int d = 2; d <= 7; ++d) {
        for (double t : {1.0, 10.0, 100.0}) {
            CHECK(tail(Dimension(d), t, -0.5 * (d - 1) * std::sqrt(t) - 10.0).value >= 1.0 - 1e-8);
            CHECK(tail(Dimension(d), t, -INFINITY).value == 1.0);
            CHECK(tail(Dimension(d), t, INFINITY).value == 0.0);
            TailEstimate prev = tail(Dimension(d), t, -5.0);
            for (double x = -4.75; x <= 5.0; x += 0.25) {
                const TailEstimate cur = tail(Dimension(d), t, x);
                CAPTURE(d);
                CAPTURE(t);
                CAPTURE(x);
                CHECK(cur.value >= 0.0);
                CHECK(cur.value <= 1.0);
                CHECK(cur.error_estimate >= 0.0);
                CHECK(cur.value <= prev.value + 2.0 * (cur.error_estimate + prev.error_estimate));
                prev = cur;
            }
        }
    }
}

TEST_CASE("central limit behaviour") {
    CHECK(std::fabs(tail(Dimension(3), 1e4, 1.0).value - normal_tail(1.0)) <= 2e-2);
    for (int d : {2, 3, 4, 5}) {
        for (double x : {-2.0, -0.5, 0.0, 1.0, 2.5}) {
            double prev = INFINITY;
            for (double t : {10.0, 100.0, 1000.0, 10000.0}) {
                const double err = std::fabs(tail(Dimension(d), t, x).value - normal_tail(x));
                CAPTURE(d);
                CAPTURE(x);
                CAPTURE(t);
                CHECK(err <= 1.1 * prev);
                prev = err;
            }
        }
    }
}

TEST_CASE("method names") {
    CHECK(to_string(TailMethod::closed_form_d3) == "closed_form_d3");
    CHECK(to_string(TailMethod::monte_carlo) == "monte_carlo");
    CHECK(to_string(tail(Dimension(6), 2.0, 0.0).method) == "even_decomposition");
}
