#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "lcpoly/quadrature.hpp"

using namespace lcpoly;

TEST_SUITE("quadrature") {
    TEST_CASE("simpson integrates smooth and singular integrands") {
        const auto r = integrate_simpson([](double t) { return std::exp(-t * t / 2); }, -10, 10, 1e-12);
        CHECK(r.converged);
        CHECK(r.value == doctest::Approx(std::sqrt(2 * std::numbers::pi)).epsilon(1e-11));
        // ∫_0^1 t^{-1/2} = 2, with the endpoint value non-finite.
        const auto s = integrate_simpson([](double t) { return 1.0 / std::sqrt(t); }, 0, 1, 1e-7);
        CHECK(s.value == doctest::Approx(2.0).epsilon(1e-5));
    }

    TEST_CASE("gauss-kronrod is exact on low-degree polynomials") {
        const auto r = integrate_gk15([](double t) { return t * t * t * t - 2 * t; }, 0, 1, 1e-15);
        CHECK(r.value == doctest::Approx(0.2 - 1.0).epsilon(1e-15));
        const auto c = integrate_gk15([](double t) { return std::cos(t); }, 0, std::numbers::pi / 2, 1e-14);
        CHECK(c.value == doctest::Approx(1.0).epsilon(1e-13));
    }

    TEST_CASE("golden section finds interior and boundary maxima") {
        const auto m = golden_section_max([](double t) { return -(t - 0.3) * (t - 0.3); }, -1, 1);
        CHECK(m.argmax == doctest::Approx(0.3).epsilon(1e-8));
        const auto b = golden_section_max([](double t) { return t; }, -1, 2);
        CHECK(b.argmax == 2.0);
        CHECK(b.value == 2.0);
    }

    TEST_CASE("nested box and ball integrals") {
        const std::vector<double> lo{0.0, 0.0};
        const std::vector<double> hi{1.0, 2.0};
        const double box = integrate_box([](std::span<const double> x) { return x[0] * x[1]; }, lo, hi, 1e-12);
        CHECK(box == doctest::Approx(1.0).epsilon(1e-12));
        const double disk = integrate_ball([](std::span<const double>) { return 1.0; }, 2, 1.0, 1e-9);
        CHECK(disk == doctest::Approx(std::numbers::pi).epsilon(1e-7));
        const double ball3 = integrate_ball([](std::span<const double>) { return 1.0; }, 3, 2.0, 1e-9);
        CHECK(ball3 == doctest::Approx(4.0 / 3.0 * std::numbers::pi * 8.0).epsilon(1e-6));
    }
}
