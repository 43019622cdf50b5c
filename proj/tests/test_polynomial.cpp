#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "lcpoly/error.hpp"
#include "lcpoly/parser.hpp"
#include "lcpoly/polynomial.hpp"
#include "lcpoly/rng.hpp"

using namespace lcpoly;

namespace {

std::vector<double> random_point(RandomStream& rng, std::size_t dim, double radius) {
    std::vector<double> x(dim);
    for (double& v : x) {
        v = rng.uniform(-radius, radius);
    }
    return x;
}

// log cosh without overflow.
double log_cosh(double t) { return std::abs(t) + std::log1p(std::exp(-2.0 * std::abs(t))) - std::numbers::ln2; }

}  // namespace

TEST_SUITE("polynomial") {
    TEST_CASE("construction keeps terms canonical") {
        Polynomial p(2);
        p.add_term({1, 0}, 2.0);
        p.add_term({1, 0}, -2.0);
        CHECK(p.is_zero());
        CHECK(p.degree() == 0);
        p.add_term({2, 1}, 1.0);
        p.add_term({0, 0}, -3.0);
        CHECK(p.degree() == 3);
        CHECK(p.terms().size() == 2);
        CHECK_THROWS_AS(p.add_term({1}, 1.0), DimensionMismatch);
    }

    TEST_CASE("eval") {
        const Polynomial p = parse("x1^2*x2", 2);
        CHECK(p.eval(std::vector<double>{2.0, 3.0}) == 12.0);
        CHECK(Polynomial(3).eval(std::vector<double>{1.0, 2.0, 3.0}) == 0.0);
        CHECK(parse("(x1+x2)^2", 2).eval(std::vector<double>{1.0, 1.0}) == 4.0);
        CHECK_THROWS_AS((void)p.eval(std::vector<double>{1.0}), DimensionMismatch);
    }

    TEST_CASE("arithmetic") {
        const Polynomial p = parse("x1^2 - 2*x1*x2 + 5", 2);
        CHECK(subtract(p, p).is_zero());
        CHECK(scale(p, 0.0).is_zero());
        const Polynomial m = multiply(Polynomial::variable(2, 0), Polynomial::variable(2, 1));
        CHECK(m == parse("x1*x2", 2));
        CHECK(m.degree() == 2);
        CHECK(multiply(p, p).degree() == 4);
        CHECK(power(parse("x1+1", 1), 3) == parse("x1^3 + 3*x1^2 + 3*x1 + 1", 1));
        CHECK(power(p, 0) == Polynomial::constant(2, 1.0));
        CHECK_THROWS_AS((void)add(p, Polynomial(3)), DimensionMismatch);
    }

    TEST_CASE("eval is linear in the polynomial") {
        RandomStream rng(11);
        for (int trial = 0; trial < 200; ++trial) {
            const Polynomial p = random_polynomial(3, 3, 1.0, rng);
            const Polynomial q = random_polynomial(3, 2, 1.0, rng);
            const double a = rng.uniform(-3.0, 3.0);
            const double b = rng.uniform(-3.0, 3.0);
            const auto x = random_point(rng, 3, 2.0);
            const double lhs = (a * p + b * q).eval(x);
            const double rhs = a * p.eval(x) + b * q.eval(x);
            const double scale_ = std::abs(a * p.eval(x)) + std::abs(b * q.eval(x)) + 1e-300;
            CHECK(std::abs(lhs - rhs) <= 1e-12 * scale_);
        }
    }

    TEST_CASE("directional derivative") {
        CHECK(directional_derivative(parse("x1^2*x2", 2), Direction::axis(2, 0)) == parse("2*x1*x2", 2));
        CHECK(directional_derivative(Polynomial::constant(2, 4.0), Direction::normalized({1.0, 2.0})).is_zero());
        const Polynomial d = directional_derivative(parse("x1^2", 2), Direction::normalized({1.0, 1.0}));
        CHECK(d.degree() == 1);
        CHECK(d.coefficient({1, 0}) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));

        // Central differences with h = 1e-5 at five random points.
        RandomStream rng(3);
        const Polynomial x1sq = parse("x1^2", 2);
        const Direction e = Direction::normalized({1.0, 1.0});
        for (int i = 0; i < 5; ++i) {
            const auto x = random_point(rng, 2, 10.0);
            auto xp = x;
            auto xm = x;
            for (int k = 0; k < 2; ++k) {
                xp[k] += 1e-5 * e[k];
                xm[k] -= 1e-5 * e[k];
            }
            const double fd = (x1sq.eval(xp) - x1sq.eval(xm)) / 2e-5;
            CHECK(fd == doctest::Approx(d.eval(x)).epsilon(1e-6));
        }
    }

    TEST_CASE("directional derivative agrees with finite differences and is linear in e") {
        RandomStream rng(17);
        for (int trial = 0; trial < 100; ++trial) {
            const Polynomial p = random_polynomial(3, 3, 1.0, rng);
            const Direction e = Direction::normalized({rng.normal(), rng.normal(), rng.normal()});
            const auto x = random_point(rng, 3, 10.0);
            auto xp = x;
            auto xm = x;
            for (int k = 0; k < 3; ++k) {
                xp[k] += 1e-5 * e[k];
                xm[k] -= 1e-5 * e[k];
            }
            const double fd = (p.eval(xp) - p.eval(xm)) / 2e-5;
            const double exact = directional_derivative(p, e).eval(x);
            CHECK(std::abs(fd - exact) <= 1e-6 * (std::abs(exact) + 1.0));

            double by_gradient = 0.0;
            const auto grad = gradient(p);
            for (int k = 0; k < 3; ++k) {
                by_gradient += e[k] * grad[k].eval(x);
            }
            CHECK(by_gradient == doctest::Approx(exact).epsilon(1e-12));
        }
    }

    TEST_CASE("gradient") {
        const auto g = gradient(parse("x1+x2", 2));
        CHECK(g[0] == Polynomial::constant(2, 1.0));
        CHECK(g[1] == Polynomial::constant(2, 1.0));
        for (const auto& c : gradient(Polynomial::constant(3, 2.0))) {
            CHECK(c.is_zero());
        }
        const auto h = gradient(parse("x1*x2", 2));
        CHECK(h[0] == parse("x2", 2));
        CHECK(h[1] == parse("x1", 2));
    }

    TEST_CASE("compose_affine matches pointwise evaluation") {
        RandomStream rng(23);
        const Polynomial p = random_polynomial(2, 3, 1.0, rng);
        const std::vector<double> a{1.5, -0.5, 0.25, 2.0};
        const std::vector<double> b{0.3, -1.0};
        const Polynomial q = compose_affine(p, a, b);
        for (int i = 0; i < 20; ++i) {
            const auto y = random_point(rng, 2, 2.0);
            const std::vector<double> x{a[0] * y[0] + a[1] * y[1] + b[0], a[2] * y[0] + a[3] * y[1] + b[1]};
            CHECK(q.eval(y) == doctest::Approx(p.eval(x)).epsilon(1e-12));
        }
    }

    TEST_CASE("random_polynomial shape and determinism") {
        RandomStream a(7);
        const Polynomial p = random_polynomial(2, 2, 1.0, a);
        CHECK(p.dim() == 2);
        CHECK(p.degree() == 2);
        CHECK(monomials_up_to(2, 2).size() == 6);
        CHECK(p.terms().size() <= 6);
        for (const auto& [e, c] : p.terms()) {
            CHECK(std::abs(c) <= 1.0);
        }
        RandomStream b(7);
        CHECK(random_polynomial(2, 2, 1.0, b) == p);
        RandomStream c(1);
        CHECK(random_polynomial(1, 0, 1.0, c).is_constant());
    }

    TEST_CASE("direction is unit length") {
        const Direction e = Direction::normalized({3.0, 4.0});
        CHECK(std::hypot(e[0], e[1]) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(e.flipped()[0] == -e[0]);
        CHECK_THROWS_AS(Direction::normalized({0.0, 0.0}), std::invalid_argument);
    }

    TEST_CASE("pairing identity of the main-bound argument holds pointwise") {
        // ∂_e g (φ(f) - φ(g)) = ∂_e(Φ(f) - Φ(g)) - (∂_e f - ∂_e g) φ(f) with φ = tanh,
        // Φ = log cosh and the outer derivative by a five-point stencil.
        RandomStream rng(2024);
        constexpr double h = 1e-3;
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const std::size_t dim = 1 + rng.below(3);
            const unsigned deg = 2 + static_cast<unsigned>(rng.below(2));
            const Polynomial f = random_polynomial(dim, deg, 1.0, rng);
            const Polynomial g = random_polynomial(dim, deg, 1.0, rng);
            std::vector<double> comps(dim);
            for (double& c : comps) {
                c = rng.normal();
            }
            const Direction e = Direction::normalized(comps);
            const auto x = random_point(rng, dim, 1.0);
            const auto composite = [&](double t) {
                std::vector<double> y = x;
                for (std::size_t k = 0; k < dim; ++k) {
                    y[k] += t * e[k];
                }
                return log_cosh(f.eval(y)) - log_cosh(g.eval(y));
            };
            const double outer =
                (-composite(2 * h) + 8 * composite(h) - 8 * composite(-h) + composite(-2 * h)) / (12 * h);
            const double df = directional_derivative(f, e).eval(x);
            const double dg = directional_derivative(g, e).eval(x);
            const double fx = f.eval(x);
            const double gx = g.eval(x);
            const double lhs = dg * (std::tanh(fx) - std::tanh(gx));
            const double rhs = outer - (df - dg) * std::tanh(fx);
            worst = std::max(worst, std::abs(lhs - rhs));
        }
        CHECK(worst <= 1e-9);
    }
}
