#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "lcpoly/check.hpp"
#include "lcpoly/error.hpp"
#include "lcpoly/parser.hpp"
#include "lcpoly/pushforward.hpp"

using namespace lcpoly;

namespace {

const LogConcaveMeasure kGauss1 = LogConcaveMeasure::standard_gaussian(1);

// E Z^{2k} = (2k-1)!!.
double gaussian_even_moment(unsigned k) {
    double m = 1.0;
    for (unsigned j = 1; j <= k; ++j) {
        m *= 2.0 * j - 1.0;
    }
    return m;
}

}  // namespace

TEST_SUITE("check") {
    TEST_CASE("safe ratio conventions") {
        CHECK(safe_ratio(0.0, 0.0) == 0.0);
        CHECK(std::isinf(safe_ratio(1.0, 0.0)));
        CHECK(safe_ratio(1.0, 4.0) == 0.25);
    }

    TEST_CASE("main bound with f = g is zero") {
        const Polynomial g = parse("x1^2 + x2", 2);
        const auto r = check_main_bound(LogConcaveMeasure::standard_gaussian(2), g, g, 20000, 1);
        CHECK(r.lhs == 0.0);
        CHECK(r.rhs_core == 0.0);
        CHECK(r.ratio == 0.0);
        CHECK(r.config["degree"] == 2);
        CHECK(r.config["n"] == 20000);
    }

    TEST_CASE("main bound rejects degenerate and low-degree input") {
        CHECK_THROWS_AS((void)check_main_bound(kGauss1, parse("x1 + 1", 1), parse("x1", 1), 1000, 1),
                        std::invalid_argument);
        CHECK_THROWS_AS((void)check_main_bound(kGauss1, parse("x1^2", 1), parse("0*x1^2 + 3", 1), 1000, 1),
                        DegenerateInput);
        const SampleSet s = sample(kGauss1, 1000, 2);
        try {
            (void)main_bound_on_samples(s, parse("x1^2", 1), Polynomial::constant(1, 4.0), 0, RandomStream(1));
            FAIL("expected DegenerateInput");
        } catch (const DegenerateInput& e) {
            CHECK(std::string(e.what()) == "degenerate variance");
        }
    }

    TEST_CASE("main bound gaussian shifted square matches the chi-square oracle") {
        const double delta = 0.05;
        const auto r = check_main_bound(kGauss1, parse("x1^2 + 0.05", 1), parse("x1^2", 1), 100000, 42);
        // σ_g² = 2, TV = 2Φ(√δ) - 1, ‖f - g‖₂ = δ.
        const double oracle = std::pow(2.0, 0.25) * (2 * normal_cdf(std::sqrt(delta)) - 1) / std::sqrt(delta);
        CHECK(r.ratio == doctest::Approx(oracle).epsilon(0.1));
        CHECK(r.rhs_core == doctest::Approx(std::sqrt(delta)).epsilon(1e-12));
    }

    TEST_CASE("main bound ratio is invariant under shared affine maps") {
        RandomStream rng(5);
        const SampleSet s = sample(LogConcaveMeasure::standard_gaussian(2), 20000, 6);
        for (int trial = 0; trial < 10; ++trial) {
            const Polynomial g = random_polynomial(2, 2, 1.0, rng);
            const Polynomial f = g + 0.01 * random_polynomial(2, 2, 1.0, rng);
            const double base = main_bound_on_samples(s, f, g, 0, RandomStream(1), 0).ratio;
            for (double lambda : {-2.5, 0.5, 3.0}) {
                const Polynomial c = Polynomial::constant(2, 0.75);
                const double moved = main_bound_on_samples(s, lambda * f + c, lambda * g + c, 0, RandomStream(1), 0).ratio;
                CHECK(std::abs(moved - base) <= 1e-12 * base);
            }
        }
    }

    TEST_CASE("estimate constant on the trivial ensemble is zero") {
        EnsembleSpec spec;
        spec.trivial = true;
        spec.cells = 12;
        const auto est = estimate_constant(spec, 2000, 3);
        CHECK(est.c_hat == 0.0);
        CHECK(est.trials == 12);
        CHECK(est.ratios.size() == 12);
    }

    TEST_CASE("estimate constant on the linear gaussian family matches the normal shift") {
        EnsembleSpec spec;
        spec.families = {MeasureFamily::standard_gaussian};
        spec.fixed_g = parse("x1", 1);
        spec.fixed_h = Polynomial::constant(1, 1.0);
        spec.deltas = {0.05, 0.1};
        spec.cells = 6;
        const auto est = estimate_constant(spec, 400000, 11);
        CHECK(est.degree == 1);
        for (const auto& cell : est.cells) {
            const double oracle = (2 * normal_cdf(cell.delta / 2) - 1) / cell.delta;
            CHECK(cell.ratio == doctest::Approx(oracle).epsilon(0.05));
        }
        CHECK(est.c_hat == doctest::Approx(1 / std::sqrt(2 * std::numbers::pi)).epsilon(0.05));
    }

    TEST_CASE("estimate constant is deterministic, thread-independent and prefix-stable") {
        EnsembleSpec spec;
        spec.cells = 16;
        spec.threads = 1;
        const auto a = estimate_constant(spec, 5000, 9);
        spec.threads = 4;
        const auto b = estimate_constant(spec, 5000, 9);
        CHECK(a.ratios == b.ratios);
        spec.cells = 8;
        const auto c = estimate_constant(spec, 5000, 9);
        for (std::size_t i = 0; i < 8; ++i) {
            CHECK(c.ratios[i] == a.ratios[i]);
        }
        for (std::size_t i = 1; i < a.trajectory.size(); ++i) {
            CHECK(a.trajectory[i] >= a.trajectory[i - 1]);
        }
        CHECK(a.c_hat == a.trajectory.back());
        CHECK(a.max_invariance_defect <= 1e-12);
    }

    TEST_CASE("growing the delta grid by one decade keeps the constant estimate stable") {
        EnsembleSpec spec;
        spec.check_invariance = false;
        const double base = estimate_constant(spec, 100000, 42).c_hat;
        spec.deltas = log_grid(1e-4, 1e-1, 13);
        const double grown = estimate_constant(spec, 100000, 42).c_hat;
        CHECK(std::isfinite(base));
        CHECK(std::abs(grown - base) < 0.25 * base);
    }

    TEST_CASE("trajectory growth") {
        const std::vector<double> t{1.0, 1.0, 1.1, 1.2};
        CHECK(trajectory_growth(t) == doctest::Approx(1.2));
        const std::vector<double> zeros{0.0, 0.0};
        CHECK(trajectory_growth(zeros) == 1.0);
    }

    TEST_CASE("small-ball on the uniform box is exactly linear") {
        const auto m = LogConcaveMeasure::uniform_box({0.0}, {1.0});
        const std::vector<double> grid{0.1, 0.2, 0.5, 1.0};
        const auto r = check_carbery_wright(m, parse("x1", 1), grid, 100000, 4);
        REQUIRE(r.per_t.size() == 4);
        for (const auto& rep : r.per_t) {
            CHECK(rep.ratio == doctest::Approx(0.5).epsilon(0.03));
        }
        CHECK(r.per_t.back().ratio == doctest::Approx(0.5).epsilon(0.01));
        CHECK(r.exponent == doctest::Approx(1.0).epsilon(0.05));
    }

    TEST_CASE("small-ball for the gaussian coordinate tends to 2/pi") {
        const std::vector<double> grid{0.02, 0.05};
        const auto r = check_carbery_wright(kGauss1, parse("x1", 1), grid, 1000000, 5);
        for (std::size_t k = 0; k < grid.size(); ++k) {
            const double t = grid[k];
            const double oracle = (2 * normal_cdf(t) - 1) * std::sqrt(2 / std::numbers::pi) / t;
            CHECK(r.per_t[k].ratio == doctest::Approx(oracle).epsilon(0.03));
        }
        CHECK(r.per_t[1].ratio == doctest::Approx(2 / std::numbers::pi).epsilon(0.03));
    }

    TEST_CASE("small-ball exponent of the gaussian square is one half") {
        const auto r = check_carbery_wright(kGauss1, parse("x1^2", 1), log_grid(1e-4, 1.0, 13), 100000, 6);
        CHECK(r.exponent == doctest::Approx(0.5).epsilon(0.1));
        CHECK(r.fit_points >= 2);
    }

    TEST_CASE("small-ball errors") {
        const std::vector<double> grid{1e-9, 1e-8};
        CHECK_THROWS_AS((void)check_carbery_wright(kGauss1, parse("x1^2 + 5", 1), grid, 1000, 1), DegenerateInput);
        CHECK_THROWS_AS((void)check_carbery_wright(kGauss1, parse("3", 1), grid, 1000, 1), std::invalid_argument);
        const std::vector<double> descending{1.0, 0.1};
        CHECK_THROWS_AS((void)check_carbery_wright(kGauss1, parse("x1", 1), descending, 1000, 1),
                        std::invalid_argument);
    }

    TEST_CASE("small-ball ratio is invariant under f -> 4f with t -> 4t") {
        const SampleSet s = sample(LogConcaveMeasure::standard_gaussian(2), 20000, 7);
        const Polynomial f = parse("x1^2 - x2 + 0.3", 2);
        const std::vector<double> grid = log_grid(1e-3, 1.0, 7);
        std::vector<double> scaled_grid;
        for (double t : grid) scaled_grid.push_back(4 * t);
        const auto a = carbery_wright_on_samples(s, f, grid);
        const auto b = carbery_wright_on_samples(s, 4.0 * f, scaled_grid);
        for (std::size_t k = 0; k < grid.size(); ++k) {
            CHECK(b.hits[k] == a.hits[k]);
            CHECK(std::abs(b.per_t[k].ratio - a.per_t[k].ratio) <= 1e-12 * a.per_t[k].ratio);
        }
    }

    TEST_CASE("moment equivalence") {
        const auto c = check_moment_equivalence(kGauss1, parse("x1^0 * 2", 1), 2.0, 5000, 1);
        CHECK(c.versus_zero.lhs == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(c.versus_one.lhs == doctest::Approx(1.0).epsilon(1e-14));
        const auto x = check_moment_equivalence(kGauss1, parse("x1", 1), 2.0, 200000, 2);
        CHECK(x.versus_one.lhs == doctest::Approx(std::sqrt(std::numbers::pi / 2)).epsilon(0.01));
        CHECK(x.versus_one.rhs_core == 2.0);
        CHECK(x.versus_zero.rhs_core == 2.0);
        const auto sq = check_moment_equivalence(kGauss1, parse("x1^2", 1), 2.0, 200000, 3);
        CHECK(sq.versus_one.lhs == doctest::Approx(std::sqrt(3.0)).epsilon(0.02));
        CHECK(sq.versus_zero.rhs_core == 16.0);
        CHECK(sq.norm_chain_holds);
        CHECK(sq.versus_one.passed == true);
        CHECK_THROWS_AS((void)check_moment_equivalence(kGauss1, parse("x1", 1), 0.5, 100, 1), std::invalid_argument);
    }

    TEST_CASE("norm chain holds on every empirical measure used by the moment check") {
        RandomStream rng(77);
        for (int trial = 0; trial < 30; ++trial) {
            const std::size_t dim = 1 + rng.below(4);
            const auto family = std::vector{MeasureFamily::standard_gaussian, MeasureFamily::uniform_box,
                                            MeasureFamily::product_exponential}[rng.below(3)];
            const auto r = check_moment_equivalence(ensemble_measure(family, dim),
                                                    random_polynomial(dim, 2 + rng.below(2), 1.0, rng), 2.0, 2000,
                                                    rng());
            CHECK(r.norm_chain_holds);
        }
    }

    TEST_CASE("density variance") {
        const auto u = check_density_variance(LogConcaveMeasure::uniform_box({0.0}, {1.0}));
        CHECK(std::abs(u.lhs - 1.0 / 12) <= 1e-9);
        CHECK(u.rhs_core == 1.0 / 12);
        CHECK(u.passed == true);
        const auto g = check_density_variance(kGauss1);
        CHECK(g.lhs == doctest::Approx(1 / (2 * std::numbers::pi)).epsilon(1e-9));
        const auto l = check_density_variance(LogConcaveMeasure::product_exponential({1.0}));
        CHECK(l.lhs == doctest::Approx(0.5).epsilon(1e-9));
        const auto shifted_box = check_density_variance(LogConcaveMeasure::uniform_box({-3.0}, {5.0}));
        CHECK(std::abs(shifted_box.lhs - 1.0 / 12) <= 1e-9);
        const auto ball = check_density_variance(LogConcaveMeasure::uniform_ball(1, 2.0));
        CHECK(std::abs(ball.lhs - 1.0 / 12) <= 1e-9);
        CHECK_THROWS_AS((void)check_density_variance(LogConcaveMeasure::standard_gaussian(2)), DimensionMismatch);
    }

    TEST_CASE("reverse poincare") {
        const auto e1 = Direction::axis(1, 0);
        const auto x = check_reverse_poincare(kGauss1, parse("x1", 1), e1, 100000, 1);
        CHECK(x.ratio == doctest::Approx(std::sqrt(std::numbers::pi / 2)).epsilon(0.02));
        CHECK(check_reverse_poincare(kGauss1, parse("7", 1), e1, 1000, 1).ratio == 0.0);
        for (unsigned d = 2; d <= 3; ++d) {
            const Polynomial f = power(parse("x1", 1), d);
            // ‖∂f‖₂ = d √((2d-3)!!), ‖f‖₂ = √((2d-1)!!), ‖D_e γ‖_TV = √(2/π).
            const double oracle = d * std::sqrt(gaussian_even_moment(d - 1) / gaussian_even_moment(d)) /
                                  std::sqrt(2 / std::numbers::pi);
            CHECK(oracle == doctest::Approx(d / std::sqrt(2.0 * d - 1) * std::sqrt(std::numbers::pi / 2)));
            CHECK(check_reverse_poincare(kGauss1, f, e1, 1000000, d).ratio == doctest::Approx(oracle).epsilon(0.03));
        }
    }

    TEST_CASE("reverse poincare ratio is invariant under f -> 3f") {
        const auto m = LogConcaveMeasure::standard_gaussian(2);
        const auto e = Direction::normalized({1.0, 2.0});
        const Polynomial f = parse("x1*x2 + x2^2 - 1", 2);
        const double a = check_reverse_poincare(m, f, e, 20000, 8).ratio;
        const double b = check_reverse_poincare(m, 3.0 * f, e, 20000, 8).ratio;
        CHECK(std::abs(a - b) <= 1e-12 * a);
    }

    TEST_CASE("poincare") {
        CHECK(check_poincare(kGauss1, parse("2", 1), 1000, 1).ratio == 0.0);
        for (std::size_t n = 1; n <= 4; ++n) {
            const auto r = check_poincare(LogConcaveMeasure::standard_gaussian(n), parse("x1", n), 100000, n);
            CHECK(r.ratio == doctest::Approx(1.0 / n).epsilon(0.03));
        }
        const auto box = check_poincare(LogConcaveMeasure::uniform_box({0.0}, {1.0}), parse("x1", 1), 10000, 2);
        CHECK(box.ratio == doctest::Approx(1.0).epsilon(1e-12));
    }

    TEST_CASE("epsilon split balances both terms") {
        for (unsigned d : {2u, 3u, 5u}) {
            for (double a : {0.1, 1.0, 10.0}) {
                for (double b : {1e-3, 0.5, 2.0}) {
                    const auto s = epsilon_split(a, b, d);
                    const double term = std::pow(a, -1.0 / d) * std::pow(b, 1.0 / d);
                    CHECK(s.closed_form == doctest::Approx(2 * term).epsilon(1e-12));
                    CHECK(s.bound_at_star == doctest::Approx(s.closed_form).epsilon(1e-10));
                    double best = INFINITY;
                    for (int k = -4000; k <= 4000; ++k) {
                        best = std::min(best, epsilon_split_bound(a, b, d, s.epsilon_star * std::pow(10.0, k / 400.0)));
                    }
                    CHECK(best <= s.bound_at_star * (1 + 1e-12));
                    CHECK(best >= 0.5 * s.closed_form);
                }
            }
        }
        CHECK_THROWS_AS((void)epsilon_split(1.0, 1.0, 1), std::invalid_argument);
        CHECK_THROWS_AS((void)epsilon_split(0.0, 1.0, 2), std::invalid_argument);
    }

    TEST_CASE("report json schema") {
        CheckReport r;
        r.name = "x";
        r.lhs = 1.0;
        r.rhs_core = 2.0;
        r.ratio = 0.5;
        const auto j = report_to_json(r);
        for (const char* key : {"name", "lhs", "rhs_core", "ratio", "stderr", "config"}) {
            CHECK(j.contains(key));
        }
        CHECK_FALSE(j.contains("pass"));
        r.passed = true;
        CHECK(report_to_json(r)["pass"] == true);
    }
}
