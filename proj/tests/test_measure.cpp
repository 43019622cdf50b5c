#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "lcpoly/error.hpp"
#include "lcpoly/measure.hpp"
#include "lcpoly/parser.hpp"
#include "support.hpp"

using namespace lcpoly;
using lcpoly::testing::ks_critical_001;
using lcpoly::testing::ks_statistic;
using lcpoly::testing::std_normal_cdf;

namespace {

std::vector<double> coordinate(const SampleSet& s, std::size_t k) {
    std::vector<double> out(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        out[i] = s.point(i)[k];
    }
    return out;
}

struct Moments {
    std::vector<double> mean;
    std::vector<double> cov;  // row-major, 1/N
};

Moments moments(const SampleSet& s) {
    const std::size_t d = s.dim();
    Moments m{std::vector<double>(d, 0.0), std::vector<double>(d * d, 0.0)};
    for (std::size_t i = 0; i < s.size(); ++i) {
        for (std::size_t a = 0; a < d; ++a) {
            m.mean[a] += s.point(i)[a];
        }
    }
    for (double& v : m.mean) {
        v /= static_cast<double>(s.size());
    }
    for (std::size_t i = 0; i < s.size(); ++i) {
        const auto x = s.point(i);
        for (std::size_t a = 0; a < d; ++a) {
            for (std::size_t b = 0; b < d; ++b) {
                m.cov[a * d + b] += (x[a] - m.mean[a]) * (x[b] - m.mean[b]);
            }
        }
    }
    for (double& v : m.cov) {
        v /= static_cast<double>(s.size());
    }
    return m;
}

std::vector<LogConcaveMeasure> all_families(std::size_t dim) {
    return {LogConcaveMeasure::standard_gaussian(dim),
            LogConcaveMeasure::product_exponential(std::vector<double>(dim, 1.5)),
            LogConcaveMeasure::uniform_box(std::vector<double>(dim, -1.0), std::vector<double>(dim, 2.0)),
            LogConcaveMeasure::uniform_ball(dim, 1.5),
            LogConcaveMeasure::general_potential(parse("x1^4 + x1^2", dim) + parse("0.5*x1", dim), 3.0, true)};
}

}  // namespace

TEST_SUITE("measure") {
    TEST_CASE("densities") {
        const std::vector<double> zero{0.0};
        CHECK(density(LogConcaveMeasure::standard_gaussian(1), zero) ==
              doctest::Approx(0.3989422804014327).epsilon(1e-14));
        const auto box = LogConcaveMeasure::uniform_box({0.0}, {1.0});
        CHECK(density(box, std::vector<double>{0.5}) == 1.0);
        CHECK(density(box, std::vector<double>{2.0}) == 0.0);
        CHECK(density(LogConcaveMeasure::product_exponential({1.0}), zero) == doctest::Approx(0.5).epsilon(1e-15));
        CHECK_THROWS_AS((void)density(box, std::vector<double>{0.5, 0.5}), DimensionMismatch);
    }

    TEST_CASE("known normalizations integrate to one") {
        for (std::size_t dim : {1u, 2u}) {
            for (const auto& m : all_families(dim)) {
                if (!m.normalized()) {
                    continue;
                }
                const auto rho = [&](std::span<const double> x) { return m.density(x); };
                // The box density jumps on the boundary, so it is integrated over the box itself.
                const double mass = m.family() == MeasureFamily::uniform_box
                                        ? integrate_box(rho, std::vector<double>(dim, -1.0),
                                                        std::vector<double>(dim, 2.0), 1e-10)
                                        : integrate_ball(rho, dim, m.effective_radius(), 1e-10);
                CHECK_MESSAGE(mass == doctest::Approx(1.0).epsilon(1e-6), m.label());
            }
        }
        const auto v = LogConcaveMeasure::general_potential(parse("x1^2 + x2^2", 2), 4.0, true).normalize_by_quadrature();
        CHECK(v.normalized());
        CHECK(*v.log_normalization() == doctest::Approx(std::log(std::numbers::pi * (1 - std::exp(-16.0)))).epsilon(1e-8));
    }

    TEST_CASE("general potential needs a convexity attestation") {
        CHECK_THROWS_AS(LogConcaveMeasure::general_potential(parse("x1^2", 1), 2.0, false), std::invalid_argument);
    }

    TEST_CASE("midpoint log-concavity") {
        RandomStream rng(4);
        for (std::size_t dim : {1u, 2u, 3u}) {
            for (const auto& m : all_families(dim)) {
                int tested = 0;
                while (tested < 1000) {
                    std::vector<double> x(dim);
                    std::vector<double> y(dim);
                    std::vector<double> mid(dim);
                    for (std::size_t k = 0; k < dim; ++k) {
                        x[k] = rng.uniform(-2.0, 2.0);
                        y[k] = rng.uniform(-2.0, 2.0);
                        mid[k] = 0.5 * (x[k] + y[k]);
                    }
                    if (!m.in_support(x) || !m.in_support(y)) {
                        continue;
                    }
                    ++tested;
                    CHECK(m.log_density(mid) >= 0.5 * (m.log_density(x) + m.log_density(y)) - 1e-9);
                }
            }
        }
    }

    TEST_CASE("gaussian sample moments") {
        const SampleSet s = sample(LogConcaveMeasure::standard_gaussian(2), 100000, 1);
        const Moments m = moments(s);
        for (std::size_t a = 0; a < 2; ++a) {
            CHECK(std::abs(m.mean[a]) < 3.0 / std::sqrt(1e5));
            for (std::size_t b = 0; b < 2; ++b) {
                CHECK(std::abs(m.cov[a * 2 + b] - (a == b ? 1.0 : 0.0)) < 0.02);
            }
        }
    }

    TEST_CASE("uniform box variance") {
        const SampleSet s = sample(LogConcaveMeasure::uniform_box({-1.0, -1.0}, {1.0, 1.0}), 100000, 2);
        const Moments m = moments(s);
        CHECK(std::abs(m.cov[0] - 1.0 / 3.0) < 0.01);
        CHECK(std::abs(m.cov[3] - 1.0 / 3.0) < 0.01);
    }

    TEST_CASE("exact samplers match marginal laws") {
        constexpr std::size_t n = 10000;
        const auto lap = sample(LogConcaveMeasure::product_exponential({2.0}), n, 5);
        CHECK(ks_statistic(coordinate(lap, 0), [](double t) {
                  return t < 0 ? 0.5 * std::exp(2 * t) : 1 - 0.5 * std::exp(-2 * t);
              }) < ks_critical_001(n));
        const auto ball = sample(LogConcaveMeasure::uniform_ball(3, 2.0), n, 6);
        std::vector<double> radii(n);
        for (std::size_t i = 0; i < n; ++i) {
            const auto x = ball.point(i);
            radii[i] = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
        }
        CHECK(ks_statistic(radii, [](double r) { return std::pow(std::clamp(r / 2.0, 0.0, 1.0), 3.0); }) <
              ks_critical_001(n));
    }

    TEST_CASE("sampling is deterministic and records provenance") {
        const auto m = LogConcaveMeasure::standard_gaussian(3);
        const SampleSet a = sample(m, 1000, 77);
        const SampleSet b = sample(m, 1000, 77);
        const SampleSet c = sample(m, 1000, 78);
        CHECK(a.data() == b.data());
        CHECK(a.data() != c.data());
        CHECK(a.seed() == 77);
        CHECK(a.method().kind == SamplingMethod::Kind::exact);
        CHECK(sample(LogConcaveMeasure::general_potential(parse("x1^2", 1), 5.0, true), 10, 1).method().kind ==
              SamplingMethod::Kind::hit_and_run);
    }

    TEST_CASE("line sampler") {
        RandomStream rng(8);
        constexpr std::size_t n = 10000;
        std::vector<double> draws(n);
        for (double& d : draws) {
            d = sample_line_logconcave([](double t) { return -t * t / 2; }, -8.0, 8.0, rng);
        }
        CHECK(ks_statistic(draws, std_normal_cdf) < ks_critical_001(n));

        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            sum += sample_line_logconcave([](double) { return 0.0; }, 0.0, 1.0, rng);
        }
        CHECK(std::abs(sum / n - 0.5) < 3.0 / std::sqrt(12.0 * n));

        CHECK(sample_line_logconcave([](double t) { return -t; }, 2.5, 2.5, rng) == 2.5);
        CHECK_THROWS_AS((void)sample_line_logconcave(
                            [](double) { return -std::numeric_limits<double>::infinity(); }, 0.0, 1.0, rng),
                        NumericalError);
    }

    TEST_CASE("hit-and-run on the uniform ball reproduces the radial law") {
        constexpr std::size_t n = 10000;
        const auto ball = LogConcaveMeasure::uniform_ball(2, 1.0);
        const SampleSet s = sample(ball, n, 12, SamplingMethod::hit_and_run());
        std::vector<double> radii(n);
        for (std::size_t i = 0; i < n; ++i) {
            radii[i] = std::hypot(s.point(i)[0], s.point(i)[1]);
        }
        CHECK(ks_statistic(radii, [](double r) { return std::min(1.0, r * r); }) < ks_critical_001(n));
    }

    TEST_CASE("hit-and-run on a general potential matches its normalized density") {
        // V = x1^2/2 on [-6, 6]: essentially the standard normal.
        constexpr std::size_t n = 10000;
        const auto m = LogConcaveMeasure::general_potential(parse("0.5*x1^2", 1), 6.0, true);
        const SampleSet s = sample(m, n, 13);
        CHECK(ks_statistic(coordinate(s, 0), std_normal_cdf) < ks_critical_001(n));
    }

    TEST_CASE("isotropize") {
        const SampleSet g = sample(LogConcaveMeasure::standard_gaussian(2), 1000000, 21);
        const AffineMap t = isotropize(g);
        const auto& a = t.matrix();
        CHECK(std::abs(a[0] - 1.0) < 0.01);
        CHECK(std::abs(a[3] - 1.0) < 0.01);
        CHECK(std::abs(a[1]) < 0.01);
        CHECK(std::abs(a[2]) < 0.01);

        // Points c + A z are whitened exactly on the sample.
        const AffineMap mix({2.0, 0.5, -1.0, 1.5}, {3.0, -2.0});
        const SampleSet skewed = mix.apply(sample(LogConcaveMeasure::standard_gaussian(2), 50000, 22));
        const SampleSet white = isotropize(skewed).apply(skewed);
        const Moments m = moments(white);
        CHECK(std::abs(m.mean[0]) < 1e-10);
        CHECK(std::abs(m.mean[1]) < 1e-10);
        CHECK(std::abs(m.cov[0] - 1.0) < 1e-8);
        CHECK(std::abs(m.cov[1]) < 1e-8);
        CHECK(std::abs(m.cov[3] - 1.0) < 1e-8);

        const SampleSet tiny = sample(LogConcaveMeasure::standard_gaussian(3), 3, 1);
        CHECK_THROWS_AS((void)isotropize(tiny), std::invalid_argument);
    }

    TEST_CASE("affine map inverse and determinant") {
        const AffineMap t({2.0, 1.0, 0.0, 3.0}, {1.0, -1.0});
        CHECK(t.determinant() == doctest::Approx(6.0));
        const auto y = t.apply(std::vector<double>{0.5, 2.0});
        const auto x = t.inverse().apply(y);
        CHECK(x[0] == doctest::Approx(0.5).epsilon(1e-14));
        CHECK(x[1] == doctest::Approx(2.0).epsilon(1e-14));
        CHECK_THROWS_AS(AffineMap({1.0, 2.0, 2.0, 4.0}, {0.0, 0.0}), NumericalError);
    }

    TEST_CASE("skorohod tv") {
        const double gauss = std::sqrt(2.0 / std::numbers::pi);
        const auto g2 = LogConcaveMeasure::standard_gaussian(2);
        CHECK(std::abs(skorohod_tv(g2, Direction::axis(2, 0)) - gauss) < 1e-6);
        CHECK(std::abs(skorohod_tv(g2, Direction::normalized({0.6, -0.8})) - gauss) < 1e-6);
        CHECK(std::abs(skorohod_tv(LogConcaveMeasure::standard_gaussian(3), Direction::normalized({1, 2, 2})) -
                       gauss) < 1e-6);

        const auto box = LogConcaveMeasure::uniform_box({0.0, 0.0}, {1.0, 1.0});
        CHECK(skorohod_tv(box, Direction::axis(2, 0)) == doctest::Approx(2.0).epsilon(1e-8));

        // Product of identical 1-D factors: equals 2 max ρ₁ by Fubini.
        const auto lap = LogConcaveMeasure::product_exponential({1.0, 1.0});
        CHECK(skorohod_tv(lap, Direction::axis(2, 0)) == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(skorohod_tv(lap, Direction::axis(2, 1)) == doctest::Approx(skorohod_tv(lap, Direction::axis(2, 0))).epsilon(1e-9));
        const Direction e = Direction::normalized({0.3, 0.7});
        CHECK(skorohod_tv(lap, e) == doctest::Approx(skorohod_tv(lap, e.flipped())).epsilon(1e-7));

        CHECK_THROWS_AS((void)skorohod_tv(LogConcaveMeasure::standard_gaussian(5), Direction::axis(5, 0)),
                        std::invalid_argument);
    }
}
