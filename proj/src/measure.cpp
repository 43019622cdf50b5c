#include "lcpoly/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

#include "lcpoly/error.hpp"
#include "lcpoly/parser.hpp"

namespace lcpoly {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kGaussianRadius = 12.0;
constexpr double kExponentialTail = 45.0;

Chord ball_chord(std::span<const double> x, std::span<const double> u, double radius) {
    double a = 0.0;
    double b = 0.0;
    double c = -radius * radius;
    for (std::size_t i = 0; i < x.size(); ++i) {
        a += u[i] * u[i];
        b += 2.0 * x[i] * u[i];
        c += x[i] * x[i];
    }
    if (a == 0.0) {
        return c <= 0.0 ? Chord{0.0, 0.0} : Chord{1.0, 0.0};
    }
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) {
        return {1.0, 0.0};
    }
    // Stable root pair.
    const double sq = std::sqrt(disc);
    const double q = -0.5 * (b + std::copysign(sq, b));
    double t0 = q / a;
    double t1 = q != 0.0 ? c / q : -t0;
    if (t0 > t1) {
        std::swap(t0, t1);
    }
    return {t0, t1};
}

double squared_norm(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) {
        s += v * v;
    }
    return s;
}

}  // namespace

const char* family_name(MeasureFamily family) noexcept {
    switch (family) {
        case MeasureFamily::standard_gaussian: return "standard_gaussian";
        case MeasureFamily::product_exponential: return "product_exponential";
        case MeasureFamily::uniform_box: return "uniform_box";
        case MeasureFamily::uniform_ball: return "uniform_ball";
        case MeasureFamily::general_potential: return "general_potential";
    }
    return "unknown";
}

std::optional<MeasureFamily> family_from_name(std::string_view name) {
    std::string key(name);
    std::replace(key.begin(), key.end(), '-', '_');
    if (key == "standard_gaussian" || key == "gaussian") return MeasureFamily::standard_gaussian;
    if (key == "product_exponential" || key == "exponential" || key == "laplace")
        return MeasureFamily::product_exponential;
    if (key == "uniform_box" || key == "box") return MeasureFamily::uniform_box;
    if (key == "uniform_ball" || key == "ball") return MeasureFamily::uniform_ball;
    if (key == "general_potential" || key == "potential") return MeasureFamily::general_potential;
    return std::nullopt;
}

LogConcaveMeasure::LogConcaveMeasure(MeasureFamily family, std::size_t dim) : family_(family), dim_(dim) {
    if (dim == 0) {
        throw std::invalid_argument("measure dimension must be positive");
    }
}

LogConcaveMeasure LogConcaveMeasure::standard_gaussian(std::size_t dim) {
    LogConcaveMeasure m(MeasureFamily::standard_gaussian, dim);
    m.log_norm_ = 0.5 * static_cast<double>(dim) * std::log(2.0 * std::numbers::pi);
    return m;
}

LogConcaveMeasure LogConcaveMeasure::product_exponential(std::vector<double> rates) {
    LogConcaveMeasure m(MeasureFamily::product_exponential, rates.size());
    double log_z = 0.0;
    for (double r : rates) {
        if (!(r > 0.0) || !std::isfinite(r)) {
            throw std::invalid_argument("exponential rates must be positive and finite");
        }
        log_z += std::log(2.0 / r);
    }
    m.rates_ = std::move(rates);
    m.log_norm_ = log_z;
    return m;
}

LogConcaveMeasure LogConcaveMeasure::uniform_box(std::vector<double> lower, std::vector<double> upper) {
    if (lower.size() != upper.size()) {
        throw DimensionMismatch("uniform_box bounds", lower.size(), upper.size());
    }
    LogConcaveMeasure m(MeasureFamily::uniform_box, lower.size());
    double log_vol = 0.0;
    for (std::size_t i = 0; i < lower.size(); ++i) {
        if (!(upper[i] > lower[i]) || !std::isfinite(lower[i]) || !std::isfinite(upper[i])) {
            throw std::invalid_argument("uniform_box needs finite lower < upper in every coordinate");
        }
        log_vol += std::log(upper[i] - lower[i]);
    }
    m.lower_ = std::move(lower);
    m.upper_ = std::move(upper);
    m.log_norm_ = log_vol;
    return m;
}

LogConcaveMeasure LogConcaveMeasure::uniform_ball(std::size_t dim, double radius) {
    if (!(radius > 0.0) || !std::isfinite(radius)) {
        throw std::invalid_argument("uniform_ball radius must be positive and finite");
    }
    LogConcaveMeasure m(MeasureFamily::uniform_ball, dim);
    m.radius_ = radius;
    const double n = static_cast<double>(dim);
    m.log_norm_ = 0.5 * n * std::log(std::numbers::pi) + n * std::log(radius) - std::lgamma(0.5 * n + 1.0);
    return m;
}

LogConcaveMeasure LogConcaveMeasure::general_potential(std::size_t dim, PotentialFn potential,
                                                       double support_radius, bool convexity_attested,
                                                       std::string expression) {
    if (!potential) {
        throw std::invalid_argument("general_potential needs a potential function");
    }
    if (!(support_radius > 0.0) || !std::isfinite(support_radius)) {
        throw std::invalid_argument("general_potential needs a positive finite support radius");
    }
    if (!convexity_attested) {
        throw std::invalid_argument("general_potential requires the potential to be attested convex");
    }
    LogConcaveMeasure m(MeasureFamily::general_potential, dim);
    m.potential_ = std::move(potential);
    m.radius_ = support_radius;
    m.convex_ = true;
    m.expression_ = std::move(expression);
    return m;
}

LogConcaveMeasure LogConcaveMeasure::general_potential(const Polynomial& potential, double support_radius,
                                                       bool convexity_attested) {
    std::string text = to_string(potential);
    return general_potential(
        potential.dim(), [potential](std::span<const double> x) { return potential.eval(x); },
        support_radius, convexity_attested, std::move(text));
}

LogConcaveMeasure LogConcaveMeasure::with_log_normalization(double log_z) const {
    if (!std::isfinite(log_z)) {
        throw std::invalid_argument("log normalization must be finite");
    }
    LogConcaveMeasure m = *this;
    m.log_norm_ = log_z;
    return m;
}

LogConcaveMeasure LogConcaveMeasure::normalize_by_quadrature(double rel_tol) const {
    if (family_ != MeasureFamily::general_potential) {
        return *this;
    }
    const std::vector<double> origin(dim_, 0.0);
    const double v0 = potential_(origin);
    auto integrand = [&](std::span<const double> x) { return std::exp(v0 - potential_(x)); };
    const double n = static_cast<double>(dim_);
    const double ball_volume =
        std::exp(0.5 * n * std::log(std::numbers::pi) + n * std::log(radius_) - std::lgamma(0.5 * n + 1.0));
    const double rough = integrate_ball(integrand, dim_, radius_, 1e-6 * ball_volume);
    if (!(rough > 0.0) || !std::isfinite(rough)) {
        throw NumericalError("normalize_by_quadrature: potential has no finite positive mass");
    }
    const double z = integrate_ball(integrand, dim_, radius_, rel_tol * rough);
    return with_log_normalization(std::log(z) - v0);
}

bool LogConcaveMeasure::in_support(std::span<const double> x) const {
    if (x.size() != dim_) {
        throw DimensionMismatch("measure support", dim_, x.size());
    }
    switch (family_) {
        case MeasureFamily::standard_gaussian:
        case MeasureFamily::product_exponential:
            return true;
        case MeasureFamily::uniform_box:
            for (std::size_t i = 0; i < dim_; ++i) {
                if (x[i] < lower_[i] || x[i] > upper_[i]) {
                    return false;
                }
            }
            return true;
        case MeasureFamily::uniform_ball:
        case MeasureFamily::general_potential:
            return squared_norm(x) <= radius_ * radius_;
    }
    return false;
}

double LogConcaveMeasure::log_density(std::span<const double> x) const {
    if (x.size() != dim_) {
        throw DimensionMismatch("log_density", dim_, x.size());
    }
    const double log_z = log_norm_.value_or(0.0);
    switch (family_) {
        case MeasureFamily::standard_gaussian:
            return -0.5 * squared_norm(x) - log_z;
        case MeasureFamily::product_exponential: {
            double s = 0.0;
            for (std::size_t i = 0; i < dim_; ++i) {
                s += rates_[i] * std::fabs(x[i]);
            }
            return -s - log_z;
        }
        case MeasureFamily::uniform_box:
        case MeasureFamily::uniform_ball:
            return in_support(x) ? -log_z : kNegInf;
        case MeasureFamily::general_potential:
            return in_support(x) ? -potential_(x) - log_z : kNegInf;
    }
    return kNegInf;
}

double LogConcaveMeasure::density(std::span<const double> x) const { return std::exp(log_density(x)); }

double density(const LogConcaveMeasure& m, std::span<const double> x) { return m.density(x); }

bool LogConcaveMeasure::is_isotropic_family() const noexcept {
    return family_ == MeasureFamily::standard_gaussian;
}

bool LogConcaveMeasure::is_bounded() const noexcept {
    return family_ == MeasureFamily::uniform_box || family_ == MeasureFamily::uniform_ball ||
           family_ == MeasureFamily::general_potential;
}

double LogConcaveMeasure::effective_radius() const noexcept {
    switch (family_) {
        case MeasureFamily::standard_gaussian:
            return kGaussianRadius;
        case MeasureFamily::product_exponential:
            return kExponentialTail / *std::min_element(rates_.begin(), rates_.end());
        case MeasureFamily::uniform_box: {
            double s = 0.0;
            for (std::size_t i = 0; i < dim_; ++i) {
                const double c = std::max(std::fabs(lower_[i]), std::fabs(upper_[i]));
                s += c * c;
            }
            return std::sqrt(s);
        }
        case MeasureFamily::uniform_ball:
        case MeasureFamily::general_potential:
            return radius_;
    }
    return 0.0;
}

Chord LogConcaveMeasure::chord(std::span<const double> x, std::span<const double> u) const {
    if (x.size() != dim_ || u.size() != dim_) {
        throw DimensionMismatch("chord", dim_, x.size() != dim_ ? x.size() : u.size());
    }
    if (family_ != MeasureFamily::uniform_box) {
        return ball_chord(x, u, effective_radius());
    }
    Chord c{-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    for (std::size_t i = 0; i < dim_; ++i) {
        if (u[i] == 0.0) {
            if (x[i] < lower_[i] || x[i] > upper_[i]) {
                return {1.0, 0.0};
            }
            continue;
        }
        double t0 = (lower_[i] - x[i]) / u[i];
        double t1 = (upper_[i] - x[i]) / u[i];
        if (t0 > t1) {
            std::swap(t0, t1);
        }
        c.lo = std::max(c.lo, t0);
        c.hi = std::min(c.hi, t1);
    }
    return c;
}

std::string LogConcaveMeasure::label() const {
    std::string s = family_name(family_);
    s += "(dim=" + std::to_string(dim_) + ")";
    return s;
}

SamplingMethod SamplingMethod::automatic(const LogConcaveMeasure& m) {
    return m.has_exact_sampler() ? exact() : hit_and_run();
}

SampleSet::SampleSet(std::vector<double> points, std::size_t dim, std::uint64_t seed, SamplingMethod method,
                     LogConcaveMeasure measure)
    : points_(std::move(points)), dim_(dim), seed_(seed), method_(method), measure_(std::move(measure)) {
    if (dim_ == 0 || points_.empty() || points_.size() % dim_ != 0) {
        throw std::invalid_argument("SampleSet needs N ≥ 1 points of positive dimension");
    }
    for (double v : points_) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("SampleSet entries must be finite");
        }
    }
}

namespace {

void draw_exact(const LogConcaveMeasure& m, RandomStream& rng, std::span<double> out) {
    const std::size_t n = m.dim();
    switch (m.family()) {
        case MeasureFamily::standard_gaussian:
            for (double& v : out) {
                v = rng.normal();
            }
            return;
        case MeasureFamily::product_exponential:
            for (std::size_t i = 0; i < n; ++i) {
                const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
                out[i] = sign * rng.exponential() / m.rates()[i];
            }
            return;
        case MeasureFamily::uniform_box:
            for (std::size_t i = 0; i < n; ++i) {
                out[i] = m.lower()[i] + (m.upper()[i] - m.lower()[i]) * rng.uniform();
            }
            return;
        case MeasureFamily::uniform_ball: {
            double norm2 = 0.0;
            do {
                norm2 = 0.0;
                for (double& v : out) {
                    v = rng.normal();
                    norm2 += v * v;
                }
            } while (norm2 == 0.0);
            const double r = m.radius() * std::pow(rng.uniform(), 1.0 / static_cast<double>(n));
            const double s = r / std::sqrt(norm2);
            for (double& v : out) {
                v *= s;
            }
            return;
        }
        case MeasureFamily::general_potential:
            break;
    }
    throw std::invalid_argument("exact sampling is not available for general_potential");
}

std::vector<double> chain_start(const LogConcaveMeasure& m) {
    std::vector<double> x(m.dim(), 0.0);
    if (m.family() == MeasureFamily::uniform_box) {
        for (std::size_t i = 0; i < m.dim(); ++i) {
            x[i] = 0.5 * (m.lower()[i] + m.upper()[i]);
        }
    }
    return x;
}

}  // namespace

SampleSet sample(const LogConcaveMeasure& m, std::size_t n, std::uint64_t seed,
                 std::optional<SamplingMethod> method) {
    if (n == 0) {
        throw std::invalid_argument("sample: N must be at least 1");
    }
    const SamplingMethod how = method.value_or(SamplingMethod::automatic(m));
    const std::size_t dim = m.dim();
    std::vector<double> points(n * dim);
    RandomStream rng = RandomStream(seed).split(experiment_id("sample"));
    if (how.kind == SamplingMethod::Kind::exact) {
        for (std::size_t i = 0; i < n; ++i) {
            draw_exact(m, rng, std::span<double>(points.data() + i * dim, dim));
        }
        return SampleSet(std::move(points), dim, seed, how, m);
    }

    const unsigned thinning = how.thinning == 0 ? static_cast<unsigned>(10 * dim) : how.thinning;
    std::vector<double> x = chain_start(m);
    if (!std::isfinite(m.log_density(x))) {
        throw NumericalError("hit-and-run start point has zero density");
    }
    std::vector<double> u(dim);
    std::vector<double> probe(dim);
    auto line_log_density = [&](double t) {
        for (std::size_t k = 0; k < dim; ++k) {
            probe[k] = x[k] + t * u[k];
        }
        return m.log_density(probe);
    };
    auto step = [&] {
        double norm2 = 0.0;
        do {
            norm2 = 0.0;
            for (double& v : u) {
                v = rng.normal();
                norm2 += v * v;
            }
        } while (norm2 == 0.0);
        const double inv = 1.0 / std::sqrt(norm2);
        for (double& v : u) {
            v *= inv;
        }
        const Chord c = m.chord(x, u);
        if (c.empty()) {
            return;
        }
        const double t = sample_line_logconcave(line_log_density, c.lo, c.hi, rng);
        for (std::size_t k = 0; k < dim; ++k) {
            x[k] += t * u[k];
        }
    };
    for (unsigned b = 0; b < how.burn_in; ++b) {
        step();
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (unsigned s = 0; s < thinning; ++s) {
            step();
        }
        std::copy(x.begin(), x.end(), points.begin() + static_cast<std::ptrdiff_t>(i * dim));
    }
    SamplingMethod echo = how;
    echo.thinning = thinning;
    return SampleSet(std::move(points), dim, seed, echo, m);
}

AffineMap::AffineMap(std::vector<double> matrix, std::vector<double> shift)
    : matrix_(std::move(matrix)), shift_(std::move(shift)) {
    const std::size_t n = shift_.size();
    if (n == 0 || matrix_.size() != n * n) {
        throw std::invalid_argument("AffineMap needs an n × n matrix and length-n shift");
    }
    const double det = determinant();
    if (!std::isfinite(det) || det == 0.0) {
        throw NumericalError("AffineMap matrix is singular");
    }
}

AffineMap AffineMap::identity(std::size_t dim) {
    std::vector<double> a(dim * dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i) {
        a[i * dim + i] = 1.0;
    }
    return AffineMap(std::move(a), std::vector<double>(dim, 0.0));
}

std::vector<double> AffineMap::apply(std::span<const double> x) const {
    const std::size_t n = dim();
    if (x.size() != n) {
        throw DimensionMismatch("AffineMap::apply", n, x.size());
    }
    std::vector<double> y(shift_);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            y[i] += matrix_[i * n + j] * x[j];
        }
    }
    return y;
}

SampleSet AffineMap::apply(const SampleSet& s) const {
    const std::size_t n = dim();
    if (s.dim() != n) {
        throw DimensionMismatch("AffineMap::apply(SampleSet)", n, s.dim());
    }
    std::vector<double> out;
    out.reserve(s.data().size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        const auto y = apply(s.point(i));
        out.insert(out.end(), y.begin(), y.end());
    }
    return SampleSet(std::move(out), n, s.seed(), s.method(), s.measure());
}

AffineMap AffineMap::inverse() const {
    const std::size_t n = dim();
    using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const Eigen::Map<const RowMatrix> a(matrix_.data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    const Eigen::Map<const Eigen::VectorXd> b(shift_.data(), static_cast<Eigen::Index>(n));
    const RowMatrix inv = a.partialPivLu().inverse();
    const Eigen::VectorXd c = -(inv * b);
    return AffineMap(std::vector<double>(inv.data(), inv.data() + n * n),
                     std::vector<double>(c.data(), c.data() + n));
}

double AffineMap::determinant() const {
    const std::size_t n = dim();
    using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const Eigen::Map<const RowMatrix> a(matrix_.data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    return a.determinant();
}

AffineMap isotropize(const SampleSet& s) {
    const std::size_t n = s.dim();
    const std::size_t count = s.size();
    if (count <= n) {
        throw std::invalid_argument("isotropize: need more points than dimensions");
    }
    const auto rows = static_cast<Eigen::Index>(count);
    const auto cols = static_cast<Eigen::Index>(n);
    using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const Eigen::Map<const RowMatrix> x(s.data().data(), rows, cols);
    const Eigen::RowVectorXd mean = x.colwise().mean();
    const RowMatrix centred = x.rowwise() - mean;
    Eigen::MatrixXd cov = (centred.transpose() * centred) / static_cast<double>(count);
    const double ridge = 1e-12 * cov.trace() / static_cast<double>(n);
    cov.diagonal().array() += ridge;
    const Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success || !(cov.trace() > 0.0)) {
        throw NumericalError("isotropize: sample covariance is singular");
    }
    const Eigen::MatrixXd l = llt.matrixL();
    const Eigen::MatrixXd l_inv = l.triangularView<Eigen::Lower>().solve(Eigen::MatrixXd::Identity(cols, cols));
    const Eigen::VectorXd shift = -(l_inv * mean.transpose());
    std::vector<double> a(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            a[i * n + j] = l_inv(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        }
    }
    return AffineMap(std::move(a), std::vector<double>(shift.data(), shift.data() + n));
}

double skorohod_tv(const LogConcaveMeasure& m, const Direction& e, double abs_tol) {
    const std::size_t n = m.dim();
    if (e.dim() != n) {
        throw DimensionMismatch("skorohod_tv direction", n, e.dim());
    }
    if (n > 4) {
        throw std::invalid_argument("skorohod_tv: dimension must be at most 4");
    }
    if (!m.normalized()) {
        throw std::invalid_argument("skorohod_tv: density must be normalized");
    }
    const std::span<const double> dir = e.components();

    // Columns 1..n-1 of the Householder reflector mapping e_1 to ±e span e⊥.
    std::vector<double> v(dir.begin(), dir.end());
    v[0] += dir[0] >= 0.0 ? 1.0 : -1.0;
    const double vv = squared_norm(v);
    std::vector<std::vector<double>> basis;
    for (std::size_t j = 1; j < n; ++j) {
        std::vector<double> col(n, 0.0);
        col[j] = 1.0;
        const double scale = 2.0 * v[j] / vv;
        for (std::size_t i = 0; i < n; ++i) {
            col[i] -= scale * v[i];
        }
        basis.push_back(std::move(col));
    }

    std::vector<double> y(n);
    std::vector<double> probe(n);
    auto fibre_max = [&](std::span<const double> s) {
        std::fill(y.begin(), y.end(), 0.0);
        for (std::size_t j = 0; j + 1 < n; ++j) {
            for (std::size_t i = 0; i < n; ++i) {
                y[i] += s[j] * basis[j][i];
            }
        }
        const Chord c = m.chord(y, dir);
        if (c.empty()) {
            return 0.0;
        }
        auto along = [&](double t) {
            for (std::size_t i = 0; i < n; ++i) {
                probe[i] = y[i] + t * dir[i];
            }
            return m.log_density(probe);
        };
        const Maximum best = golden_section_max(along, c.lo, c.hi, 1e-12);
        return std::exp(best.value);
    };

    if (n == 1) {
        return 2.0 * fibre_max({});
    }
    return 2.0 * integrate_ball(fibre_max, n - 1, m.effective_radius(), 0.5 * abs_tol);
}

}  // namespace lcpoly
