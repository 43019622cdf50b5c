#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lcpoly/polynomial.hpp"
#include "lcpoly/quadrature.hpp"
#include "lcpoly/rng.hpp"

namespace lcpoly {

enum class MeasureFamily {
    standard_gaussian,
    product_exponential,  // ∏ (λ_i/2) e^{-λ_i |x_i|}
    uniform_box,
    uniform_ball,         // centred
    general_potential,    // e^{-V} on the centred ball of radius R
};

[[nodiscard]] const char* family_name(MeasureFamily family) noexcept;
/// Accepts the canonical names plus hyphenated and short aliases
/// ("gaussian", "uniform-box", "laplace", ...).
[[nodiscard]] std::optional<MeasureFamily> family_from_name(std::string_view name);

using PotentialFn = std::function<double(std::span<const double>)>;

struct Chord {
    double lo = 0.0;
    double hi = 0.0;
    [[nodiscard]] bool empty() const noexcept { return !(hi >= lo); }
};

/// Immutable descriptor of a log-concave probability measure on R^dim.
class LogConcaveMeasure {
public:
    static LogConcaveMeasure standard_gaussian(std::size_t dim);
    static LogConcaveMeasure product_exponential(std::vector<double> rates);
    static LogConcaveMeasure uniform_box(std::vector<double> lower, std::vector<double> upper);
    static LogConcaveMeasure uniform_ball(std::size_t dim, double radius);
    /// `potential` must be convex; the caller attests this explicitly.
    /// `expression` (optional) is the serializable text of V.
    static LogConcaveMeasure general_potential(std::size_t dim, PotentialFn potential,
                                               double support_radius, bool convexity_attested,
                                               std::string expression = {});
    static LogConcaveMeasure general_potential(const Polynomial& potential, double support_radius,
                                               bool convexity_attested);

    [[nodiscard]] MeasureFamily family() const noexcept { return family_; }
    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
    [[nodiscard]] const std::vector<double>& rates() const noexcept { return rates_; }
    [[nodiscard]] const std::vector<double>& lower() const noexcept { return lower_; }
    [[nodiscard]] const std::vector<double>& upper() const noexcept { return upper_; }
    /// Ball radius, or the support radius of a general potential.
    [[nodiscard]] double radius() const noexcept { return radius_; }
    [[nodiscard]] const std::string& potential_expression() const noexcept { return expression_; }
    [[nodiscard]] bool convexity_attested() const noexcept { return convex_; }

    /// log Z such that ρ = e^{-V} / Z; empty when unknown.
    [[nodiscard]] std::optional<double> log_normalization() const noexcept { return log_norm_; }
    [[nodiscard]] bool normalized() const noexcept { return log_norm_.has_value(); }
    [[nodiscard]] LogConcaveMeasure with_log_normalization(double log_z) const;
    /// For a general potential: computes log Z by nested quadrature over the
    /// support ball (dim ≤ 4). Other families are returned unchanged.
    [[nodiscard]] LogConcaveMeasure normalize_by_quadrature(double rel_tol = 1e-10) const;

    /// log ρ(x), normalized when the normalization is known; -inf off the support.
    [[nodiscard]] double log_density(std::span<const double> x) const;
    [[nodiscard]] double density(std::span<const double> x) const;
    [[nodiscard]] bool in_support(std::span<const double> x) const;

    [[nodiscard]] bool is_isotropic_family() const noexcept;
    [[nodiscard]] bool has_exact_sampler() const noexcept {
        return family_ != MeasureFamily::general_potential;
    }
    [[nodiscard]] bool is_bounded() const noexcept;
    /// Radius of a centred ball holding all but a negligible (< e^{-40}) part of the mass.
    [[nodiscard]] double effective_radius() const noexcept;

    /// {t : x + t u ∈ support}, clipped to the effective ball for unbounded families.
    [[nodiscard]] Chord chord(std::span<const double> x, std::span<const double> u) const;

    [[nodiscard]] std::string label() const;

private:
    LogConcaveMeasure(MeasureFamily family, std::size_t dim);

    MeasureFamily family_;
    std::size_t dim_;
    std::vector<double> rates_;
    std::vector<double> lower_;
    std::vector<double> upper_;
    double radius_ = 0.0;
    PotentialFn potential_;
    std::string expression_;
    bool convex_ = false;
    std::optional<double> log_norm_;
};

[[nodiscard]] double density(const LogConcaveMeasure& m, std::span<const double> x);

struct SamplingMethod {
    enum class Kind { exact, hit_and_run };
    Kind kind = Kind::exact;
    unsigned burn_in = 1000;
    /// 0 selects the default of 10·dim.
    unsigned thinning = 0;

    static SamplingMethod exact() { return {}; }
    static SamplingMethod hit_and_run(unsigned burn_in = 1000, unsigned thinning = 0) {
        return {Kind::hit_and_run, burn_in, thinning};
    }
    /// Exact where available, hit-and-run with defaults otherwise.
    static SamplingMethod automatic(const LogConcaveMeasure& m);
};

/// N × dim draws (row-major), with the provenance needed to regenerate them.
class SampleSet {
public:
    SampleSet(std::vector<double> points, std::size_t dim, std::uint64_t seed, SamplingMethod method,
              LogConcaveMeasure measure);

    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
    [[nodiscard]] std::size_t size() const noexcept { return points_.size() / dim_; }
    [[nodiscard]] std::span<const double> point(std::size_t i) const {
        return {points_.data() + i * dim_, dim_};
    }
    [[nodiscard]] const std::vector<double>& data() const noexcept { return points_; }
    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
    [[nodiscard]] const SamplingMethod& method() const noexcept { return method_; }
    [[nodiscard]] const LogConcaveMeasure& measure() const noexcept { return measure_; }

private:
    std::vector<double> points_;
    std::size_t dim_;
    std::uint64_t seed_;
    SamplingMethod method_;
    LogConcaveMeasure measure_;
};

/// Deterministic in (m, n, seed, method).
[[nodiscard]] SampleSet sample(const LogConcaveMeasure& m, std::size_t n, std::uint64_t seed,
                               std::optional<SamplingMethod> method = std::nullopt);

/// One draw from the density proportional to exp(log_density) on [lo, hi].
/// log_density must be concave there. Throws NumericalError if the bracket
/// carries no mass.
[[nodiscard]] double sample_line_logconcave(const Function1D& log_density, double lo, double hi,
                                            RandomStream& rng);

/// x ↦ matrix·x + shift, matrix row-major and invertible.
class AffineMap {
public:
    AffineMap(std::vector<double> matrix, std::vector<double> shift);
    static AffineMap identity(std::size_t dim);

    [[nodiscard]] std::size_t dim() const noexcept { return shift_.size(); }
    [[nodiscard]] const std::vector<double>& matrix() const noexcept { return matrix_; }
    [[nodiscard]] const std::vector<double>& shift() const noexcept { return shift_; }
    [[nodiscard]] std::vector<double> apply(std::span<const double> x) const;
    [[nodiscard]] SampleSet apply(const SampleSet& s) const;
    [[nodiscard]] AffineMap inverse() const;
    [[nodiscard]] double determinant() const;

private:
    std::vector<double> matrix_;
    std::vector<double> shift_;
};

/// Affine map sending the empirical measure of `s` to mean 0 and identity
/// covariance (1/N normalization; ridge 1e-12·tr(Σ)/dim before Cholesky).
[[nodiscard]] AffineMap isotropize(const SampleSet& s);

/// Total variation of the Skorohod derivative along e:
/// 2 ∫_{e⊥} max_t ρ(x + t e) dx by nested adaptive quadrature. dim ≤ 4,
/// density must be normalized.
[[nodiscard]] double skorohod_tv(const LogConcaveMeasure& m, const Direction& e,
                                 double abs_tol = 1e-9);

}  // namespace lcpoly
