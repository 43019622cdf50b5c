#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lcpoly/measure.hpp"
#include "lcpoly/polynomial.hpp"
#include "lcpoly/quadrature.hpp"
#include "lcpoly/rng.hpp"

namespace lcpoly {

struct PushforwardSource {
    std::uint64_t seed = 0;
    std::string measure;
    std::string polynomial;
};

/// Empirical law of f(X): the values f(X_i) with their provenance.
class Pushforward1D {
public:
    /// Requires at least two finite values.
    explicit Pushforward1D(std::vector<double> values, PushforwardSource source = {});

    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] const PushforwardSource& source() const noexcept { return source_; }

private:
    std::vector<double> values_;
    PushforwardSource source_;
};

[[nodiscard]] Pushforward1D push(const SampleSet& s, const Polynomial& p);

/// (mean |v|^r)^{1/r}; r = 0 gives exp(mean ln|v|), which is 0 if any value is 0.
[[nodiscard]] double moment_norm(std::span<const double> values, double r);
[[nodiscard]] double moment_norm(const Pushforward1D& pf, double r);

struct MeanVariance {
    double mean = 0.0;
    double variance = 0.0;  // unbiased
};

[[nodiscard]] MeanVariance mean_and_variance(std::span<const double> values);
[[nodiscard]] MeanVariance mean_and_variance(const Pushforward1D& pf);

/// ⌈min(N_a, N_b)^{1/3}⌉ clamped to [16, 4096].
[[nodiscard]] std::size_t auto_bin_count(std::size_t na, std::size_t nb);

/// Per-bin counts of two samples over shared bins.
struct BinnedCounts {
    std::vector<std::int64_t> a;
    std::vector<std::int64_t> b;
    std::int64_t na = 0;
    std::int64_t nb = 0;
};

/// Equal-mass bins over the pooled sample: bin j holds pooled ranks
/// [m_j, m_{j+1}) with m_k = round(k·M/B). Tied values share the bin of
/// their mid-rank, so the binning is invariant under any strictly
/// monotone map of the data (increasing or decreasing).
struct PooledBinning {
    BinnedCounts counts;
    std::vector<std::uint32_t> bin_of_a;
    std::vector<std::uint32_t> bin_of_b;
    /// B+1 edges: pooled min, midpoints at the rank boundaries, pooled max.
    std::vector<double> edges;
};

[[nodiscard]] PooledBinning bin_pooled(std::span<const double> a, std::span<const double> b,
                                       std::size_t bins);

/// ½ Σ_b |p̂_b - q̂_b|, accumulated exactly in integers.
[[nodiscard]] double binned_tv(const BinnedCounts& counts);

/// Counts with bins `first` and `first + 1` merged.
[[nodiscard]] BinnedCounts merge_adjacent(const BinnedCounts& counts, std::size_t first);

struct TVEstimate {
    double value = 0.0;
    std::size_t bins = 0;
    double bootstrap_stderr = 0.0;
    /// Histogram TV is a sup over a restricted test class: a lower bound of
    /// the true TV in expectation, up to sampling noise.
    bool lower_bound_in_expectation = true;
};

inline constexpr std::size_t kBootstrapResamples = 200;

/// Default bootstrap stream used when the caller does not supply one.
[[nodiscard]] RandomStream default_bootstrap_stream();

/// Histogram TV between two samples. `bins` = 0 selects auto_bin_count.
/// Samples of equal size are resampled in pairs (common random numbers).
[[nodiscard]] TVEstimate tv_histogram(std::span<const double> a, std::span<const double> b,
                                      std::size_t bins = 0,
                                      RandomStream bootstrap = default_bootstrap_stream(),
                                      std::size_t resamples = kBootstrapResamples);
[[nodiscard]] TVEstimate tv_histogram(const Pushforward1D& a, const Pushforward1D& b,
                                      std::size_t bins = 0,
                                      RandomStream bootstrap = default_bootstrap_stream(),
                                      std::size_t resamples = kBootstrapResamples);

/// ½ ∫ |p - q| over [lo, hi] for analytic densities: locates sign changes of
/// p - q on a grid (plus optional breakpoints), then integrates each
/// sign-constant piece by adaptive Simpson. Both densities must integrate to
/// 1 on the domain within 1e-8, else std::domain_error.
[[nodiscard]] double tv_oracle_1d(const Function1D& p, const Function1D& q, double lo, double hi,
                                  double abs_tol = 1e-9, std::span<const double> breakpoints = {});

/// TV estimates between the pushforwards of g and g + δ·h for each δ, all on
/// one sample set. `deltas` must be positive and ascending.
[[nodiscard]] std::vector<TVEstimate> shift_family_tv(const LogConcaveMeasure& m, const Polynomial& g,
                                                      const Polynomial& h, std::span<const double> deltas,
                                                      std::size_t n, std::uint64_t seed,
                                                      std::size_t bins = 0,
                                                      std::optional<SamplingMethod> method = std::nullopt);
/// As above on a given sample set; bootstrap streams derive from its seed.
[[nodiscard]] std::vector<TVEstimate> shift_family_tv_on_samples(const SampleSet& s, const Polynomial& g,
                                                                 const Polynomial& h,
                                                                 std::span<const double> deltas,
                                                                 std::size_t bins = 0);

[[nodiscard]] double normal_cdf(double x);

/// Least-squares slope of log y against log x over entries with x, y > 0.
[[nodiscard]] double fit_loglog_slope(std::span<const double> x, std::span<const double> y);

/// `count` points log-spaced on [lo, hi].
[[nodiscard]] std::vector<double> log_grid(double lo, double hi, std::size_t count);

}  // namespace lcpoly
