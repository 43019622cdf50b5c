#include "lcpoly/pushforward.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "lcpoly/error.hpp"
#include "lcpoly/parser.hpp"

namespace lcpoly {

Pushforward1D::Pushforward1D(std::vector<double> values, PushforwardSource source)
    : values_(std::move(values)), source_(std::move(source)) {
    if (values_.size() < 2) {
        throw std::invalid_argument("Pushforward1D needs at least two values");
    }
    for (double v : values_) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("Pushforward1D values must be finite");
        }
    }
}

Pushforward1D push(const SampleSet& s, const Polynomial& p) {
    if (s.dim() != p.dim()) {
        throw DimensionMismatch("push", s.dim(), p.dim());
    }
    std::vector<double> values(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        values[i] = p.eval(s.point(i));
    }
    return Pushforward1D(std::move(values), {s.seed(), s.measure().label(), to_string(p)});
}

namespace {

// Neumaier-compensated mean of map(v), exact to a few ulps independent of the sample size.
template <class Map>
double compensated_mean(std::span<const double> values, Map map) {
    double sum = 0.0;
    double carry = 0.0;
    for (double v : values) {
        const double x = map(v);
        const double t = sum + x;
        carry += std::fabs(sum) >= std::fabs(x) ? (sum - t) + x : (x - t) + sum;
        sum = t;
    }
    return (sum + carry) / static_cast<double>(values.size());
}

}  // namespace

double moment_norm(std::span<const double> values, double r) {
    if (!(r >= 0.0)) {
        throw std::invalid_argument("moment_norm: r must be non-negative");
    }
    if (values.empty()) {
        throw std::invalid_argument("moment_norm: empty sample");
    }
    if (r == 0.0) {
        for (double v : values) {
            if (v == 0.0) {
                return 0.0;
            }
        }
        return std::exp(compensated_mean(values, [](double v) { return std::log(std::fabs(v)); }));
    }
    if (r == 1.0) {
        return compensated_mean(values, [](double v) { return std::fabs(v); });
    }
    if (r == 2.0) {
        return std::sqrt(compensated_mean(values, [](double v) { return v * v; }));
    }
    return std::pow(compensated_mean(values, [r](double v) { return std::pow(std::fabs(v), r); }), 1.0 / r);
}

double moment_norm(const Pushforward1D& pf, double r) { return moment_norm(pf.values(), r); }

MeanVariance mean_and_variance(std::span<const double> values) {
    if (values.size() < 2) {
        throw std::invalid_argument("mean_and_variance: need at least two values");
    }
    // Two-pass for accuracy; a constant sample gives exactly zero variance.
    const auto n = static_cast<double>(values.size());
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : values) {
        const double d = v - mean;
        ss += d * d;
    }
    return {mean, ss / (n - 1.0)};
}

MeanVariance mean_and_variance(const Pushforward1D& pf) { return mean_and_variance(pf.values()); }

std::size_t auto_bin_count(std::size_t na, std::size_t nb) {
    const double n = static_cast<double>(std::min(na, nb));
    auto bins = static_cast<std::size_t>(std::ceil(std::cbrt(n) - 1e-9));
    return std::clamp<std::size_t>(bins, 16, 4096);
}

PooledBinning bin_pooled(std::span<const double> a, std::span<const double> b, std::size_t bins) {
    if (a.empty() || b.empty()) {
        throw std::invalid_argument("bin_pooled: both samples must be nonempty");
    }
    if (bins == 0) {
        throw std::invalid_argument("bin_pooled: bins must be positive");
    }
    const std::size_t na = a.size();
    const std::size_t total = na + b.size();
    struct Entry {
        double value;
        std::uint32_t index;  // < na: from a, otherwise from b
    };
    std::vector<Entry> pooled(total);
    for (std::size_t i = 0; i < na; ++i) pooled[i] = {a[i], static_cast<std::uint32_t>(i)};
    for (std::size_t i = 0; i < b.size(); ++i) pooled[na + i] = {b[i], static_cast<std::uint32_t>(na + i)};
    std::sort(pooled.begin(), pooled.end(),
              [](const Entry& x, const Entry& y) { return x.value < y.value || (x.value == y.value && x.index < y.index); });

    // m_k = floor(k·M/B + 1/2) for k = 0..B.
    const auto m_total = static_cast<unsigned __int128>(total);
    std::vector<std::size_t> boundary(bins + 1);
    for (std::size_t k = 0; k <= bins; ++k) {
        boundary[k] = static_cast<std::size_t>((2 * k * m_total + bins) / (2 * bins));
    }

    PooledBinning out;
    out.counts.a.assign(bins, 0);
    out.counts.b.assign(bins, 0);
    out.counts.na = static_cast<std::int64_t>(na);
    out.counts.nb = static_cast<std::int64_t>(b.size());
    out.bin_of_a.resize(na);
    out.bin_of_b.resize(b.size());

    std::size_t bin = 0;
    for (std::size_t lo = 0; lo < total;) {
        std::size_t hi = lo;
        while (hi + 1 < total && pooled[hi + 1].value == pooled[lo].value) {
            ++hi;
        }
        // Bin j holds mid-ranks in [m_j, m_{j+1}); compare doubled ranks.
        while (bin + 1 < bins && 2 * boundary[bin + 1] <= lo + hi) {
            ++bin;
        }
        for (std::size_t r = lo; r <= hi; ++r) {
            const std::uint32_t idx = pooled[r].index;
            if (idx < na) {
                out.bin_of_a[idx] = static_cast<std::uint32_t>(bin);
                ++out.counts.a[bin];
            } else {
                out.bin_of_b[idx - na] = static_cast<std::uint32_t>(bin);
                ++out.counts.b[bin];
            }
        }
        lo = hi + 1;
    }

    out.edges.resize(bins + 1);
    out.edges.front() = pooled.front().value;
    out.edges.back() = pooled.back().value;
    for (std::size_t k = 1; k < bins; ++k) {
        const std::size_t r = std::clamp<std::size_t>(boundary[k], 1, total - 1);
        out.edges[k] = 0.5 * (pooled[r - 1].value + pooled[r].value);
    }
    return out;
}

double binned_tv(const BinnedCounts& counts) {
    if (counts.a.size() != counts.b.size() || counts.na <= 0 || counts.nb <= 0) {
        throw std::invalid_argument("binned_tv: malformed counts");
    }
    // Σ |a_b·N_b − b_b·N_a| / (2 N_a N_b), exact in 128-bit integers.
    unsigned __int128 sum = 0;
    for (std::size_t k = 0; k < counts.a.size(); ++k) {
        const __int128 d = static_cast<__int128>(counts.a[k]) * counts.nb -
                           static_cast<__int128>(counts.b[k]) * counts.na;
        sum += static_cast<unsigned __int128>(d < 0 ? -d : d);
    }
    const long double denom = 2.0L * static_cast<long double>(counts.na) * static_cast<long double>(counts.nb);
    return static_cast<double>(static_cast<long double>(sum) / denom);
}

BinnedCounts merge_adjacent(const BinnedCounts& counts, std::size_t first) {
    if (first + 1 >= counts.a.size()) {
        throw std::invalid_argument("merge_adjacent: bin index out of range");
    }
    BinnedCounts out;
    out.na = counts.na;
    out.nb = counts.nb;
    for (std::size_t k = 0; k < counts.a.size(); ++k) {
        if (k == first + 1) {
            out.a.back() += counts.a[k];
            out.b.back() += counts.b[k];
            continue;
        }
        out.a.push_back(counts.a[k]);
        out.b.push_back(counts.b[k]);
    }
    return out;
}

RandomStream default_bootstrap_stream() {
    return RandomStream(0x6c63706f6c79ull).split(experiment_id("tv-bootstrap"));
}

TVEstimate tv_histogram(std::span<const double> a, std::span<const double> b, std::size_t bins,
                        RandomStream bootstrap, std::size_t resamples) {
    if (a.empty() || b.empty()) {
        throw std::invalid_argument("tv_histogram: both samples must be nonempty");
    }
    TVEstimate est;
    est.bins = bins == 0 ? auto_bin_count(a.size(), b.size()) : bins;
    const PooledBinning binning = bin_pooled(a, b, est.bins);
    est.value = binned_tv(binning.counts);
    if (resamples < 2) {
        return est;
    }

    BinnedCounts boot;
    boot.na = binning.counts.na;
    boot.nb = binning.counts.nb;
    const bool paired = a.size() == b.size();
    std::vector<double> replicate(resamples);
    for (std::size_t r = 0; r < resamples; ++r) {
        boot.a.assign(est.bins, 0);
        boot.b.assign(est.bins, 0);
        if (paired) {
            for (std::size_t i = 0; i < a.size(); ++i) {
                const auto j = bootstrap.below(a.size());
                ++boot.a[binning.bin_of_a[j]];
                ++boot.b[binning.bin_of_b[j]];
            }
        } else {
            for (std::size_t i = 0; i < a.size(); ++i) {
                ++boot.a[binning.bin_of_a[bootstrap.below(a.size())]];
            }
            for (std::size_t i = 0; i < b.size(); ++i) {
                ++boot.b[binning.bin_of_b[bootstrap.below(b.size())]];
            }
        }
        replicate[r] = binned_tv(boot);
    }
    est.bootstrap_stderr = std::sqrt(mean_and_variance(replicate).variance);
    return est;
}

TVEstimate tv_histogram(const Pushforward1D& a, const Pushforward1D& b, std::size_t bins,
                        RandomStream bootstrap, std::size_t resamples) {
    return tv_histogram(a.values(), b.values(), bins, bootstrap, resamples);
}

double tv_oracle_1d(const Function1D& p, const Function1D& q, double lo, double hi, double abs_tol,
                    std::span<const double> breakpoints) {
    if (!(lo < hi)) {
        throw std::invalid_argument("tv_oracle_1d: domain must satisfy lo < hi");
    }
    for (const auto* density : {&p, &q}) {
        const auto mass = integrate_simpson(*density, lo, hi, 1e-10);
        if (std::fabs(mass.value - 1.0) > 1e-8) {
            throw std::domain_error("tv_oracle_1d: density does not integrate to 1 on the domain (got " +
                                    std::to_string(mass.value) + ")");
        }
    }
    auto diff = [&](double t) { return p(t) - q(t); };
    auto sign_of = [&](double t) {
        const double d = diff(t);
        return std::isfinite(d) ? (d > 0.0) - (d < 0.0) : 0;
    };

    std::vector<double> cuts{lo, hi};
    for (double bp : breakpoints) {
        if (bp > lo && bp < hi) cuts.push_back(bp);
    }
    constexpr std::size_t kScan = 4096;
    const double step = (hi - lo) / kScan;
    double prev_t = lo + 0.5 * step;
    int prev_s = sign_of(prev_t);
    for (std::size_t i = 1; i < kScan; ++i) {
        const double t = lo + (static_cast<double>(i) + 0.5) * step;
        const int s = sign_of(t);
        if (s != 0 && prev_s != 0 && s != prev_s) {
            double a = prev_t;
            double b = t;
            for (int it = 0; it < 200 && b - a > 1e-15 * (1.0 + std::fabs(a)); ++it) {
                const double mid = 0.5 * (a + b);
                const int sm = sign_of(mid);
                if (sm == prev_s) {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            cuts.push_back(0.5 * (a + b));
        }
        if (s != 0) {
            prev_s = s;
            prev_t = t;
        }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    auto abs_diff = [&](double t) { return std::fabs(diff(t)); };
    double total = 0.0;
    const double piece_tol = abs_tol / static_cast<double>(cuts.size());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        auto r = integrate_simpson(abs_diff, cuts[i], cuts[i + 1], piece_tol);
        if (!r.converged && r.error > 1e3 * piece_tol) {
            // Endpoint singularities: Gauss-Kronrod never evaluates the endpoints.
            r = integrate_gk15(abs_diff, cuts[i], cuts[i + 1], piece_tol, 0.0, 8, 200000);
            if (!r.converged) {
                throw NumericalError("tv_oracle_1d: quadrature did not converge");
            }
        }
        total += r.value;
    }
    return 0.5 * total;
}

std::vector<TVEstimate> shift_family_tv_on_samples(const SampleSet& s, const Polynomial& g, const Polynomial& h,
                                                   std::span<const double> deltas, std::size_t bins) {
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        if (!(deltas[i] > 0.0) || (i > 0 && !(deltas[i] > deltas[i - 1]))) {
            throw std::invalid_argument("shift_family_tv: deltas must be positive and ascending");
        }
    }
    const Pushforward1D gv = push(s, g);
    const Pushforward1D hv = push(s, h);
    const RandomStream root = RandomStream(s.seed()).split(experiment_id("shift-family-bootstrap"));
    std::vector<TVEstimate> out;
    out.reserve(deltas.size());
    std::vector<double> fv(gv.size());
    for (std::size_t k = 0; k < deltas.size(); ++k) {
        for (std::size_t i = 0; i < fv.size(); ++i) {
            fv[i] = gv.values()[i] + deltas[k] * hv.values()[i];
        }
        out.push_back(tv_histogram(gv.values(), fv, bins, root.split(k)));
    }
    return out;
}

std::vector<TVEstimate> shift_family_tv(const LogConcaveMeasure& m, const Polynomial& g, const Polynomial& h,
                                        std::span<const double> deltas, std::size_t n, std::uint64_t seed,
                                        std::size_t bins, std::optional<SamplingMethod> method) {
    return shift_family_tv_on_samples(sample(m, n, seed, method), g, h, deltas, bins);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double fit_loglog_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw std::invalid_argument("fit_loglog_slope: length mismatch");
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] > 0.0 && y[i] > 0.0) {
            const double lx = std::log(x[i]);
            const double ly = std::log(y[i]);
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
            ++n;
        }
    }
    if (n < 2) {
        throw std::invalid_argument("fit_loglog_slope: need two positive points");
    }
    const double dn = static_cast<double>(n);
    const double denom = dn * sxx - sx * sx;
    if (denom == 0.0) {
        throw std::invalid_argument("fit_loglog_slope: x values are all equal");
    }
    return (dn * sxy - sx * sy) / denom;
}

std::vector<double> log_grid(double lo, double hi, std::size_t count) {
    if (!(lo > 0.0) || !(hi >= lo) || count == 0) {
        throw std::invalid_argument("log_grid: need 0 < lo ≤ hi and count ≥ 1");
    }
    std::vector<double> grid(count);
    if (count == 1) {
        grid[0] = lo;
        return grid;
    }
    const double a = std::log(lo);
    const double b = std::log(hi);
    for (std::size_t i = 0; i < count; ++i) {
        grid[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
    }
    grid.front() = lo;
    grid.back() = hi;
    return grid;
}

}  // namespace lcpoly
