#include "lcpoly/check.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "lcpoly/error.hpp"
#include "lcpoly/parallel.hpp"
#include "lcpoly/parser.hpp"
#include "lcpoly/pushforward.hpp"
#include "lcpoly/serialize.hpp"

namespace lcpoly {
namespace {

constexpr std::size_t kBatches = 20;

nlohmann::json measure_echo(const LogConcaveMeasure& m) {
    try {
        return measure_to_json(m);
    } catch (const std::invalid_argument&) {
        return {{"label", m.label()}};
    }
}

nlohmann::json sample_echo(const SampleSet& s) {
    return {{"measure", measure_echo(s.measure())},
            {"seed", s.seed()},
            {"n", s.size()},
            {"method", sampling_method_to_json(s.method())}};
}

/// Standard error of a statistic from its values on contiguous batches.
double batch_stderr(std::size_t n, const std::function<double(std::size_t, std::size_t)>& stat) {
    if (n < 2 * kBatches) {
        return 0.0;
    }
    std::vector<double> values(kBatches);
    for (std::size_t b = 0; b < kBatches; ++b) {
        values[b] = stat(b * n / kBatches, (b + 1) * n / kBatches);
    }
    return std::sqrt(mean_and_variance(values).variance / static_cast<double>(kBatches));
}

std::vector<double> evaluate(const SampleSet& s, const Polynomial& p) {
    std::vector<double> out(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        out[i] = p.eval(s.point(i));
    }
    return out;
}

double relative_change(double reference, double value) {
    if (reference == value) {
        return 0.0;
    }
    return std::abs(value - reference) / std::max(std::abs(reference), std::numeric_limits<double>::min());
}

LogConcaveMeasure ensure_normalized(const LogConcaveMeasure& m) {
    return m.normalized() ? m : m.normalize_by_quadrature();
}

}  // namespace

nlohmann::json report_to_json(const CheckReport& r) {
    nlohmann::json j{{"name", r.name},       {"lhs", r.lhs},        {"rhs_core", r.rhs_core},
                     {"ratio", r.ratio},     {"stderr", r.std_error}, {"config", r.config}};
    if (r.passed) {
        j["pass"] = *r.passed;
    }
    return j;
}

double safe_ratio(double lhs, double rhs) noexcept {
    if (rhs > 0.0) {
        return lhs / rhs;
    }
    return lhs == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

CheckReport main_bound_on_samples(const SampleSet& s, const Polynomial& f, const Polynomial& g,
                                  std::size_t bins, RandomStream bootstrap, std::size_t resamples) {
    const unsigned d = std::max({f.degree(), g.degree(), 1u});
    const std::vector<double> fv = evaluate(s, f);
    const std::vector<double> gv = evaluate(s, g);
    const double sigma = std::sqrt(mean_and_variance(gv).variance);
    if (!(sigma >= 1e-12)) {
        throw DegenerateInput("degenerate variance");
    }
    // Differencing coefficients before evaluation avoids cancellation between nearby values.
    const std::vector<double> diff = evaluate(s, subtract(f, g));
    const TVEstimate tv = tv_histogram(fv, gv, bins, bootstrap, resamples);
    const double weight = std::pow(sigma, 1.0 / d);

    CheckReport r;
    r.name = "main-bound";
    r.lhs = weight * tv.value;
    r.rhs_core = std::pow(moment_norm(diff, 2.0), 1.0 / d);
    r.ratio = safe_ratio(r.lhs, r.rhs_core);
    r.std_error = r.rhs_core > 0.0 ? weight * tv.bootstrap_stderr / r.rhs_core : 0.0;
    r.config = sample_echo(s);
    r.config["f"] = to_string(f);
    r.config["g"] = to_string(g);
    r.config["bins"] = tv.bins;
    r.config["degree"] = d;
    return r;
}

CheckReport check_main_bound(const LogConcaveMeasure& m, const Polynomial& f, const Polynomial& g,
                             std::size_t n, std::uint64_t seed, std::size_t bins,
                             std::optional<SamplingMethod> method) {
    if (std::max(f.degree(), g.degree()) < 2) {
        throw std::invalid_argument("main bound needs max(deg f, deg g) >= 2");
    }
    const SampleSet s = sample(m, n, seed, method);
    return main_bound_on_samples(s, f, g, bins, RandomStream(seed).split(experiment_id("main-bound")));
}

LogConcaveMeasure ensemble_measure(MeasureFamily family, std::size_t dim) {
    switch (family) {
        case MeasureFamily::standard_gaussian:
            return LogConcaveMeasure::standard_gaussian(dim);
        case MeasureFamily::uniform_box:
            return LogConcaveMeasure::uniform_box(std::vector<double>(dim, -1.0), std::vector<double>(dim, 1.0));
        case MeasureFamily::product_exponential:
            return LogConcaveMeasure::product_exponential(std::vector<double>(dim, 1.0));
        case MeasureFamily::uniform_ball:
            return LogConcaveMeasure::uniform_ball(dim, 1.0);
        case MeasureFamily::general_potential:
            break;
    }
    throw std::invalid_argument("ensembles do not support general_potential");
}

std::vector<double> default_delta_grid() { return log_grid(1e-3, 1e-1, 10); }

ConstantEstimate estimate_constant(const EnsembleSpec& spec, std::size_t n, std::uint64_t seed) {
    if (spec.families.empty() || (spec.dims.empty() && !spec.fixed_g)) {
        throw std::invalid_argument("ensemble needs at least one family and one dimension");
    }
    const std::vector<double> deltas = spec.deltas.empty() ? default_delta_grid() : spec.deltas;
    const RandomStream root = RandomStream(seed).split(experiment_id("estimate-constant"));

    std::vector<EnsembleCell> cells(spec.cells);
    parallel_for(spec.cells, resolve_thread_count(spec.threads), [&](std::size_t i) {
        RandomStream rng = root.split(i);
        const MeasureFamily family = spec.families[rng.below(spec.families.size())];
        const std::size_t dim = spec.fixed_g ? spec.fixed_g->dim() : spec.dims[rng.below(spec.dims.size())];
        const Polynomial g = spec.fixed_g ? *spec.fixed_g
                                          : random_polynomial(dim, spec.degree, spec.coefficient_scale, rng);
        Polynomial h(dim);
        if (!spec.trivial) {
            h = spec.fixed_h ? *spec.fixed_h : random_polynomial(dim, spec.degree, spec.coefficient_scale, rng);
        }
        const double delta = deltas[rng.below(deltas.size())];
        const std::uint64_t sample_seed = rng();
        const LogConcaveMeasure m = ensemble_measure(family, dim);
        const SampleSet s = sample(m, n, sample_seed);
        const Polynomial f = g + delta * h;
        const CheckReport r = main_bound_on_samples(s, f, g, spec.bins, rng.split(1));

        EnsembleCell& cell = cells[i];
        cell.index = i;
        cell.measure = family_name(family);
        cell.dim = dim;
        cell.g = to_string(g);
        cell.h = to_string(h);
        cell.delta = delta;
        cell.lhs = r.lhs;
        cell.rhs_core = r.rhs_core;
        cell.ratio = r.ratio;
        cell.tv_stderr = r.std_error;
        const double sigma_weight = std::pow(std::sqrt(mean_and_variance(evaluate(s, g)).variance),
                                             1.0 / std::max({f.degree(), g.degree(), 1u}));
        cell.tv = r.lhs / sigma_weight;
        if (spec.check_invariance) {
            constexpr double kScale = -2.5;
            constexpr double kShift = 0.75;
            // Translation by c costs about eps·|c| / |f - g| in the coefficients, so c stays O(1).
            constexpr double kTranslate = 0.75;
            const Polynomial c = Polynomial::constant(dim, kShift);
            const Polynomial t = Polynomial::constant(dim, kTranslate);
            const double scaled =
                main_bound_on_samples(s, kScale * f + c, kScale * g + c, spec.bins, rng.split(1), 0).ratio;
            const double shifted = main_bound_on_samples(s, f + t, g + t, spec.bins, rng.split(1), 0).ratio;
            cell.invariance_defect = std::max(relative_change(r.ratio, scaled), relative_change(r.ratio, shifted));
        }
    });

    ConstantEstimate est;
    est.degree = spec.fixed_g ? std::max(spec.fixed_g->degree(), spec.fixed_h ? spec.fixed_h->degree() : 0u)
                              : spec.degree;
    est.trials = spec.cells;
    double running = 0.0;
    for (const EnsembleCell& cell : cells) {
        est.ratios.push_back(cell.ratio);
        running = std::max(running, cell.ratio);
        est.trajectory.push_back(running);
        est.max_invariance_defect = std::max(est.max_invariance_defect, cell.invariance_defect);
    }
    est.c_hat = running;
    est.cells = std::move(cells);
    return est;
}

double trajectory_growth(std::span<const double> trajectory) {
    if (trajectory.size() < 2) {
        return 1.0;
    }
    const double earlier = trajectory[trajectory.size() / 2 - 1];
    const double last = trajectory.back();
    if (earlier == 0.0) {
        return last == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
    }
    return last / earlier;
}

CarberyWrightResult carbery_wright_on_samples(const SampleSet& s, const Polynomial& f,
                                              std::span<const double> t_grid) {
    if (f.is_constant()) {
        throw std::invalid_argument("small-ball check needs a non-constant polynomial");
    }
    if (t_grid.empty() || !std::is_sorted(t_grid.begin(), t_grid.end()) || !(t_grid.front() > 0.0)) {
        throw std::invalid_argument("t grid must be positive and ascending");
    }
    const unsigned d = f.degree();
    std::vector<double> abs_values = evaluate(s, f);
    for (double& v : abs_values) {
        v = std::abs(v);
    }
    const double n = static_cast<double>(abs_values.size());
    double mean_abs = 0.0;
    for (double v : abs_values) {
        mean_abs += v;
    }
    mean_abs /= n;
    std::sort(abs_values.begin(), abs_values.end());

    CarberyWrightResult out;
    const double weight = std::pow(mean_abs, 1.0 / d);
    nlohmann::json echo = sample_echo(s);
    echo["f"] = to_string(f);
    for (double t : t_grid) {
        const auto hits = static_cast<std::size_t>(
            std::upper_bound(abs_values.begin(), abs_values.end(), t) - abs_values.begin());
        const double p = static_cast<double>(hits) / n;
        CheckReport r;
        r.name = "carbery-wright";
        r.lhs = p * weight;
        r.rhs_core = d * std::pow(t, 1.0 / d);
        r.ratio = safe_ratio(r.lhs, r.rhs_core);
        r.std_error = std::sqrt(p * (1.0 - p) / n) * weight / r.rhs_core;
        r.config = echo;
        r.config["t"] = t;
        out.per_t.push_back(std::move(r));
        out.hits.push_back(hits);
    }
    if (out.hits.back() == 0) {
        throw DegenerateInput("no sample hits below the largest t");
    }

    std::vector<std::size_t> fit;
    const auto first_rich = std::find_if(out.hits.begin(), out.hits.end(), [](std::size_t h) { return h >= 100; });
    if (first_rich != out.hits.end()) {
        const auto k = static_cast<std::size_t>(first_rich - out.hits.begin());
        const double limit = 10.0 * t_grid[k] * (1.0 + 1e-12);
        for (std::size_t j = k; j < t_grid.size() && (t_grid[j] <= limit || fit.size() < 2); ++j) {
            fit.push_back(j);
        }
    } else {
        for (std::size_t j = 0; j < t_grid.size(); ++j) {
            if (out.hits[j] > 0) {
                fit.push_back(j);
            }
        }
    }
    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t j : fit) {
        xs.push_back(t_grid[j]);
        ys.push_back(static_cast<double>(out.hits[j]) / n);
    }
    out.fit_points = fit.size();
    out.fit_lo = xs.front();
    out.fit_hi = xs.back();
    out.exponent = fit.size() >= 2 ? fit_loglog_slope(xs, ys) : std::numeric_limits<double>::quiet_NaN();
    return out;
}

CarberyWrightResult check_carbery_wright(const LogConcaveMeasure& m, const Polynomial& f,
                                         std::span<const double> t_grid, std::size_t n, std::uint64_t seed,
                                         std::optional<SamplingMethod> method) {
    return carbery_wright_on_samples(sample(m, n, seed, method), f, t_grid);
}

std::vector<CarberyWrightCell> carbery_wright_ensemble(const EnsembleSpec& spec, std::size_t n,
                                                       std::uint64_t seed) {
    if (spec.families.empty() || spec.dims.empty()) {
        throw std::invalid_argument("ensemble needs at least one family and one dimension");
    }
    const RandomStream root = RandomStream(seed).split(experiment_id("carbery-wright"));
    std::vector<CarberyWrightCell> cells(spec.cells);
    parallel_for(spec.cells, resolve_thread_count(spec.threads), [&](std::size_t i) {
        RandomStream rng = root.split(i);
        const MeasureFamily family = spec.families[rng.below(spec.families.size())];
        const std::size_t dim = spec.dims[rng.below(spec.dims.size())];
        const Polynomial raw = random_polynomial(dim, spec.degree, spec.coefficient_scale, rng);
        const SampleSet s = sample(ensemble_measure(family, dim), n, rng());

        std::vector<double> values = evaluate(s, raw);
        auto mid = values.begin() + static_cast<std::ptrdiff_t>(values.size() / 2);
        std::nth_element(values.begin(), mid, values.end());
        const Polynomial f = raw - Polynomial::constant(dim, *mid);
        double mean_abs = 0.0;
        for (double v : evaluate(s, f)) {
            mean_abs += std::abs(v);
        }
        mean_abs /= static_cast<double>(s.size());
        std::vector<double> grid = log_grid(1e-6, 1.0, 37);
        for (double& t : grid) {
            t *= mean_abs;
        }
        const CarberyWrightResult r = carbery_wright_on_samples(s, f, grid);

        CarberyWrightCell& cell = cells[i];
        cell.index = i;
        cell.measure = family_name(family);
        cell.dim = dim;
        cell.f = to_string(f);
        cell.exponent = r.exponent;
        cell.fit_points = r.fit_points;
    });
    return cells;
}

MomentEquivalence check_moment_equivalence(const LogConcaveMeasure& m, const Polynomial& f, double q,
                                           std::size_t n, std::uint64_t seed,
                                           std::optional<SamplingMethod> method) {
    if (!(q >= 1.0)) {
        throw std::invalid_argument("moment equivalence needs q >= 1");
    }
    const SampleSet s = sample(m, n, seed, method);
    const std::vector<double> v = evaluate(s, f);
    const double d = f.degree();

    MomentEquivalence out;
    out.norm0 = moment_norm(v, 0.0);
    out.norm1 = moment_norm(v, 1.0);
    out.norm2 = moment_norm(v, 2.0);
    out.norm_q = moment_norm(v, q);
    constexpr double kSlack = 1.0 + 1e-12;
    out.norm_chain_holds = out.norm0 <= out.norm1 * kSlack && out.norm1 <= out.norm2 * kSlack;

    nlohmann::json echo = sample_echo(s);
    echo["f"] = to_string(f);
    echo["q"] = q;
    const std::span<const double> all(v);
    const auto quotient_on = [&](double base_r) {
        return [&, base_r](std::size_t lo, std::size_t hi) {
            const auto part = all.subspan(lo, hi - lo);
            return safe_ratio(moment_norm(part, q), moment_norm(part, base_r));
        };
    };

    out.versus_zero.name = "moments-l0";
    out.versus_zero.lhs = safe_ratio(out.norm_q, out.norm0);
    out.versus_zero.rhs_core = std::pow(q * d, d);
    out.versus_zero.std_error = batch_stderr(v.size(), quotient_on(0.0)) / out.versus_zero.rhs_core;

    out.versus_one.name = "moments-l1";
    out.versus_one.lhs = safe_ratio(out.norm_q, out.norm1);
    out.versus_one.rhs_core = std::pow(q, d);
    out.versus_one.std_error = batch_stderr(v.size(), quotient_on(1.0)) / out.versus_one.rhs_core;

    for (CheckReport* r : {&out.versus_zero, &out.versus_one}) {
        r->ratio = safe_ratio(r->lhs, r->rhs_core);
        r->config = echo;
        r->passed = out.norm_chain_holds;
    }
    return out;
}

CheckReport check_density_variance(const LogConcaveMeasure& measure) {
    if (measure.dim() != 1) {
        throw DimensionMismatch("density-variance check", 1, measure.dim());
    }
    const LogConcaveMeasure m = ensure_normalized(measure);
    double lo = 0.0;
    double hi = 0.0;
    switch (m.family()) {
        case MeasureFamily::uniform_box:
            lo = m.lower()[0];
            hi = m.upper()[0];
            break;
        case MeasureFamily::uniform_ball:
        case MeasureFamily::general_potential:
            lo = -m.radius();
            hi = m.radius();
            break;
        default:
            lo = -m.effective_radius();
            hi = m.effective_radius();
            break;
    }
    const auto log_rho = [&m](double t) { return m.log_density(std::span<const double>(&t, 1)); };
    const auto rho = [&m](double t) { return m.density(std::span<const double>(&t, 1)); };
    const Maximum peak = golden_section_max(log_rho, lo, hi);
    if (!std::isfinite(peak.value)) {
        throw NumericalError("density-variance: density vanishes on the support");
    }
    const double rho_max = std::exp(peak.value);

    const auto integrate = [&](const Function1D& g) {
        double total = 0.0;
        for (const auto& [a, b] : {std::pair{lo, peak.argmax}, std::pair{peak.argmax, hi}}) {
            if (b > a) {
                const QuadratureResult q = integrate_gk15(g, a, b, 1e-15, 1e-13);
                if (!q.converged) {
                    throw NumericalError("density-variance: quadrature did not converge");
                }
                total += q.value;
            }
        }
        return total;
    };
    const double mass = integrate(rho);
    const double mean = integrate([&](double t) { return t * rho(t); }) / mass;
    const double variance = integrate([&](double t) { return (t - mean) * (t - mean) * rho(t); }) / mass;

    CheckReport r;
    r.name = "density-variance";
    r.lhs = rho_max * rho_max * variance;
    r.rhs_core = 1.0 / 12.0;
    r.ratio = r.lhs / r.rhs_core;
    r.config = {{"measure", measure_echo(measure)}, {"mass", mass}};
    r.passed = r.lhs >= 1.0 / 12.0 - 1e-9;
    return r;
}

CheckReport check_reverse_poincare(const LogConcaveMeasure& measure, const Polynomial& f, const Direction& e,
                                   std::size_t n, std::uint64_t seed,
                                   std::optional<SamplingMethod> method) {
    if (e.dim() != measure.dim()) {
        throw DimensionMismatch("reverse Poincare direction", measure.dim(), e.dim());
    }
    const LogConcaveMeasure m = ensure_normalized(measure);
    const SampleSet s = sample(m, n, seed, method);
    const std::vector<double> fv = evaluate(s, f);
    const std::vector<double> dv = evaluate(s, directional_derivative(f, e));
    const double tv = skorohod_tv(m, e);

    CheckReport r;
    r.name = "reverse-poincare";
    r.lhs = moment_norm(dv, 2.0);
    r.rhs_core = tv * moment_norm(fv, 2.0);
    r.ratio = safe_ratio(r.lhs, r.rhs_core);
    r.std_error = batch_stderr(fv.size(), [&](std::size_t lo, std::size_t hi) {
        return safe_ratio(moment_norm(std::span(dv).subspan(lo, hi - lo), 2.0),
                          tv * moment_norm(std::span(fv).subspan(lo, hi - lo), 2.0));
    });
    r.config = sample_echo(s);
    r.config["f"] = to_string(f);
    r.config["e"] = std::vector<double>(e.components().begin(), e.components().end());
    r.config["skorohod_tv"] = tv;
    return r;
}

CheckReport check_poincare(const LogConcaveMeasure& m, const Polynomial& f, std::size_t n, std::uint64_t seed,
                           std::optional<SamplingMethod> method) {
    const SampleSet s = sample(m, n, seed, method);
    const std::size_t dim = m.dim();
    const std::vector<double> fv = evaluate(s, f);
    const std::vector<Polynomial> grad = gradient(f);
    std::vector<double> grad_sq(s.size(), 0.0);
    for (const Polynomial& gk : grad) {
        for (std::size_t i = 0; i < s.size(); ++i) {
            const double v = gk.eval(s.point(i));
            grad_sq[i] += v * v;
        }
    }
    // Spread about the sample mean, 1/N normalization throughout.
    const auto ratio_on = [&](std::size_t lo, std::size_t hi) {
        const double count = static_cast<double>(hi - lo);
        std::vector<double> centre(dim, 0.0);
        double f_mean = 0.0;
        double g_mean = 0.0;
        for (std::size_t i = lo; i < hi; ++i) {
            const auto x = s.point(i);
            for (std::size_t k = 0; k < dim; ++k) {
                centre[k] += x[k];
            }
            f_mean += fv[i];
            g_mean += grad_sq[i];
        }
        for (double& c : centre) {
            c /= count;
        }
        f_mean /= count;
        g_mean /= count;
        double spread = 0.0;
        double f_var = 0.0;
        for (std::size_t i = lo; i < hi; ++i) {
            const auto x = s.point(i);
            for (std::size_t k = 0; k < dim; ++k) {
                spread += (x[k] - centre[k]) * (x[k] - centre[k]);
            }
            f_var += (fv[i] - f_mean) * (fv[i] - f_mean);
        }
        spread /= count;
        f_var /= count;
        struct Parts {
            double lhs, rhs;
        };
        return Parts{f_var, spread * g_mean};
    };

    const auto whole = ratio_on(0, s.size());
    CheckReport r;
    r.name = "poincare";
    r.lhs = whole.lhs;
    r.rhs_core = whole.rhs;
    r.ratio = whole.rhs > 0.0 ? whole.lhs / whole.rhs : 0.0;
    r.std_error = batch_stderr(s.size(), [&](std::size_t lo, std::size_t hi) {
        const auto part = ratio_on(lo, hi);
        return part.rhs > 0.0 ? part.lhs / part.rhs : 0.0;
    });
    r.config = sample_echo(s);
    r.config["f"] = to_string(f);
    return r;
}

double epsilon_split_bound(double a, double b, unsigned d, double epsilon) {
    const double k = static_cast<double>(d) - 1.0;
    return std::pow(a, -1.0 / k) * std::pow(epsilon, 1.0 / (2.0 * k)) + b / std::sqrt(epsilon);
}

EpsilonSplit epsilon_split(double a, double b, unsigned d) {
    if (!(a > 0.0) || !(b > 0.0) || d < 2) {
        throw std::invalid_argument("epsilon split needs A, B > 0 and d >= 2");
    }
    const double k = static_cast<double>(d) - 1.0;
    EpsilonSplit out;
    out.epsilon_star = std::pow(std::pow(a, 1.0 / k) * b, 2.0 * k / d);
    out.bound_at_star = epsilon_split_bound(a, b, d, out.epsilon_star);
    out.closed_form = 2.0 * std::pow(a, -1.0 / d) * std::pow(b, 1.0 / d);
    return out;
}

}  // namespace lcpoly
