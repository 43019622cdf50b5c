#include "lcpoly/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "lcpoly/check.hpp"
#include "lcpoly/error.hpp"
#include "lcpoly/parallel.hpp"
#include "lcpoly/parser.hpp"
#include "lcpoly/pushforward.hpp"
#include "lcpoly/serialize.hpp"
#include "lcpoly/svg.hpp"

namespace lcpoly::cli {
namespace {

constexpr std::size_t kSvgBins = 60;
const std::vector<std::string> kAllSuites{"main-bound", "carbery-wright",   "moments",
                                          "reverse-poincare", "poincare", "density-variance"};

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_number(const std::string& text, const char* what) {
    double v = 0.0;
    const char* first = text.data();
    const char* last = first + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) {
        throw ConfigError(std::string("bad number for ") + what + ": '" + text + "'");
    }
    return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(text);
    while (std::getline(is, item, sep)) {
        item.erase(0, item.find_first_not_of(" \t"));
        item.erase(item.find_last_not_of(" \t") + 1);
        out.push_back(item);
    }
    return out;
}

// ---- config fields -----------------------------------------------------

enum class Kind { string, number, integer, boolean, grid, list };

struct Field {
    const char* key;
    Kind kind;
    const char* help;
};

const std::vector<Field>& fields() {
    static const std::vector<Field> table{
        {"suite", Kind::string, "suite name"},
        {"measure", Kind::string, "measure family (gaussian, uniform-box, product-exponential, uniform-ball, general-potential)"},
        {"dim", Kind::integer, "dimension"},
        {"lo", Kind::number, "uniform box lower bound per coordinate"},
        {"hi", Kind::number, "uniform box upper bound per coordinate"},
        {"rate", Kind::number, "product exponential rate per coordinate"},
        {"radius", Kind::number, "uniform ball radius"},
        {"potential", Kind::string, "convex potential V for general-potential"},
        {"support_radius", Kind::number, "support ball radius for general-potential"},
        {"convex", Kind::boolean, "attest that the potential is convex"},
        {"f", Kind::string, "polynomial f"},
        {"g", Kind::string, "polynomial g"},
        {"h", Kind::string, "shift direction polynomial h"},
        {"e", Kind::string, "direction: eK or comma-separated components"},
        {"q", Kind::number, "moment order q >= 1"},
        {"t_grid", Kind::grid, "small-ball levels"},
        {"deltas", Kind::grid, "shift sizes, e.g. 1e-3:1e-1:10log"},
        {"n", Kind::integer, "sample size"},
        {"seed", Kind::integer, "seed"},
        {"bins", Kind::integer, "histogram bins, 0 for automatic"},
        {"cells", Kind::integer, "ensemble cells"},
        {"degree", Kind::integer, "ensemble polynomial degree"},
        {"coef_scale", Kind::number, "ensemble coefficient scale"},
        {"families", Kind::list, "ensemble families, comma-separated"},
        {"dims", Kind::list, "ensemble dimensions, comma-separated"},
        {"ensemble", Kind::boolean, "run the small-ball check over the random ensemble"},
        {"method", Kind::string, "sampler: auto, exact, hit-and-run"},
        {"burn_in", Kind::integer, "hit-and-run burn-in steps"},
        {"thinning", Kind::integer, "hit-and-run thinning, 0 for 10*dim"},
        {"threads", Kind::integer, "worker threads, 0 for all (capped by LCPOLY_THREADS)"},
        {"out", Kind::string, "report JSON path (stdout when omitted)"},
        {"csv", Kind::string, "CSV path"},
        {"svg", Kind::string, "SVG path"},
        {"format_version", Kind::integer, "artifact format version (must match)"},
    };
    return table;
}

template <class T>
T get_as(const nlohmann::json& v, const char* key) {
    try {
        return v.get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError(std::string("bad type for field '") + key + "'");
    }
}

std::vector<double> grid_from(const nlohmann::json& v, const char* key) {
    if (v.is_string()) {
        return parse_grid(v.get<std::string>());
    }
    return get_as<std::vector<double>>(v, key);
}

std::size_t nonneg_integer(const nlohmann::json& v, const char* key) {
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
        throw ConfigError(std::string("field '") + key + "' must be a non-negative integer");
    }
    return v.get<std::size_t>();
}

std::vector<std::string> string_list(const nlohmann::json& v, const char* key) {
    if (v.is_string()) {
        return split(v.get<std::string>(), ',');
    }
    return get_as<std::vector<std::string>>(v, key);
}

// ---- suites ------------------------------------------------------------

struct SuiteOutput {
    nlohmann::json reports = nlohmann::json::array();
    nlohmann::json summary = nlohmann::json::object();
    std::string csv_header;
    std::string csv_rows;
    std::optional<std::string> svg;
    bool theorem_ok = true;
};

const char* kCheckCsvHeader = "suite,name,param,lhs,rhs_core,ratio,stderr,pass\n";

void add_report(SuiteOutput& out, const std::string& suite, const CheckReport& r, const std::string& param = {}) {
    out.reports.push_back(report_to_json(r));
    out.csv_rows += suite + "," + r.name + "," + param + "," + g17(r.lhs) + "," + g17(r.rhs_core) + "," +
                    g17(r.ratio) + "," + g17(r.std_error) + "," + (r.passed ? (*r.passed ? "true" : "false") : "") +
                    "\n";
    if (r.passed && !*r.passed) {
        out.theorem_ok = false;
    }
    out.csv_header = kCheckCsvHeader;
}

Polynomial poly_or(const std::optional<std::string>& text, const char* fallback, std::size_t dim) {
    return parse(text ? *text : fallback, dim);
}

std::optional<SamplingMethod> method_for(const ExperimentConfig& c, const LogConcaveMeasure& m) {
    if (c.method == "exact") {
        return SamplingMethod::exact();
    }
    if (c.method == "hit-and-run" || c.method == "hit_and_run") {
        return SamplingMethod::hit_and_run(c.burn_in, c.thinning);
    }
    if (c.method == "auto") {
        return m.has_exact_sampler() ? SamplingMethod::exact() : SamplingMethod::hit_and_run(c.burn_in, c.thinning);
    }
    throw ConfigError("unknown method '" + c.method + "'");
}

MeasureFamily family_or_throw(const std::string& name) {
    const auto family = family_from_name(name);
    if (!family) {
        throw ConfigError("unknown measure family '" + name + "'");
    }
    return *family;
}

SuiteOutput suite_main_bound(const ExperimentConfig& c) {
    const LogConcaveMeasure m = build_measure(c);
    const Polynomial g = poly_or(c.g, "x1^2", c.dim);
    const Polynomial f = poly_or(c.f, "x1^2 + 0.01", c.dim);
    const auto method = method_for(c, m);
    SuiteOutput out;
    add_report(out, "main-bound", check_main_bound(m, f, g, c.n, c.seed, c.bins, method));
    if (!c.svg.empty()) {
        const SampleSet s = sample(m, c.n, c.seed, method);
        const Pushforward1D fv = push(s, f);
        const Pushforward1D gv = push(s, g);
        const std::vector<SvgSample> hist{{"f", {fv.values().begin(), fv.values().end()}},
                                          {"g", {gv.values().begin(), gv.values().end()}}};
        out.svg = svg_histograms(hist, kSvgBins, "pushforwards of f and g", "value");
    }
    return out;
}

SuiteOutput suite_carbery_wright(const ExperimentConfig& c) {
    SuiteOutput out;
    if (c.ensemble) {
        EnsembleSpec spec;
        spec.families.clear();
        for (const auto& name : c.families) {
            spec.families.push_back(family_or_throw(name));
        }
        spec.dims = c.dims;
        spec.degree = c.degree;
        spec.coefficient_scale = c.coef_scale;
        spec.cells = c.cells;
        spec.threads = c.threads;
        const auto cells = carbery_wright_ensemble(spec, c.n, c.seed);
        out.csv_header = "index,measure,dim,f,exponent,fit_points\n";
        double min_exponent = std::numeric_limits<double>::infinity();
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& cell : cells) {
            out.csv_rows += std::to_string(cell.index) + "," + cell.measure + "," + std::to_string(cell.dim) + "," +
                            cell.f + "," + g17(cell.exponent) + "," + std::to_string(cell.fit_points) + "\n";
            rows.push_back({{"index", cell.index}, {"measure", cell.measure}, {"dim", cell.dim}, {"f", cell.f},
                            {"exponent", cell.exponent}});
            min_exponent = std::min(min_exponent, cell.exponent);
        }
        out.summary = {{"cells", rows}, {"min_exponent", min_exponent}, {"degree", c.degree}};
        return out;
    }
    const LogConcaveMeasure m = build_measure(c);
    const Polynomial f = poly_or(c.f, "x1^2", c.dim);
    const std::vector<double> grid = c.t_grid.empty() ? log_grid(1e-4, 1.0, 13) : c.t_grid;
    const auto r = check_carbery_wright(m, f, grid, c.n, c.seed, method_for(c, m));
    for (std::size_t k = 0; k < r.per_t.size(); ++k) {
        add_report(out, "carbery-wright", r.per_t[k], g17(grid[k]));
    }
    out.summary = {{"exponent", r.exponent}, {"fit_lo", r.fit_lo}, {"fit_hi", r.fit_hi},
                   {"fit_points", r.fit_points}, {"hits", r.hits}};
    if (!c.svg.empty()) {
        SvgSeries series{"P(|f| <= t)", grid, {}};
        for (std::size_t h : r.hits) {
            series.y.push_back(static_cast<double>(h) / static_cast<double>(c.n));
        }
        out.svg = svg_loglog(std::span(&series, 1), "small-ball probability", "t", "probability");
    }
    return out;
}

SuiteOutput suite_moments(const ExperimentConfig& c) {
    const LogConcaveMeasure m = build_measure(c);
    const Polynomial f = poly_or(c.f, "x1^2", c.dim);
    const auto r = check_moment_equivalence(m, f, c.q, c.n, c.seed, method_for(c, m));
    SuiteOutput out;
    add_report(out, "moments", r.versus_zero, g17(c.q));
    add_report(out, "moments", r.versus_one, g17(c.q));
    out.summary = {{"norm0", r.norm0},   {"norm1", r.norm1}, {"norm2", r.norm2},
                   {"norm_q", r.norm_q}, {"norm_chain_holds", r.norm_chain_holds}};
    return out;
}

SuiteOutput suite_reverse_poincare(const ExperimentConfig& c) {
    const LogConcaveMeasure m = build_measure(c);
    const Polynomial f = poly_or(c.f, "x1", c.dim);
    SuiteOutput out;
    add_report(out, "reverse-poincare",
               check_reverse_poincare(m, f, parse_direction(c.e, c.dim), c.n, c.seed, method_for(c, m)));
    return out;
}

SuiteOutput suite_poincare(const ExperimentConfig& c) {
    const LogConcaveMeasure m = build_measure(c);
    const Polynomial f = poly_or(c.f, "x1", c.dim);
    SuiteOutput out;
    add_report(out, "poincare", check_poincare(m, f, c.n, c.seed, method_for(c, m)));
    return out;
}

SuiteOutput suite_density_variance(const ExperimentConfig& c, bool all_families) {
    SuiteOutput out;
    if (!all_families) {
        if (c.dim != 1) {
            throw ConfigError("density-variance needs dim = 1");
        }
        add_report(out, "density-variance", check_density_variance(build_measure(c)));
        return out;
    }
    for (const char* family : {"standard_gaussian", "uniform_box", "product_exponential", "uniform_ball"}) {
        ExperimentConfig one = c;
        one.measure = family;
        one.dim = 1;
        add_report(out, "density-variance", check_density_variance(build_measure(one)), family);
    }
    return out;
}

SuiteOutput suite_sweep(const ExperimentConfig& c) {
    const LogConcaveMeasure m = build_measure(c);
    const Polynomial g = poly_or(c.g, "x1^2", c.dim);
    const Polynomial h = poly_or(c.h, "1", c.dim);
    const std::vector<double> deltas = c.deltas.empty() ? default_delta_grid() : c.deltas;
    const SampleSet s = sample(m, c.n, c.seed, method_for(c, m));
    const auto tvs = shift_family_tv_on_samples(s, g, h, deltas, c.bins);
    const Pushforward1D gv = push(s, g);
    const double sigma = std::sqrt(mean_and_variance(gv).variance);
    const double h_norm = moment_norm(push(s, h), 2.0);
    const unsigned d = std::max({g.degree(), h.degree(), 1u});

    SuiteOutput out;
    out.csv_header = "delta,tv,stderr,bins,lhs,rhs_core,ratio\n";
    std::vector<double> tv_values;
    std::vector<double> ratios;
    for (std::size_t k = 0; k < deltas.size(); ++k) {
        const double lhs = std::pow(sigma, 1.0 / d) * tvs[k].value;
        const double rhs = std::pow(deltas[k] * h_norm, 1.0 / d);
        const double ratio = safe_ratio(lhs, rhs);
        out.csv_rows += g17(deltas[k]) + "," + g17(tvs[k].value) + "," + g17(tvs[k].bootstrap_stderr) + "," +
                        std::to_string(tvs[k].bins) + "," + g17(lhs) + "," + g17(rhs) + "," + g17(ratio) + "\n";
        nlohmann::json row = tv_to_json(tvs[k]);
        row["delta"] = deltas[k];
        row["ratio"] = ratio;
        out.reports.push_back(row);
        tv_values.push_back(tvs[k].value);
        ratios.push_back(ratio);
    }
    const auto [rmin, rmax] = std::minmax_element(ratios.begin(), ratios.end());
    out.summary = {{"slope", fit_loglog_slope(deltas, tv_values)},
                   {"ratio_spread", safe_ratio(*rmax, *rmin)},
                   {"sigma_g", sigma},
                   {"h_norm", h_norm},
                   {"degree", d}};
    if (!c.svg.empty()) {
        const SvgSeries series{"histogram TV", deltas, tv_values};
        out.svg = svg_loglog(std::span(&series, 1), "TV of pushforwards against shift size", "delta", "TV");
    }
    return out;
}

SuiteOutput suite_estimate_constant(const ExperimentConfig& c) {
    EnsembleSpec spec;
    spec.families.clear();
    for (const auto& name : c.families) {
        spec.families.push_back(family_or_throw(name));
    }
    spec.dims = c.dims;
    spec.degree = c.degree;
    spec.coefficient_scale = c.coef_scale;
    spec.deltas = c.deltas;
    spec.cells = c.cells;
    spec.bins = c.bins;
    spec.threads = c.threads;
    const ConstantEstimate est = estimate_constant(spec, c.n, c.seed);

    SuiteOutput out;
    out.csv_header = "index,measure,dim,delta,g,h,tv,lhs,rhs_core,ratio,ratio_stderr,running_max,invariance_defect\n";
    for (const EnsembleCell& cell : est.cells) {
        out.csv_rows += std::to_string(cell.index) + "," + cell.measure + "," + std::to_string(cell.dim) + "," +
                        g17(cell.delta) + "," + cell.g + "," + cell.h + "," + g17(cell.tv) + "," + g17(cell.lhs) +
                        "," + g17(cell.rhs_core) + "," + g17(cell.ratio) + "," + g17(cell.tv_stderr) + "," +
                        g17(est.trajectory[cell.index]) + "," + g17(cell.invariance_defect) + "\n";
    }
    out.summary = {{"c_hat", est.c_hat},
                   {"degree", est.degree},
                   {"trials", est.trials},
                   {"trajectory", est.trajectory},
                   {"trajectory_growth", trajectory_growth(est.trajectory)},
                   {"max_invariance_defect", est.max_invariance_defect}};
    if (!c.svg.empty()) {
        const std::vector<SvgSample> hist{{"ratio", est.ratios}};
        out.svg = svg_histograms(hist, kSvgBins, "main-bound ratios over the ensemble", "ratio");
    }
    return out;
}

SuiteOutput suite_sample(const ExperimentConfig& c) {
    const LogConcaveMeasure m = build_measure(c);
    const SampleSet s = sample(m, c.n, c.seed, method_for(c, m));
    SuiteOutput out;
    for (std::size_t k = 0; k < c.dim; ++k) {
        out.csv_header += (k > 0 ? ",x" : "x") + std::to_string(k + 1);
    }
    out.csv_header += "\n";
    for (std::size_t i = 0; i < s.size(); ++i) {
        const auto x = s.point(i);
        for (std::size_t k = 0; k < c.dim; ++k) {
            out.csv_rows += (k > 0 ? "," : "") + g17(x[k]);
        }
        out.csv_rows += "\n";
    }
    out.summary = {{"points", s.size()}, {"method", sampling_method_to_json(s.method())}};
    return out;
}

SuiteOutput run_suite(const std::string& suite, const ExperimentConfig& c, bool inside_all) {
    if (suite == "main-bound") return suite_main_bound(c);
    if (suite == "carbery-wright") return suite_carbery_wright(c);
    if (suite == "moments") return suite_moments(c);
    if (suite == "reverse-poincare") return suite_reverse_poincare(c);
    if (suite == "poincare") return suite_poincare(c);
    if (suite == "density-variance") return suite_density_variance(c, inside_all);
    if (suite == "sweep") return suite_sweep(c);
    if (suite == "estimate-constant") return suite_estimate_constant(c);
    if (suite == "sample") return suite_sample(c);
    throw ConfigError("unknown suite '" + suite + "'");
}

std::string csv_preamble(const nlohmann::json& echo) {
    return "# format_version=" + std::to_string(kFormatVersion) + "\n# config=" + echo.dump() + "\n";
}

int classify(std::ostream& err, const std::exception& e, int code) {
    err << "lcpoly: " << e.what() << "\n";
    return code;
}

std::string read_file(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) {
        throw IoError("cannot open '" + path + "'");
    }
    std::ostringstream ss;
    ss << file.rdbuf();
    return ss.str();
}

}  // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"main-bound",       "sweep",    "carbery-wright",
                                                "moments",          "reverse-poincare", "poincare",
                                                "density-variance", "estimate-constant", "all", "sample"};
    return names;
}

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> out;
    const auto parts = split(text, ':');
    if (parts.size() == 3) {
        std::string count = parts[2];
        bool logarithmic = true;
        if (count.size() > 3 && count.compare(count.size() - 3, 3, "log") == 0) {
            count.resize(count.size() - 3);
        } else if (count.size() > 3 && count.compare(count.size() - 3, 3, "lin") == 0) {
            count.resize(count.size() - 3);
            logarithmic = false;
        }
        const double lo = parse_number(parts[0], "grid");
        const double hi = parse_number(parts[1], "grid");
        const double k = parse_number(count, "grid count");
        if (!(k >= 2.0) || k != std::floor(k) || !(hi > lo) || (logarithmic && !(lo > 0.0))) {
            throw ConfigError("bad grid '" + text + "'");
        }
        const auto points = static_cast<std::size_t>(k);
        if (logarithmic) {
            return log_grid(lo, hi, points);
        }
        for (std::size_t i = 0; i < points; ++i) {
            out.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1));
        }
        return out;
    }
    if (parts.size() != 1) {
        throw ConfigError("bad grid '" + text + "'");
    }
    for (const auto& item : split(text, ',')) {
        out.push_back(parse_number(item, "grid"));
    }
    if (out.empty()) {
        throw ConfigError("empty grid");
    }
    return out;
}

Direction parse_direction(const std::string& text, std::size_t dim) {
    if (!text.empty() && text[0] == 'e' && text.find(',') == std::string::npos) {
        const double k = parse_number(text.substr(1), "direction");
        if (k < 1.0 || k > static_cast<double>(dim) || k != std::floor(k)) {
            throw ConfigError("direction '" + text + "' out of range");
        }
        return Direction::axis(dim, static_cast<std::size_t>(k) - 1);
    }
    std::vector<double> components;
    for (const auto& item : split(text, ',')) {
        components.push_back(parse_number(item, "direction"));
    }
    if (components.size() != dim) {
        throw ConfigError("direction needs " + std::to_string(dim) + " components");
    }
    return Direction::normalized(std::move(components));
}

LogConcaveMeasure build_measure(const ExperimentConfig& c) {
    switch (family_or_throw(c.measure)) {
        case MeasureFamily::standard_gaussian:
            return LogConcaveMeasure::standard_gaussian(c.dim);
        case MeasureFamily::product_exponential:
            return LogConcaveMeasure::product_exponential(std::vector<double>(c.dim, c.rate));
        case MeasureFamily::uniform_box:
            return LogConcaveMeasure::uniform_box(std::vector<double>(c.dim, c.lo), std::vector<double>(c.dim, c.hi));
        case MeasureFamily::uniform_ball:
            return LogConcaveMeasure::uniform_ball(c.dim, c.radius);
        case MeasureFamily::general_potential:
            if (c.potential.empty()) {
                throw ConfigError("general-potential needs 'potential'");
            }
            return LogConcaveMeasure::general_potential(parse(c.potential, c.dim), c.support_radius, c.convex);
    }
    throw ConfigError("unhandled family");
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) {
        throw ConfigError("config must be a JSON object");
    }
    std::set<std::string> known;
    for (const Field& f : fields()) {
        known.insert(f.key);
    }
    for (const auto& [key, value] : j.items()) {
        if (!known.contains(key)) {
            throw ConfigError("unknown config field '" + key + "'");
        }
    }
    ExperimentConfig c;
    const auto has = [&](const char* k) { return j.contains(k); };
    if (has("format_version") && nonneg_integer(j["format_version"], "format_version") != kFormatVersion) {
        throw ConfigError("unsupported format_version");
    }
    if (has("suite")) c.suite = get_as<std::string>(j["suite"], "suite");
    if (has("measure")) c.measure = get_as<std::string>(j["measure"], "measure");
    if (has("dim")) c.dim = nonneg_integer(j["dim"], "dim");
    if (has("lo")) c.lo = get_as<double>(j["lo"], "lo");
    if (has("hi")) c.hi = get_as<double>(j["hi"], "hi");
    if (has("rate")) c.rate = get_as<double>(j["rate"], "rate");
    if (has("radius")) c.radius = get_as<double>(j["radius"], "radius");
    if (has("potential")) c.potential = get_as<std::string>(j["potential"], "potential");
    if (has("support_radius")) c.support_radius = get_as<double>(j["support_radius"], "support_radius");
    if (has("convex")) c.convex = get_as<bool>(j["convex"], "convex");
    if (has("f")) c.f = get_as<std::string>(j["f"], "f");
    if (has("g")) c.g = get_as<std::string>(j["g"], "g");
    if (has("h")) c.h = get_as<std::string>(j["h"], "h");
    if (has("e")) c.e = get_as<std::string>(j["e"], "e");
    if (has("q")) c.q = get_as<double>(j["q"], "q");
    if (has("t_grid")) c.t_grid = grid_from(j["t_grid"], "t_grid");
    if (has("deltas")) c.deltas = grid_from(j["deltas"], "deltas");
    if (has("n")) c.n = nonneg_integer(j["n"], "n");
    if (has("seed")) c.seed = nonneg_integer(j["seed"], "seed");
    if (has("bins")) c.bins = nonneg_integer(j["bins"], "bins");
    if (has("cells")) c.cells = nonneg_integer(j["cells"], "cells");
    if (has("degree")) c.degree = static_cast<unsigned>(nonneg_integer(j["degree"], "degree"));
    if (has("coef_scale")) c.coef_scale = get_as<double>(j["coef_scale"], "coef_scale");
    if (has("families")) c.families = string_list(j["families"], "families");
    if (has("dims")) {
        const auto& v = j["dims"];
        c.dims.clear();
        if (v.is_string()) {
            for (const auto& item : split(v.get<std::string>(), ',')) {
                c.dims.push_back(static_cast<std::size_t>(parse_number(item, "dims")));
            }
        } else {
            c.dims = get_as<std::vector<std::size_t>>(v, "dims");
        }
    }
    if (has("ensemble")) c.ensemble = get_as<bool>(j["ensemble"], "ensemble");
    if (has("method")) c.method = get_as<std::string>(j["method"], "method");
    if (has("burn_in")) c.burn_in = static_cast<unsigned>(nonneg_integer(j["burn_in"], "burn_in"));
    if (has("thinning")) c.thinning = static_cast<unsigned>(nonneg_integer(j["thinning"], "thinning"));
    if (has("threads")) c.threads = nonneg_integer(j["threads"], "threads");
    if (has("out")) c.out = get_as<std::string>(j["out"], "out");
    if (has("csv")) c.csv = get_as<std::string>(j["csv"], "csv");
    if (has("svg")) c.svg = get_as<std::string>(j["svg"], "svg");

    if (c.suite.empty()) {
        throw ConfigError("config needs a 'suite'");
    }
    if (std::find(suite_names().begin(), suite_names().end(), c.suite) == suite_names().end()) {
        throw ConfigError("unknown suite '" + c.suite + "'");
    }
    if (c.dim == 0 || c.n < 2) {
        throw ConfigError("dim must be positive and n at least 2");
    }
    for (std::size_t d : c.dims) {
        if (d == 0 || d > 4) {
            throw ConfigError("ensemble dims must lie in 1..4");
        }
    }
    c.measure = family_name(family_or_throw(c.measure));
    for (auto& name : c.families) {
        name = family_name(family_or_throw(name));
    }
    return c;
}

nlohmann::json config_echo(const ExperimentConfig& c) {
    nlohmann::json j{{"suite", c.suite},   {"measure", c.measure}, {"dim", c.dim},
                     {"n", c.n},           {"seed", c.seed},       {"bins", c.bins},
                     {"method", c.method}, {"format_version", kFormatVersion}};
    const auto family = family_from_name(c.measure);
    switch (family.value_or(MeasureFamily::standard_gaussian)) {
        case MeasureFamily::uniform_box:
            j["lo"] = c.lo;
            j["hi"] = c.hi;
            break;
        case MeasureFamily::product_exponential:
            j["rate"] = c.rate;
            break;
        case MeasureFamily::uniform_ball:
            j["radius"] = c.radius;
            break;
        case MeasureFamily::general_potential:
            j["potential"] = c.potential;
            j["support_radius"] = c.support_radius;
            j["convex"] = c.convex;
            break;
        default:
            break;
    }
    if (c.method != "exact") {
        j["burn_in"] = c.burn_in;
        j["thinning"] = c.thinning;
    }
    if (c.f) j["f"] = *c.f;
    if (c.g) j["g"] = *c.g;
    if (c.h) j["h"] = *c.h;
    const bool ensemble_suite = c.suite == "estimate-constant" || (c.suite == "carbery-wright" && c.ensemble);
    if (c.suite == "reverse-poincare" || c.suite == "all") j["e"] = c.e;
    if (c.suite == "moments" || c.suite == "all") j["q"] = c.q;
    if (!c.t_grid.empty()) j["t_grid"] = c.t_grid;
    if (!c.deltas.empty()) j["deltas"] = c.deltas;
    if (ensemble_suite) {
        j["cells"] = c.cells;
        j["degree"] = c.degree;
        j["coef_scale"] = c.coef_scale;
        j["families"] = c.families;
        j["dims"] = c.dims;
    }
    if (c.ensemble) j["ensemble"] = true;
    return j;
}

RunResult execute(const ExperimentConfig& c) {
    const nlohmann::json echo = config_echo(c);
    RunResult result;
    result.report = {{"format_version", kFormatVersion}, {"suite", c.suite}, {"config", echo}};
    bool theorem_ok = true;
    std::string header;
    std::string rows;
    if (c.suite == "all") {
        if (!c.svg.empty()) {
            throw ConfigError("suite 'all' does not produce an SVG");
        }
        std::vector<SuiteOutput> outputs(kAllSuites.size());
        parallel_for(kAllSuites.size(), resolve_thread_count(c.threads),
                     [&](std::size_t i) { outputs[i] = run_suite(kAllSuites[i], c, true); });
        nlohmann::json suites = nlohmann::json::object();
        for (std::size_t i = 0; i < kAllSuites.size(); ++i) {
            suites[kAllSuites[i]] = {{"reports", outputs[i].reports}, {"summary", outputs[i].summary}};
            rows += outputs[i].csv_rows;
            theorem_ok = theorem_ok && outputs[i].theorem_ok;
        }
        header = kCheckCsvHeader;
        result.report["suites"] = suites;
    } else {
        SuiteOutput out = run_suite(c.suite, c, false);
        result.report["reports"] = out.reports;
        result.report["summary"] = out.summary;
        header = out.csv_header;
        rows = std::move(out.csv_rows);
        theorem_ok = out.theorem_ok;
        result.svg = std::move(out.svg);
        if (!c.svg.empty() && !result.svg) {
            throw ConfigError("suite '" + c.suite + "' does not produce an SVG");
        }
    }
    result.report["pass"] = theorem_ok;
    result.csv = csv_preamble(echo) + header + rows;
    result.exit_code = theorem_ok ? kExitOk : kExitCheckFailed;
    return result;
}

int run(const ExperimentConfig& c, std::ostream& out, std::ostream& err) {
    try {
        const RunResult r = execute(c);
        if (c.suite == "sample") {
            const std::string& path = !c.csv.empty() ? c.csv : c.out;
            if (path.empty()) {
                out << r.csv;
            } else {
                write_text_file(path, r.csv);
            }
            return r.exit_code;
        }
        const std::string report = r.report.dump(2) + "\n";
        if (c.out.empty()) {
            out << report;
        } else {
            write_text_file(c.out, report);
        }
        if (!c.csv.empty()) {
            write_text_file(c.csv, r.csv);
        }
        if (!c.svg.empty() && r.svg) {
            write_text_file(c.svg, *r.svg);
        }
        if (r.exit_code == kExitCheckFailed) {
            err << "lcpoly: a theorem-true check failed\n";
        }
        return r.exit_code;
    } catch (const IoError& e) {
        return classify(err, e, kExitIo);
    } catch (const ParseError& e) {
        return classify(err, e, kExitUsage);
    } catch (const std::invalid_argument& e) {
        return classify(err, e, kExitUsage);
    } catch (const DegenerateInput& e) {
        return classify(err, e, kExitUsage);
    } catch (const std::exception& e) {
        return classify(err, e, kExitFailure);
    }
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Numerical checks of polynomial pushforward inequalities under log-concave measures", "lcpoly"};
    app.require_subcommand(1);
    // "--h" is the shift polynomial, so help is long-form only.
    app.set_help_flag("--help", "print help and exit");
    app.set_version_flag("--version", "lcpoly format " + std::to_string(kFormatVersion));

    std::map<std::string, std::string> raw;
    std::map<std::string, bool> flags;
    std::string config_path;
    std::string check_suite;
    std::string run_path;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "flat JSON config; flags override its fields");
        for (const Field& f : fields()) {
            const std::string key = f.key;
            if (key == "suite" || key == "format_version") {
                continue;
            }
            std::string flag = "--" + key;
            std::replace(flag.begin(), flag.end(), '_', '-');
            if (f.kind == Kind::boolean) {
                sub->add_flag_callback(flag, [&flags, key] { flags[key] = true; }, f.help);
                continue;
            }
            if (key == "measure") {
                flag = "--measure,--family";
            }
            sub->add_option_function<std::string>(flag, [&raw, key](const std::string& v) { raw[key] = v; }, f.help);
        }
    };

    CLI::App* check = app.add_subcommand("check", "run one inequality suite, or all of them");
    check->add_option("suite", check_suite, "main-bound, carbery-wright, moments, reverse-poincare, poincare, "
                                            "density-variance, all")
        ->required();
    add_common(check);
    CLI::App* sweep = app.add_subcommand("sweep", "TV of g versus g + delta*h over a delta grid");
    add_common(sweep);
    CLI::App* estimate = app.add_subcommand("estimate-constant", "main-bound ratio maxima over a random ensemble");
    add_common(estimate);
    CLI::App* dump = app.add_subcommand("sample", "write a sample set as CSV");
    add_common(dump);
    CLI::App* run_cmd = app.add_subcommand("run", "run a config file");
    run_cmd->add_option("file", run_path, "flat JSON config")->required();
    add_common(run_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        std::ostringstream o;
        std::ostringstream eo;
        const int code = app.exit(e, o, eo);
        out << o.str();
        err << eo.str();
        return code == 0 ? kExitOk : kExitUsage;
    }

    nlohmann::json j = nlohmann::json::object();
    try {
        const std::string path = !run_path.empty() ? run_path : config_path;
        if (!path.empty()) {
            j = nlohmann::json::parse(read_file(path));
            if (!j.is_object()) {
                throw ConfigError("config must be a JSON object");
            }
        }
    } catch (const IoError& e) {
        return classify(err, e, kExitIo);
    } catch (const nlohmann::json::exception& e) {
        return classify(err, e, kExitUsage);
    } catch (const ConfigError& e) {
        return classify(err, e, kExitUsage);
    }

    if (check->parsed()) {
        j["suite"] = check_suite;
    } else if (sweep->parsed()) {
        j["suite"] = "sweep";
    } else if (estimate->parsed()) {
        j["suite"] = "estimate-constant";
    } else if (dump->parsed()) {
        j["suite"] = "sample";
    }

    ExperimentConfig config;
    try {
        for (const auto& [key, value] : raw) {
            const auto it = std::find_if(fields().begin(), fields().end(),
                                         [&](const Field& f) { return key == f.key; });
            switch (it->kind) {
                case Kind::number:
                    j[key] = parse_number(value, it->key);
                    break;
                case Kind::integer: {
                    const double v = parse_number(value, it->key);
                    if (v < 0.0 || v != std::floor(v) || v > 1.8e19) {
                        throw ConfigError(std::string("field '") + it->key + "' must be a non-negative integer");
                    }
                    std::uint64_t u = 0;
                    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), u);
                    j[key] = (ec == std::errc() && ptr == value.data() + value.size()) ? u
                                                                                        : static_cast<std::uint64_t>(v);
                    break;
                }
                default:
                    j[key] = value;
                    break;
            }
        }
        for (const auto& [key, value] : flags) {
            j[key] = value;
        }
        config = config_from_json(j);
    } catch (const std::exception& e) {
        return classify(err, e, kExitUsage);
    }
    return run(config, out, err);
}

}  // namespace lcpoly::cli
