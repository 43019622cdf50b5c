#include "lcpoly/serialize.hpp"

#include <set>
#include <stdexcept>
#include <string>

#include "lcpoly/parser.hpp"

namespace lcpoly {
namespace {

void reject_unknown(const nlohmann::json& j, const std::set<std::string>& allowed) {
    for (const auto& [key, value] : j.items()) {
        if (!allowed.contains(key)) {
            throw std::invalid_argument("measure descriptor: unknown field '" + key + "'");
        }
    }
}

template <class T>
T required(const nlohmann::json& j, const char* key) {
    if (!j.contains(key)) {
        throw std::invalid_argument(std::string("measure descriptor: missing field '") + key + "'");
    }
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("measure descriptor: bad field '") + key + "': " + e.what());
    }
}

std::vector<double> per_coordinate(const nlohmann::json& j, const char* key, std::size_t dim) {
    const nlohmann::json& v = j.at(key);
    if (v.is_number()) {
        return std::vector<double>(dim, v.get<double>());
    }
    auto out = required<std::vector<double>>(j, key);
    if (out.size() != dim) {
        throw std::invalid_argument(std::string("measure descriptor: '") + key + "' must have dim entries");
    }
    return out;
}

}  // namespace

nlohmann::json measure_to_json(const LogConcaveMeasure& m) {
    nlohmann::json j;
    j["family"] = family_name(m.family());
    j["dim"] = m.dim();
    switch (m.family()) {
        case MeasureFamily::standard_gaussian:
            break;
        case MeasureFamily::product_exponential:
            j["rates"] = m.rates();
            break;
        case MeasureFamily::uniform_box:
            j["lower"] = m.lower();
            j["upper"] = m.upper();
            break;
        case MeasureFamily::uniform_ball:
            j["radius"] = m.radius();
            break;
        case MeasureFamily::general_potential:
            if (m.potential_expression().empty()) {
                throw std::invalid_argument("general_potential built from a function handle is not serializable");
            }
            j["potential"] = m.potential_expression();
            j["support_radius"] = m.radius();
            j["convex"] = m.convexity_attested();
            if (m.log_normalization()) {
                j["log_normalization"] = *m.log_normalization();
            }
            break;
    }
    return j;
}

LogConcaveMeasure measure_from_json(const nlohmann::json& j) {
    if (!j.is_object()) {
        throw std::invalid_argument("measure descriptor must be a JSON object");
    }
    const auto name = required<std::string>(j, "family");
    const auto family = family_from_name(name);
    if (!family) {
        throw std::invalid_argument("measure descriptor: unknown family '" + name + "'");
    }
    const auto dim = required<std::size_t>(j, "dim");
    if (dim == 0) {
        throw std::invalid_argument("measure descriptor: dim must be positive");
    }
    switch (*family) {
        case MeasureFamily::standard_gaussian:
            reject_unknown(j, {"family", "dim"});
            return LogConcaveMeasure::standard_gaussian(dim);
        case MeasureFamily::product_exponential:
            reject_unknown(j, {"family", "dim", "rates"});
            return LogConcaveMeasure::product_exponential(
                j.contains("rates") ? per_coordinate(j, "rates", dim) : std::vector<double>(dim, 1.0));
        case MeasureFamily::uniform_box:
            reject_unknown(j, {"family", "dim", "lower", "upper"});
            if (!j.contains("lower") || !j.contains("upper")) {
                throw std::invalid_argument("measure descriptor: uniform_box needs 'lower' and 'upper'");
            }
            return LogConcaveMeasure::uniform_box(per_coordinate(j, "lower", dim), per_coordinate(j, "upper", dim));
        case MeasureFamily::uniform_ball:
            reject_unknown(j, {"family", "dim", "radius"});
            return LogConcaveMeasure::uniform_ball(dim, j.contains("radius") ? required<double>(j, "radius") : 1.0);
        case MeasureFamily::general_potential: {
            reject_unknown(j, {"family", "dim", "potential", "support_radius", "convex", "log_normalization"});
            const auto text = required<std::string>(j, "potential");
            const Polynomial v = parse(text, dim);
            auto m = LogConcaveMeasure::general_potential(
                dim, [v](std::span<const double> x) { return v.eval(x); }, required<double>(j, "support_radius"),
                j.contains("convex") && required<bool>(j, "convex"), text);
            if (j.contains("log_normalization")) {
                m = m.with_log_normalization(required<double>(j, "log_normalization"));
            }
            return m;
        }
    }
    throw std::invalid_argument("measure descriptor: unhandled family");
}

nlohmann::json tv_to_json(const TVEstimate& tv) {
    return {{"tv", tv.value}, {"bins", tv.bins}, {"stderr", tv.bootstrap_stderr}};
}

nlohmann::json sampling_method_to_json(const SamplingMethod& method) {
    if (method.kind == SamplingMethod::Kind::exact) {
        return {{"kind", "exact"}};
    }
    return {{"kind", "hit_and_run"}, {"burn_in", method.burn_in}, {"thinning", method.thinning}};
}

}  // namespace lcpoly
