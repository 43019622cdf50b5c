#pragma once

#include <json.hpp>

#include "lcpoly/measure.hpp"
#include "lcpoly/pushforward.hpp"

namespace lcpoly {

inline constexpr int kFormatVersion = 1;

/// {"family": ..., "dim": n, parameters...}. A general potential serializes
/// only when it was built from an expression. Round-trips bit-exactly.
[[nodiscard]] nlohmann::json measure_to_json(const LogConcaveMeasure& m);
/// Rejects unknown fields and unknown families with std::invalid_argument.
[[nodiscard]] LogConcaveMeasure measure_from_json(const nlohmann::json& j);

/// {"tv": v, "bins": B, "stderr": s}
[[nodiscard]] nlohmann::json tv_to_json(const TVEstimate& tv);

[[nodiscard]] nlohmann::json sampling_method_to_json(const SamplingMethod& method);

}  // namespace lcpoly
