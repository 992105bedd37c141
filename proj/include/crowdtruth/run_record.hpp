#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

namespace crowdtruth {

// Shortest round-trip decimal form (std::to_chars); the one way doubles are
// printed in CSV/JSON outputs so reruns are byte-identical.
std::string format_double(double v);

// JSON encoding that survives non-finite values (JSON itself has no inf/nan).
nlohmann::ordered_json json_real(double v);
double real_from_json(const nlohmann::json& j);

// One aggregation run as reported by the harness.
struct RunRecord {
    std::string method;   // "mv", "ds" or "wc"
    int cluster_cap = 0;  // L, wc only (0 otherwise)
    std::string dataset;
    std::uint64_t seed = 0;
    std::optional<double> error_rate;   // present when gold was supplied
    std::optional<double> r_value;      // absent for mv (no confusion estimates)
    std::optional<double> lower_bound;
    int iterations = 0;
    double wall_time_seconds = 0.0;

    // include_timing=false drops the wall-time field so outputs written with
    // a fixed seed stay byte-identical across reruns.
    nlohmann::ordered_json to_json(bool include_timing = true) const;
    static RunRecord from_json(const nlohmann::json& j);
};

}  // namespace crowdtruth
