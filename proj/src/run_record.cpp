#include "crowdtruth/run_record.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace crowdtruth {

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) throw std::runtime_error("format_double failed");
    return std::string(buf, ptr);
}

nlohmann::ordered_json json_real(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

double real_from_json(const nlohmann::json& j) {
    if (j.is_number()) return j.get<double>();
    const std::string s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    throw std::runtime_error("not a real value: " + s);
}

nlohmann::ordered_json RunRecord::to_json(bool include_timing) const {
    nlohmann::ordered_json j;
    j["method"] = method;
    if (method == "wc") j["L"] = cluster_cap;
    j["dataset"] = dataset;
    j["seed"] = seed;
    j["error_rate"] = error_rate ? json_real(*error_rate) : nlohmann::ordered_json(nullptr);
    j["r_value"] = r_value ? json_real(*r_value) : nlohmann::ordered_json(nullptr);
    j["lower_bound"] = lower_bound ? json_real(*lower_bound) : nlohmann::ordered_json(nullptr);
    j["iterations"] = iterations;
    if (include_timing) j["wall_time_seconds"] = wall_time_seconds;
    return j;
}

RunRecord RunRecord::from_json(const nlohmann::json& j) {
    RunRecord r;
    r.method = j.at("method").get<std::string>();
    r.cluster_cap = j.contains("L") ? j.at("L").get<int>() : 0;
    r.dataset = j.at("dataset").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    if (!j.at("error_rate").is_null()) r.error_rate = real_from_json(j.at("error_rate"));
    if (!j.at("r_value").is_null()) r.r_value = real_from_json(j.at("r_value"));
    if (!j.at("lower_bound").is_null()) r.lower_bound = real_from_json(j.at("lower_bound"));
    r.iterations = j.at("iterations").get<int>();
    if (j.contains("wall_time_seconds")) r.wall_time_seconds = j.at("wall_time_seconds").get<double>();
    return r;
}

}  // namespace crowdtruth
