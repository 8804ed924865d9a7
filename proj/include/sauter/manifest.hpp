#pragma once

#include <chrono>
#include <ctime>
#include <iomanip>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>
#include <openssl/evp.h>

#include "config.hpp"
#include "csv.hpp"

namespace sauter {

inline constexpr const char *kToolVersion = "0.1.0";

inline std::string sha256_hex(const std::string &content) {
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), content.data(), content.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1)
        throw std::runtime_error("SHA-256 digest failed");
    std::ostringstream out;
    for (unsigned int i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
    return out.str();
}

inline std::string utc_timestamp(std::chrono::system_clock::time_point tp) {
    const std::time_t t = std::chrono::system_clock::to_time_t(tp);
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream out;
    out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return out.str();
}

/// Fully resolved configuration under the configuration-file key names.
inline nlohmann::ordered_json config_to_json(const SimulationConfig &cfg) {
    nlohmann::ordered_json j;
    j["c"] = cfg.c;
    j["L"] = cfg.box_length;
    j["Nz"] = cfg.grid_points;
    j["Nt"] = cfg.time_steps;
    j["V1"] = cfg.static_amplitude;
    j["V2"] = cfg.oscillating_amplitude;
    j["omega"] = cfg.omega;
    j["D"] = cfg.well_width;
    j["W1"] = cfg.right_edge_width;
    j["W2"] = cfg.left_edge_width;
    j["t0"] = cfg.ramp_time;
    j["t1"] = cfg.oscillation_time;
    j["well_shape"] = to_string(cfg.well_shape);
    j["sample_stride"] = cfg.resolved_sample_stride();
    return j;
}

/// Inverse of config_to_json as configuration-file overrides (exact round trip).
inline ConfigOverrides config_overrides_from_json(const nlohmann::json &j) {
    ConfigOverrides out;
    for (const auto &key : detail::config_keys()) {
        if (!j.contains(key)) continue;
        const auto &v = j.at(key);
        if (v.is_string()) out.emplace_back(key, v.get<std::string>());
        else if (v.is_number_unsigned()) out.emplace_back(key, std::to_string(v.get<std::uint64_t>()));
        else out.emplace_back(key, format_number(v.get<double>()));
    }
    return out;
}

struct RunManifest {
    SimulationConfig config;
    std::string tool_version = kToolVersion;
    std::string started;
    std::string finished;
    std::map<std::string, std::string> digests;

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["tool_version"] = tool_version;
        j["started"] = started;
        j["finished"] = finished;
        j["config"] = config_to_json(config);
        j["outputs"] = nlohmann::ordered_json::object();
        for (const auto &[name, digest] : digests) j["outputs"][name] = {{"sha256", digest}};
        return j;
    }
};

} // namespace sauter
