#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "synclab/advantage.hpp"

#ifndef SYNCLAB_VERSION
#define SYNCLAB_VERSION "0.0.0"
#endif

namespace synclab {

inline const char* tool_version() { return SYNCLAB_VERSION; }

// 17 significant digits: enough to round-trip a double exactly.
inline std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct WilsonInterval {
    double rate = 0.0;
    double lo = 0.0;
    double hi = 0.0;
};

// Wilson 95% score interval for a binomial rate.
inline WilsonInterval wilson_interval(long successes, long trials) {
    if (trials < 1) throw invalid_parameter("wilson_interval: trials must be >= 1");
    const double z = 1.959963984540054;
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    WilsonInterval w;
    w.rate = p;
    // the score bounds are exact at the boundary rates; avoid rounding junk
    w.lo = (successes == 0) ? 0.0 : std::max(0.0, center - half);
    w.hi = (successes == trials) ? 1.0 : std::min(1.0, center + half);
    return w;
}

// One experiment result: flattened parameters plus named metrics. Every
// record carries the seed and the tool version for provenance replay.
struct RunRecord {
    std::string experiment;
    std::vector<std::pair<std::string, std::string>> params;
    std::vector<std::pair<std::string, double>> metrics;
    long wall_time_ms = 0;
    std::string version = tool_version();

    void set_param(const std::string& key, const std::string& value) {
        for (auto& [k, v] : params)
            if (k == key) {
                v = value;
                return;
            }
        params.emplace_back(key, value);
    }
    void set_param(const std::string& key, double value) { set_param(key, format_number(value)); }
    void set_param(const std::string& key, long value) { set_param(key, std::to_string(value)); }
    void set_param(const std::string& key, int value) { set_param(key, std::to_string(value)); }
    void set_param(const std::string& key, std::uint64_t value) {
        set_param(key, std::to_string(value));
    }

    void set_metric(const std::string& key, double value) {
        for (auto& [k, v] : metrics)
            if (k == key) {
                v = value;
                return;
            }
        metrics.emplace_back(key, value);
    }

    std::string param(const std::string& key) const {
        for (const auto& [k, v] : params)
            if (k == key) return v;
        throw invalid_parameter("RunRecord: missing parameter " + key);
    }
    double metric(const std::string& key) const {
        for (const auto& [k, v] : metrics)
            if (k == key) return v;
        throw invalid_parameter("RunRecord: missing metric " + key);
    }
};

// Fixed CSV row for advantage estimates.
inline std::string advantage_csv_header() {
    return "method,n,L,lambda,D,samples,adv_squared,stderr";
}

inline std::string to_csv_row(const AdvantageEstimate& est) {
    std::string row;
    row += to_string(est.method);
    row += ',' + std::to_string(est.params.n);
    row += ',' + std::to_string(est.params.L);
    row += ',' + format_number(est.params.lambda);
    row += ',' + std::to_string(est.D);
    row += ',' + std::to_string(est.samples);
    row += ',' + format_number(est.adv_squared);
    row += ',' + format_number(est.stderr_);
    return row;
}

}  // namespace synclab
