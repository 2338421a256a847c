#ifndef QBM_REPORT_HPP
#define QBM_REPORT_HPP

#include <string>
#include <utility>

#include <json.hpp>

namespace qbm {

// Machine-readable record of one CLI invocation: {params, results, report}.
// Durations are excluded when deterministic output is requested (figure
// emission must be byte-identical across runs).
struct RunReport {
    std::string command;
    nlohmann::json params = nlohmann::json::object();
    nlohmann::json results = nlohmann::json::object();
    double duration_seconds = 0.0;
    bool pass = true;

    nlohmann::json to_json(bool include_duration = true) const {
        nlohmann::json report{{"command", command}, {"pass", pass}};
        if (include_duration) report["duration_seconds"] = duration_seconds;
        return nlohmann::json{{"params", params}, {"results", results}, {"report", std::move(report)}};
    }
};

}  // namespace qbm

#endif  // QBM_REPORT_HPP
