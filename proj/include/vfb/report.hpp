#pragma once

#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace vfb {

/// Outcome of one empirically verified inequality: left side, right side,
/// their ratio, and pass/fail against a declared tolerance.
struct EstimateReport {
    std::string label;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    bool trivial = false; // both sides vanished; nothing to compare
    nlohmann::ordered_json metadata = nlohmann::ordered_json::object();

    static EstimateReport against_bound(std::string label, double lhs, double rhs,
                                        double bound, double tolerance = 0.0) {
        EstimateReport r;
        r.label = std::move(label);
        r.lhs = lhs;
        r.rhs = rhs;
        r.tolerance = tolerance;
        if (rhs > 0.0) {
            r.ratio = lhs / rhs;
            r.pass = r.ratio <= bound + tolerance;
        } else if (lhs == 0.0) {
            r.ratio = 0.0;
            r.pass = true;
            r.trivial = true;
        } else {
            r.ratio = std::numeric_limits<double>::infinity();
            r.pass = false;
        }
        return r;
    }

    static EstimateReport deviation(std::string label, double observed, double tolerance) {
        EstimateReport r;
        r.label = std::move(label);
        r.lhs = observed;
        r.rhs = tolerance;
        r.ratio = tolerance > 0.0 ? observed / tolerance : observed;
        r.tolerance = tolerance;
        r.pass = observed <= tolerance;
        return r;
    }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["label"] = label;
        j["lhs"] = lhs;
        j["rhs"] = rhs;
        j["ratio"] = ratio;
        j["tolerance"] = tolerance;
        j["pass"] = pass;
        if (trivial) j["trivial"] = true;
        if (!metadata.empty()) j["metadata"] = metadata;
        return j;
    }
};

inline double worst_ratio(const std::vector<EstimateReport>& reports) {
    double w = 0.0;
    for (const auto& r : reports)
        if (!r.trivial) w = std::max(w, r.ratio);
    return w;
}

inline bool all_pass(const std::vector<EstimateReport>& reports) {
    for (const auto& r : reports)
        if (!r.pass) return false;
    return true;
}

} // namespace vfb
