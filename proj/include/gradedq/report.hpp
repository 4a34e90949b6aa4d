// Check reports shared by all verifiers.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace gradedq {

struct Residual {
    std::string where;  // e.g. "arity 2 (e1, e2)" or "component x1"
    int arity = -1;
    std::string value;  // exact text of the nonzero residual
    std::optional<std::pair<int, int>> bidegree;

    bool operator==(const Residual&) const = default;
};

struct CheckReport {
    std::string check;
    bool passed = true;
    std::vector<Residual> residuals;
    std::vector<std::string> conventions;         // sign conventions used by the check
    std::map<std::string, bool> verdicts;         // named sub-verdicts
    std::map<std::string, std::string> details;   // extra facts, e.g. recovered constants
    std::optional<double> wall_seconds;

    void fail(Residual r) {
        passed = false;
        residuals.push_back(std::move(r));
    }
    // merge another report's residuals under a prefix; sub-verdict recorded under `name`
    void absorb(const std::string& name, const CheckReport& other);

    bool operator==(const CheckReport&) const = default;
};

nlohmann::json to_json(const CheckReport& r);
CheckReport report_from_json(const nlohmann::json& j);
std::string to_text(const CheckReport& r);

}  // namespace gradedq
