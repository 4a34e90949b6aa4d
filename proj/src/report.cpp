#include "gradedq/report.hpp"

#include <sstream>

namespace gradedq {

void CheckReport::absorb(const std::string& name, const CheckReport& other) {
    verdicts[name] = other.passed;
    for (const auto& [k, v] : other.verdicts) verdicts[name + "." + k] = v;
    for (auto r : other.residuals) {
        r.where = name + ": " + r.where;
        fail(std::move(r));
    }
    for (const auto& c : other.conventions) {
        bool seen = false;
        for (const auto& d : conventions) seen = seen || d == c;
        if (!seen) conventions.push_back(c);
    }
    for (const auto& [k, v] : other.details) details[name + "." + k] = v;
}

nlohmann::json to_json(const CheckReport& r) {
    nlohmann::json j;
    j["check"] = r.check;
    j["passed"] = r.passed;
    j["residuals"] = nlohmann::json::array();
    for (const auto& res : r.residuals) {
        nlohmann::json e{{"where", res.where}, {"arity", res.arity}, {"value", res.value}};
        if (res.bidegree) e["bidegree"] = {res.bidegree->first, res.bidegree->second};
        j["residuals"].push_back(e);
    }
    j["conventions"] = r.conventions;
    j["verdicts"] = r.verdicts;
    j["details"] = r.details;
    if (r.wall_seconds) j["wall_time_s"] = *r.wall_seconds;
    return j;
}

CheckReport report_from_json(const nlohmann::json& j) {
    CheckReport r;
    r.check = j.at("check").get<std::string>();
    r.passed = j.at("passed").get<bool>();
    for (const auto& e : j.at("residuals")) {
        Residual res;
        res.where = e.at("where").get<std::string>();
        res.arity = e.value("arity", -1);
        res.value = e.at("value").get<std::string>();
        if (e.contains("bidegree")) res.bidegree = std::make_pair(e["bidegree"][0].get<int>(), e["bidegree"][1].get<int>());
        r.residuals.push_back(std::move(res));
    }
    r.conventions = j.value("conventions", std::vector<std::string>{});
    r.verdicts = j.value("verdicts", std::map<std::string, bool>{});
    r.details = j.value("details", std::map<std::string, std::string>{});
    if (j.contains("wall_time_s")) r.wall_seconds = j["wall_time_s"].get<double>();
    return r;
}

std::string to_text(const CheckReport& r) {
    std::ostringstream os;
    os << r.check << ": " << (r.passed ? "PASS" : "FAIL") << "\n";
    for (const auto& [k, v] : r.verdicts) os << "  " << k << ": " << (v ? "pass" : "fail") << "\n";
    for (const auto& res : r.residuals) {
        os << "  residual at " << res.where;
        if (res.bidegree) os << " [bidegree " << res.bidegree->first << "," << res.bidegree->second << "]";
        os << ": " << res.value << "\n";
    }
    for (const auto& [k, v] : r.details) os << "  " << k << " = " << v << "\n";
    if (r.wall_seconds) os << "  wall time: " << *r.wall_seconds << " s\n";
    if (!r.conventions.empty()) {
        os << "  conventions:\n";
        for (const auto& c : r.conventions) os << "    - " << c << "\n";
    }
    return os.str();
}

}  // namespace gradedq
