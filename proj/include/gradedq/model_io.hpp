// JSON model files: loading with JSON-pointer diagnostics, and writing.
#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "gradedq/constructions.hpp"

namespace gradedq {

struct ModelIssue {
    std::string pointer;  // RFC 6901 pointer into the document, "" for the root
    std::string message;
};

class ModelError : public Error {
public:
    explicit ModelError(std::vector<ModelIssue> issues);
    const std::vector<ModelIssue>& issues() const { return issues_; }

private:
    std::vector<ModelIssue> issues_;
};

// a bare field, optionally with a fiber-product split and a restriction request
struct QFieldModel {
    GVectorField field;
    std::optional<FiberProductChart> split;
    std::map<std::size_t, Rational> restriction;
};

struct McModel {
    ChartPtr body;
    MultibracketTable algebra;
    GVectorField alpha;  // on mc_chart(body, algebra)
};

using ModelData = std::variant<AlgebroidModel, ActionModel, QFieldModel, ExtensionModel, RuthModel, CocycleModel,
                               McModel, ExactCourantModel, TransitiveCourantModel>;

struct ModelFile {
    std::string kind;
    ModelData data;
};

const std::vector<std::string>& model_kinds();

ModelFile parse_model(const nlohmann::json& doc);
ModelFile load_model(const std::string& path);
nlohmann::json model_to_json(const ModelFile& m);

// building blocks, shared with the report writers
nlohmann::json chart_to_json(const Chart& c);
nlohmann::json field_to_json(const GVectorField& X);
GVectorField field_from_json(const nlohmann::json& j, const ChartPtr& chart);

}  // namespace gradedq
