#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gradedq/examples.hpp"
#include "gradedq/model_io.hpp"
#include "support/actions.hpp"

using namespace gradedq;
using namespace gradedq::testing;
using nlohmann::json;

namespace {

ModelFile reload(const ModelFile& m) { return parse_model(json::parse(model_to_json(m).dump())); }

std::string pointer_of(const json& doc) {
    try {
        parse_model(doc);
    } catch (const ModelError& e) {
        REQUIRE(e.issues().size() == 1);
        return e.issues()[0].pointer;
    }
    FAIL("model was accepted");
    return "";
}

json tangent_ext() {
    return json::parse(R"({
        "kind": "extension",
        "chart": [{"name": "x1", "degree": 0}],
        "frames": {"base": "tangent", "fiber": ["e1", "e2", "e3"]},
        "brackets": {"fiber": [{"args": ["e1", "e2"], "value": {"e3": "1"}},
                               {"args": ["e2", "e3"], "value": {"e1": "1"}},
                               {"args": ["e3", "e1"], "value": {"e2": "1"}}]},
        "connection": {"dx1": {"e1": {"e2": "x1"}, "e2": {"e1": "-x1"}}}
    })");
}

}  // namespace

TEST_CASE("extension file matches the built-in fixture") {
    ModelFile m = parse_model(tangent_ext());
    CHECK(m.kind == "extension");
    const auto& E = std::get<ExtensionModel>(m.data);
    auto want = examples::atiyah_so3();
    CHECK(E.fiber == want.fiber);
    CHECK(E.fiber_brackets == want.fiber_brackets);
    CHECK(E.connection == want.connection);
    CHECK(build_extension_action(E).Q_tot == build_extension_action(want).Q_tot);
}

TEST_CASE("writers and loaders are inverse on the catalog models") {
    std::vector<ModelFile> models{
        {"algebroid", examples::tangent_algebroid(examples::euclidean(2))},
        {"extension", examples::atiyah_so3()},
        {"extension", examples::atiyah_broken()},
        {"ruth", examples::ruth_two_term()},
        {"cocycle", examples::cocycle_three_form()},
        {"exact_courant", examples::exact_courant_r3(true)},
        {"transitive_courant", examples::transitive_so3()},
        {"transitive_courant", examples::pontryagin_demo(-2)},
    };
    auto mc = examples::mc_twist();
    models.push_back({"mc", McModel{mc.body, mc.algebra, mc.alpha}});
    for (const auto& m : models) {
        CAPTURE(m.kind);
        json j = model_to_json(m);
        CHECK(j.at("kind") == m.kind);
        ModelFile back = reload(m);
        CHECK(model_to_json(back) == j);
    }
    auto R = std::get<RuthModel>(reload(models[3]).data);
    CHECK(R == examples::ruth_two_term());
    auto C = std::get<CocycleModel>(reload(models[4]).data);
    CHECK(C.eta == examples::cocycle_three_form().eta);
    auto X = std::get<ExactCourantModel>(reload(models[5]).data);
    CHECK(X.christoffel == examples::exact_courant_r3(true).christoffel);
    auto T = std::get<TransitiveCourantModel>(reload(models[7]).data);
    CHECK(build_transitive_courant(T).Q_tot == build_transitive_courant(examples::pontryagin_demo(-2)).Q_tot);
    auto M = std::get<McModel>(reload(models.back()).data);
    CHECK(M.alpha == mc.alpha);
}

TEST_CASE("action and qfield round trips") {
    auto s = aff1_setup();
    Rng rng(5);
    GVectorField Q = random_homological(rng, s);
    ActionModel A = decompose(Q, s.fp);
    auto back = std::get<ActionModel>(reload({"action", A}).data);
    CHECK(back == A);
    CHECK(assemble(back) == Q);
    QFieldModel q{Q, s.fp, {}};
    auto qb = std::get<QFieldModel>(reload({"qfield", q}).data);
    CHECK(qb.field == Q);
    REQUIRE(qb.split);
    CHECK(qb.split->xi == s.fp.xi);
}

TEST_CASE("duplicate generator names the generator") {
    json doc = tangent_ext();
    doc["chart"].push_back({{"name", "x1"}, {"degree", 0}});
    CHECK(pointer_of(doc) == "/chart/1/name");
    try {
        parse_model(doc);
    } catch (const ModelError& e) {
        CHECK(std::string(e.what()).find("'x1'") != std::string::npos);
    }
}

TEST_CASE("odd generator restricted to a nonzero value") {
    json doc = json::parse(R"({
        "kind": "qfield",
        "chart": [{"name": "x", "degree": 0}, {"name": "xi", "degree": 1}],
        "field": {"x": "xi"},
        "restrict": {"x": "1/2", "xi": 1}
    })");
    CHECK(pointer_of(doc) == "/restrict/xi");
    doc["restrict"]["xi"] = 0;
    auto q = std::get<QFieldModel>(parse_model(doc).data);
    CHECK(q.restriction.size() == 2);
    CHECK(q.restriction.at(0) == Rational(1, 2));
}

TEST_CASE("pointer locations for common mistakes") {
    CHECK(pointer_of(json::parse(R"({"chart": []})")) == "");
    CHECK(pointer_of(json::parse(R"({"kind": "nope"})")) == "/kind");
    json doc = tangent_ext();
    doc["connection"]["dx1"]["e1"]["e4"] = "1";
    CHECK(pointer_of(doc) == "/connection/dx1/e1/e4");
    doc = tangent_ext();
    doc["brackets"]["fiber"][1]["value"]["e1"] = "1 +";
    CHECK(pointer_of(doc) == "/brackets/fiber/1/value/e1");
    doc = tangent_ext();
    doc["brackets"]["fiber"][2]["args"] = {"e1", "e1"};
    CHECK(pointer_of(doc) == "/brackets/fiber/2/args");
    doc = tangent_ext();
    doc["chart"][0]["degree"] = 1;
    CHECK(pointer_of(doc) == "/chart/0/degree");
    doc = tangent_ext();
    doc["anchor"] = json::object();
    CHECK(pointer_of(doc) == "/anchor");
    doc = tangent_ext();
    doc["omgea"] = json::array();
    CHECK(pointer_of(doc) == "/omgea");
    doc = tangent_ext();
    doc["frames"]["fibre"] = json::array();
    CHECK(pointer_of(doc) == "/frames/fibre");
}

TEST_CASE("transitive pairing shape and reversed arguments") {
    json doc = model_to_json({"transitive_courant", examples::transitive_so3()});
    doc["pairing"].erase(2);
    CHECK(pointer_of(doc) == "/pairing");
    doc = model_to_json({"transitive_courant", examples::transitive_so3()});
    // H given on (x3, x2, x1) is -H on (x1, x2, x3)
    doc["H"] = json::parse(R"([{"args": ["x3", "x2", "x1"], "value": "-2"}])");
    auto T = std::get<TransitiveCourantModel>(parse_model(doc).data);
    CHECK(T.H.coeffs == examples::transitive_so3().H.coeffs);
}

TEST_CASE("missing files and bad JSON") {
    CHECK_THROWS_AS(load_model("/nonexistent/model.json"), ModelError);
}
