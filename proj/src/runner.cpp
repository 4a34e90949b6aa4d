#include "gradedq/runner.hpp"

#include <algorithm>
#include <fstream>

#include "gradedq/examples.hpp"

namespace gradedq {

using nlohmann::json;

const std::vector<std::string>& commands() {
    static const std::vector<std::string> c{"check-q", "decompose", "assemble", "check-action", "roundtrip",
                                            "check-morphism", "bidegree", "build"};
    return c;
}

const std::vector<std::string>& constructions() {
    static const std::vector<std::string> c{"algebroid", "extension", "ruth", "cocycle", "linearize",
                                            "mc", "exact-courant", "transitive-courant", "pontryagin"};
    return c;
}

namespace {

int capped(const RunOptions& o, int natural) { return o.arity ? std::min(*o.arity, natural) : natural; }

}  // namespace

std::vector<std::string> sign_ledger() {
    std::vector<long> s = contraction_sign_table(4);
    std::string t = "sigma(k) = (-1)^{k(k-1)/2}, computed:";
    for (std::size_t k = 0; k < s.size(); ++k) t += " k=" + std::to_string(k + 1) + (s[k] > 0 ? ":+1" : ":-1");
    return {t, "derivatives act from the left", "decalage on unshifted degrees",
            "emitted fields carry the sign stated by the construction"};
}

namespace {

// combine sub-reports sorted by check name
CheckReport combine(const std::string& name, std::vector<CheckReport> parts) {
    std::sort(parts.begin(), parts.end(), [](const auto& a, const auto& b) { return a.check < b.check; });
    if (parts.size() == 1) {
        CheckReport r = parts[0];
        r.check = name + (r.check.empty() ? "" : ": " + r.check);
        return r;
    }
    CheckReport r;
    r.check = name;
    for (const auto& p : parts) {
        r.absorb(p.check, p);
        if (!p.passed) r.passed = false;
    }
    return r;
}

void write_model(const ModelFile& m, const RunOptions& o, CheckReport& rep) {
    json j = model_to_json(m);
    if (o.output.empty()) {
        rep.details["model"] = j.dump();
        return;
    }
    std::ofstream out(o.output);
    if (!out) throw UsageError("cannot write '" + o.output + "'");
    out << j.dump(2) << "\n";
    rep.details["model"] = "written to " + o.output;
}

template <class T>
const T& expect(const ModelFile& m, const char* kind, const std::string& what) {
    if (m.kind != kind) throw UsageError(what + " needs a '" + kind + "' model, got '" + m.kind + "'");
    return std::get<T>(m.data);
}

// the action of an action model, or of a qfield with a split
ActionModel action_of(const ModelFile& m, const std::string& what) {
    if (m.kind == "action") return std::get<ActionModel>(m.data);
    if (m.kind == "qfield") {
        const auto& q = std::get<QFieldModel>(m.data);
        if (!q.split) throw UsageError(what + " needs a 'split' section on the qfield model");
        return decompose(q.field, *q.split);
    }
    throw UsageError(what + " needs an 'action' or 'qfield' model, got '" + m.kind + "'");
}

struct FieldView {
    GVectorField Q;
    std::optional<FiberProductChart> split;
};

FieldView field_of(const ModelFile& m) {
    if (m.kind == "qfield") {
        const auto& q = std::get<QFieldModel>(m.data);
        return {q.field, q.split};
    }
    if (m.kind == "action") {
        const auto& A = std::get<ActionModel>(m.data);
        return {assemble(A), A.chart};
    }
    if (m.kind == "algebroid") return {build_algebroid_Q(std::get<AlgebroidModel>(m.data)), std::nullopt};
    if (m.kind == "extension") {
        auto r = build_extension_action(std::get<ExtensionModel>(m.data));
        return {r.Q_tot, r.chart};
    }
    if (m.kind == "ruth") {
        auto r = build_ruth(std::get<RuthModel>(m.data));
        return {r.Q_tot, r.chart};
    }
    if (m.kind == "cocycle") {
        auto r = build_cocycle_action(std::get<CocycleModel>(m.data));
        return {r.Q_tot, r.chart};
    }
    if (m.kind == "mc") {
        const auto& mc = std::get<McModel>(m.data);
        auto r = build_mc_action(mc.body, mc.algebra, mc.alpha);
        return {r.Q, r.chart};
    }
    if (m.kind == "exact_courant") return {build_exact_courant(std::get<ExactCourantModel>(m.data)).Q, std::nullopt};
    auto r = build_transitive_courant(std::get<TransitiveCourantModel>(m.data));
    return {r.Q_tot, r.chart};
}

GVectorField restricted(const GVectorField& X, const std::map<std::size_t, Rational>& values) {
    GVectorField out(X.chart());
    for (std::size_t z = 0; z < X.size(); ++z) out.set(z, poly_restrict(X.coeff(z), values));
    return out;
}

// ---------------------------------------------------------------------------------------------

CheckReport cmd_check_q(const ModelFile& m) {
    FieldView v = field_of(m);
    CheckReport rep;
    rep.check = "homological";
    GVectorField R = homological_residual(v.Q);
    rep.verdicts["homological"] = R.is_zero();
    if (!R.is_zero()) {
        if (v.split) {
            for (auto& r : residuals_by_bidegree(R, *v.split, "[Q,Q] ")) rep.fail(std::move(r));
        } else {
            rep.fail({"[Q,Q]", -1, R.to_string(), std::nullopt});
        }
    }
    if (m.kind == "qfield") {
        const auto& q = std::get<QFieldModel>(m.data);
        if (!q.restriction.empty()) rep.details["restricted field"] = restricted(q.field, q.restriction).to_string();
    }
    return rep;
}

CheckReport cmd_decompose(const ModelFile& m, const RunOptions& o) {
    const auto& q = expect<QFieldModel>(m, "qfield", "decompose");
    if (!q.split) throw UsageError("decompose needs a 'split' section");
    CheckReport rep;
    rep.check = "decompose";
    try {
        ActionModel A = decompose(q.field, *q.split);
        rep.verdicts["decomposed"] = true;
        rep.details["max_arity"] = std::to_string(A.max_arity());
        write_model({"action", A}, o, rep);
    } catch (const InvalidField& e) {
        rep.verdicts["decomposed"] = false;
        rep.fail({e.what(), -1, e.witness.empty() ? "(no witness)" : e.witness, std::nullopt});
    }
    return rep;
}

CheckReport cmd_assemble(const ModelFile& m, const RunOptions& o) {
    const auto& A = expect<ActionModel>(m, "action", "assemble");
    GVectorField Q = assemble(A);
    CheckReport rep;
    rep.check = "assemble";
    GVectorField R = homological_residual(Q);
    rep.verdicts["homological"] = R.is_zero();
    if (!R.is_zero())
        for (auto& r : residuals_by_bidegree(R, A.chart, "[Q,Q] ")) rep.fail(std::move(r));
    write_model({"qfield", QFieldModel{Q, A.chart, {}}}, o, rep);
    return rep;
}

CheckReport cmd_check_action(const ModelFile& m, const RunOptions& o) {
    ActionModel A = action_of(m, "check-action");
    ActionCheckOptions opts;
    opts.arity = capped(o, action_arity_bound(A));
    return check_action(A, opts);
}

CheckReport cmd_roundtrip(const ModelFile& m) {
    if (m.kind == "qfield") {
        const auto& q = std::get<QFieldModel>(m.data);
        if (!q.split) throw UsageError("roundtrip needs a 'split' section on the qfield model");
        return check_roundtrip(q.field, *q.split);
    }
    return check_roundtrip(expect<ActionModel>(m, "action", "roundtrip"));
}

CheckReport curved_morphism_report(const ActionModel& A, const RunOptions& o) {
    CurvedMorphism F = to_curved_morphism(A);
    int n = capped(o, action_arity_bound(A));
    CheckReport a = check_curved_morphism(F, n), b = check_twisted_morphism(F, n);
    a.check = "curved_morphism";
    b.check = "twisted_morphism";
    CheckReport rep = combine("check-morphism", {a, b});
    rep.verdicts["agree"] = a.passed == b.passed;
    if (a.passed != b.passed) rep.passed = false;
    rep.details["arity"] = std::to_string(n);
    return rep;
}

template <class D>
CheckReport lie_morphism_report(const D& target, const LieMorphism<D>& F, int n, const std::string& name) {
    CheckReport r = check_lie_morphism(target, F, n);
    r.check = name;
    r.details["arity"] = std::to_string(n);
    return r;
}

CheckReport cmd_check_morphism(const ModelFile& m, const RunOptions& o) {
    if (m.kind == "extension") {
        auto r = build_extension_action(std::get<ExtensionModel>(m.data));
        return lie_morphism_report(r.target, r.morphism, capped(o, 3), "gauge_morphism");
    }
    if (m.kind == "exact_courant") {
        const auto& M = std::get<ExactCourantModel>(m.data);
        auto r = build_exact_courant(M);
        int n = capped(o, static_cast<int>(std::min<std::size_t>(M.H.dim(), 4)));
        return lie_morphism_report(r.target, r.morphism, n, "exact_courant_morphism");
    }
    if (m.kind == "transitive_courant") {
        const auto& T = std::get<TransitiveCourantModel>(m.data);
        auto r = build_transitive_courant(T);
        int n = capped(o, static_cast<int>(std::min<std::size_t>(T.g.body->size(), 4)));
        return lie_morphism_report(r.target, r.morphism, n, "quadratic_morphism");
    }
    if (m.kind == "action" || m.kind == "qfield") return curved_morphism_report(action_of(m, "check-morphism"), o);
    FieldView v = field_of(m);
    if (!v.split) throw UsageError("check-morphism does not apply to '" + m.kind + "' models");
    return curved_morphism_report(decompose(v.Q, *v.split, nullptr, false), o);
}

CheckReport algebroid_report(const AlgebroidModel& A) {
    CheckReport rep;
    rep.check = "algebroid";
    GVectorField Q = build_algebroid_Q(A);
    GVectorField R = homological_residual(Q);
    CheckReport lie = check_linfty(A, 3);
    rep.absorb("brackets", lie);
    rep.verdicts["homological"] = R.is_zero();
    if (!R.is_zero()) rep.fail({"[Q,Q]", -1, R.to_string(), std::nullopt});
    rep.verdicts["agree"] = lie.passed == R.is_zero();
    rep.details["Q"] = Q.to_string();
    for (const auto& [k, v] : rep.verdicts)
        if (!v) rep.passed = false;
    return rep;
}

CheckReport cmd_build(const std::string& what, const ModelFile& m, const RunOptions& o) {
    if (what == "algebroid") return algebroid_report(expect<AlgebroidModel>(m, "algebroid", "build algebroid"));
    if (what == "extension") return build_extension_action(expect<ExtensionModel>(m, "extension", "build extension")).report;
    if (what == "ruth") return build_ruth(expect<RuthModel>(m, "ruth", "build ruth")).report;
    if (what == "cocycle") return build_cocycle_action(expect<CocycleModel>(m, "cocycle", "build cocycle")).report;
    if (what == "mc") {
        const auto& mc = expect<McModel>(m, "mc", "build mc");
        return build_mc_action(mc.body, mc.algebra, mc.alpha).report;
    }
    if (what == "exact-courant") return build_exact_courant(expect<ExactCourantModel>(m, "exact_courant", "build exact-courant")).report;
    if (what == "transitive-courant")
        return build_transitive_courant(expect<TransitiveCourantModel>(m, "transitive_courant", "build transitive-courant")).report;
    if (what == "pontryagin")
        return standard_cocycle_and_pontryagin(expect<TransitiveCourantModel>(m, "transitive_courant", "build pontryagin")).report;
    if (what == "linearize") {
        ActionModel A = action_of(m, "build linearize");
        CheckReport rep;
        rep.check = "linearize";
        try {
            ActionModel L = linearize_action(A);
            CheckReport act = check_action(L);
            rep.absorb("action", act);
            rep.verdicts["tangent"] = true;
            write_model({"action", L}, o, rep);
        } catch (const NotTangent& e) {
            rep.verdicts["tangent"] = false;
            rep.fail({"zero section", -1, e.what(), std::nullopt});
        }
        for (const auto& [k, v] : rep.verdicts)
            if (!v) rep.passed = false;
        return rep;
    }
    std::string all;
    for (const auto& c : constructions()) all += " " + c;
    throw UsageError("unknown construction '" + what + "'; known:" + all);
}

CheckReport cmd_bidegree(const ModelFile& m) {
    FieldView v = field_of(m);
    if (!v.split) throw UsageError("bidegree needs a model with a fiber-product split");
    BidegreeReport b = bidegree_report(v.Q, *v.split);
    CheckReport rep;
    rep.check = "bidegree";
    for (const auto& e : b.entries) {
        std::string feeds;
        for (const auto& f : e.feeds) feeds += (feeds.empty() ? "" : ", ") + f;
        rep.details["(" + std::to_string(e.bidegree.first) + "," + std::to_string(e.bidegree.second) + ")"] =
            e.part.to_string() + "  [feeds " + feeds + "]";
    }
    rep.verdicts["split_sums_to_field"] = b.total() == v.Q;
    rep.passed = rep.verdicts["split_sums_to_field"];
    return rep;
}

// ---------------------------------------------------------------------------------------------

}  // namespace

std::optional<ModelFile> example_model(const std::string& name, std::uint64_t seed) {
    namespace ex = gradedq::examples;
    if (name == "atiyah-so3") return ModelFile{"extension", ex::atiyah_so3()};
    if (name == "ruth-2term") return ModelFile{"ruth", ex::ruth_two_term()};
    if (name == "cocycle-3form") return ModelFile{"cocycle", ex::cocycle_three_form()};
    if (name == "mc-twist") {
        auto m = ex::mc_twist();
        return ModelFile{"mc", McModel{m.body, m.algebra, m.alpha}};
    }
    if (name == "exact-courant-r3") return ModelFile{"exact_courant", ex::exact_courant_r3(true)};
    if (name == "transitive-courant-so3") return ModelFile{"transitive_courant", ex::transitive_so3()};
    if (name == "pontryagin-demo") return ModelFile{"transitive_courant", ex::pontryagin_demo(-2)};
    if (name == "random-action") {
        auto r = ex::random_action(seed);
        return ModelFile{"action", decompose(r.Q, r.chart)};
    }
    return std::nullopt;
}

CheckReport run_example(const std::string& name, const RunOptions& o) {
    auto m = example_model(name, o.seed);
    if (!m) throw UsageError("unknown example '" + name + "'; run 'gradedq list'");
    if (name == "pontryagin-demo")
        return combine("example " + name, {cmd_build("transitive-courant", *m, o), cmd_build("pontryagin", *m, o)});
    if (name == "random-action") {
        CheckReport rt = cmd_roundtrip(*m), act = cmd_check_action(*m, o);
        rt.check = "roundtrip";
        act.check = "action";
        CheckReport rep = combine("example " + name, {rt, act});
        rep.details["seed"] = std::to_string(o.seed);
        return rep;
    }
    for (const auto& e : examples::catalog())
        if (e.name == name) return combine("example " + name, {cmd_build(e.construction, *m, o)});
    throw UsageError("unknown example '" + name + "'");
}

CheckReport run_command(const std::string& command, const ModelFile& m, const RunOptions& o, const std::string& construction) {
    try {
        if (command == "check-q") return combine(command, {cmd_check_q(m)});
        if (command == "decompose") return combine(command, {cmd_decompose(m, o)});
        if (command == "assemble") return combine(command, {cmd_assemble(m, o)});
        if (command == "check-action") return combine(command, {cmd_check_action(m, o)});
        if (command == "roundtrip") return combine(command, {cmd_roundtrip(m)});
        if (command == "check-morphism") return combine(command, {cmd_check_morphism(m, o)});
        if (command == "bidegree") return combine(command, {cmd_bidegree(m)});
        if (command == "build") return combine("build " + construction, {cmd_build(construction, m, o)});
    } catch (const InvalidField& e) {
        CheckReport rep;
        rep.check = command + ": input field";
        rep.fail({e.what(), -1, e.witness.empty() ? "(no witness)" : e.witness, std::nullopt});
        return rep;
    }
    throw UsageError("unknown command '" + command + "'");
}

CheckReport finalize_report(CheckReport rep, std::optional<double> seconds) {
    for (const auto& c : sign_ledger())
        if (std::find(rep.conventions.begin(), rep.conventions.end(), c) == rep.conventions.end()) rep.conventions.push_back(c);
    if (!rep.passed && rep.residuals.empty()) {
        std::string failed;
        for (const auto& [k, v] : rep.verdicts)
            if (!v) failed += (failed.empty() ? "" : ", ") + k;
        rep.residuals.push_back({"verdicts", -1, failed.empty() ? "failed" : failed, std::nullopt});
    }
    if (seconds) rep.wall_seconds = seconds;
    return rep;
}

}  // namespace gradedq
