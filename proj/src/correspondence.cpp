#include "gradedq/correspondence.hpp"

#include <algorithm>
#include <set>

namespace gradedq {

FiberProductChart FiberProductChart::make(ChartPtr chart, const std::vector<std::string>& xi_names,
                                          const std::vector<std::string>& eta_names) {
    FiberProductChart c;
    c.chart = chart;
    std::set<std::size_t> xs, es;
    for (const auto& n : xi_names) xs.insert(chart->index_of(n));
    for (const auto& n : eta_names) {
        auto i = chart->index_of(n);
        if (xs.count(i)) throw Error("generator '" + n + "' listed as both algebroid and module coordinate");
        es.insert(i);
    }
    for (std::size_t i = 0; i < chart->size(); ++i) {
        if (xs.count(i)) {
            if (chart->degree(i) < 1) throw Error("algebroid coordinate '" + (*chart)[i].name + "' must have positive degree");
            c.xi.push_back(i);
        } else if (es.count(i)) {
            if (chart->degree(i) < 1) throw Error("module coordinate '" + (*chart)[i].name + "' must have positive degree");
            c.eta.push_back(i);
        } else {
            if (chart->degree(i) != 0) throw Error("generator '" + (*chart)[i].name + "' is neither body nor fiber");
            c.body.push_back(i);
        }
    }
    c.algebroid = subchart(chart, c.algebroid_gens());
    c.module = subchart(chart, c.module_gens());
    return c;
}

std::vector<std::size_t> FiberProductChart::algebroid_gens() const {
    std::vector<std::size_t> g = body;
    g.insert(g.end(), xi.begin(), xi.end());
    std::sort(g.begin(), g.end());
    return g;
}

std::vector<std::size_t> FiberProductChart::module_gens() const {
    std::vector<std::size_t> g = body;
    g.insert(g.end(), eta.begin(), eta.end());
    std::sort(g.begin(), g.end());
    return g;
}

GVectorField ActionModel::component(const Tuple& t) const {
    Tuple key;
    int s = algebroid.canonical_sign(t, key);
    auto it = components.find(key);
    if (s == 0 || it == components.end()) return GVectorField(chart.module);
    return s > 0 ? it->second : -it->second;
}

void ActionModel::set_component(const Tuple& t, const GVectorField& X) {
    Tuple key;
    int s = algebroid.canonical_sign(t, key);
    if (s == 0) {
        if (!X.is_zero()) throw Error("nonzero component on a tuple that vanishes by symmetry");
        return;
    }
    if (X.is_zero()) components.erase(key);
    else components[key] = s > 0 ? X : -X;
}

int ActionModel::max_arity() const {
    int m = 0;
    for (const auto& [k, v] : components)
        if (!v.is_zero()) m = std::max<int>(m, static_cast<int>(k.size()));
    return m;
}

bool ActionModel::operator==(const ActionModel& o) const {
    auto nonzero = [](const std::map<Tuple, GVectorField>& m) {
        std::map<Tuple, GVectorField> r;
        for (const auto& [k, v] : m)
            if (!v.is_zero()) r.emplace(k, v);
        return r;
    };
    return algebroid.frame == o.algebroid.frame && algebroid.entries == o.algebroid.entries &&
           nonzero(components) == nonzero(o.components);
}

int action_decalage_sign(const Tuple& t, const std::vector<FrameElement>& frame) {
    const std::size_t n = t.size();
    int parity = 0;
    for (std::size_t j = 0; j + 1 < n; ++j) parity += static_cast<int>(n - 1 - j) * frame.at(t[j]).degree;
    return sign_of(parity);
}

GVectorField algebroid_field(const MultibracketTable& algebroid, const FiberProductChart& c) {
    return field_from_brackets(algebroid, c.chart, c.body, c.xi);
}

CurvedMorphism to_curved_morphism(const ActionModel& A) {
    CurvedMorphism m{decalage(A.algebroid), A.chart.module, {}};
    for (const auto& [k, v] : A.components) {
        if (v.is_zero()) continue;
        m.components[k] = action_decalage_sign(k, A.algebroid.frame) > 0 ? v : -v;
    }
    return m;
}

namespace {

std::string names_of(const std::vector<std::string>& v) {
    std::string s;
    for (const auto& n : v) s += (s.empty() ? "" : ", ") + n;
    return s;
}

int xi_count(const GVectorField& X, const std::vector<std::size_t>& xi) {
    int m = 0;
    for (const auto& p : X.coeffs())
        for (const auto& [mono, q] : p.terms()) {
            int k = 0;
            for (auto i : xi) k += mono.exp[i];
            m = std::max(m, k);
        }
    return m;
}

}  // namespace

ActionModel decompose(const GVectorField& Q_tot, const FiberProductChart& c, const MultibracketTable* expected,
                      bool require_homological) {
    if (!same_chart(Q_tot.chart(), c.chart)) throw ChartMismatch("field is not on the fiber product chart");
    if (!Q_tot.is_zero() && Q_tot.degree() != std::optional<int>(1))
        throw InvalidField("field is not homogeneous of degree 1", "");
    if (require_homological) {
        GVectorField res = homological_residual(Q_tot);
        if (!res.is_zero()) throw InvalidField("field is not homological", res.to_string());
    }
    auto push = pushforward_check(Q_tot, c.algebroid_gens());
    if (!push.projectable) throw InvalidField("field does not project to the algebroid chart", names_of(push.offending));
    GVectorField QA = vf_transport(push.image, c.algebroid);

    std::vector<std::size_t> body_a, xi_a;
    for (auto b : c.body) body_a.push_back(c.algebroid->index_of((*c.chart)[b].name));
    for (auto x : c.xi) xi_a.push_back(c.algebroid->index_of((*c.chart)[x].name));
    ActionModel A;
    A.chart = c;
    A.algebroid = decalage(derived_brackets(QA, body_a, xi_a));
    if (expected) {
        GVectorField want = algebroid_field(*expected, c);
        GVectorField have = algebroid_field(A.algebroid, c);
        if (want != have) throw InvalidField("projection differs from the given algebroid", (have - want).to_string());
    }
    // the algebroid field must be recovered exactly from its brackets
    GVectorField QA_full = algebroid_field(A.algebroid, c);
    GVectorField QA_proj = vf_transport(QA, c.chart);
    if (QA_full != QA_proj)
        throw InvalidField("projection is not an algebroid field in bracket form", (QA_proj - QA_full).to_string());

    const int max_ar = xi_count(Q_tot, c.xi);
    std::vector<int> shifted_deg;
    for (auto x : c.xi) shifted_deg.push_back(-c.chart->degree(x));
    Tuple t;
    auto extract = [&](const GVectorField& B) {
        GVectorField phi = vf_transport(restrict_and_project(B, c.xi, c.xi), c.module);
        if (phi.is_zero()) return;
        A.components[t] = action_decalage_sign(t, A.algebroid.frame) > 0 ? phi : -phi;
    };
    auto rec = [&](auto&& self, const GVectorField& B) -> void {
        extract(B);
        if (static_cast<int>(t.size()) >= max_ar) return;
        std::size_t start = t.empty() ? 0 : t.back();
        for (std::size_t a = start; a < c.xi.size(); ++a) {
            if (!t.empty() && t.back() == a && (shifted_deg[a] & 1)) continue;
            GVectorField next = lie_bracket(B, GVectorField::partial(c.chart, c.xi[a]));
            if (next.is_zero()) continue;
            t.push_back(a);
            self(self, next);
            t.pop_back();
        }
    };
    rec(rec, Q_tot);
    return A;
}

CheckReport check_action_invariants(const ActionModel& A) {
    CheckReport rep;
    rep.check = "action_invariants";
    const auto& c = A.chart;
    std::vector<std::size_t> body_m;
    for (auto b : c.body) body_m.push_back(c.module->index_of((*c.chart)[b].name));
    auto body_part = [&](const GVectorField& X) {
        GVectorField r(c.module);
        for (auto b : body_m) r.set(b, X.coeff(b));
        return r;
    };
    for (const auto& [k, v] : A.components) {
        GVectorField bp = body_part(v);
        std::string where = "F_" + std::to_string(k.size()) + tuple_to_string(k, A.algebroid.frame);
        if (k.size() == 1 && A.algebroid.frame[k[0]].degree == 0) continue;
        if (!bp.is_zero()) rep.fail({where + " not vertical", static_cast<int>(k.size()), bp.to_string(), std::nullopt});
    }
    for (std::size_t i = 0; i < A.algebroid.rank(); ++i) {
        if (A.algebroid.frame[i].degree != 0) continue;
        GVectorField rho(c.module);
        if (A.algebroid.has_anchor() && !A.algebroid.anchor_of(i).is_zero())
            rho = vf_transport(A.algebroid.anchor_of(i), c.module);
        GVectorField diff = body_part(A.component({i})) - rho;
        if (!diff.is_zero())
            rep.fail({"anchor of " + A.algebroid.frame[i].name, 1, diff.to_string(), std::nullopt});
    }
    return rep;
}

GVectorField assemble(const ActionModel& A) {
    auto inv = check_action_invariants(A);
    if (!inv.passed) throw InvalidField("action violates " + inv.residuals[0].where, inv.residuals[0].value);
    const auto& c = A.chart;
    GVectorField Q = algebroid_field(A.algebroid, c);
    std::vector<ContractionSlot> slots;
    for (const auto& [k, v] : A.components) {
        if (v.is_zero()) continue;
        GVectorField phi = action_decalage_sign(k, A.algebroid.frame) > 0 ? v : -v;
        GPoly xi = GPoly::constant(c.chart, 1);
        slots.clear();
        for (auto a : k) {
            xi = poly_mul(xi, GPoly::generator(c.chart, c.xi[a]));
            slots.push_back({static_cast<int>(a), c.chart->degree(c.xi[a])});
        }
        Rational inv_factor(1);
        if (!k.empty()) {
            long f = nested_contraction_factor(slots, 1);
            if (f == 0) throw Error("component on a tuple that cannot be encoded");
            inv_factor = Rational(1, f);
            inv_factor.canonicalize();
        }
        for (auto e : c.eta) {
            const GPoly& coeff = phi.coeff(c.module->index_of((*c.chart)[e].name));
            if (coeff.is_zero()) continue;
            Q.add(e, inv_factor * poly_mul(xi, transport(coeff, c.chart)));
        }
    }
    return Q;
}

int action_arity_bound(const ActionModel& A) {
    int K = A.max_arity();
    int m = std::max(A.algebroid.max_arity(), A.algebroid.has_anchor() ? 1 : 0);
    // {phi_j, phi_{n-j}} reaches n = 2K, phi(l_m) reaches K + m - 1
    return std::max({2 * K, K + m - 1, 2 * m - 1, 1});
}

std::vector<Residual> residuals_by_bidegree(const GVectorField& R, const FiberProductChart& c, const std::string& prefix) {
    std::vector<Residual> out;
    for (std::size_t z = 0; z < R.size(); ++z) {
        if (R.coeff(z).is_zero()) continue;
        GVectorField single(c.chart);
        single.set(z, R.coeff(z));
        for (const auto& [bd, part] : bidegree_split(single, c.xi, c.eta))
            out.push_back({prefix + "component " + (*c.chart)[z].name, bd.first, part.coeff(z).to_string(), bd});
    }
    return out;
}

CheckReport check_action(const ActionModel& A, const ActionCheckOptions& opts) {
    CheckReport rep;
    rep.check = "action";
    rep.conventions.push_back("F_k are L-infinity components; phi_k = (-1)^{sum_j (k-j)|a_j|} F_k on the shifted side");
    rep.conventions.push_back("assembled field: Q_A + sum_T (1/s_T) xi^T phi_T with s_T the nested contraction sign");
    auto inv = check_action_invariants(A);
    rep.absorb("invariants", inv);
    int n = opts.arity ? *opts.arity : action_arity_bound(A);
    rep.details["arity"] = std::to_string(n);
    if (opts.arity && *opts.arity < action_arity_bound(A)) rep.details["arity_capped"] = "true";

    bool hom = false;
    if (inv.passed) {
        GVectorField Q = assemble(A);
        GVectorField res = homological_residual(Q);
        hom = res.is_zero();
        rep.verdicts["homological"] = hom;
        for (auto& r : residuals_by_bidegree(res, A.chart, "[Q,Q] ")) rep.fail(std::move(r));
        if (opts.q_compatible) {
            GVectorField at_zero = vf_zero_out(Q, A.chart.xi);
            GVectorField xi_part = vf_drop(at_zero, A.chart.module_gens());
            GVectorField restricted = vf_transport(vf_drop(at_zero, A.chart.xi), A.chart.module);
            bool ok = xi_part.is_zero() && restricted == A.component({});
            rep.verdicts["zero_section_q_morphism"] = ok;
            if (!ok) rep.fail({"zero section", 0, xi_part.is_zero() ? (restricted - A.component({})).to_string() : xi_part.to_string(), std::nullopt});
        }
    }
    auto mor = check_curved_morphism(to_curved_morphism(A), n);
    rep.verdicts["morphism"] = mor.passed;
    for (auto r : mor.residuals) {
        r.where = "morphism " + r.where;
        rep.fail(std::move(r));
    }
    for (const auto& cv : mor.conventions) rep.conventions.push_back(cv);
    bool agree = !inv.passed || hom == mor.passed;
    rep.verdicts["agree"] = agree;
    rep.passed = inv.passed && hom && mor.passed && agree && rep.residuals.empty();
    return rep;
}

CheckReport check_roundtrip(const ActionModel& A) {
    CheckReport rep;
    rep.check = "roundtrip_action";
    GVectorField Q = assemble(A);
    try {
        ActionModel B = decompose(Q, A.chart, &A.algebroid, false);
        if (!(B == A)) {
            for (const auto& [k, v] : A.components) {
                GVectorField d = B.component(k) - v;
                if (!d.is_zero()) rep.fail({"F" + tuple_to_string(k, A.algebroid.frame), static_cast<int>(k.size()), d.to_string(), std::nullopt});
            }
            for (const auto& [k, v] : B.components)
                if (!A.components.count(k) && !v.is_zero())
                    rep.fail({"F" + tuple_to_string(k, A.algebroid.frame), static_cast<int>(k.size()), v.to_string(), std::nullopt});
            if (rep.passed) rep.fail({"algebroid", -1, "brackets differ", std::nullopt});
        }
    } catch (const InvalidField& e) {
        rep.fail({"decompose", -1, e.what(), std::nullopt});
    }
    return rep;
}

CheckReport check_roundtrip(const GVectorField& Q_tot, const FiberProductChart& c) {
    CheckReport rep;
    rep.check = "roundtrip_field";
    ActionModel A = decompose(Q_tot, c, nullptr, false);
    GVectorField back = assemble(A);
    if (back != Q_tot) rep.fail({"assemble(decompose(Q))", -1, (back - Q_tot).to_string(), std::nullopt});
    return rep;
}

GVectorField BidegreeReport::total() const {
    if (entries.empty()) return GVectorField();
    GVectorField t(entries[0].part.chart());
    for (const auto& e : entries) t += e.part;
    return t;
}

BidegreeReport bidegree_report(const GVectorField& X, const FiberProductChart& c) {
    BidegreeReport rep;
    GVectorField module_dirs(c.chart), algebroid_dirs(c.chart);
    for (auto e : c.eta) module_dirs.set(e, X.coeff(e));
    for (auto g : c.algebroid_gens()) algebroid_dirs.set(g, X.coeff(g));
    for (const auto& [bd, part] : bidegree_split(module_dirs, c.xi, c.eta)) {
        BidegreeEntry e{bd, part, {}};
        e.feeds.push_back("F_" + std::to_string(bd.first));
        if (bd.first + bd.second >= 1) e.feeds.push_back("l_" + std::to_string(bd.first + bd.second));
        e.feeds.push_back("m_" + std::to_string(bd.second));
        rep.entries.push_back(std::move(e));
    }
    for (const auto& [bd, part] : bidegree_split(algebroid_dirs, c.xi, c.eta)) {
        BidegreeEntry e{bd, part, {"Q_A"}};
        if (bd.second == 0) {
            e.feeds.push_back("l_2");
            e.feeds.push_back("m_1");
        }
        rep.entries.push_back(std::move(e));
    }
    return rep;
}

}  // namespace gradedq
