#include "gradedq/constructions.hpp"

#include <algorithm>
#include <set>

namespace gradedq {

namespace {

const char* kSignConvention = "builders emit Q; the displayed coordinate formulas for extensions are -Q";

int count_in(const Monomial& m, const std::vector<std::size_t>& gens) {
    int k = 0;
    for (auto g : gens) k += m.exp[g];
    return k;
}

// terms of f whose count of `gens` factors equals k
GPoly terms_with_count(const GPoly& f, const std::vector<std::size_t>& gens, int k) {
    GPoly r(f.chart());
    for (const auto& [m, c] : f.terms())
        if (count_in(m, gens) == k) r.add_term(m, c);
    return r;
}

GPoly xi_monomial(const ChartPtr& chart, const std::vector<std::size_t>& xi, const Tuple& t) {
    GPoly m = GPoly::constant(chart, 1);
    for (auto a : t) m = poly_mul(m, GPoly::generator(chart, xi[a]));
    return m;
}

std::vector<std::size_t> range(std::size_t from, std::size_t to) {
    std::vector<std::size_t> r;
    for (std::size_t i = from; i < to; ++i) r.push_back(i);
    return r;
}

std::vector<Tuple> increasing_tuples(std::size_t n, std::size_t k) {
    std::vector<Tuple> out;
    Tuple t;
    auto rec = [&](auto&& self, std::size_t start) -> void {
        if (t.size() == k) {
            out.push_back(t);
            return;
        }
        for (std::size_t i = start; i < n; ++i) {
            t.push_back(i);
            self(self, i + 1);
            t.pop_back();
        }
    };
    rec(rec, 0);
    return out;
}

FrameVector lookup_antisymmetric(const std::map<Tuple, FrameVector>& table, std::size_t i, std::size_t j,
                                 std::size_t rank, const ChartPtr& body) {
    if (i == j) return frame_zero(rank, body);
    auto it = table.find({std::min(i, j), std::max(i, j)});
    if (it == table.end()) return frame_zero(rank, body);
    return i < j ? it->second : frame_scale(GPoly::constant(body, -1), it->second);
}

std::string tuple_names(const Tuple& t, const std::vector<std::string>& names) {
    std::string s = "(";
    for (std::size_t k = 0; k < t.size(); ++k) s += (k ? ", " : "") + names.at(t[k]);
    return s + ")";
}

std::vector<std::string> frame_names(const std::vector<FrameElement>& fr) {
    std::vector<std::string> n;
    for (const auto& f : fr) n.push_back(f.name);
    return n;
}

std::vector<FrameElement> degree_zero_frame(const std::vector<std::string>& names) {
    std::vector<FrameElement> fr;
    for (const auto& n : names) fr.push_back({n, 0});
    return fr;
}

void require_lie_algebroid(const AlgebroidModel& A, const char* what) {
    if (A.flavor != Flavor::Linfty) throw Error(std::string(what) + ": base table must use L-infinity conventions");
    for (const auto& f : A.frame)
        if (f.degree != 0) throw Error(std::string(what) + ": base frame must sit in degree 0");
    if (!A.has_anchor()) throw Error(std::string(what) + ": base algebroid needs an anchor");
}

// fields on the module chart keyed like an ActionModel, compared entry by entry
void compare_components(CheckReport& rep, const std::string& verdict, const ActionModel& A,
                        const std::map<Tuple, GVectorField>& expected) {
    bool ok = true;
    std::set<Tuple> keys;
    for (const auto& [k, v] : A.components) keys.insert(k);
    for (const auto& [k, v] : expected) keys.insert(k);
    for (const auto& k : keys) {
        auto it = expected.find(k);
        GVectorField want = it == expected.end() ? GVectorField(A.chart.module) : it->second;
        GVectorField diff = A.component(k) - want;
        if (!diff.is_zero()) {
            ok = false;
            rep.fail({verdict + " F" + tuple_to_string(k, A.algebroid.frame), static_cast<int>(k.size()), diff.to_string(),
                      std::nullopt});
        }
    }
    rep.verdicts[verdict] = ok;
}

}  // namespace

// ---------------------------------------------------------------------------------------------

ChartPtr extend_chart(const ChartPtr& body, const std::vector<Generator>& more) {
    std::vector<Generator> g = body->generators();
    g.insert(g.end(), more.begin(), more.end());
    return make_chart(std::move(g));
}

GPoly lift(const GPoly& f, const ChartPtr& chart) {
    if (!f.chart() || f.is_zero()) return GPoly(chart);
    return transport(f, chart);
}

GVectorField linear_field(const LinearFrame& L, const Matrix& B, int op_degree, const GVectorField& symbol) {
    GVectorField Y = symbol.chart() ? vf_transport(symbol, L.chart) : GVectorField(L.chart);
    const std::size_t n = L.fiber.size();
    if (B.size() != n) throw Error("operator matrix does not match the frame");
    for (std::size_t a = 0; a < n; ++a) {
        if (B[a].size() != n) throw Error("operator matrix does not match the frame");
        for (std::size_t w = 0; w < n; ++w) {
            if (B[a][w].is_zero()) continue;
            if (L.degrees[a] != L.degrees[w] + op_degree)
                throw Error("operator entry (" + std::to_string(a) + "," + std::to_string(w) + ") has the wrong degree");
            int s = -sign_of(op_degree * (L.degrees[w] - L.shift));
            Y.add(L.fiber[a], Rational(s) * poly_mul(lift(B[a][w], L.chart), GPoly::generator(L.chart, L.fiber[w])));
        }
    }
    return Y;
}

Matrix linear_matrix(const LinearFrame& L, const GVectorField& Y, int op_degree) {
    const std::size_t n = L.fiber.size();
    Matrix B = matrix_zero(n, L.body);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t w = 0; w < n; ++w) {
            GPoly c = poly_zero_out(poly_partial(Y.coeff(L.fiber[a]), L.fiber[w]), L.fiber);
            if (c.is_zero()) continue;
            int s = -sign_of(op_degree * (L.degrees[w] - L.shift));
            B[a][w] = transport(Rational(s) * c, L.body);
        }
    return B;
}

GVectorField contraction_field(const LinearFrame& L, const FrameVector& s) {
    GVectorField X(L.chart);
    for (std::size_t a = 0; a < L.fiber.size(); ++a) X.set(L.fiber[a], lift(s.at(a), L.chart));
    return X;
}

bool is_fiberwise_linear(const GVectorField& X, const std::vector<std::size_t>& fiber) {
    std::set<std::size_t> fib(fiber.begin(), fiber.end());
    for (std::size_t z = 0; z < X.size(); ++z) {
        int want = fib.count(z) ? 1 : 0;
        for (const auto& [m, c] : X.coeff(z).terms())
            if (count_in(m, fiber) != want) return false;
    }
    return true;
}

std::map<Tuple, GPoly> split_by_monomials(const GPoly& f, const std::vector<std::size_t>& xi, const ChartPtr& target) {
    std::map<Tuple, GPoly> out;
    const Chart& c = *f.chart();
    for (const auto& [m, coef] : f.terms()) {
        Tuple t;
        Monomial head{std::vector<std::uint16_t>(c.size(), 0)}, rest = m;
        for (std::size_t a = 0; a < xi.size(); ++a)
            if (m.exp[xi[a]]) {
                if (m.exp[xi[a]] > 1) throw Error("split_by_monomials expects odd generators");
                t.push_back(a);
                head.exp[xi[a]] = 1;
                rest.exp[xi[a]] = 0;
            }
        int s = monomial_product_sign(head, rest, c);
        GPoly r = transport(GPoly::term(f.chart(), rest, Rational(s) * coef), target);
        auto it = out.find(t);
        if (it == out.end()) out.emplace(t, r);
        else it->second += r;
    }
    for (auto it = out.begin(); it != out.end();) it = it->second.is_zero() ? out.erase(it) : std::next(it);
    return out;
}

// ---------------------------------------------------------------------------------------------

AlgebroidModel make_lie_algebroid(ChartPtr body, const std::vector<std::string>& names, std::vector<GVectorField> anchor,
                                  const std::map<Tuple, FrameVector>& brackets) {
    AlgebroidModel A(Flavor::Linfty, body, degree_zero_frame(names));
    if (anchor.size() != names.size()) throw Error("one anchor field per frame element is required");
    for (std::size_t i = 0; i < anchor.size(); ++i) A.set_anchor(i, anchor[i]);
    for (const auto& [k, v] : brackets) {
        if (k.size() != 2 || k[0] >= k[1] || k[1] >= names.size()) throw Error("bracket keys must be pairs a < b");
        if (v.size() != names.size()) throw Error("bracket value has the wrong rank");
        A.set(k, v);
    }
    return A;
}

ChartPtr algebroid_chart(const AlgebroidModel& A) {
    std::vector<Generator> g;
    for (const auto& f : A.frame) g.push_back({f.name, 1 - f.degree});
    return extend_chart(A.body, g);
}

GVectorField build_algebroid_Q(const AlgebroidModel& A) {
    ChartPtr c = algebroid_chart(A);
    const std::size_t nb = A.body->size();
    return field_from_brackets(A, c, range(0, nb), range(nb, c->size()));
}

// ---------------------------------------------------------------------------------------------

FrameVector ExtensionModel::omega_at(std::size_t i, std::size_t j) const {
    return lookup_antisymmetric(omega, i, j, fiber.size(), base.body);
}

Cdo ExtensionModel::nabla(std::size_t i) const { return {base.anchor_of(i), connection.at(i)}; }

ExtensionResult build_extension_action(const ExtensionModel& E) {
    const AlgebroidModel& A = E.base;
    require_lie_algebroid(A, "extension");
    const ChartPtr& body = A.body;
    const std::size_t nb = A.rank(), ng = E.fiber.size();
    if (E.connection.size() != nb) throw Error("extension: one connection matrix per base frame element is required");
    for (const auto& M : E.connection) {
        if (M.size() != ng) throw Error("extension: connection matrix has the wrong size");
        for (const auto& row : M)
            if (row.size() != ng) throw Error("extension: connection matrix has the wrong size");
    }

    // brackets of A + g_M
    std::vector<FrameElement> fr = A.frame;
    for (const auto& n : E.fiber) fr.push_back({n, 0});
    MultibracketTable T(Flavor::Linfty, body, fr);
    for (std::size_t i = 0; i < nb; ++i) T.set_anchor(i, A.anchor_of(i));
    for (std::size_t a = 0; a < ng; ++a) T.set_anchor(nb + a, GVectorField(body));
    auto pad = [&](const FrameVector& base_part, const FrameVector& fiber_part) {
        FrameVector v = frame_zero(nb + ng, body);
        for (std::size_t i = 0; i < nb && i < base_part.size(); ++i) v[i] = base_part[i];
        for (std::size_t a = 0; a < ng && a < fiber_part.size(); ++a) v[nb + a] = fiber_part[a];
        return v;
    };
    for (std::size_t i = 0; i < nb; ++i)
        for (std::size_t j = i + 1; j < nb; ++j) T.set({i, j}, pad(A.value({i, j}), E.omega_at(i, j)));
    for (std::size_t i = 0; i < nb; ++i)
        for (std::size_t b = 0; b < ng; ++b) {
            FrameVector col = frame_zero(ng, body);
            for (std::size_t a = 0; a < ng; ++a) col[a] = E.connection[i][a][b];
            T.set({i, nb + b}, pad({}, col));
        }
    for (const auto& [k, v] : E.fiber_brackets) T.set({nb + k[0], nb + k[1]}, pad({}, v));

    ExtensionResult out;
    out.total = T;
    ChartPtr chart = algebroid_chart(T);
    out.chart = FiberProductChart::make(chart, frame_names(A.frame), E.fiber);
    std::vector<std::size_t> fib = out.chart.xi;
    fib.insert(fib.end(), out.chart.eta.begin(), out.chart.eta.end());
    out.Q_tot = field_from_brackets(T, chart, out.chart.body, fib);

    CheckReport& rep = out.report;
    rep.check = "extension";
    rep.conventions.push_back(kSignConvention);
    rep.conventions.push_back("nabla_a mu = [sigma(a), mu]_E, omega(a,b) = [sigma(a), sigma(b)]_E - sigma([a,b]_A)");

    ClassicalDgla gauge = ClassicalDgla::gauge(body, E.fiber, E.fiber_brackets);
    auto gb = [&](const FrameVector& u, const FrameVector& v) { return gauge.fiber_bracket(u, v); };
    auto unit = [&](std::size_t a) { return frame_unit(ng, a, body); };
    auto nab = [&](std::size_t i, const FrameVector& s) { return cdo_apply(E.nabla(i), s); };
    std::set<Bidegree> classical_fail;
    auto record = [&](const std::string& eq, const std::string& where, int arity, const FrameVector& r, Bidegree bd) {
        if (frame_is_zero(r)) return true;
        classical_fail.insert(bd);
        rep.fail({eq + " " + where, arity, frame_to_string(r, degree_zero_frame(E.fiber)), bd});
        return false;
    };

    CheckReport lie = check_linfty(A, 3);
    rep.absorb("algebroid", lie);

    bool jac = true, j1 = true, j2 = true, j3 = true;
    for (const Tuple& t : increasing_tuples(ng, 3)) {
        FrameVector r = gb(gb(unit(t[0]), unit(t[1])), unit(t[2]));
        frame_add(r, gb(gb(unit(t[1]), unit(t[2])), unit(t[0])));
        frame_add(r, gb(gb(unit(t[2]), unit(t[0])), unit(t[1])));
        jac &= record("fiber_jacobi", tuple_names(t, E.fiber), 3, r, {0, 3});
    }
    for (std::size_t i = 0; i < nb; ++i)
        for (const Tuple& t : increasing_tuples(ng, 2)) {
            FrameVector r = nab(i, gb(unit(t[0]), unit(t[1])));
            frame_add(r, gb(nab(i, unit(t[0])), unit(t[1])), -1);
            frame_add(r, gb(unit(t[0]), nab(i, unit(t[1]))), -1);
            j1 &= record("compJ1", "(" + A.frame[i].name + "; " + E.fiber[t[0]] + ", " + E.fiber[t[1]] + ")", 3, r, {1, 2});
        }
    for (const Tuple& p : increasing_tuples(nb, 2))
        for (std::size_t b = 0; b < ng; ++b) {
            const std::size_t i = p[0], j = p[1];
            FrameVector mu = unit(b);
            FrameVector r = frame_zero(ng, body);
            FrameVector cij = A.value({i, j});
            for (std::size_t k = 0; k < nb; ++k)
                if (!cij[k].is_zero()) frame_add(r, frame_scale(cij[k], nab(k, mu)));
            frame_add(r, nab(i, nab(j, mu)), -1);
            frame_add(r, nab(j, nab(i, mu)));
            frame_add(r, gb(E.omega_at(i, j), mu));
            j2 &= record("compJ2", "(" + A.frame[i].name + ", " + A.frame[j].name + "; " + E.fiber[b] + ")", 3, r, {2, 1});
        }
    for (const Tuple& t : increasing_tuples(nb, 3)) {
        FrameVector r = frame_zero(ng, body);
        for (int c = 0; c < 3; ++c) {
            std::size_t i = t[c], j = t[(c + 1) % 3], k = t[(c + 2) % 3];
            frame_add(r, nab(i, E.omega_at(j, k)));
            FrameVector cij = A.value({i, j});
            for (std::size_t m = 0; m < nb; ++m)
                if (!cij[m].is_zero()) frame_add(r, frame_scale(cij[m], E.omega_at(m, k)), -1);
        }
        std::vector<std::string> bn = frame_names(A.frame);
        j3 &= record("compJ3", tuple_names(t, bn), 3, r, {3, 0});
    }
    rep.verdicts["fiber_jacobi"] = jac;
    rep.verdicts["compJ1"] = j1;
    rep.verdicts["compJ2"] = j2;
    rep.verdicts["compJ3"] = j3;
    bool structure = lie.passed && jac && j1 && j2 && j3;
    rep.verdicts["structure"] = structure;

    GVectorField R = homological_residual(out.Q_tot);
    bool homological = R.is_zero();
    rep.verdicts["homological"] = homological;
    for (auto& r : residuals_by_bidegree(R, out.chart, "[Q,Q] ")) rep.fail(std::move(r));
    rep.verdicts["agree"] = structure == homological;

    std::set<Bidegree> field_fail;
    GVectorField module_dirs(chart);
    for (auto e : out.chart.eta) module_dirs.set(e, R.coeff(e));
    for (const auto& [bd, part] : bidegree_split(module_dirs, out.chart.xi, out.chart.eta)) field_fail.insert(bd);
    GVectorField base_dirs = R - module_dirs;
    rep.verdicts["bidegree_match"] = field_fail == classical_fail && base_dirs.is_zero() == lie.passed;
    std::string fb;
    for (const auto& bd : field_fail) fb += "(" + std::to_string(bd.first) + "," + std::to_string(bd.second) + ")";
    rep.details["failing_bidegrees"] = fb.empty() ? "none" : fb;

    // action components against nabla and omega
    out.action = decompose(out.Q_tot, out.chart, nullptr, false);
    LinearFrame L{out.chart.module, {}, std::vector<int>(ng, 0), 1, body};
    for (const auto& n : E.fiber) L.fiber.push_back(out.chart.module->index_of(n));
    std::map<Tuple, GVectorField> expected;
    MultibracketTable fiber_table(Flavor::Linfty, body, degree_zero_frame(E.fiber));
    for (const auto& [k, v] : E.fiber_brackets) fiber_table.set(k, v);
    std::vector<std::size_t> mod_body;
    for (std::size_t z = 0; z < out.chart.module->size(); ++z)
        if (out.chart.module->degree(z) == 0) mod_body.push_back(z);
    expected[{}] = field_from_brackets(fiber_table, out.chart.module, mod_body, L.fiber);
    for (std::size_t i = 0; i < nb; ++i) expected[{i}] = linear_field(L, E.connection[i], 0, A.anchor_of(i));
    for (const Tuple& p : increasing_tuples(nb, 2)) expected[p] = contraction_field(L, E.omega_at(p[0], p[1]));
    compare_components(rep, "components", out.action, expected);
    if (!rep.verdicts["components"]) rep.passed = false;

    LieMorphism<ClassicalDgla> F{LieSource{body, frame_names(A.frame), {}}, {}};
    for (const auto& [k, v] : A.entries)
        if (k.size() == 2) F.source.brackets[k] = v;
    for (std::size_t i = 0; i < nb; ++i) F.components[{i}] = gauge.from_cdo(E.nabla(i));
    for (const Tuple& p : increasing_tuples(nb, 2)) F.components[p] = gauge.from_mid(E.omega_at(p[0], p[1]));
    CheckReport mor = check_lie_morphism(gauge, F, 3);
    out.target = gauge;
    out.morphism = F;
    rep.verdicts["morphism"] = mor.passed;
    rep.details["morphism_residuals"] = std::to_string(mor.residuals.size());
    if (lie.passed && j1) rep.verdicts["morphism_agree"] = mor.passed == (j2 && j3);

    for (const auto& [k, v] : rep.verdicts)
        if (!v) rep.passed = false;
    return out;
}

// ---------------------------------------------------------------------------------------------

Matrix RuthModel::component(const Tuple& t) const {
    auto it = components.find(t);
    if (it == components.end()) return matrix_zero(fiber.size(), base.body);
    return it->second;
}

bool RuthModel::operator==(const RuthModel& o) const {
    auto nonzero = [](const std::map<Tuple, Matrix>& m) {
        std::map<Tuple, Matrix> r;
        for (const auto& [k, v] : m)
            if (!matrix_is_zero(v)) r.emplace(k, v);
        return r;
    };
    return base.frame == o.base.frame && base.entries == o.base.entries && fiber == o.fiber && shift == o.shift &&
           nonzero(components) == nonzero(o.components);
}

FiberProductChart ruth_chart(const RuthModel& R) {
    require_lie_algebroid(R.base, "representation");
    std::vector<Generator> g;
    for (const auto& f : R.base.frame) g.push_back({f.name, 1});
    for (const auto& f : R.fiber) {
        if (R.shift - f.degree < 1) throw Error("frame element '" + f.name + "' sits in a degree not allowed by the shift");
        g.push_back({f.name, R.shift - f.degree});
    }
    return FiberProductChart::make(extend_chart(R.base.body, g), frame_names(R.base.frame), frame_names(R.fiber));
}

LinearFrame ruth_frame(const RuthModel& R, const FiberProductChart& c) {
    LinearFrame L{c.chart, {}, {}, R.shift, R.base.body};
    for (const auto& f : R.fiber) {
        L.fiber.push_back(c.chart->index_of(f.name));
        L.degrees.push_back(f.degree);
    }
    return L;
}

std::vector<std::vector<GPoly>> ruth_operator(const RuthModel& R) {
    ChartPtr F = algebroid_chart(R.base);
    const std::size_t n = R.fiber.size(), nb = R.base.body->size();
    std::vector<std::size_t> xi = range(nb, F->size());
    std::vector<std::vector<GPoly>> D(n, std::vector<GPoly>(n, GPoly(F)));
    for (const auto& [t, M] : R.components) {
        for (std::size_t k = 1; k < t.size(); ++k)
            if (t[k - 1] >= t[k]) throw Error("representation component keys must be increasing");
        for (auto i : t)
            if (i >= R.base.rank()) throw Error("representation component key out of range");
        if (M.size() != n) throw Error("representation component has the wrong size");
        GPoly mono = xi_monomial(F, xi, t);
        const int deg = 1 - static_cast<int>(t.size());
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t w = 0; w < n; ++w) {
                if (M[a][w].is_zero()) continue;
                if (R.fiber[a].degree != R.fiber[w].degree + deg)
                    throw Error("component " + tuple_names(t, frame_names(R.base.frame)) + " entry (" + R.fiber[a].name +
                                ", " + R.fiber[w].name + ") has the wrong degree");
                D[a][w] += poly_mul(mono, lift(M[a][w], F));
            }
    }
    return D;
}

std::vector<std::vector<GPoly>> ruth_square(const RuthModel& R) {
    auto D = ruth_operator(R);
    GVectorField QA = build_algebroid_Q(R.base);
    const std::size_t n = R.fiber.size();
    std::vector<std::vector<GPoly>> S(n, std::vector<GPoly>(n, GPoly(QA.chart())));
    for (std::size_t b = 0; b < n; ++b)
        for (std::size_t w = 0; w < n; ++w) {
            GPoly s = vf_apply(QA, D[b][w]);
            for (std::size_t a = 0; a < n; ++a) {
                int form = 1 + R.fiber[w].degree - R.fiber[a].degree;
                s += Rational(sign_of(form)) * poly_mul(D[a][w], D[b][a]);
            }
            S[b][w] = s;
        }
    return S;
}

GVectorField ruth_field(const RuthModel& R, const FiberProductChart& c) {
    auto D = ruth_operator(R);
    GVectorField Q = vf_transport(build_algebroid_Q(R.base), c.chart);
    LinearFrame L = ruth_frame(R, c);
    for (std::size_t a = 0; a < L.fiber.size(); ++a)
        for (std::size_t w = 0; w < L.fiber.size(); ++w) {
            if (D[a][w].is_zero()) continue;
            int s = -sign_of((L.degrees[w] - R.shift) * (L.degrees[w] - L.degrees[a]));
            Q.add(L.fiber[a], Rational(s) * poly_mul(lift(D[a][w], c.chart), GPoly::generator(c.chart, L.fiber[w])));
        }
    return Q;
}

RuthModel recover_ruth(const GVectorField& Q, const FiberProductChart& c, const AlgebroidModel& base,
                       const std::vector<FrameElement>& fiber, int shift) {
    RuthModel R{base, fiber, {}, shift};
    LinearFrame L = ruth_frame(R, c);
    const std::size_t n = fiber.size();
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t w = 0; w < n; ++w) {
            GPoly d = poly_zero_out(poly_partial(Q.coeff(L.fiber[a]), L.fiber[w]), L.fiber);
            if (d.is_zero()) continue;
            int form = 1 + L.degrees[w] - L.degrees[a];
            int s = -sign_of((L.degrees[w] - shift) * (L.degrees[w] - L.degrees[a]));
            d = Rational(s * sign_of((shift - L.degrees[w]) * form)) * d;
            for (const auto& [t, coef] : split_by_monomials(d, c.xi, base.body)) {
                auto it = R.components.find(t);
                if (it == R.components.end()) it = R.components.emplace(t, matrix_zero(n, base.body)).first;
                it->second[a][w] += coef;
            }
        }
    return R;
}

RuthResult build_ruth(const RuthModel& R) {
    RuthResult out;
    out.chart = ruth_chart(R);
    const auto& c = out.chart;
    auto D = ruth_operator(R);
    out.Q_tot = ruth_field(R, c);
    LinearFrame L = ruth_frame(R, c);
    const std::size_t n = R.fiber.size();
    CheckReport& rep = out.report;
    rep.check = "ruth";
    rep.conventions.push_back("iota_{D eta} = [Q_A + X, iota_eta], iota_{alpha v} = alpha d/d(v coordinate)");
    rep.conventions.push_back("F_k = (-1)^{k(k-1)/2} omega_k through [Y_B, iota_v] = iota_{Bv}");

    auto S = ruth_square(R);
    bool square_zero = true;
    for (std::size_t b = 0; b < n; ++b)
        for (std::size_t w = 0; w < n; ++w)
            if (!S[b][w].is_zero()) {
                square_zero = false;
                rep.fail({"D^2(" + R.fiber[w].name + ") along " + R.fiber[b].name, -1, S[b][w].to_string(), std::nullopt});
            }
    rep.verdicts["square_zero"] = square_zero;

    GVectorField Res = homological_residual(out.Q_tot);
    rep.verdicts["homological"] = Res.is_zero();
    for (auto& r : residuals_by_bidegree(Res, c, "[Q,Q] ")) rep.fail(std::move(r));
    rep.verdicts["agree"] = square_zero == Res.is_zero();

    // iota_{D eta} = [Q, iota_eta] on eta = v_w and eta = xi^i v_w
    bool rel = true;
    GVectorField QA = vf_transport(build_algebroid_Q(R.base), c.chart);
    for (std::size_t w = 0; w < n; ++w) {
        GVectorField iota_w = GVectorField::partial(c.chart, L.fiber[w]);
        GVectorField iota_Dw(c.chart);
        for (std::size_t a = 0; a < n; ++a) iota_Dw.add(L.fiber[a], lift(D[a][w], c.chart));
        GVectorField diff = lie_bracket(out.Q_tot, iota_w) - iota_Dw;
        if (!diff.is_zero()) {
            rel = false;
            rep.fail({"relDQ " + R.fiber[w].name, -1, diff.to_string(), std::nullopt});
        }
        for (auto x : c.xi) {
            GPoly xv = GPoly::generator(c.chart, x);
            GVectorField lhs = lie_bracket(out.Q_tot, xv * iota_w);
            GVectorField rhs = vf_apply(QA, xv) * iota_w - xv * iota_Dw;
            if (lhs != rhs) {
                rel = false;
                rep.fail({"relDQ " + (*c.chart)[x].name + " " + R.fiber[w].name, -1, (lhs - rhs).to_string(), std::nullopt});
            }
        }
    }
    rep.verdicts["relDQ"] = rel;
    rep.verdicts["fiberwise_linear"] = is_fiberwise_linear(out.Q_tot, L.fiber);

    out.action = decompose(out.Q_tot, c, nullptr, false);
    LinearFrame Lm{c.module, {}, L.degrees, R.shift, R.base.body};
    for (const auto& f : R.fiber) Lm.fiber.push_back(c.module->index_of(f.name));
    std::map<Tuple, GVectorField> expected;
    for (const auto& [t, M] : R.components) {
        int k = static_cast<int>(t.size());
        GVectorField sym = k == 1 ? R.base.anchor_of(t[0]) : GVectorField();
        GVectorField Y = linear_field(Lm, M, 1 - k, sym);
        expected[t] = contraction_sign(k) > 0 ? Y : -Y;
    }
    for (std::size_t i = 0; i < R.base.rank(); ++i)
        if (!expected.count({i})) expected[{i}] = vf_transport(R.base.anchor_of(i), c.module);
    compare_components(rep, "components", out.action, expected);

    CheckReport act = check_action(out.action);
    rep.verdicts["action"] = act.passed;
    rep.verdicts["action_agree"] = act.passed == Res.is_zero();

    for (const auto& [k, v] : rep.verdicts)
        if (!v) rep.passed = false;
    return out;
}

// ---------------------------------------------------------------------------------------------

std::vector<GPoly> cocycle_differential(const CocycleModel& C) {
    auto D = ruth_operator(C.ruth);
    GVectorField QA = build_algebroid_Q(C.ruth.base);
    ChartPtr F = QA.chart();
    const std::size_t n = C.ruth.fiber.size();
    std::vector<GPoly> out(n, GPoly(F));
    for (std::size_t b = 0; b < n; ++b) {
        GPoly s = vf_apply(QA, lift(C.eta.at(b), F));
        for (std::size_t a = 0; a < n; ++a) {
            int form = C.degree - C.ruth.fiber[a].degree;
            s += Rational(sign_of(form)) * poly_mul(lift(C.eta[a], F), D[b][a]);
        }
        out[b] = s;
    }
    return out;
}

CocycleSplit split_cocycle_field(const GVectorField& Q, const FiberProductChart& c, const AlgebroidModel& base,
                                 const std::vector<FrameElement>& fiber, int shift) {
    CocycleSplit s;
    ChartPtr F = algebroid_chart(base);
    GVectorField linear = Q;
    std::vector<std::size_t> fib;
    for (const auto& f : fiber) fib.push_back(c.chart->index_of(f.name));
    for (auto z : fib) {
        s.eta.push_back(transport(terms_with_count(Q.coeff(z), fib, 0), F));
        linear.set(z, terms_with_count(Q.coeff(z), fib, 1));
    }
    s.ruth = recover_ruth(linear, c, base, fiber, shift);
    return s;
}

CocycleResult build_cocycle_action(const CocycleModel& Cin) {
    CocycleModel C = Cin;
    if (C.degree < 2) throw Error("cocycle degree must be at least 2");
    C.ruth.shift = C.degree - 1;
    for (const auto& f : C.ruth.fiber)
        if (f.degree > C.degree - 2)
            throw Error("frame element '" + f.name + "' has degree " + std::to_string(f.degree) +
                        "; a degree " + std::to_string(C.degree) + " cocycle needs degrees <= " +
                        std::to_string(C.degree - 2));
    const std::size_t n = C.ruth.fiber.size();
    if (C.eta.size() != n) throw Error("cocycle needs one component per frame element");
    ChartPtr F = algebroid_chart(C.ruth.base);
    for (std::size_t a = 0; a < n; ++a) {
        C.eta[a] = lift(C.eta[a], F);
        if (!C.eta[a].is_zero() && C.eta[a].degree() != std::optional<int>(C.degree - C.ruth.fiber[a].degree))
            throw Error("cocycle component along '" + C.ruth.fiber[a].name + "' has the wrong form degree");
    }

    CocycleResult out;
    out.chart = ruth_chart(C.ruth);
    const auto& c = out.chart;
    out.Q_D = ruth_field(C.ruth, c);
    LinearFrame L = ruth_frame(C.ruth, c);
    out.iota_eta = GVectorField(c.chart);
    for (std::size_t a = 0; a < n; ++a) out.iota_eta.set(L.fiber[a], lift(C.eta[a], c.chart));
    out.Q_tot = out.Q_D + out.iota_eta;

    CheckReport& rep = out.report;
    rep.check = "cocycle";
    rep.conventions.push_back("iota_eta = sum_a eta_a d/d(v_a coordinate), forms on the left");
    rep.conventions.push_back("F_k = (-1)^{k(k-1)/2} (omega_k + eta_k)");

    auto S = ruth_square(C.ruth);
    bool square_zero = true;
    for (const auto& row : S)
        for (const auto& p : row) square_zero &= p.is_zero();
    rep.verdicts["representation"] = square_zero;

    auto Deta = cocycle_differential(C);
    bool closed = true;
    for (std::size_t b = 0; b < n; ++b)
        if (!Deta[b].is_zero()) {
            closed = false;
            rep.fail({"D eta along " + C.ruth.fiber[b].name, -1, Deta[b].to_string(), std::nullopt});
        }
    rep.verdicts["closed"] = closed;

    GVectorField br = lie_bracket(out.Q_D, out.iota_eta);
    rep.verdicts["bracket_zero"] = br.is_zero();
    GVectorField iota_D(c.chart);
    for (std::size_t b = 0; b < n; ++b) iota_D.set(L.fiber[b], lift(Deta[b], c.chart));
    rep.verdicts["bracket_is_iota_D_eta"] = br == iota_D;
    if (!br.is_zero()) rep.fail({"[Q_D, iota_eta]", -1, br.to_string(), std::nullopt});

    GVectorField Res = homological_residual(out.Q_tot);
    rep.verdicts["homological"] = Res.is_zero();
    for (auto& r : residuals_by_bidegree(Res, c, "[Q,Q] ")) rep.fail(std::move(r));
    rep.verdicts["agree"] = closed == br.is_zero() && Res.is_zero() == (square_zero && closed);

    out.split = split_cocycle_field(out.Q_tot, c, C.ruth.base, C.ruth.fiber, C.ruth.shift);
    bool eta_back = true;
    for (std::size_t a = 0; a < n; ++a) eta_back &= out.split.eta[a] == C.eta[a];
    rep.verdicts["split"] = out.split.ruth == C.ruth && eta_back;

    out.action = decompose(out.Q_tot, c, nullptr, false);
    LinearFrame Lm{c.module, {}, L.degrees, C.ruth.shift, C.ruth.base.body};
    for (const auto& f : C.ruth.fiber) Lm.fiber.push_back(c.module->index_of(f.name));
    std::map<Tuple, GVectorField> expected;
    for (const auto& [t, M] : C.ruth.components) {
        int k = static_cast<int>(t.size());
        GVectorField sym = k == 1 ? C.ruth.base.anchor_of(t[0]) : GVectorField();
        expected[t] = linear_field(Lm, M, 1 - k, sym);
    }
    for (std::size_t i = 0; i < C.ruth.base.rank(); ++i)
        if (!expected.count({i})) expected[{i}] = vf_transport(C.ruth.base.anchor_of(i), c.module);
    std::vector<std::size_t> fxi = range(C.ruth.base.body->size(), F->size());
    for (std::size_t a = 0; a < n; ++a)
        for (const auto& [t, coef] : split_by_monomials(C.eta[a], fxi, C.ruth.base.body)) {
            auto it = expected.find(t);
            if (it == expected.end()) it = expected.emplace(t, GVectorField(c.module)).first;
            it->second.add(Lm.fiber[a], lift(coef, c.module));
        }
    for (auto& [t, X] : expected)
        if (contraction_sign(static_cast<int>(t.size())) < 0) X = -X;
    compare_components(rep, "components", out.action, expected);

    CheckReport act = check_action(out.action);
    rep.verdicts["action"] = act.passed;
    rep.verdicts["action_agree"] = act.passed == Res.is_zero();

    for (const auto& [k, v] : rep.verdicts)
        if (!v) rep.passed = false;
    return out;
}

// ---------------------------------------------------------------------------------------------

ActionModel linearize_action(const ActionModel& A) {
    ActionModel out = A;
    const ChartPtr& M = A.chart.module;
    std::vector<std::size_t> fib;
    for (auto e : A.chart.eta) fib.push_back(M->index_of((*A.chart.chart)[e].name));
    std::set<std::size_t> fset(fib.begin(), fib.end());
    for (auto& [t, X] : out.components) {
        GVectorField Y(M);
        for (std::size_t z = 0; z < M->size(); ++z) {
            const GPoly& p = X.coeff(z);
            if (fset.count(z)) {
                GPoly at_zero = terms_with_count(p, fib, 0);
                if (!at_zero.is_zero())
                    throw NotTangent("component F" + tuple_to_string(t, A.algebroid.frame) + " is not tangent to the zero section along " +
                                     (*M)[z].name + ": " + at_zero.to_string());
                Y.set(z, terms_with_count(p, fib, 1));
            } else {
                Y.set(z, terms_with_count(p, fib, 0));
            }
        }
        X = Y;
    }
    for (auto it = out.components.begin(); it != out.components.end();)
        it = it->second.is_zero() ? out.components.erase(it) : std::next(it);
    return out;
}

// ---------------------------------------------------------------------------------------------

FiberProductChart mc_chart(const ChartPtr& body, const MultibracketTable& algebra) {
    std::vector<Generator> g;
    std::vector<std::string> xs, es;
    for (const auto& b : body->generators()) {
        if (b.degree != 0) throw Error("body coordinates must have degree 0");
        g.push_back({"d" + b.name, 1});
        xs.push_back("d" + b.name);
    }
    for (const auto& f : algebra.frame) {
        if (f.degree > 0) throw Error("algebra must sit in degrees <= 0");
        g.push_back({f.name, 1 - f.degree});
        es.push_back(f.name);
    }
    return FiberProductChart::make(extend_chart(body, g), xs, es);
}

GVectorField de_rham_field(const FiberProductChart& c) {
    GVectorField Q(c.chart);
    for (std::size_t i = 0; i < c.body.size(); ++i) Q.set(c.body[i], GPoly::generator(c.chart, c.xi[i]));
    return Q;
}

namespace {

struct Tensor {
    GVectorField field;  // on the algebra chart
    GPoly form;          // on the form chart
    int field_degree = 0;
    int form_degree = 0;
};

}  // namespace

McResult build_mc_action(const ChartPtr& body, const MultibracketTable& algebra, const GVectorField& alpha) {
    McResult out;
    out.chart = mc_chart(body, algebra);
    const auto& c = out.chart;
    if (!same_chart(alpha.chart(), c.chart)) throw ChartMismatch("alpha must live on the Maurer-Cartan chart");
    if (!alpha.is_zero() && alpha.degree() != std::optional<int>(1)) throw Error("alpha must have degree 1");
    for (auto z : c.algebroid_gens())
        if (!alpha.coeff(z).is_zero()) throw Error("alpha must be vertical along the algebra coordinates");
    for (auto z : c.eta)
        for (const auto& [m, q] : alpha.coeff(z).terms())
            if (count_in(m, c.xi) == 0) throw Error("alpha has a 0-form part along " + (*c.chart)[z].name);

    GVectorField QdR = de_rham_field(c);
    GVectorField Qg = field_from_brackets(algebra, c.chart, {}, c.eta);
    out.Q = QdR + alpha + Qg;

    CheckReport& rep = out.report;
    rep.check = "maurer_cartan";
    rep.conventions.push_back("h = (X(g[1]), -[Q_g, .], [ , ]) tensor (Omega(M), -d); X (x) w <-> (-1)^{|X||w|} w X");
    rep.conventions.push_back("[X (x) w, Y (x) m] = (-1)^{|w||Y|} [X,Y] (x) w m");

    // tensors
    ChartPtr G = subchart(c.chart, c.eta);
    ChartPtr Fc = subchart(c.chart, c.algebroid_gens());
    std::map<Monomial, GVectorField, MonomialOrder> by_form;
    const Chart& ch = *c.chart;
    for (auto z : c.eta)
        for (const auto& [m, q] : alpha.coeff(z).terms()) {
            Monomial form{std::vector<std::uint16_t>(ch.size(), 0)}, rest = m;
            for (auto g : c.algebroid_gens()) {
                form.exp[g] = m.exp[g];
                rest.exp[g] = 0;
            }
            int s = monomial_product_sign(form, rest, ch);
            auto it = by_form.find(form);
            if (it == by_form.end()) it = by_form.emplace(form, GVectorField(G)).first;
            it->second.add(G->index_of(ch[z].name), transport(GPoly::term(c.chart, rest, Rational(s) * q), G));
        }
    std::vector<Tensor> alpha_t;
    for (const auto& [form, Y] : by_form) {
        Tensor t;
        t.form = transport(GPoly::term(c.chart, form, 1), Fc);
        t.form_degree = form.degree(ch);
        t.field_degree = 1 - t.form_degree;
        t.field = sign_of(t.field_degree * t.form_degree) > 0 ? Y : -Y;
        alpha_t.push_back(std::move(t));
    }
    GVectorField Qg_G = field_from_brackets(algebra, G, {}, range(0, G->size()));
    GVectorField QdR_F(Fc);
    for (std::size_t i = 0; i < body->size(); ++i) QdR_F.set(i, GPoly::generator(Fc, body->size() + i));

    auto embed = [&](const GVectorField& X, int xd, const GPoly& w, int wd) {
        GVectorField r = lift(w, c.chart) * vf_transport(X, c.chart);
        return sign_of(xd * wd) > 0 ? r : -r;
    };
    GVectorField M(c.chart);
    for (const auto& t : alpha_t) {
        M += embed(-lie_bracket(Qg_G, t.field), t.field_degree + 1, t.form, t.form_degree);
        GPoly dw = vf_apply(QdR_F, t.form);
        if (!dw.is_zero()) M += Rational(-sign_of(t.field_degree)) * embed(t.field, t.field_degree, dw, t.form_degree + 1);
    }
    for (const auto& s : alpha_t)
        for (const auto& t : alpha_t) {
            GVectorField b = lie_bracket(s.field, t.field);
            if (b.is_zero()) continue;
            GPoly wm = poly_mul(s.form, t.form);
            if (wm.is_zero()) continue;
            Rational coef = Rational(-sign_of(s.form_degree * t.field_degree)) / 2;
            M += coef * embed(b, s.field_degree + t.field_degree, wm, s.form_degree + t.form_degree);
        }
    out.mc_residual = M;

    bool mc = M.is_zero();
    rep.verdicts["mc_equation"] = mc;
    for (const auto& [bd, part] : bidegree_split(M, c.xi, c.eta))
        for (auto z : c.eta)
            if (!part.coeff(z).is_zero())
                rep.fail({"MC form degree " + std::to_string(bd.first) + " component " + ch[z].name, -1,
                          part.coeff(z).to_string(), bd});
    bool algebra_ok = is_homological(Qg);
    rep.verdicts["algebra"] = algebra_ok;
    GVectorField Res = homological_residual(out.Q);
    rep.verdicts["homological"] = Res.is_zero();
    rep.verdicts["agree"] = Res.is_zero() == (mc && algebra_ok);
    if (Res.is_zero()) out.action = decompose(out.Q, c);
    std::string fd;
    std::set<int> degs;
    for (const auto& [bd, part] : bidegree_split(M, c.xi, c.eta)) degs.insert(bd.first);
    for (int d : degs) fd += (fd.empty() ? "" : ",") + std::to_string(d);
    rep.details["failing_form_degrees"] = fd.empty() ? "none" : fd;
    for (const auto& [k, v] : rep.verdicts)
        if (!v) rep.passed = false;
    return out;
}

std::vector<long> contraction_sign_table(int up_to) {
    std::vector<long> out;
    for (int k = 1; k <= up_to; ++k) {
        std::vector<ContractionSlot> slots;
        for (int i = 0; i < k; ++i) slots.push_back({i, 1});
        out.push_back(nested_contraction_factor(slots, 1));
    }
    return out;
}

}  // namespace gradedq
