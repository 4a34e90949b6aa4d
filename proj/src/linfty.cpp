#include "gradedq/linfty.hpp"

#include <algorithm>
#include <numeric>

#include "gradedq/signs.hpp"

namespace gradedq {

FrameVector frame_zero(std::size_t rank, const ChartPtr& body) { return FrameVector(rank, GPoly(body)); }

FrameVector frame_unit(std::size_t rank, std::size_t i, const ChartPtr& body) {
    FrameVector v = frame_zero(rank, body);
    v.at(i) = GPoly::constant(body, 1);
    return v;
}

bool frame_is_zero(const FrameVector& v) {
    return std::all_of(v.begin(), v.end(), [](const GPoly& p) { return p.is_zero(); });
}

void frame_add(FrameVector& acc, const FrameVector& v, const Rational& c) {
    if (acc.size() != v.size()) throw Error("frame vectors of different rank");
    for (std::size_t i = 0; i < v.size(); ++i)
        if (!v[i].is_zero()) acc[i] += c == 1 ? v[i] : c * v[i];
}

FrameVector frame_scale(const GPoly& f, const FrameVector& v) {
    FrameVector r = v;
    for (auto& p : r) p = p.is_zero() ? p : poly_mul(f, p);
    return r;
}

std::string frame_to_string(const FrameVector& v, const std::vector<FrameElement>& frame) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i].is_zero()) continue;
        if (!out.empty()) out += "; ";
        out += frame[i].name + ": " + v[i].to_string();
    }
    return out.empty() ? "0" : out;
}

std::string tuple_to_string(const Tuple& t, const std::vector<FrameElement>& frame) {
    std::string out = "(";
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (i) out += ", ";
        out += frame.at(t[i]).name;
    }
    return out + ")";
}

MultibracketTable::MultibracketTable(Flavor f, ChartPtr body_chart, std::vector<FrameElement> fr)
    : flavor(f), body(std::move(body_chart)), frame(std::move(fr)) {}

void MultibracketTable::set_anchor(std::size_t i, GVectorField X) {
    if (anchor.empty()) anchor.assign(rank(), GVectorField(body));
    anchor.at(i) = std::move(X);
}

static int self_swap_sign(int degree, Flavor flavor) {
    int s = sign_of(degree * degree);
    return flavor == Flavor::Linfty ? -s : s;
}

int MultibracketTable::canonical_sign(const Tuple& t, Tuple& sorted) const {
    std::vector<std::size_t> order(t.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return t[a] < t[b]; });
    std::vector<int> degs(t.size());
    for (std::size_t p = 0; p < t.size(); ++p) degs[p] = frame.at(t[p]).degree;
    sorted.resize(t.size());
    for (std::size_t p = 0; p < t.size(); ++p) sorted[p] = t[order[p]];
    for (std::size_t p = 1; p < sorted.size(); ++p)
        if (sorted[p] == sorted[p - 1] && self_swap_sign(frame[sorted[p]].degree, flavor) < 0) return 0;
    return reorder_sign(degs, order, flavor == Flavor::Linfty);
}

void MultibracketTable::set(const Tuple& t, const FrameVector& v) {
    Tuple key;
    int s = canonical_sign(t, key);
    if (s == 0) {
        if (!frame_is_zero(v)) throw Error("nonzero value on a tuple that vanishes by symmetry");
        return;
    }
    FrameVector stored = v;
    if (s < 0)
        for (auto& p : stored) p = -p;
    if (frame_is_zero(stored)) entries.erase(key);
    else entries[key] = std::move(stored);
}

FrameVector MultibracketTable::value(const Tuple& t) const {
    Tuple key;
    int s = canonical_sign(t, key);
    auto it = entries.find(key);
    if (s == 0 || it == entries.end()) return frame_zero(rank(), body);
    if (s > 0) return it->second;
    FrameVector r = it->second;
    for (auto& p : r) p = -p;
    return r;
}

int MultibracketTable::max_arity() const {
    int m = 0;
    for (const auto& [k, v] : entries) m = std::max<int>(m, static_cast<int>(k.size()));
    return m;
}

FrameVector MultibracketTable::bracket(const std::vector<FrameVector>& args) const {
    FrameVector acc = frame_zero(rank(), body);
    const std::size_t k = args.size();
    Tuple idx(k);
    std::vector<GPoly> partial(k + 1);
    partial[0] = GPoly::constant(body, 1);
    // expand multilinearly over nonzero coefficients
    auto rec = [&](auto&& self, std::size_t pos) -> void {
        if (pos == k) {
            FrameVector v = value(idx);
            if (!frame_is_zero(v)) frame_add(acc, frame_scale(partial[k], v));
            return;
        }
        for (std::size_t a = 0; a < rank(); ++a) {
            const GPoly& c = args[pos].at(a);
            if (c.is_zero()) continue;
            idx[pos] = a;
            partial[pos + 1] = poly_mul(partial[pos], c);
            self(self, pos + 1);
        }
    };
    rec(rec, 0);
    if (k == 2 && has_anchor()) {
        const FrameVector& f = args[0];
        const FrameVector& g = args[1];
        for (std::size_t a = 0; a < rank(); ++a) {
            if (f[a].is_zero() || anchor[a].is_zero()) continue;
            for (std::size_t b = 0; b < rank(); ++b) {
                if (g[b].is_zero()) continue;
                GPoly d = vf_apply(anchor[a], g[b]);
                if (!d.is_zero()) acc[b] += poly_mul(f[a], d);
            }
        }
        for (std::size_t b = 0; b < rank(); ++b) {
            if (g[b].is_zero() || anchor[b].is_zero()) continue;
            for (std::size_t a = 0; a < rank(); ++a) {
                if (f[a].is_zero()) continue;
                GPoly d = vf_apply(anchor[b], f[a]);
                if (d.is_zero()) continue;
                int da = frame[a].degree, db = frame[b].degree;
                int s = flavor == Flavor::Linfty ? -sign_of(da * db) : -sign_of((1 + da) * db);
                acc[a] += Rational(s) * poly_mul(g[b], d);
            }
        }
    }
    return acc;
}

std::vector<Tuple> canonical_tuples(const std::vector<int>& degrees, Flavor flavor, std::size_t size) {
    std::vector<Tuple> out;
    Tuple t;
    auto rec = [&](auto&& self, std::size_t start) -> void {
        if (t.size() == size) {
            out.push_back(t);
            return;
        }
        for (std::size_t a = start; a < degrees.size(); ++a) {
            if (!t.empty() && t.back() == a && self_swap_sign(degrees[a], flavor) < 0) continue;
            t.push_back(a);
            self(self, a);
            t.pop_back();
        }
    };
    rec(rec, 0);
    return out;
}

MultibracketTable decalage(const MultibracketTable& t) {
    MultibracketTable r = t;
    bool to_shifted = t.flavor == Flavor::Linfty;
    r.flavor = to_shifted ? Flavor::Shifted : Flavor::Linfty;
    for (auto& e : r.frame) e.degree += to_shifted ? -1 : 1;
    for (auto& [key, v] : r.entries) {
        const std::size_t n = key.size();
        int parity = 0;
        for (std::size_t j = 0; j + 1 < n; ++j) {
            int vdeg = to_shifted ? t.frame[key[j]].degree : t.frame[key[j]].degree + 1;
            parity += static_cast<int>(n - 1 - j) * vdeg;
        }
        if (parity & 1)
            for (auto& p : v) p = -p;
    }
    return r;
}

MultibracketTable derived_brackets(const GVectorField& Q, const std::vector<std::size_t>& body,
                                   const std::vector<std::size_t>& fiber) {
    const ChartPtr& chart = Q.chart();
    ChartPtr body_chart = subchart(chart, body);
    std::vector<std::size_t> fib = fiber;
    std::sort(fib.begin(), fib.end());
    std::vector<FrameElement> frame;
    std::vector<int> degs;
    for (auto f : fib) {
        frame.push_back({(*chart)[f].name, -chart->degree(f)});
        degs.push_back(-chart->degree(f));
    }
    MultibracketTable table(Flavor::Shifted, body_chart, frame);
    int max_ar = 0;
    for (auto z : fib)
        for (const auto& [m, c] : Q.coeff(z).terms()) {
            int cnt = 0;
            for (auto f : fib) cnt += m.exp[f];
            max_ar = std::max(max_ar, cnt);
        }
    max_ar = std::max(max_ar, 1);

    Tuple t;
    auto extract = [&](const GVectorField& B) {
        GVectorField at_zero = vf_zero_out(B, fib);
        FrameVector v = frame_zero(fib.size(), body_chart);
        for (std::size_t i = 0; i < fib.size(); ++i) v[i] = transport(at_zero.coeff(fib[i]), body_chart);
        if (!frame_is_zero(v)) table.entries[t] = v;
        if (t.size() == 1) {
            GVectorField rho(body_chart);
            for (auto b : body) rho.set(body_chart->index_of((*chart)[b].name), transport(at_zero.coeff(b), body_chart));
            if (!rho.is_zero()) table.set_anchor(t[0], rho);
        }
    };
    auto rec = [&](auto&& self, const GVectorField& B) -> void {
        extract(B);
        if (static_cast<int>(t.size()) >= max_ar) return;
        std::size_t start = t.empty() ? 0 : t.back();
        for (std::size_t a = start; a < fib.size(); ++a) {
            if (!t.empty() && t.back() == a && self_swap_sign(degs[a], Flavor::Shifted) < 0) continue;
            GVectorField next = lie_bracket(B, GVectorField::partial(chart, fib[a]));
            t.push_back(a);
            if (!next.is_zero()) self(self, next);
            t.pop_back();
        }
    };
    rec(rec, Q);
    return table;
}

GVectorField field_from_brackets(const MultibracketTable& table, const ChartPtr& chart,
                                 const std::vector<std::size_t>& body, const std::vector<std::size_t>& fiber) {
    if (table.flavor != Flavor::Shifted) return field_from_brackets(decalage(table), chart, body, fiber);
    std::vector<std::size_t> fib = fiber;
    std::sort(fib.begin(), fib.end());
    if (fib.size() != table.rank()) throw Error("frame rank does not match the number of fiber generators");
    for (std::size_t i = 0; i < fib.size(); ++i)
        if (table.frame[i].degree != -chart->degree(fib[i]))
            throw Error("frame element '" + table.frame[i].name + "' has the wrong degree for its coordinate");
    GVectorField Q(chart);
    auto monomial = [&](const Tuple& t) {
        GPoly m = GPoly::constant(chart, 1);
        for (auto a : t) m = poly_mul(m, GPoly::generator(chart, fib[a]));
        return m;
    };
    auto factor = [&](const Tuple& t) {
        std::vector<ContractionSlot> slots;
        for (auto a : t) slots.push_back({static_cast<int>(a), chart->degree(fib[a])});
        long f = nested_contraction_factor(slots, 1);
        if (f == 0) throw Error("bracket entry cannot be encoded by a degree 1 field");
        return Rational(1, f);
    };
    for (const auto& [t, v] : table.entries) {
        if (t.empty()) {
            if (!frame_is_zero(v)) throw Error("curvature term cannot be encoded on a split chart");
            continue;
        }
        GPoly xi = monomial(t);
        Rational inv = factor(t);
        inv.canonicalize();
        for (std::size_t c = 0; c < v.size(); ++c) {
            if (v[c].is_zero()) continue;
            Q.add(fib[c], inv * poly_mul(xi, transport(v[c], chart)));
        }
    }
    if (table.has_anchor()) {
        for (std::size_t a = 0; a < table.rank(); ++a) {
            const GVectorField& rho = table.anchor_of(a);
            if (rho.is_zero()) continue;
            Rational inv = factor({a});
            inv.canonicalize();
            GPoly xi = GPoly::generator(chart, fib[a]);
            for (auto b : body) {
                auto bi = rho.chart()->find((*chart)[b].name);
                if (!bi) continue;
                const GPoly& comp = rho.coeff(*bi);
                if (!comp.is_zero()) Q.add(b, inv * poly_mul(xi, transport(comp, chart)));
            }
        }
    }
    return Q;
}

static std::vector<FrameVector> units(const MultibracketTable& t, const Tuple& tuple, const std::vector<std::size_t>& pos) {
    std::vector<FrameVector> out;
    for (auto p : pos) out.push_back(frame_unit(t.rank(), tuple[p], t.body));
    return out;
}

CheckReport check_linfty(const MultibracketTable& t, int up_to_arity) {
    CheckReport rep;
    rep.check = "linfty";
    rep.conventions.push_back(t.flavor == Flavor::Linfty
                                  ? "L-infinity flavor: sum_i (-1)^{i(n-i)} sum_unshuffles chi(tau) [[..]_i, ..]_{n-i+1} = 0"
                                  : "L-infinity[1] flavor: sum_i sum_unshuffles eps(tau) {{..}_i, ..}_{n-i+1} = 0");
    std::vector<int> degs;
    for (const auto& e : t.frame) degs.push_back(e.degree);
    bool curved = t.entries.count(Tuple{}) > 0;
    for (int n = 1; n <= up_to_arity; ++n) {
        for (const Tuple& tuple : canonical_tuples(degs, t.flavor, n)) {
            std::vector<int> tdeg;
            for (auto a : tuple) tdeg.push_back(degs[a]);
            FrameVector res = frame_zero(t.rank(), t.body);
            for (int i = curved ? 0 : 1; i <= n; ++i) {
                for (const auto& u : unshuffles(n, i)) {
                    int s = reorder_sign(tdeg, concat(u), t.flavor == Flavor::Linfty);
                    if (t.flavor == Flavor::Linfty) s *= sign_of(i * (n - i));
                    FrameVector inner = t.bracket(units(t, tuple, u.head));
                    if (frame_is_zero(inner)) continue;
                    std::vector<FrameVector> outer{inner};
                    for (auto& w : units(t, tuple, u.tail)) outer.push_back(std::move(w));
                    frame_add(res, t.bracket(outer), Rational(s));
                }
            }
            if (!frame_is_zero(res))
                rep.fail({"arity " + std::to_string(n) + " " + tuple_to_string(tuple, t.frame), n,
                          frame_to_string(res, t.frame), std::nullopt});
        }
    }
    if (t.has_anchor()) {
        // anchor is a bracket morphism and kills the image of the unary bracket
        auto rho_of = [&](const FrameVector& v) {
            GVectorField r(t.body);
            for (std::size_t a = 0; a < t.rank(); ++a)
                if (!v[a].is_zero() && !t.anchor[a].is_zero()) r += v[a] * t.anchor[a];
            return r;
        };
        for (std::size_t a = 0; a < t.rank(); ++a) {
            for (std::size_t b = a; b < t.rank(); ++b) {
                if (t.anchor[a].is_zero() && t.anchor[b].is_zero()) continue;
                GVectorField lhs = rho_of(t.bracket({frame_unit(t.rank(), a, t.body), frame_unit(t.rank(), b, t.body)}));
                GVectorField res = lhs - lie_bracket(t.anchor[a], t.anchor[b]);
                if (!res.is_zero())
                    rep.fail({"anchor on " + tuple_to_string({a, b}, t.frame), 2, res.to_string(), std::nullopt});
            }
            GVectorField u = rho_of(t.bracket({frame_unit(t.rank(), a, t.body)}));
            if (!u.is_zero()) rep.fail({"anchor after unary " + tuple_to_string({a}, t.frame), 1, u.to_string(), std::nullopt});
        }
    }
    return rep;
}

GVectorField CurvedMorphism::component(const Tuple& t) const {
    Tuple key;
    int s = source.canonical_sign(t, key);
    auto it = components.find(key);
    if (s == 0 || it == components.end()) return GVectorField(target);
    return s > 0 ? it->second : -it->second;
}

namespace {

// phi_k applied to (v, frame elements of `rest`) where v is a frame vector
GVectorField apply_component(const CurvedMorphism& m, const FrameVector& v, const Tuple& rest) {
    GVectorField acc(m.target);
    for (std::size_t a = 0; a < v.size(); ++a) {
        if (v[a].is_zero()) continue;
        Tuple t{a};
        t.insert(t.end(), rest.begin(), rest.end());
        GVectorField c = m.component(t);
        if (!c.is_zero()) acc += transport(v[a], m.target) * c;
    }
    return acc;
}

// {P, R} = (-1)^{|P|} [P, R]
GVectorField shifted_bracket(const GVectorField& P, const GVectorField& R) {
    if (P.is_zero() || R.is_zero()) return GVectorField(P.chart() ? P.chart() : R.chart());
    GVectorField b = lie_bracket(P, R);
    return sign_of(*P.degree()) > 0 ? b : -b;
}

Tuple pick(const Tuple& tuple, const std::vector<std::size_t>& pos) {
    Tuple r;
    for (auto p : pos) r.push_back(tuple[p]);
    return r;
}

GVectorField source_side(const CurvedMorphism& m, const Tuple& tuple, const std::vector<int>& tdeg) {
    const std::size_t n = tuple.size();
    GVectorField lhs(m.target);
    bool curved = m.source.entries.count(Tuple{}) > 0;
    for (std::size_t i = curved ? 0 : 1; i <= n; ++i) {
        for (const auto& u : unshuffles(n, i)) {
            int s = reorder_sign(tdeg, concat(u), false);
            std::vector<FrameVector> args;
            for (auto p : u.head) args.push_back(frame_unit(m.source.rank(), tuple[p], m.source.body));
            FrameVector inner = m.source.bracket(args);
            if (frame_is_zero(inner)) continue;
            GVectorField term = apply_component(m, inner, pick(tuple, u.tail));
            if (s > 0) lhs += term;
            else lhs -= term;
        }
    }
    return lhs;
}

}  // namespace

CheckReport check_curved_morphism(const CurvedMorphism& m, int up_to_arity) {
    CheckReport rep;
    rep.check = "curved_morphism";
    rep.conventions.push_back("target bracket {P,R} = (-1)^{|P|}[P,R] on vector fields shifted by one");
    rep.conventions.push_back("sum_i eps(tau) phi(brackets) = 1/2 sum_{j=0..n} eps(tau) {phi_j, phi_{n-j}}");
    std::vector<int> degs;
    for (const auto& e : m.source.frame) degs.push_back(e.degree);
    for (int n = 0; n <= up_to_arity; ++n) {
        for (const Tuple& tuple : canonical_tuples(degs, Flavor::Shifted, n)) {
            std::vector<int> tdeg;
            for (auto a : tuple) tdeg.push_back(degs[a]);
            GVectorField lhs = source_side(m, tuple, tdeg);
            GVectorField rhs(m.target);
            for (std::size_t j = 0; j <= static_cast<std::size_t>(n); ++j) {
                for (const auto& u : unshuffles(n, j)) {
                    int s = reorder_sign(tdeg, concat(u), false);
                    GVectorField b = shifted_bracket(m.component(pick(tuple, u.head)), m.component(pick(tuple, u.tail)));
                    if (b.is_zero()) continue;
                    rhs += Rational(s, 2) * b;
                }
            }
            GVectorField res = lhs - rhs;
            if (!res.is_zero())
                rep.fail({"arity " + std::to_string(n) + " " + tuple_to_string(tuple, m.source.frame), n, res.to_string(),
                          std::nullopt});
        }
    }
    return rep;
}

CheckReport check_twisted_morphism(const CurvedMorphism& m, int up_to_arity) {
    CheckReport rep;
    rep.check = "twisted_morphism";
    rep.conventions.push_back("Maurer-Cartan: 1/2 {phi_0, phi_0} = 0");
    rep.conventions.push_back("twisted differential d = {phi_0, -} = -[Q_M, -]");
    GVectorField phi0 = m.component({});
    GVectorField mc = Rational(1, 2) * shifted_bracket(phi0, phi0);
    if (!mc.is_zero()) rep.fail({"Maurer-Cartan", 0, mc.to_string(), std::nullopt});
    std::vector<int> degs;
    for (const auto& e : m.source.frame) degs.push_back(e.degree);
    for (int n = 1; n <= up_to_arity; ++n) {
        for (const Tuple& tuple : canonical_tuples(degs, Flavor::Shifted, n)) {
            std::vector<int> tdeg;
            for (auto a : tuple) tdeg.push_back(degs[a]);
            GVectorField lhs = source_side(m, tuple, tdeg);
            GVectorField rhs = shifted_bracket(phi0, m.component(tuple));
            for (std::size_t j = 1; j < static_cast<std::size_t>(n); ++j) {
                for (const auto& u : unshuffles(n, j)) {
                    int s = reorder_sign(tdeg, concat(u), false);
                    GVectorField b = shifted_bracket(m.component(pick(tuple, u.head)), m.component(pick(tuple, u.tail)));
                    if (!b.is_zero()) rhs += Rational(s, 2) * b;
                }
            }
            GVectorField res = lhs - rhs;
            if (!res.is_zero())
                rep.fail({"arity " + std::to_string(n) + " " + tuple_to_string(tuple, m.source.frame), n, res.to_string(),
                          std::nullopt});
        }
    }
    return rep;
}

}  // namespace gradedq
