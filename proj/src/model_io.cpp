#include "gradedq/model_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "gradedq/examples.hpp"

namespace gradedq {

using nlohmann::json;

ModelError::ModelError(std::vector<ModelIssue> issues)
    : Error([&] {
          std::string s = "invalid model";
          for (const auto& i : issues) s += "\n  " + (i.pointer.empty() ? std::string("/") : i.pointer) + ": " + i.message;
          return s;
      }()),
      issues_(std::move(issues)) {}

const std::vector<std::string>& model_kinds() {
    static const std::vector<std::string> k{"algebroid", "action", "qfield", "extension", "ruth",
                                            "cocycle", "mc", "exact_courant", "transitive_courant"};
    return k;
}

namespace {

struct LoadError {
    std::string pointer, message;
};

[[noreturn]] void fail_at(const std::string& ptr, const std::string& msg) { throw LoadError{ptr, msg}; }

std::string join(const std::string& ptr, const std::string& key) {
    std::string k;
    for (char ch : key) {
        if (ch == '~') k += "~0";
        else if (ch == '/') k += "~1";
        else k += ch;
    }
    return ptr + "/" + k;
}
std::string join(const std::string& ptr, std::size_t i) { return ptr + "/" + std::to_string(i); }

const json& need(const json& j, const std::string& key, const std::string& ptr) {
    if (!j.is_object()) fail_at(ptr, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) fail_at(ptr, "missing '" + key + "'");
    return *it;
}

const json* maybe(const json& j, const std::string& key) {
    if (!j.is_object()) return nullptr;
    auto it = j.find(key);
    return it == j.end() || it->is_null() ? nullptr : &*it;
}

void expect_object(const json& j, const std::string& ptr) {
    if (!j.is_object()) fail_at(ptr, "expected an object");
}
void expect_array(const json& j, const std::string& ptr) {
    if (!j.is_array()) fail_at(ptr, "expected an array");
}

std::string text(const json& j, const std::string& ptr) {
    if (!j.is_string()) fail_at(ptr, "expected a string");
    return j.get<std::string>();
}

int integer(const json& j, const std::string& ptr) {
    if (!j.is_number_integer()) fail_at(ptr, "expected an integer");
    return j.get<int>();
}

Rational rational(const json& j, const std::string& ptr) {
    if (j.is_number_integer()) return Rational(j.get<long>());
    if (j.is_string()) {
        try {
            return parse_rational(j.get<std::string>());
        } catch (const Error& e) {
            fail_at(ptr, e.what());
        }
    }
    fail_at(ptr, "expected an integer or a rational string such as \"-3/4\"");
}

GPoly poly(const json& j, const std::string& ptr, const ChartPtr& chart) {
    if (j.is_number_integer()) return GPoly::constant(chart, Rational(j.get<long>()));
    if (!j.is_string()) fail_at(ptr, "expected a polynomial string");
    try {
        return parse_poly(j.get<std::string>(), chart);
    } catch (const Error& e) {
        fail_at(ptr, e.what());
    }
}

ChartPtr chart_of(const json& j, const std::string& ptr, bool body_only) {
    expect_array(j, ptr);
    std::vector<Generator> g;
    std::set<std::string> seen;
    for (std::size_t i = 0; i < j.size(); ++i) {
        std::string p = join(ptr, i);
        const json& e = j[i];
        expect_object(e, p);
        std::string name = text(need(e, "name", p), join(p, "name"));
        if (name.empty()) fail_at(join(p, "name"), "generator name is empty");
        int deg = 0;
        if (const json* d = maybe(e, "degree")) deg = integer(*d, join(p, "degree"));
        if (deg < 0) fail_at(join(p, "degree"), "generator degree must be non-negative");
        if (body_only && deg != 0) fail_at(join(p, "degree"), "body coordinates have degree 0");
        if (!seen.insert(name).second) fail_at(join(p, "name"), "duplicate generator name '" + name + "'");
        g.push_back({name, deg});
    }
    if (g.size() > 64) fail_at(ptr, "at most 64 generators");
    return make_chart(std::move(g));
}

std::vector<FrameElement> frame_of(const json& j, const std::string& ptr, bool allow_degree) {
    expect_array(j, ptr);
    std::vector<FrameElement> out;
    std::set<std::string> seen;
    for (std::size_t i = 0; i < j.size(); ++i) {
        std::string p = join(ptr, i);
        FrameElement f;
        if (j[i].is_string()) {
            f.name = j[i].get<std::string>();
        } else {
            expect_object(j[i], p);
            f.name = text(need(j[i], "name", p), join(p, "name"));
            if (const json* d = maybe(j[i], "degree")) f.degree = integer(*d, join(p, "degree"));
        }
        if (f.name.empty()) fail_at(p, "frame element name is empty");
        if (!allow_degree && f.degree != 0) fail_at(p, "this frame sits in degree 0");
        if (f.degree > 0) fail_at(p, "frame degrees must be <= 0");
        if (!seen.insert(f.name).second) fail_at(p, "duplicate frame element '" + f.name + "'");
        out.push_back(f);
    }
    return out;
}

std::size_t index_in(const std::vector<std::string>& names, const std::string& n, const std::string& ptr,
                     const char* what) {
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == n) return i;
    fail_at(ptr, std::string("unknown ") + what + " '" + n + "'");
}

std::vector<std::string> names_of(const std::vector<FrameElement>& f) {
    std::vector<std::string> n;
    for (const auto& e : f) n.push_back(e.name);
    return n;
}

std::vector<std::string> names_of(const Chart& c) {
    std::vector<std::string> n;
    for (const auto& g : c.generators()) n.push_back(g.name);
    return n;
}

GVectorField field_at(const json& j, const std::string& ptr, const ChartPtr& chart) {
    expect_object(j, ptr);
    GVectorField X(chart);
    for (const auto& [k, v] : j.items()) {
        auto z = chart->find(k);
        if (!z) fail_at(join(ptr, k), "unknown generator '" + k + "'");
        X.set(*z, poly(v, join(ptr, k), chart));
    }
    return X;
}

FrameVector vector_at(const json& j, const std::string& ptr, const std::vector<std::string>& names, const ChartPtr& body) {
    expect_object(j, ptr);
    FrameVector v = frame_zero(names.size(), body);
    for (const auto& [k, p] : j.items()) v[index_in(names, k, join(ptr, k), "frame element")] = poly(p, join(ptr, k), body);
    return v;
}

// {input: {output: coefficient}}; the column of an input is its image
Matrix matrix_at(const json& j, const std::string& ptr, const std::vector<std::string>& names, const ChartPtr& body) {
    expect_object(j, ptr);
    Matrix m = matrix_zero(names.size(), body);
    for (const auto& [in, col] : j.items()) {
        std::size_t w = index_in(names, in, join(ptr, in), "frame element");
        FrameVector v = vector_at(col, join(ptr, in), names, body);
        for (std::size_t a = 0; a < names.size(); ++a) m[a][w] = v[a];
    }
    return m;
}

Tuple args_at(const json& j, const std::string& ptr, const std::vector<std::string>& names, const char* what) {
    expect_array(j, ptr);
    Tuple t;
    for (std::size_t i = 0; i < j.size(); ++i) t.push_back(index_in(names, text(j[i], join(ptr, i)), join(ptr, i), what));
    return t;
}

// sorts distinct indices; returns the permutation sign, 0 on a repeat
int sort_antisymmetric(Tuple& t) {
    int s = 1;
    for (std::size_t i = 0; i < t.size(); ++i)
        for (std::size_t j = 0; j + 1 < t.size() - i; ++j)
            if (t[j] > t[j + 1]) {
                std::swap(t[j], t[j + 1]);
                s = -s;
            }
    for (std::size_t i = 1; i < t.size(); ++i)
        if (t[i] == t[i - 1]) return 0;
    return s;
}

// [{"args": [a, b], "value": {...}}] with antisymmetric pairs a != b
std::map<Tuple, FrameVector> pairs_at(const json& j, const std::string& ptr, const std::vector<std::string>& keys,
                                      const std::vector<std::string>& values, const ChartPtr& body, const char* what) {
    expect_array(j, ptr);
    std::map<Tuple, FrameVector> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        std::string p = join(ptr, i);
        Tuple t = args_at(need(j[i], "args", p), join(p, "args"), keys, what);
        if (t.size() != 2) fail_at(join(p, "args"), "expected two arguments");
        int s = sort_antisymmetric(t);
        if (s == 0) fail_at(join(p, "args"), "arguments must be distinct");
        FrameVector v = vector_at(need(j[i], "value", p), join(p, "value"), values, body);
        if (s < 0) v = frame_scale(GPoly::constant(body, -1), v);
        if (out.count(t)) fail_at(join(p, "args"), "entry given twice");
        out[t] = v;
    }
    return out;
}

void table_entries_at(MultibracketTable& T, const json& j, const std::string& ptr) {
    expect_array(j, ptr);
    std::vector<std::string> names = names_of(T.frame);
    std::set<Tuple> seen;
    for (std::size_t i = 0; i < j.size(); ++i) {
        std::string p = join(ptr, i);
        Tuple t = args_at(need(j[i], "args", p), join(p, "args"), names, "frame element");
        if (t.empty()) fail_at(join(p, "args"), "brackets need at least one argument");
        FrameVector v = vector_at(need(j[i], "value", p), join(p, "value"), names, T.body);
        Tuple key;
        if (T.canonical_sign(t, key) == 0) {
            if (!frame_is_zero(v)) fail_at(join(p, "args"), "this bracket vanishes by symmetry");
            continue;
        }
        if (!seen.insert(key).second) fail_at(join(p, "args"), "entry given twice");
        try {
            T.set(t, v);
        } catch (const Error& e) {
            fail_at(p, e.what());
        }
    }
}

ThreeForm three_form_at(const json& j, const std::string& ptr, const ChartPtr& body) {
    expect_array(j, ptr);
    ThreeForm H;
    H.body = body;
    std::vector<std::string> names = names_of(*body);
    for (std::size_t i = 0; i < j.size(); ++i) {
        std::string p = join(ptr, i);
        Tuple t = args_at(need(j[i], "args", p), join(p, "args"), names, "coordinate");
        if (t.size() != 3) fail_at(join(p, "args"), "expected three coordinates");
        int s = sort_antisymmetric(t);
        if (s == 0) fail_at(join(p, "args"), "coordinates must be distinct");
        GPoly v = Rational(s) * poly(need(j[i], "value", p), join(p, "value"), body);
        auto it = H.coeffs.find(t);
        if (it == H.coeffs.end()) H.coeffs.emplace(t, v);
        else it->second += v;
    }
    return H;
}

// ---------------------------------------------------------------------------------------------
// shared sections

const json* frames_entry(const json& doc, const char* key) {
    const json* f = maybe(doc, "frames");
    return f ? maybe(*f, key) : nullptr;
}

AlgebroidModel base_algebroid(const json& doc, const ChartPtr& body, bool degree_zero) {
    const json* base = frames_entry(doc, "base");
    if (!base) fail_at("/frames", "missing 'base'");
    if (base->is_string()) {
        if (base->get<std::string>() != "tangent") fail_at("/frames/base", "the only named base is \"tangent\"");
        if (maybe(doc, "anchor")) fail_at("/anchor", "the tangent algebroid has a fixed anchor");
        const json* br = maybe(doc, "brackets");
        if (br && maybe(*br, "base")) fail_at("/brackets/base", "the tangent algebroid has no brackets");
        return examples::tangent_algebroid(body);
    }
    std::vector<FrameElement> frame = frame_of(*base, "/frames/base", !degree_zero);
    MultibracketTable T(Flavor::Linfty, body, frame);
    std::vector<std::string> names = names_of(frame);
    std::vector<GVectorField> anchor(frame.size(), GVectorField(body));
    if (const json* a = maybe(doc, "anchor")) {
        expect_object(*a, "/anchor");
        for (const auto& [k, v] : a->items()) {
            std::size_t i = index_in(names, k, join("/anchor", k), "frame element");
            if (frame[i].degree != 0) fail_at(join("/anchor", k), "only degree 0 frame elements carry an anchor");
            anchor[i] = field_at(v, join("/anchor", k), body);
        }
    }
    for (std::size_t i = 0; i < frame.size(); ++i) T.set_anchor(i, anchor[i]);
    if (const json* br = maybe(doc, "brackets"))
        if (const json* b = maybe(*br, "base")) table_entries_at(T, *b, "/brackets/base");
    return T;
}

std::vector<Matrix> connection_at(const json& doc, const std::vector<std::string>& directions,
                                  const std::vector<std::string>& fiber, const ChartPtr& body) {
    std::vector<Matrix> out(directions.size(), matrix_zero(fiber.size(), body));
    if (const json* c = maybe(doc, "connection")) {
        expect_object(*c, "/connection");
        for (const auto& [k, v] : c->items()) {
            std::size_t i = index_in(directions, k, join("/connection", k), "direction");
            out[i] = matrix_at(v, join("/connection", k), fiber, body);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------------------------
// per kind

AlgebroidModel load_algebroid(const json& doc) {
    ChartPtr body = chart_of(need(doc, "chart", ""), "/chart", true);
    return base_algebroid(doc, body, false);
}

std::vector<std::string> string_list(const json& j, const std::string& ptr) {
    expect_array(j, ptr);
    std::vector<std::string> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(text(j[i], join(ptr, i)));
    return out;
}

FiberProductChart split_at(const json& j, const std::string& ptr, const ChartPtr& chart) {
    expect_object(j, ptr);
    std::vector<std::string> xi = string_list(need(j, "xi", ptr), join(ptr, "xi"));
    std::vector<std::string> eta;
    if (const json* e = maybe(j, "eta")) eta = string_list(*e, join(ptr, "eta"));
    for (std::size_t i = 0; i < xi.size(); ++i)
        if (!chart->find(xi[i])) fail_at(join(join(ptr, "xi"), i), "unknown generator '" + xi[i] + "'");
    for (std::size_t i = 0; i < eta.size(); ++i)
        if (!chart->find(eta[i])) fail_at(join(join(ptr, "eta"), i), "unknown generator '" + eta[i] + "'");
    try {
        return FiberProductChart::make(chart, xi, eta);
    } catch (const Error& e) {
        fail_at(ptr, e.what());
    }
}

QFieldModel load_qfield(const json& doc) {
    ChartPtr chart = chart_of(need(doc, "chart", ""), "/chart", false);
    QFieldModel q;
    q.field = field_at(need(doc, "field", ""), "/field", chart);
    if (const json* s = maybe(doc, "split")) q.split = split_at(*s, "/split", chart);
    if (const json* r = maybe(doc, "restrict")) {
        expect_object(*r, "/restrict");
        for (const auto& [k, v] : r->items()) {
            auto z = chart->find(k);
            if (!z) fail_at(join("/restrict", k), "unknown generator '" + k + "'");
            Rational val = rational(v, join("/restrict", k));
            if (chart->odd(*z) && val != 0)
                fail_at(join("/restrict", k), "odd generator '" + k + "' can only be restricted to 0");
            q.restriction[*z] = val;
        }
    }
    return q;
}

ActionModel load_action(const json& doc) {
    ChartPtr chart = chart_of(need(doc, "chart", ""), "/chart", false);
    ActionModel A;
    A.chart = split_at(need(doc, "split", ""), "/split", chart);
    const json& alg = need(doc, "algebroid", "");
    ChartPtr body = subchart(chart, A.chart.body);
    std::vector<FrameElement> frame = frame_of(need(alg, "frame", "/algebroid"), "/algebroid/frame", true);
    if (frame.size() != A.chart.xi.size()) fail_at("/algebroid/frame", "one frame element per algebroid coordinate is required");
    for (std::size_t i = 0; i < frame.size(); ++i)
        if (1 - frame[i].degree != chart->degree(A.chart.xi[i]))
            fail_at(join("/algebroid/frame", i), "frame degree does not match the coordinate degree");
    A.algebroid = MultibracketTable(Flavor::Linfty, body, frame);
    std::vector<std::string> names = names_of(frame);
    std::vector<GVectorField> anchor(frame.size(), GVectorField(body));
    if (const json* a = maybe(alg, "anchor")) {
        expect_object(*a, "/algebroid/anchor");
        for (const auto& [k, v] : a->items())
            anchor[index_in(names, k, join("/algebroid/anchor", k), "frame element")] = field_at(v, join("/algebroid/anchor", k), body);
    }
    for (std::size_t i = 0; i < frame.size(); ++i) A.algebroid.set_anchor(i, anchor[i]);
    if (const json* b = maybe(alg, "brackets")) table_entries_at(A.algebroid, *b, "/algebroid/brackets");
    if (const json* comps = maybe(doc, "components")) {
        expect_array(*comps, "/components");
        for (std::size_t i = 0; i < comps->size(); ++i) {
            std::string p = join("/components", i);
            Tuple t = args_at(need((*comps)[i], "args", p), join(p, "args"), names, "frame element");
            GVectorField X = field_at(need((*comps)[i], "field", p), join(p, "field"), A.chart.module);
            Tuple sorted = t;
            std::sort(sorted.begin(), sorted.end());
            if (A.components.count(sorted)) fail_at(join(p, "args"), "component given twice");
            try {
                A.set_component(t, X);
            } catch (const Error& e) {
                fail_at(p, e.what());
            }
        }
    }
    return A;
}

ExtensionModel load_extension(const json& doc) {
    ChartPtr body = chart_of(need(doc, "chart", ""), "/chart", true);
    ExtensionModel E;
    E.base = base_algebroid(doc, body, true);
    const json* fib = frames_entry(doc, "fiber");
    if (!fib) fail_at("/frames", "missing 'fiber'");
    E.fiber = names_of(frame_of(*fib, "/frames/fiber", false));
    if (const json* br = maybe(doc, "brackets"))
        if (const json* f = maybe(*br, "fiber")) E.fiber_brackets = pairs_at(*f, "/brackets/fiber", E.fiber, E.fiber, body, "frame element");
    E.connection = connection_at(doc, names_of(E.base.frame), E.fiber, body);
    if (const json* w = maybe(doc, "omega")) E.omega = pairs_at(*w, "/omega", names_of(E.base.frame), E.fiber, body, "base element");
    return E;
}

RuthModel load_ruth_parts(const json& doc) {
    ChartPtr body = chart_of(need(doc, "chart", ""), "/chart", true);
    RuthModel R;
    R.base = base_algebroid(doc, body, true);
    const json* fib = frames_entry(doc, "fiber");
    if (!fib) fail_at("/frames", "missing 'fiber'");
    R.fiber = frame_of(*fib, "/frames/fiber", true);
    if (const json* s = maybe(doc, "shift")) R.shift = integer(*s, "/shift");
    std::vector<std::string> fn = names_of(R.fiber), bn = names_of(R.base.frame);
    if (const json* d = maybe(doc, "differential")) R.components[{}] = matrix_at(*d, "/differential", fn, body);
    std::vector<Matrix> nab = connection_at(doc, bn, fn, body);
    for (std::size_t i = 0; i < nab.size(); ++i)
        if (!matrix_is_zero(nab[i])) R.components[{i}] = nab[i];
    if (const json* w = maybe(doc, "omega")) {
        expect_array(*w, "/omega");
        for (std::size_t i = 0; i < w->size(); ++i) {
            std::string p = join("/omega", i);
            Tuple t = args_at(need((*w)[i], "args", p), join(p, "args"), bn, "base element");
            if (t.size() < 2) fail_at(join(p, "args"), "omega components take at least two arguments");
            int s = sort_antisymmetric(t);
            if (s == 0) fail_at(join(p, "args"), "arguments must be distinct");
            Matrix M = matrix_at(need((*w)[i], "value", p), join(p, "value"), fn, body);
            if (s < 0) M = matrix_add(matrix_zero(fn.size(), body), M, -1);
            if (R.components.count(t)) fail_at(join(p, "args"), "component given twice");
            R.components[t] = M;
        }
    }
    return R;
}

RuthModel load_ruth(const json& doc) { return load_ruth_parts(doc); }

CocycleModel load_cocycle(const json& doc) {
    CocycleModel C;
    C.degree = integer(need(doc, "degree", ""), "/degree");
    if (C.degree < 2) fail_at("/degree", "cocycle degree must be at least 2");
    if (const json* s = maybe(doc, "shift"))
        if (integer(*s, "/shift") != C.degree - 1) fail_at("/shift", "the shift of a cocycle model is degree - 1");
    C.ruth = load_ruth_parts(doc);
    C.ruth.shift = C.degree - 1;
    ChartPtr F = algebroid_chart(C.ruth.base);
    std::vector<std::string> fn = names_of(C.ruth.fiber);
    C.eta.assign(fn.size(), GPoly(F));
    if (const json* e = maybe(doc, "eta")) {
        expect_object(*e, "/eta");
        for (const auto& [k, v] : e->items()) C.eta[index_in(fn, k, join("/eta", k), "frame element")] = poly(v, join("/eta", k), F);
    }
    return C;
}

McModel load_mc(const json& doc) {
    McModel m;
    m.body = chart_of(need(doc, "chart", ""), "/chart", true);
    const json& alg = need(doc, "algebra", "");
    std::vector<FrameElement> frame = frame_of(need(alg, "frame", "/algebra"), "/algebra/frame", true);
    m.algebra = MultibracketTable(Flavor::Linfty, make_chart({}), frame);
    if (const json* b = maybe(alg, "brackets")) table_entries_at(m.algebra, *b, "/algebra/brackets");
    FiberProductChart c;
    try {
        c = mc_chart(m.body, m.algebra);
    } catch (const Error& e) {
        fail_at("/algebra", e.what());
    }
    m.alpha = GVectorField(c.chart);
    if (const json* a = maybe(doc, "alpha")) m.alpha = field_at(*a, "/alpha", c.chart);
    return m;
}

ExactCourantModel load_exact_courant(const json& doc) {
    ChartPtr body = chart_of(need(doc, "chart", ""), "/chart", true);
    ExactCourantModel M;
    M.H = maybe(doc, "H") ? three_form_at(*maybe(doc, "H"), "/H", body) : ThreeForm{body, {}};
    std::vector<std::string> names = names_of(*body);
    std::vector<Matrix> nab = connection_at(doc, names, names, body);
    const std::size_t n = names.size();
    M.christoffel.assign(n, std::vector<std::vector<GPoly>>(n, std::vector<GPoly>(n, GPoly(body))));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) M.christoffel[i][j][k] = nab[i][k][j];
    return M;
}

TransitiveCourantModel load_transitive(const json& doc) {
    ChartPtr body = chart_of(need(doc, "chart", ""), "/chart", true);
    TransitiveCourantModel T;
    T.g.body = body;
    const json* fib = frames_entry(doc, "fiber");
    if (!fib) fail_at("/frames", "missing 'fiber'");
    T.g.frame = names_of(frame_of(*fib, "/frames/fiber", false));
    const std::size_t r = T.g.frame.size();
    if (const json* br = maybe(doc, "brackets"))
        if (const json* f = maybe(*br, "fiber")) T.g.brackets = pairs_at(*f, "/brackets/fiber", T.g.frame, T.g.frame, body, "frame element");
    const json& P = need(doc, "pairing", "");
    expect_array(P, "/pairing");
    if (P.size() != r) fail_at("/pairing", "pairing must be a " + std::to_string(r) + "x" + std::to_string(r) + " matrix");
    for (std::size_t a = 0; a < r; ++a) {
        std::string p = join("/pairing", a);
        expect_array(P[a], p);
        if (P[a].size() != r) fail_at(p, "pairing row has the wrong length");
        std::vector<Rational> row;
        for (std::size_t b = 0; b < r; ++b) row.push_back(rational(P[a][b], join(p, b)));
        T.g.pairing.push_back(row);
    }
    std::vector<std::string> names = names_of(*body);
    T.connection = connection_at(doc, names, T.g.frame, body);
    if (const json* w = maybe(doc, "omega")) T.omega = pairs_at(*w, "/omega", names, T.g.frame, body, "coordinate");
    T.H = maybe(doc, "H") ? three_form_at(*maybe(doc, "H"), "/H", body) : ThreeForm{body, {}};
    return T;
}

// ---------------------------------------------------------------------------------------------
// writers

json vector_json(const FrameVector& v, const std::vector<std::string>& names) {
    json o = json::object();
    for (std::size_t a = 0; a < v.size(); ++a)
        if (!v[a].is_zero()) o[names[a]] = v[a].to_string();
    return o;
}

json matrix_json(const Matrix& m, const std::vector<std::string>& names) {
    json o = json::object();
    for (std::size_t w = 0; w < names.size(); ++w) {
        FrameVector col;
        for (std::size_t a = 0; a < names.size(); ++a) col.push_back(m[a][w]);
        if (!frame_is_zero(col)) o[names[w]] = vector_json(col, names);
    }
    return o;
}

json frame_json(const std::vector<FrameElement>& f) {
    json a = json::array();
    for (const auto& e : f) a.push_back({{"name", e.name}, {"degree", e.degree}});
    return a;
}

json names_json(const std::vector<std::string>& n) { return json(n); }

json args_json(const Tuple& t, const std::vector<std::string>& names) {
    json a = json::array();
    for (auto i : t) a.push_back(names[i]);
    return a;
}

json entries_json(const std::map<Tuple, FrameVector>& m, const std::vector<std::string>& keys,
                  const std::vector<std::string>& values) {
    json a = json::array();
    for (const auto& [t, v] : m)
        if (!frame_is_zero(v)) a.push_back({{"args", args_json(t, keys)}, {"value", vector_json(v, values)}});
    return a;
}

json form_json(const ThreeForm& H) {
    json a = json::array();
    std::vector<std::string> names = names_of(*H.body);
    for (const auto& [t, v] : H.coeffs)
        if (!v.is_zero()) a.push_back({{"args", args_json(t, names)}, {"value", v.to_string()}});
    return a;
}

bool is_tangent(const AlgebroidModel& A) {
    if (!A.body || A.rank() != A.body->size() || !A.entries.empty() || !A.has_anchor()) return false;
    for (std::size_t i = 0; i < A.rank(); ++i) {
        if (A.frame[i].degree != 0 || A.frame[i].name != "d" + (*A.body)[i].name) return false;
        if (!(A.anchor_of(i) == GVectorField::partial(A.body, i))) return false;
    }
    return true;
}

void write_base(json& doc, const AlgebroidModel& A) {
    doc["chart"] = chart_to_json(*A.body);
    if (is_tangent(A)) {
        doc["frames"]["base"] = "tangent";
        return;
    }
    doc["frames"]["base"] = frame_json(A.frame);
    json anchor = json::object();
    for (std::size_t i = 0; i < A.rank() && A.has_anchor(); ++i)
        if (!A.anchor_of(i).is_zero()) anchor[A.frame[i].name] = field_to_json(A.anchor_of(i));
    if (!anchor.empty()) doc["anchor"] = anchor;
    json br = entries_json(A.entries, names_of(A.frame), names_of(A.frame));
    if (!br.empty()) doc["brackets"]["base"] = br;
}

void write_ruth(json& doc, const RuthModel& R) {
    write_base(doc, R.base);
    doc["frames"]["fiber"] = frame_json(R.fiber);
    doc["shift"] = R.shift;
    std::vector<std::string> fn = names_of(R.fiber), bn = names_of(R.base.frame);
    json conn = json::object(), omega = json::array();
    for (const auto& [t, M] : R.components) {
        if (matrix_is_zero(M)) continue;
        if (t.empty()) doc["differential"] = matrix_json(M, fn);
        else if (t.size() == 1) conn[bn[t[0]]] = matrix_json(M, fn);
        else omega.push_back({{"args", args_json(t, bn)}, {"value", matrix_json(M, fn)}});
    }
    if (!conn.empty()) doc["connection"] = conn;
    if (!omega.empty()) doc["omega"] = omega;
}

json connection_json(const std::vector<Matrix>& conn, const std::vector<std::string>& dirs,
                     const std::vector<std::string>& fiber) {
    json o = json::object();
    for (std::size_t i = 0; i < conn.size(); ++i)
        if (!matrix_is_zero(conn[i])) o[dirs[i]] = matrix_json(conn[i], fiber);
    return o;
}

struct Writer {
    json operator()(const AlgebroidModel& A) const {
        json d{{"kind", "algebroid"}};
        write_base(d, A);
        return d;
    }
    json operator()(const QFieldModel& q) const {
        json d{{"kind", "qfield"}, {"chart", chart_to_json(*q.field.chart())}, {"field", field_to_json(q.field)}};
        if (q.split) d["split"] = split_json(*q.split);
        if (!q.restriction.empty()) {
            json r = json::object();
            for (const auto& [z, v] : q.restriction) r[(*q.field.chart())[z].name] = rational_to_string(v);
            d["restrict"] = r;
        }
        return d;
    }
    json operator()(const ActionModel& A) const {
        const Chart& c = *A.chart.chart;
        json d{{"kind", "action"}, {"chart", chart_to_json(c)}, {"split", split_json(A.chart)}};
        json alg{{"frame", frame_json(A.algebroid.frame)}};
        json anchor = json::object();
        for (std::size_t i = 0; i < A.algebroid.rank() && A.algebroid.has_anchor(); ++i)
            if (!A.algebroid.anchor_of(i).is_zero()) anchor[A.algebroid.frame[i].name] = field_to_json(A.algebroid.anchor_of(i));
        alg["anchor"] = anchor;
        std::vector<std::string> fn = names_of(A.algebroid.frame);
        alg["brackets"] = entries_json(A.algebroid.entries, fn, fn);
        d["algebroid"] = alg;
        json comps = json::array();
        for (const auto& [t, X] : A.components)
            if (!X.is_zero()) comps.push_back({{"args", args_json(t, fn)}, {"field", field_to_json(X)}});
        d["components"] = comps;
        return d;
    }
    json operator()(const ExtensionModel& E) const {
        json d{{"kind", "extension"}};
        write_base(d, E.base);
        d["frames"]["fiber"] = names_json(E.fiber);
        json fb = entries_json(E.fiber_brackets, E.fiber, E.fiber);
        if (!fb.empty()) d["brackets"]["fiber"] = fb;
        json conn = connection_json(E.connection, names_of(E.base.frame), E.fiber);
        if (!conn.empty()) d["connection"] = conn;
        json om = entries_json(E.omega, names_of(E.base.frame), E.fiber);
        if (!om.empty()) d["omega"] = om;
        return d;
    }
    json operator()(const RuthModel& R) const {
        json d{{"kind", "ruth"}};
        write_ruth(d, R);
        return d;
    }
    json operator()(const CocycleModel& C) const {
        json d{{"kind", "cocycle"}};
        RuthModel R = C.ruth;
        R.shift = C.degree - 1;
        write_ruth(d, R);
        d["degree"] = C.degree;
        json eta = json::object();
        for (std::size_t a = 0; a < C.eta.size(); ++a)
            if (!C.eta[a].is_zero()) eta[C.ruth.fiber[a].name] = C.eta[a].to_string();
        d["eta"] = eta;
        return d;
    }
    json operator()(const McModel& m) const {
        json d{{"kind", "mc"}, {"chart", chart_to_json(*m.body)}};
        std::vector<std::string> fn = names_of(m.algebra.frame);
        d["algebra"] = {{"frame", frame_json(m.algebra.frame)}, {"brackets", entries_json(m.algebra.entries, fn, fn)}};
        d["alpha"] = field_to_json(m.alpha);
        return d;
    }
    json operator()(const ExactCourantModel& M) const {
        json d{{"kind", "exact_courant"}, {"chart", chart_to_json(*M.H.body)}, {"H", form_json(M.H)}};
        const std::size_t n = M.H.dim();
        std::vector<Matrix> conn(n, matrix_zero(n, M.H.body));
        for (std::size_t i = 0; i < n && i < M.christoffel.size(); ++i)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t k = 0; k < n; ++k) conn[i][k][j] = M.christoffel[i][j][k];
        json c = connection_json(conn, names_of(*M.H.body), names_of(*M.H.body));
        if (!c.empty()) d["connection"] = c;
        return d;
    }
    json operator()(const TransitiveCourantModel& T) const {
        json d{{"kind", "transitive_courant"}, {"chart", chart_to_json(*T.g.body)}};
        d["frames"]["fiber"] = names_json(T.g.frame);
        json fb = entries_json(T.g.brackets, T.g.frame, T.g.frame);
        if (!fb.empty()) d["brackets"]["fiber"] = fb;
        json P = json::array();
        for (const auto& row : T.g.pairing) {
            json r = json::array();
            for (const auto& q : row) {
                if (q.get_den() == 1 && q.get_num().fits_slong_p()) r.push_back(q.get_num().get_si());
                else r.push_back(rational_to_string(q));
            }
            P.push_back(r);
        }
        d["pairing"] = P;
        json conn = connection_json(T.connection, names_of(*T.g.body), T.g.frame);
        if (!conn.empty()) d["connection"] = conn;
        json om = entries_json(T.omega, names_of(*T.g.body), T.g.frame);
        if (!om.empty()) d["omega"] = om;
        d["H"] = form_json(T.H);
        return d;
    }

    static json split_json(const FiberProductChart& c) {
        json xi = json::array(), eta = json::array();
        for (auto i : c.xi) xi.push_back((*c.chart)[i].name);
        for (auto i : c.eta) eta.push_back((*c.chart)[i].name);
        return {{"xi", xi}, {"eta", eta}};
    }
};

}  // namespace

json chart_to_json(const Chart& c) {
    json a = json::array();
    for (const auto& g : c.generators()) a.push_back({{"name", g.name}, {"degree", g.degree}});
    return a;
}

json field_to_json(const GVectorField& X) {
    json o = json::object();
    for (std::size_t z = 0; z < X.size(); ++z)
        if (!X.coeff(z).is_zero()) o[(*X.chart())[z].name] = X.coeff(z).to_string();
    return o;
}

GVectorField field_from_json(const json& j, const ChartPtr& chart) {
    try {
        return field_at(j, "", chart);
    } catch (const LoadError& e) {
        throw ModelError({{e.pointer, e.message}});
    }
}

namespace {

const std::map<std::string, std::set<std::string>>& allowed_keys() {
    static const std::map<std::string, std::set<std::string>> k{
        {"algebroid", {"chart", "frames", "anchor", "brackets"}},
        {"action", {"chart", "split", "algebroid", "components"}},
        {"qfield", {"chart", "field", "split", "restrict"}},
        {"extension", {"chart", "frames", "anchor", "brackets", "connection", "omega"}},
        {"ruth", {"chart", "frames", "anchor", "brackets", "shift", "differential", "connection", "omega"}},
        {"cocycle", {"chart", "frames", "anchor", "brackets", "shift", "differential", "connection", "omega", "degree", "eta"}},
        {"mc", {"chart", "algebra", "alpha"}},
        {"exact_courant", {"chart", "H", "connection"}},
        {"transitive_courant", {"chart", "frames", "brackets", "pairing", "connection", "omega", "H"}},
    };
    return k;
}

void reject_unknown(const json& j, const std::string& ptr, const std::set<std::string>& allowed) {
    if (!j.is_object()) return;
    for (const auto& [k, v] : j.items())
        if (!allowed.count(k)) fail_at(join(ptr, k), "unknown key '" + k + "'");
}

}  // namespace

ModelFile parse_model(const json& doc) {
    try {
        if (!doc.is_object()) fail_at("", "a model file is a JSON object");
        std::string kind = text(need(doc, "kind", ""), "/kind");
        if (auto it = allowed_keys().find(kind); it != allowed_keys().end()) {
            std::set<std::string> top = it->second;
            top.insert("kind");
            reject_unknown(doc, "", top);
            if (const json* f = maybe(doc, "frames")) reject_unknown(*f, "/frames", {"base", "fiber"});
            if (const json* b = maybe(doc, "brackets")) reject_unknown(*b, "/brackets", {"base", "fiber"});
            if (const json* s = maybe(doc, "split")) reject_unknown(*s, "/split", {"xi", "eta"});
        }
        ModelFile m{kind, {}};
        if (kind == "algebroid") m.data = load_algebroid(doc);
        else if (kind == "action") m.data = load_action(doc);
        else if (kind == "qfield") m.data = load_qfield(doc);
        else if (kind == "extension") m.data = load_extension(doc);
        else if (kind == "ruth") m.data = load_ruth(doc);
        else if (kind == "cocycle") m.data = load_cocycle(doc);
        else if (kind == "mc") m.data = load_mc(doc);
        else if (kind == "exact_courant") m.data = load_exact_courant(doc);
        else if (kind == "transitive_courant") m.data = load_transitive(doc);
        else fail_at("/kind", "unknown kind '" + kind + "'");
        return m;
    } catch (const LoadError& e) {
        throw ModelError({{e.pointer, e.message}});
    }
}

ModelFile load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ModelError({{"", "cannot read '" + path + "'"}});
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ModelError({{"", std::string("malformed JSON: ") + e.what()}});
    }
    return parse_model(doc);
}

json model_to_json(const ModelFile& m) { return std::visit(Writer{}, m.data); }

}  // namespace gradedq
