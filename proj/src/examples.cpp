#include "gradedq/examples.hpp"

#include <random>

namespace gradedq::examples {

namespace {

FrameVector vec(const ChartPtr& body, std::initializer_list<const char*> entries) {
    FrameVector v;
    for (const char* e : entries) v.push_back(parse_poly(e, body));
    return v;
}

Matrix mat(const ChartPtr& body, std::initializer_list<std::initializer_list<const char*>> rows) {
    Matrix m;
    for (const auto& r : rows) m.push_back(vec(body, r));
    return m;
}

}  // namespace

ChartPtr euclidean(std::size_t n, const std::string& prefix) {
    std::vector<Generator> g;
    for (std::size_t i = 0; i < n; ++i) g.push_back({prefix + std::to_string(i + 1), 0});
    return make_chart(std::move(g));
}

std::map<Tuple, FrameVector> so3_brackets(const ChartPtr& body) {
    return {{{0, 1}, vec(body, {"0", "0", "1"})}, {{1, 2}, vec(body, {"1", "0", "0"})}, {{0, 2}, vec(body, {"0", "-1", "0"})}};
}

std::vector<std::vector<Rational>> so3_killing() { return {{-2, 0, 0}, {0, -2, 0}, {0, 0, -2}}; }

QuadraticBundleModel so3_bundle(const ChartPtr& body) {
    return {body, {"e1", "e2", "e3"}, so3_brackets(body), so3_killing()};
}

AlgebroidModel tangent_algebroid(const ChartPtr& body) {
    std::vector<std::string> names;
    std::vector<GVectorField> anchor;
    for (std::size_t i = 0; i < body->size(); ++i) {
        names.push_back("d" + (*body)[i].name);
        anchor.push_back(GVectorField::partial(body, i));
    }
    return make_lie_algebroid(body, names, anchor, {});
}

ExtensionModel atiyah_so3() {
    ChartPtr body = euclidean(1);
    ExtensionModel E;
    E.base = tangent_algebroid(body);
    E.fiber = {"e1", "e2", "e3"};
    E.fiber_brackets = so3_brackets(body);
    // x ad_{e3}
    E.connection = {mat(body, {{"0", "-x1", "0"}, {"x1", "0", "0"}, {"0", "0", "0"}})};
    return E;
}

ExtensionModel atiyah_broken() {
    ChartPtr body = euclidean(3);
    ExtensionModel E;
    E.base = tangent_algebroid(body);
    E.fiber = {"e1", "e2", "e3", "z"};
    E.fiber_brackets = {{{0, 1}, vec(body, {"0", "0", "1", "0"})},
                        {{1, 2}, vec(body, {"1", "0", "0", "0"})},
                        {{0, 2}, vec(body, {"0", "-1", "0", "0"})}};
    E.connection.assign(3, matrix_zero(4, body));
    E.omega[{1, 2}] = vec(body, {"0", "0", "0", "x1"});
    return E;
}

ExtensionModel atiyah_curved() {
    ChartPtr body = euclidean(3);
    ExtensionModel E;
    E.base = tangent_algebroid(body);
    E.fiber = {"e1", "e2", "e3"};
    E.fiber_brackets = so3_brackets(body);
    ClassicalDgla g = ClassicalDgla::gauge(body, E.fiber, E.fiber_brackets);
    // theta = x2 e1 dx1 + x3 e3 dx2
    std::vector<FrameVector> theta = {vec(body, {"x2", "0", "0"}), vec(body, {"0", "0", "x3"}), vec(body, {"0", "0", "0"})};
    for (const auto& t : theta) E.connection.push_back(g.ad(t));
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = i + 1; j < 3; ++j) {
            FrameVector F = frame_zero(3, body);
            for (std::size_t a = 0; a < 3; ++a)
                F[a] = poly_partial(theta[j][a], i) - poly_partial(theta[i][a], j);
            frame_add(F, g.fiber_bracket(theta[i], theta[j]));
            if (!frame_is_zero(F)) E.omega[{i, j}] = F;
        }
    return E;
}

RuthModel ruth_two_term() {
    ChartPtr body = euclidean(2);
    RuthModel R;
    R.base = tangent_algebroid(body);
    R.fiber = {{"u", 0}, {"w", -1}};
    R.shift = 1;
    R.components[{}] = mat(body, {{"0", "1"}, {"0", "0"}});
    R.components[{0}] = matrix_zero(2, body);
    R.components[{1}] = mat(body, {{"x1", "0"}, {"0", "x1"}});
    R.components[{0, 1}] = mat(body, {{"0", "0"}, {"-1", "0"}});
    return R;
}

CocycleModel cocycle_three_form() {
    ChartPtr body = euclidean(3);
    CocycleModel C;
    C.ruth.base = tangent_algebroid(body);
    C.ruth.fiber = {{"u", 0}};
    C.degree = 3;
    C.ruth.shift = 2;
    ChartPtr F = algebroid_chart(C.ruth.base);
    C.eta = {parse_poly("dx1 dx2 dx3", F)};
    return C;
}

McExample mc_twist() {
    McExample m;
    m.body = euclidean(3);
    ChartPtr point = make_chart({});
    m.algebra = MultibracketTable(Flavor::Linfty, point, {{"e1", 0}, {"e2", 0}, {"e3", 0}});
    for (const auto& [k, v] : so3_brackets(point)) m.algebra.set(k, v);
    auto c = mc_chart(m.body, m.algebra);
    // [Z, Q_dR] for Z = f Y with Y the linear field of ad_{e3} and f = x1 x2 + x3^2
    GVectorField Y(c.chart);
    Y.set(c.chart->index_of("e1"), parse_poly("e2", c.chart));
    Y.set(c.chart->index_of("e2"), parse_poly("-e1", c.chart));
    GVectorField Z = parse_poly("x1 x2 + x3^2", c.chart) * Y;
    m.alpha = lie_bracket(Z, de_rham_field(c));
    return m;
}

ExactCourantModel exact_courant_r3(bool curved) {
    ChartPtr body = euclidean(3);
    ExactCourantModel M;
    M.H.body = body;
    M.H.coeffs[{0, 1, 2}] = parse_poly("1 + x2", body);
    M.christoffel.assign(3, std::vector<std::vector<GPoly>>(3, std::vector<GPoly>(3, GPoly(body))));
    if (curved) {
        M.christoffel[1][0][0] = parse_poly("x1", body);
        M.christoffel[2][1][0] = parse_poly("x3", body);
    }
    return M;
}

TransitiveCourantModel transitive_so3() {
    ChartPtr body = euclidean(3);
    TransitiveCourantModel T;
    T.g = so3_bundle(body);
    T.connection.assign(3, matrix_zero(3, body));
    T.H.body = body;
    T.H.coeffs[{0, 1, 2}] = GPoly::constant(body, 2);
    return T;
}

TransitiveCourantModel pontryagin_demo(const Rational& c) {
    ChartPtr body = euclidean(4);
    TransitiveCourantModel T;
    T.g = so3_bundle(body);
    ClassicalDgla g = ClassicalDgla::gauge(body, T.g.frame, T.g.brackets);
    std::vector<FrameVector> theta = {frame_zero(3, body), vec(body, {"x1", "0", "0"}), frame_zero(3, body),
                                      vec(body, {"x3", "0", "0"})};
    for (const auto& t : theta) T.connection.push_back(g.ad(t));
    T.omega[{0, 1}] = vec(body, {"1", "0", "0"});
    T.omega[{2, 3}] = vec(body, {"1", "0", "0"});
    T.H.body = body;
    if (c != 0) T.H.coeffs[{1, 2, 3}] = c * parse_poly("x1", body);
    return T;
}

RandomAction random_action(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto c = make_chart({{"x", 0}, {"xi1", 1}, {"xi2", 1}, {"eta1", 1}, {"eta2", 2}});
    RandomAction out{FiberProductChart::make(c, {"xi1", "xi2"}, {"eta1", "eta2"}), GVectorField(c)};
    GVectorField Q0(c);
    Q0.set(c->index_of("x"), parse_poly("-xi1 x + xi2", c));
    Q0.set(c->index_of("xi2"), parse_poly("-xi1 xi2", c));
    Q0.set(c->index_of("eta1"), parse_poly("eta2", c));
    // Z is vertical of degree 0 with at least one xi in every term, so exp(ad Z) keeps the projection
    std::vector<std::string> monos1 = {"xi1", "xi2", "x xi1", "x^2 xi2", "x^2 xi1"};
    std::vector<std::string> monos2 = {"xi1 eta1", "xi2 eta1", "x xi1 eta1", "xi1 xi2", "x xi1 xi2"};
    std::uniform_int_distribution<int> coin(0, 2), num(-3, 3), den(1, 2);
    auto pick = [&](const std::vector<std::string>& monos) {
        GPoly p(c);
        for (const auto& m : monos)
            if (coin(rng) == 0) {
                int n = num(rng);
                Rational q(n, den(rng));
                q.canonicalize();
                if (n != 0) p += q * parse_poly(m, c);
            }
        return p;
    };
    GVectorField Z(c);
    Z.set(c->index_of("eta1"), pick(monos1));
    Z.set(c->index_of("eta2"), pick(monos2));
    GVectorField term = Q0;
    out.Q = Q0;
    for (int n = 1; n < 40; ++n) {
        term = Rational(1, n) * lie_bracket(Z, term);
        if (term.is_zero()) break;
        out.Q += term;
    }
    return out;
}

std::vector<CatalogEntry> catalog() {
    return {
        {"atiyah-so3", "extension", "so(3) bundle over the line with nabla = d + x ad e3"},
        {"ruth-2term", "ruth", "two-term representation up to homotopy of TR^2 with curved nabla"},
        {"cocycle-3form", "cocycle", "constant 3-form cocycle of TR^3 in the trivial line bundle"},
        {"mc-twist", "mc", "gauge-exact Maurer-Cartan twist of so(3) over R^3"},
        {"exact-courant-r3", "exact-courant", "exact Courant algebroid on R^3 with H = (1 + x2) dx1 dx2 dx3, curved nabla"},
        {"transitive-courant-so3", "transitive-courant", "so(3) with the Killing pairing over R^3, H = 2 dx1 dx2 dx3"},
        {"pontryagin-demo", "pontryagin", "R^4 with omega = e1 (dx1 dx2 + dx3 dx4); H = -2 x1 dx2 dx3 dx4 kills the obstruction"},
        {"random-action", "roundtrip", "seeded random action of aff(1) on two module coordinates"},
    };
}

}  // namespace gradedq::examples
