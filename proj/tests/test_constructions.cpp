#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gradedq/examples.hpp"
#include "support/actions.hpp"
#include "support/generators.hpp"

using namespace gradedq;
using namespace gradedq::testing;
using namespace gradedq::examples;

namespace {

ChartPtr point_chart() { return make_chart({}); }

AlgebroidModel point_algebra(const std::map<Tuple, FrameVector>& brackets) {
    ChartPtr pt = point_chart();
    return make_lie_algebroid(pt, {"e1", "e2", "e3"}, std::vector<GVectorField>(3, GVectorField(pt)), brackets);
}

// rank-one flat connection d + d(x1 x2) on the trivial line over R^2
RuthModel flat_line(const std::string& name, int degree, int shift) {
    ChartPtr body = euclidean(2);
    RuthModel R;
    R.base = tangent_algebroid(body);
    R.fiber = {{name, degree}};
    R.shift = shift;
    R.components[{0}] = {{parse_poly("x2", body)}};
    R.components[{1}] = {{parse_poly("x1", body)}};
    return R;
}

}  // namespace

// ---------------------------------------------------------------------------------------------
// algebroids

TEST_CASE("tangent algebroid of R^2") {
    AlgebroidModel A = tangent_algebroid(euclidean(2));
    GVectorField Q = build_algebroid_Q(A);
    CHECK(Q == parse_field(Q.chart(), {{"x1", "dx1"}, {"x2", "dx2"}}));
    CHECK(is_homological(Q));
}

TEST_CASE("so(3) over a point") {
    AlgebroidModel A = point_algebra(so3_brackets(point_chart()));
    GVectorField Q = build_algebroid_Q(A);
    // -1/2 eps_ijk xi^i xi^j d/dxi^k summed over ordered pairs
    CHECK(Q == parse_field(Q.chart(), {{"e1", "-e2 e3"}, {"e2", "e1 e3"}, {"e3", "-e1 e2"}}));
    CHECK(is_homological(Q));
    CHECK(check_linfty(A, 3).passed);
}

TEST_CASE("broken Jacobi gives a non-homological algebroid field") {
    ChartPtr pt = point_chart();
    // [e1,e2] = e3, [e1,e3] = e1: the Jacobiator on (e1,e2,e3) is -e3
    AlgebroidModel A = point_algebra({{{0, 1}, frame_unit(3, 2, pt)}, {{0, 2}, frame_unit(3, 0, pt)}});
    GVectorField Q = build_algebroid_Q(A);
    CHECK_FALSE(is_homological(Q));
    CHECK_FALSE(check_linfty(A, 3).passed);
}

TEST_CASE("algebroid builder rejects bad shapes") {
    ChartPtr body = euclidean(1);
    CHECK_THROWS(make_lie_algebroid(body, {"a", "b"}, {GVectorField::partial(body, 0)}, {}));
    CHECK_THROWS(make_lie_algebroid(body, {"a"}, {GVectorField::partial(body, 0)}, {{{0, 0}, frame_zero(1, body)}}));
}

// ---------------------------------------------------------------------------------------------
// extensions

TEST_CASE("flat abelian extension") {
    ChartPtr body = euclidean(2);
    ExtensionModel E;
    E.base = tangent_algebroid(body);
    E.fiber = {"a", "b"};
    E.connection.assign(2, matrix_zero(2, body));
    auto res = build_extension_action(E);
    CHECK(res.report.passed);
    CHECK(res.report.verdicts.at("morphism"));
    CHECK(res.action.component({}).is_zero());
    CHECK(res.action.component({0}) == GVectorField::partial(res.chart.module, 0));
    CHECK(res.action.component({0, 1}).is_zero());
    CHECK(res.Q_tot == vf_transport(build_algebroid_Q(E.base), res.chart.chart));
}

TEST_CASE("so(3) bundle over the line, trivial and twisted connection") {
    ExtensionModel E = atiyah_so3();
    SUBCASE("trivial") { E.connection = {matrix_zero(3, E.base.body)}; }
    SUBCASE("x ad e3") {}
    auto res = build_extension_action(E);
    CHECK(res.report.passed);
    for (const char* k : {"fiber_jacobi", "compJ1", "compJ2", "compJ3", "homological", "agree", "morphism"})
        CHECK_MESSAGE(res.report.verdicts.at(k), k);
    CHECK(is_homological(res.Q_tot));
    CHECK(res.report.details.at("failing_bidegrees") == "none");
    // F_0 is the Chevalley-Eilenberg field of so(3) on the fiber
    const ChartPtr& m = res.chart.module;
    CHECK(res.action.component({}) == parse_field(m, {{"e1", "-e2 e3"}, {"e2", "e1 e3"}, {"e3", "-e1 e2"}}));
}

TEST_CASE("curvature as omega gives an extension") {
    auto res = build_extension_action(atiyah_curved());
    CHECK(res.report.passed);
    CHECK(res.report.verdicts.at("morphism"));
}

TEST_CASE("non-closed central omega breaks compJ3 and [Q,Q] together") {
    ExtensionModel E = atiyah_broken();
    auto res = build_extension_action(E);
    const auto& v = res.report.verdicts;
    CHECK_FALSE(res.report.passed);
    CHECK(v.at("compJ1"));
    CHECK(v.at("compJ2"));
    CHECK_FALSE(v.at("compJ3"));
    CHECK_FALSE(v.at("homological"));
    CHECK(v.at("agree"));
    CHECK(v.at("bidegree_match"));
    CHECK(res.report.details.at("failing_bidegrees") == "(3,0)");
    // d_1 (x1 z) = z is the only cyclic term
    bool found = false;
    for (const auto& r : res.report.residuals)
        if (r.where.rfind("compJ3", 0) == 0) {
            found = true;
            CHECK(r.value == "z: 1");
            CHECK(r.bidegree == std::pair<int, int>{3, 0});
        }
    CHECK(found);
    // F_2 is the plain contraction with omega
    std::size_t z = res.chart.module->index_of("z");
    CHECK(res.action.component({1, 2}).coeff(z) == parse_poly("x1", res.chart.module));
    CHECK_FALSE(res.report.verdicts.at("morphism"));

    SUBCASE("a constant central omega is closed") {
        E.omega[{1, 2}] = frame_unit(4, 3, E.base.body);
        CHECK(build_extension_action(E).report.passed);
    }
}

TEST_CASE("perturbing omega away from the curvature breaks compJ2 and the morphism") {
    ExtensionModel E = atiyah_curved();
    frame_add(E.omega[{0, 1}], frame_unit(3, 0, E.base.body));
    auto res = build_extension_action(E);
    CHECK_FALSE(res.report.verdicts.at("compJ2"));
    CHECK_FALSE(res.report.verdicts.at("homological"));
    CHECK(res.report.verdicts.at("agree"));
    CHECK(res.report.verdicts.at("bidegree_match"));
    CHECK_FALSE(res.report.verdicts.at("morphism"));
    CHECK(res.report.verdicts.at("morphism_agree"));
}

// ---------------------------------------------------------------------------------------------
// representations up to homotopy

TEST_CASE("flat line bundle is an ordinary representation") {
    RuthModel R = flat_line("u", 0, 1);
    auto res = build_ruth(R);
    CHECK(res.report.passed);
    auto c = res.chart;
    LinearFrame L{c.module, {c.module->index_of("u")}, {0}, 1, R.base.body};
    for (std::size_t i = 0; i < 2; ++i)
        CHECK(res.action.component({i}) == linear_field(L, R.components.at({i}), 0, R.base.anchor_of(i)));
    CHECK(res.action.max_arity() == 1);
}

TEST_CASE("two-term representation up to homotopy") {
    RuthModel R = ruth_two_term();
    auto res = build_ruth(R);
    CHECK(res.report.passed);
    CHECK(res.report.verdicts.at("fiberwise_linear"));
    CHECK(is_fiberwise_linear(res.Q_tot, res.chart.eta));
    // F_2 = -omega_2
    auto c = res.chart;
    LinearFrame L{c.module, {c.module->index_of("u"), c.module->index_of("w")}, {0, -1}, 1, R.base.body};
    CHECK(res.action.component({0, 1}) == -linear_field(L, R.components.at({0, 1}), -1));
    CHECK(linear_matrix(L, -res.action.component({0, 1}), -1) == R.components.at({0, 1}));
    // recovery from the field
    CHECK(recover_ruth(res.Q_tot, c, R.base, R.fiber, 1) == R);
}

TEST_CASE("dropping omega_2 leaves the curvature in D^2") {
    RuthModel R = ruth_two_term();
    R.components.erase({0, 1});
    // D = d + x1 dx2 + partial, so D^2 = d(x1 dx2) = dx1 dx2 on both frame elements
    auto S = ruth_square(R);
    ChartPtr F = algebroid_chart(R.base);
    GPoly curv = parse_poly("dx1 dx2", F);
    CHECK(S[0][0] == curv);
    CHECK(S[1][1] == curv);
    CHECK(S[0][1].is_zero());
    CHECK(S[1][0].is_zero());
    auto res = build_ruth(R);
    CHECK_FALSE(res.report.verdicts.at("square_zero"));
    CHECK_FALSE(res.report.verdicts.at("homological"));
    CHECK(res.report.verdicts.at("agree"));
    CHECK(res.report.verdicts.at("action_agree"));
    CHECK_FALSE(res.report.residuals.empty());
    // only F_1 survives, but {phi_1, phi_1} still enters at arity 2
    ActionModel A = decompose(res.Q_tot, res.chart, nullptr, false);
    CHECK(A.max_arity() == 1);
    CHECK(action_arity_bound(A) == 2);
    CheckReport mor = check_curved_morphism(to_curved_morphism(A), action_arity_bound(A));
    CHECK_FALSE(mor.passed);
}

TEST_CASE("representation components of the wrong degree are rejected") {
    RuthModel R = ruth_two_term();
    // u -> u has degree 0, not 1
    R.components[{}] = {{GPoly::constant(R.base.body, 1), GPoly(R.base.body)}, {GPoly(R.base.body), GPoly(R.base.body)}};
    CHECK_THROWS(build_ruth(R));
}

// ---------------------------------------------------------------------------------------------
// cocycles

TEST_CASE("constant 3-form cocycle on R^3") {
    CocycleModel C = cocycle_three_form();
    Rational eta123 = 1;
    SUBCASE("unit") {}
    SUBCASE("scaled") {
        eta123 = Rational(-5, 3);
        C.eta[0] = eta123 * C.eta[0];
    }
    auto res = build_cocycle_action(C);
    CHECK(res.report.passed);
    for (const char* k : {"closed", "bracket_zero", "homological", "split", "agree", "components", "action"})
        CHECK_MESSAGE(res.report.verdicts.at(k), k);
    CHECK(lie_bracket(res.Q_D, res.iota_eta).is_zero());
    CHECK(res.split.ruth == C.ruth);
    CHECK(res.split.eta == C.eta);
    // F_3 = sigma(3) eta_123 = -1 times the contraction
    std::size_t u = res.chart.module->index_of("u");
    CHECK(res.action.component({0, 1, 2}).coeff(u) == GPoly::constant(res.chart.module, -eta123));
}

TEST_CASE("non-closed 2-form cocycle fails both ways") {
    CocycleModel C;
    ChartPtr body = euclidean(3);
    C.ruth.base = tangent_algebroid(body);
    C.ruth.fiber = {{"u", 0}};
    C.degree = 2;
    ChartPtr F = algebroid_chart(C.ruth.base);
    C.eta = {parse_poly("x1 dx2 dx3", F)};
    CHECK(cocycle_differential(C)[0] == parse_poly("dx1 dx2 dx3", F));
    auto res = build_cocycle_action(C);
    const auto& v = res.report.verdicts;
    CHECK_FALSE(v.at("closed"));
    CHECK_FALSE(v.at("bracket_zero"));
    CHECK(v.at("bracket_is_iota_D_eta"));
    CHECK_FALSE(v.at("homological"));
    CHECK(v.at("agree"));
    CHECK(v.at("split"));
}

TEST_CASE("non-closed 3-form on R^4") {
    CocycleModel C;
    ChartPtr body = euclidean(4);
    C.ruth.base = tangent_algebroid(body);
    C.ruth.fiber = {{"u", 0}};
    C.degree = 3;
    ChartPtr F = algebroid_chart(C.ruth.base);
    C.eta = {parse_poly("x4 dx1 dx2 dx3", F)};
    // dx4 dx1 dx2 dx3 = -dx1 dx2 dx3 dx4
    CHECK(cocycle_differential(C)[0] == parse_poly("-dx1 dx2 dx3 dx4", F));
    auto res = build_cocycle_action(C);
    CHECK_FALSE(res.report.verdicts.at("closed"));
    CHECK_FALSE(res.report.verdicts.at("homological"));
    CHECK(res.report.verdicts.at("agree"));
}

TEST_CASE("n = 2 with a flat line bundle has components in arities 1 and 2 only") {
    CocycleModel C;
    C.ruth = flat_line("u", 0, 1);
    C.degree = 2;
    ChartPtr F = algebroid_chart(C.ruth.base);
    C.eta = {parse_poly("(x1^2 - 3 x2) dx1 dx2", F)};
    auto res = build_cocycle_action(C);
    CHECK(res.report.passed);
    CHECK(res.action.component({}).is_zero());
    CHECK(res.action.max_arity() == 2);
    std::size_t u = res.chart.module->index_of("u");
    CHECK(res.action.component({0, 1}) == parse_poly("-x1^2 + 3 x2", res.chart.module) *
                                               GVectorField::partial(res.chart.module, u));
    CHECK(check_action(res.action).passed);
}

TEST_CASE("split of Q_D + iota_eta is exact on the two-term representation") {
    Rng rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        CocycleModel C;
        C.ruth = ruth_two_term();
        C.degree = 2;
        ChartPtr F = algebroid_chart(C.ruth.base);
        GPoly f = random_poly(rng, C.ruth.base.body, 3);
        C.eta = {poly_mul(lift(f, F), parse_poly("dx1 dx2", F)), GPoly(F)};
        auto res = build_cocycle_action(C);
        CHECK(res.report.passed);
        auto back = split_cocycle_field(res.Q_tot, res.chart, C.ruth.base, C.ruth.fiber, 1);
        CHECK(back.ruth == C.ruth);
        CHECK(back.eta == C.eta);
    }
}

TEST_CASE("cocycle degree hypothesis") {
    CocycleModel C = cocycle_three_form();
    C.ruth.fiber = {{"u", 2}};
    CHECK_THROWS(build_cocycle_action(C));
}

// ---------------------------------------------------------------------------------------------
// linearization

TEST_CASE("linearizing an already linear action is the identity") {
    auto res = build_ruth(ruth_two_term());
    CHECK(linearize_action(res.action) == res.action);
}

TEST_CASE("quadratic term in F_1 is dropped") {
    auto c = make_chart({{"x", 0}, {"xi", 1}, {"u", 2}, {"w", 4}});
    auto fp = FiberProductChart::make(c, {"xi"}, {"u", "w"});
    GVectorField Q = parse_field(c, {{"x", "xi"}, {"w", "x xi u^2"}});
    REQUIRE(is_homological(Q));
    ActionModel A = decompose(Q, fp);
    ActionModel lin = linearize_action(A);
    CHECK(lin.component({0}) == GVectorField::partial(fp.module, 0));
    CHECK(check_action(lin).passed);
    CHECK(is_homological(assemble(lin)));
}

TEST_CASE("fiber-constant F_2 is not tangent to the zero section") {
    auto c = make_chart({{"x1", 0}, {"x2", 0}, {"dx1", 1}, {"dx2", 1}, {"eta", 1}});
    auto fp = FiberProductChart::make(c, {"dx1", "dx2"}, {"eta"});
    GVectorField Q = parse_field(c, {{"x1", "dx1"}, {"x2", "dx2"}, {"eta", "dx1 dx2"}});
    REQUIRE(is_homological(Q));
    CHECK_THROWS_AS(linearize_action(decompose(Q, fp)), NotTangent);
}

// ---------------------------------------------------------------------------------------------
// Maurer-Cartan

TEST_CASE("alpha = 0") {
    ChartPtr body = euclidean(2);
    ChartPtr pt = point_chart();
    MultibracketTable g(Flavor::Linfty, pt, {{"e1", 0}, {"e2", 0}, {"e3", 0}});
    for (const auto& [k, v] : so3_brackets(pt)) g.set(k, v);
    auto res = build_mc_action(body, g, GVectorField(mc_chart(body, g).chart));
    CHECK(res.report.passed);
    CHECK(res.action.has_value());

    g.set({0, 2}, frame_unit(3, 0, pt));  // broken Jacobi
    auto bad = build_mc_action(body, g, GVectorField(mc_chart(body, g).chart));
    CHECK_FALSE(bad.report.verdicts.at("algebra"));
    CHECK_FALSE(bad.report.verdicts.at("homological"));
    CHECK(bad.report.verdicts.at("agree"));
    CHECK(bad.report.verdicts.at("mc_equation"));
}

TEST_CASE("R[n-1] with a closed n-form recovers Q_dR + iota_eta") {
    ChartPtr body = euclidean(4);
    MultibracketTable g(Flavor::Linfty, point_chart(), {{"t", -1}});
    auto c = mc_chart(body, g);
    std::size_t t = c.chart->index_of("t");
    SUBCASE("closed") {
        GVectorField alpha(c.chart);
        alpha.set(t, parse_poly("dx1 dx2 dx3 + x1 dx2 dx3 dx4 + x2 dx1 dx3 dx4", c.chart));
        auto res = build_mc_action(body, g, alpha);
        CHECK(res.report.passed);
        CHECK(res.mc_residual.is_zero());
    }
    SUBCASE("not closed") {
        GVectorField alpha(c.chart);
        alpha.set(t, parse_poly("x4 dx1 dx2 dx3", c.chart));
        auto res = build_mc_action(body, g, alpha);
        CHECK_FALSE(res.report.verdicts.at("mc_equation"));
        CHECK_FALSE(res.report.verdicts.at("homological"));
        CHECK(res.report.verdicts.at("agree"));
        CHECK(res.report.details.at("failing_form_degrees") == "4");
    }
}

TEST_CASE("so(3) with a non-derivation 1-form part") {
    ChartPtr body = euclidean(2);
    McExample m = mc_twist();
    auto c = mc_chart(body, m.algebra);
    // dx1 e1 d/de1 is not a derivation; dx1 dx2 d/de3 is a constant 2-form part
    GVectorField alpha = parse_field(c.chart, {{"e1", "dx1 e1"}, {"e3", "dx1 dx2"}});
    auto res = build_mc_action(body, m.algebra, alpha);
    CHECK_FALSE(res.report.verdicts.at("mc_equation"));
    CHECK_FALSE(res.report.verdicts.at("homological"));
    CHECK(res.report.verdicts.at("agree"));
    CHECK(res.report.details.at("failing_form_degrees") == "1,2");
}

TEST_CASE("gauge-exact twist of so(3) is Maurer-Cartan") {
    McExample m = mc_twist();
    auto res = build_mc_action(m.body, m.algebra, m.alpha);
    CHECK(res.report.passed);
}

TEST_CASE("alpha validation") {
    McExample m = mc_twist();
    auto c = mc_chart(m.body, m.algebra);
    CHECK_THROWS(build_mc_action(m.body, m.algebra, parse_field(c.chart, {{"e1", "e2"}})));         // 0-form part
    CHECK_THROWS(build_mc_action(m.body, m.algebra, parse_field(c.chart, {{"e1", "dx1 dx2 e2"}})));  // degree 2
    CHECK_THROWS(build_mc_action(m.body, m.algebra, parse_field(c.chart, {{"x1", "dx1 e1"}})));      // not vertical
}

// ---------------------------------------------------------------------------------------------
// exact Courant algebroids

TEST_CASE("exact Courant with H = 0 and with constant H") {
    ExactCourantModel M = exact_courant_r3(false);
    bool zero = false;
    SUBCASE("H = 0") {
        M.H.coeffs.clear();
        zero = true;
    }
    SUBCASE("H = 7/2 dx1 dx2 dx3") { M.H.coeffs[{0, 1, 2}] = GPoly::constant(M.H.body, Rational(7, 2)); }
    auto res = build_exact_courant(M);
    CHECK(res.report.passed);
    CHECK(is_homological(res.Q));
    CHECK(is_homological(res.literal_Q));
    CHECK(res.report.verdicts.at("projects_to_de_rham"));
    CHECK(res.report.verdicts.at("morphism"));
    for (const char* p : {"p_x1", "p_x2", "p_x3"}) CHECK(res.Q.coeff(res.Q.chart()->index_of(p)).is_zero());
    for (const auto& [t, x] : res.morphism.components) {
        if (t.size() == 3) CHECK(x.is_zero());
        if (zero && t.size() == 2) CHECK(x.is_zero());
    }
}

TEST_CASE("exact Courant with polynomial H, flat and curved connection") {
    for (bool curved : {false, true}) {
        auto res = build_exact_courant(exact_courant_r3(curved));
        CHECK(res.report.passed);
        CHECK(res.report.verdicts.at("morphism"));
        CHECK(res.report.verdicts.at("residual_is_dH"));
    }
}

TEST_CASE("non-closed H on R^4") {
    ExactCourantModel M;
    M.H.body = euclidean(4);
    M.H.coeffs[{0, 1, 2}] = parse_poly("x4", M.H.body);
    M.christoffel.assign(4, std::vector<std::vector<GPoly>>(4, std::vector<GPoly>(4, GPoly(M.H.body))));
    auto dH = exterior_derivative(M.H);
    REQUIRE(dH.size() == 1);
    CHECK(dH.at({0, 1, 2, 3}) == GPoly::constant(M.H.body, -1));
    auto res = build_exact_courant(M);
    CHECK_FALSE(res.report.verdicts.at("closed"));
    CHECK_FALSE(res.report.verdicts.at("homological"));
    CHECK(res.report.verdicts.at("agree"));
    CHECK(res.report.verdicts.at("residual_is_dH"));
    // c3 = nabla* c2 keeps the classical morphism valid without closedness
    CHECK(res.report.verdicts.at("morphism"));
    // residual only along xi and P
    GVectorField R = homological_residual(res.Q);
    for (std::size_t z = 0; z < R.chart()->size(); ++z) {
        const std::string& n = (*R.chart())[z].name;
        if (n.rfind("xi_", 0) != 0 && n.rfind("p_", 0) != 0) CHECK(R.coeff(z).is_zero());
    }
}

// ---------------------------------------------------------------------------------------------
// transitive Courant algebroids

TEST_CASE("quadratic bundle checks") {
    ChartPtr body = euclidean(1);
    CHECK(check_quadratic_bundle(so3_bundle(body)).passed);
    auto g = so3_bundle(body);
    g.pairing[0][0] = 1;  // no longer invariant
    auto rep = check_quadratic_bundle(g);
    CHECK_FALSE(rep.verdicts.at("invariant"));
    CHECK(rep.verdicts.at("nondegenerate"));
    g = so3_bundle(body);
    g.pairing[2][2] = 0;
    CHECK_FALSE(check_quadratic_bundle(g).verdicts.at("nondegenerate"));
}

TEST_CASE("so(3) Killing bundle over R^3") {
    auto res = build_transitive_courant(transitive_so3());
    CHECK(res.report.passed);
    for (const char* k : {"struct_pairing", "struct_bracket", "struct_bianchi", "struct_curvature", "struct_pontryagin",
                          "homological", "agree", "projects_to_extension", "drop_r_is_extension", "morphism",
                          "components"})
        CHECK_MESSAGE(res.report.verdicts.at(k), k);
    auto pf = pushforward_check(res.Q_tot, res.chart.algebroid_gens());
    CHECK(pf.projectable);
}

TEST_CASE("Pontryagin demo lifts exactly at c = -2") {
    auto res = build_transitive_courant(pontryagin_demo(-2));
    CHECK(res.report.passed);
    CHECK(is_homological(res.Q_tot));
}

TEST_CASE("dH != 0 with omega = 0 fails along d/dr with quartic v terms") {
    TransitiveCourantModel T;
    ChartPtr body = euclidean(4);
    T.g = so3_bundle(body);
    T.connection.assign(4, matrix_zero(3, body));
    T.H.body = body;
    T.H.coeffs[{0, 1, 2}] = parse_poly("x4", body);
    auto res = build_transitive_courant(T);
    CHECK_FALSE(res.report.verdicts.at("struct_pontryagin"));
    CHECK_FALSE(res.report.verdicts.at("homological"));
    CHECK(res.report.verdicts.at("agree"));
    CHECK_FALSE(res.report.verdicts.at("morphism"));
    CHECK(res.report.verdicts.at("morphism_agree"));
    GVectorField R = homological_residual(res.Q_tot);
    std::size_t r = res.chart.chart->index_of("r");
    for (std::size_t z = 0; z < R.size(); ++z)
        if (z != r) CHECK(R.coeff(z).is_zero());
    auto split = bidegree_split(R, res.chart.xi, res.chart.eta);
    REQUIRE(split.size() == 1);
    CHECK(split.begin()->first == Bidegree{4, 0});
}

TEST_CASE("omega with C_nabla != ad omega breaks the curvature equation and the morphism") {
    TransitiveCourantModel T = pontryagin_demo(-2);
    T.omega[{0, 1}] = frame_unit(3, 1, T.g.body);
    auto res = build_transitive_courant(T);
    CHECK_FALSE(res.report.verdicts.at("struct_curvature"));
    CHECK_FALSE(res.report.verdicts.at("homological"));
    CHECK(res.report.verdicts.at("agree"));
    CHECK_FALSE(res.report.verdicts.at("morphism"));
    CHECK(res.report.verdicts.at("morphism_agree"));
}

TEST_CASE("degenerate pairing is rejected") {
    TransitiveCourantModel T = transitive_so3();
    T.g.pairing[1][1] = 0;
    CHECK_THROWS(build_transitive_courant(T));
}

TEST_CASE("J is a DGLA morphism on samples") {
    auto res = build_transitive_courant(pontryagin_demo(-2));
    const ClassicalDgla& D = res.target;
    const auto& c = res.chart;
    LinearFrame L{c.module, {}, {0, 0, 0}, 1, D.body()};
    for (const char* n : {"e1", "e2", "e3"}) L.fiber.push_back(c.module->index_of(n));
    std::size_t r = c.module->index_of("r");
    auto J = [&](const ClassicalElement& x) { return embed_quadratic(D, x, c.module, L, r); };

    Rng rng(11);
    std::vector<ClassicalElement> xs = D.sample_elements();
    for (int i = 0; i < 6; ++i) {
        const auto& base = xs[std::uniform_int_distribution<std::size_t>(0, xs.size() - 1)(rng)];
        xs.push_back(D.scale(random_poly(rng, D.body(), 2), base));
    }
    VectorFieldDgla W(c.module, res.Q_RW);
    std::vector<GVectorField> images;
    for (const auto& x : xs) {
        images.push_back(J(x));
        CHECK(J(D.differential(x)) == W.differential(J(x)));
        for (const auto& y : xs) CHECK(J(D.bracket(x, y)) == lie_bracket(J(x), J(y)));
    }
    CHECK(check_dgla(W, images).passed);
}

// ---------------------------------------------------------------------------------------------
// standard cocycle and Pontryagin obstruction

TEST_CASE("standard cocycle of the so(3) model") {
    TransitiveCourantModel T = transitive_so3();
    SUBCASE("H constant") {}
    SUBCASE("H = 0") { T.H.coeffs.clear(); }
    auto res = standard_cocycle_and_pontryagin(T);
    CHECK(res.report.passed);
    CHECK(res.report.details.at("d_A C") == "0");
    CHECK(res.obstruction.empty());
    // pure g_M block: -1/2 <[e1,e2],e3> = -1/2 (-2) = 1
    const ChartPtr& A = res.cocycle.chart();
    std::vector<std::size_t> vs;
    for (const char* n : {"dx1", "dx2", "dx3"}) vs.push_back(A->index_of(n));
    GPoly pure = poly_zero_out(res.cocycle, vs);
    CHECK(pure == parse_poly("e1 e2 e3", A));
}

TEST_CASE("Pontryagin obstruction as a function of c") {
    // dH = c dx1dx2dx3dx4, <w ^ w> = 2 <e1,e1> dx1dx2dx3dx4 = -4 dx1dx2dx3dx4
    for (int c : {-2, 1, 0, 5}) {
        auto res = standard_cocycle_and_pontryagin(pontryagin_demo(c));
        CHECK(res.report.verdicts.at("pontryagin_closed"));
        CHECK(res.report.verdicts.at("closed_iff_pontryagin"));
        if (c == -2) {
            CHECK(res.obstruction.empty());
            CHECK(res.report.verdicts.at("lift_exists"));
        } else {
            REQUIRE(res.obstruction.size() == 1);
            CHECK(res.obstruction.at({0, 1, 2, 3}) == GPoly::constant(euclidean(4), c + 2));
            CHECK(res.report.details.at("d_A C") != "0");
        }
    }
    auto p = pontryagin_form(pontryagin_demo(0));
    REQUIRE(p.size() == 1);
    CHECK(p.at({0, 1, 2, 3}) == GPoly::constant(euclidean(4), -4));
}

TEST_CASE("standard cocycle needs the first four structure equations") {
    TransitiveCourantModel T = pontryagin_demo(-2);
    T.omega[{0, 1}] = frame_unit(3, 1, T.g.body);
    CHECK_THROWS(standard_cocycle_and_pontryagin(T));
}

// ---------------------------------------------------------------------------------------------
// constants

TEST_CASE("contraction signs and the Hamiltonian constant") {
    CHECK(contraction_sign_table(4) == std::vector<long>{1, -1, -1, 1});
    auto C = hamiltonian_constant();
    CHECK(C.from_homological == Rational(-1, 2));
    CHECK(C.from_poisson == C.from_homological);
    CHECK(C.stable);
}

TEST_CASE("R[2] derived brackets are reported") {
    auto rep = r2_derived_brackets(transitive_so3());
    CHECK_FALSE(rep.check.empty());
}
