// Builders and verifiers for algebroids, extensions, representations up to homotopy, cocycles,
// Maurer-Cartan twists and Courant algebroids.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gradedq/correspondence.hpp"
#include "gradedq/dgla.hpp"
#include "gradedq/linfty.hpp"

namespace gradedq {

// ---------------------------------------------------------------------------------------------
// shared helpers

// body generators followed by the given ones
ChartPtr extend_chart(const ChartPtr& body, const std::vector<Generator>& more);
GPoly lift(const GPoly& f, const ChartPtr& chart);

// Linear coordinates on a graded bundle W[shift]: the coordinate dual to a frame element of degree d
// has degree shift - d, and the frame element acts as the constant field d/d(coordinate).
struct LinearFrame {
    ChartPtr chart;
    std::vector<std::size_t> fiber;  // chart index per frame element
    std::vector<int> degrees;        // frame degrees
    int shift = 1;
    ChartPtr body;                   // chart of the matrix entries
};
// The fiber-linear field Y with [Y, d/d eta_w] = sum_a B[a][w] d/d eta_a, plus the symbol on the body.
// B has degree op_degree: B[a][w] != 0 only if degrees[a] = degrees[w] + op_degree.
GVectorField linear_field(const LinearFrame& L, const Matrix& B, int op_degree,
                          const GVectorField& symbol = GVectorField());
// inverse of linear_field on fields that are linear along the fiber
Matrix linear_matrix(const LinearFrame& L, const GVectorField& Y, int op_degree);
// sum_a s_a d/d eta_a
GVectorField contraction_field(const LinearFrame& L, const FrameVector& s);

// true when every fiber coefficient is linear in the fiber coordinates and the other coefficients do not
// depend on them
bool is_fiberwise_linear(const GVectorField& X, const std::vector<std::size_t>& fiber);

// coefficient of each strictly increasing tuple of xi generators in a polynomial; values live on `target`
std::map<Tuple, GPoly> split_by_monomials(const GPoly& f, const std::vector<std::size_t>& xi, const ChartPtr& target);

// ---------------------------------------------------------------------------------------------
// Lie algebroids and Lie n-algebroids

// L-infinity table with anchor; frame names double as coordinate names on A[1]
using AlgebroidModel = MultibracketTable;

AlgebroidModel make_lie_algebroid(ChartPtr body, const std::vector<std::string>& names,
                                  std::vector<GVectorField> anchor, const std::map<Tuple, FrameVector>& brackets);
// body coordinates followed by one coordinate of degree 1 - d per frame element
ChartPtr algebroid_chart(const AlgebroidModel& A);
// -1/2 xi^i xi^j c_ij^k d/dxi^k + rho_i^a xi^i d/dx^a on algebroid_chart, and higher brackets for n >= 2
GVectorField build_algebroid_Q(const AlgebroidModel& A);

// ---------------------------------------------------------------------------------------------
// Extensions of a Lie algebroid by a bundle of Lie algebras

struct ExtensionModel {
    AlgebroidModel base;                           // degree 0 frame with anchor
    std::vector<std::string> fiber;                // frame of g_M, also its coordinate names
    std::map<Tuple, FrameVector> fiber_brackets;   // keys a < b
    std::vector<Matrix> connection;                // nabla_{e_i} mu_b = rho(e_i) + sum_a M_i[a][b] mu_a
    std::map<Tuple, FrameVector> omega;            // keys i < j

    FrameVector omega_at(std::size_t i, std::size_t j) const;  // antisymmetric lookup
    Cdo nabla(std::size_t i) const;
};

struct ExtensionResult {
    FiberProductChart chart;      // (x; base coordinates; fiber coordinates)
    MultibracketTable total;      // bracket table of A + g_M
    GVectorField Q_tot;
    ActionModel action;
    ClassicalDgla target;                 // gauge DGLA of g_M
    LieMorphism<ClassicalDgla> morphism;  // (nabla, omega)
    CheckReport report;
};

ExtensionResult build_extension_action(const ExtensionModel& E);

// ---------------------------------------------------------------------------------------------
// Representations up to homotopy

struct RuthModel {
    AlgebroidModel base;                 // degree 0 frame with anchor
    std::vector<FrameElement> fiber;     // graded frame of V, names double as coordinate names
    // {} -> d (degree 1), {i} -> nabla_{e_i} (degree 0, symbol = anchor of e_i),
    // {i_1 < .. < i_k} -> omega_k(e_i1, .., e_ik) of degree 1 - k
    std::map<Tuple, Matrix> components;
    int shift = 1;                       // coordinates on V[shift]

    Matrix component(const Tuple& t) const;  // zero when absent
    bool operator==(const RuthModel& o) const;
};

// (x; base coordinates; V[shift] coordinates)
FiberProductChart ruth_chart(const RuthModel& R);
LinearFrame ruth_frame(const RuthModel& R, const FiberProductChart& c);
// D(v_w) = sum_a D[a][w] v_a with D[a][w] a form in the base coordinates, on algebroid_chart(base)
std::vector<std::vector<GPoly>> ruth_operator(const RuthModel& R);
// D^2(v_w) = sum_b S[b][w] v_b
std::vector<std::vector<GPoly>> ruth_square(const RuthModel& R);
// the fiber-linear field Q_A + X with iota_{D eta} = [Q_A + X, iota_eta]
GVectorField ruth_field(const RuthModel& R, const FiberProductChart& c);
// inverse of ruth_field on a fiberwise linear field
RuthModel recover_ruth(const GVectorField& Q, const FiberProductChart& c, const AlgebroidModel& base,
                       const std::vector<FrameElement>& fiber, int shift);

struct RuthResult {
    FiberProductChart chart;
    GVectorField Q_tot;
    ActionModel action;
    CheckReport report;
};
RuthResult build_ruth(const RuthModel& R);

// ---------------------------------------------------------------------------------------------
// Cocycles with values in a representation up to homotopy

struct CocycleModel {
    RuthModel ruth;              // shift is forced to degree - 1
    int degree = 2;              // n
    std::vector<GPoly> eta;      // component along each frame element of V, a form on algebroid_chart(base)
};

struct CocycleSplit {
    RuthModel ruth;
    std::vector<GPoly> eta;
};

struct CocycleResult {
    FiberProductChart chart;
    GVectorField Q_D;
    GVectorField iota_eta;
    GVectorField Q_tot;
    ActionModel action;
    CocycleSplit split;
    CheckReport report;
};
// D eta as components along the frame of V
std::vector<GPoly> cocycle_differential(const CocycleModel& C);
CocycleResult build_cocycle_action(const CocycleModel& C);
// linear plus vertical-constant parts of Q_D + iota_eta
CocycleSplit split_cocycle_field(const GVectorField& Q, const FiberProductChart& c, const AlgebroidModel& base,
                                 const std::vector<FrameElement>& fiber, int shift);

// ---------------------------------------------------------------------------------------------
// Linearization along the zero section

struct NotTangent : Error {
    using Error::Error;
};
// keeps the fiber-linear part of each component; throws NotTangent when a component does not vanish on M
ActionModel linearize_action(const ActionModel& A);

// ---------------------------------------------------------------------------------------------
// Maurer-Cartan twists

// (x; dx (degree 1); coordinates of g[1])
FiberProductChart mc_chart(const ChartPtr& body, const MultibracketTable& algebra);
// v^i d/dx^i on mc_chart
GVectorField de_rham_field(const FiberProductChart& c);

struct McResult {
    FiberProductChart chart;
    GVectorField Q;              // Q_dR + alpha + Q_g
    GVectorField mc_residual;    // D alpha - 1/2 [alpha, alpha] through the Koszul identification
    std::optional<ActionModel> action;
    CheckReport report;
};
// `alpha` lives on mc_chart(body, algebra); its coefficients must have form degree >= 1
McResult build_mc_action(const ChartPtr& body, const MultibracketTable& algebra, const GVectorField& alpha);

// ---------------------------------------------------------------------------------------------
// Courant algebroids

// antisymmetric 3-form coefficients stored on i < j < k
struct ThreeForm {
    ChartPtr body;
    std::map<Tuple, GPoly> coeffs;

    GPoly at(std::size_t i, std::size_t j, std::size_t k) const;
    std::size_t dim() const { return body->size(); }
};
// 4-form coefficients of dH on i < j < k < l
std::map<Tuple, GPoly> exterior_derivative(const ThreeForm& H);

struct ExactCourantModel {
    ThreeForm H;
    // nabla_{d_i} d_j = sum_k christoffel[i][j][k] d_k
    std::vector<std::vector<std::vector<GPoly>>> christoffel;
};

struct ExactCourantResult {
    ChartPtr chart;  // (x; v; xi; P)
    GVectorField Q;
    GVectorField literal_Q;  // with the displayed -1/6 coefficient, reported only
    ClassicalDgla target;
    LieMorphism<ClassicalDgla> morphism;
    LieMorphism<ClassicalDgla> literal_morphism;
    CheckReport report;
};
// -1/2 coefficient on the d/dxi term; see the README for the comparison with -1/6
GVectorField exact_courant_field(const ThreeForm& H, const ChartPtr& chart, const Rational& xi_coefficient);
ChartPtr exact_courant_chart(const ChartPtr& body);
ExactCourantResult build_exact_courant(const ExactCourantModel& M);

struct QuadraticBundleModel {
    ChartPtr body;
    std::vector<std::string> frame;
    std::map<Tuple, FrameVector> brackets;     // keys a < b
    std::vector<std::vector<Rational>> pairing;

    FrameVector bracket(const FrameVector& u, const FrameVector& v) const;
    GPoly pair(const FrameVector& u, const FrameVector& v) const;
};
CheckReport check_quadratic_bundle(const QuadraticBundleModel& g);

struct TransitiveCourantModel {
    QuadraticBundleModel g;
    std::vector<Matrix> connection;         // per body coordinate: nabla_i xi_j = sum_k M_i[k][j] xi_k
    std::map<Tuple, FrameVector> omega;     // keys i < j
    ThreeForm H;

    FrameVector omega_at(std::size_t i, std::size_t j) const;
    // the extension of T(body) by g_M with the same nabla and omega
    ExtensionModel extension() const;
};

struct TransitiveCourantResult {
    FiberProductChart chart;    // (x; v; xi; r) with xi = v, eta = (g coordinates, r)
    GVectorField Q_tot;
    GVectorField Q_RW;          // vertical part on the module chart
    ExtensionResult extension;
    ActionModel action;
    ClassicalDgla target;
    LieMorphism<ClassicalDgla> morphism;
    CheckReport report;
};
// the five structure equations, one sub-verdict each
CheckReport transitive_structure_equations(const TransitiveCourantModel& T);
// <w ^ w> with the 1/4 sum over S_4, on i < j < k < l
std::map<Tuple, GPoly> pontryagin_form(const TransitiveCourantModel& T);
GVectorField transitive_courant_field(const TransitiveCourantModel& T, const FiberProductChart& c);
FiberProductChart transitive_courant_chart(const TransitiveCourantModel& T);
TransitiveCourantResult build_transitive_courant(const TransitiveCourantModel& T);

// image of the quadratic DGLA element under f -> f d/dr, v -> iota_v + 1/2 <v, .> d/dr, D -> Y_D
GVectorField embed_quadratic(const ClassicalDgla& target, const ClassicalElement& x, const ChartPtr& module,
                             const LinearFrame& L, std::size_t r);

struct PontryaginResult {
    GPoly cocycle;                       // C on (x; v; xi): -1/2 <[,],> on xi^3, 1/2 <w,> on v v xi, H on v^3; Q(r) = -C
    std::map<Tuple, GPoly> obstruction;  // dH - 1/2 <w ^ w>, nonzero entries only
    CheckReport report;
};
PontryaginResult standard_cocycle_and_pontryagin(const TransitiveCourantModel& T);

// Hamiltonian Q = {H, .} on (q; xi; p) for H = rho_a^i xi^a p_i - 1/6 phi_abc xi^a xi^b xi^c
struct HamiltonianCourant {
    ChartPtr body;
    std::vector<std::vector<Rational>> pairing;             // constant g_ab
    std::vector<std::vector<GPoly>> anchor;                 // rho[a][i]
    std::map<Tuple, GPoly> phi;                             // a < b < c
};
ChartPtr hamiltonian_chart(const HamiltonianCourant& h);
// the displayed form with the unknown constant in front of phi_abc xi^a xi^b g^{cd} d/dxi^d
GVectorField hamiltonian_field(const HamiltonianCourant& h, const ChartPtr& chart, const Rational& constant);
// {H, .} expanded from the graded Poisson bracket of dp dq + 1/2 g dxi dxi
GVectorField poisson_hamiltonian_field(const HamiltonianCourant& h, const ChartPtr& chart);
struct ConstantOracle {
    Rational from_homological;  // the unique value with [Q,Q] = 0 on the reference instance
    Rational from_poisson;      // read off the Poisson expansion
    bool stable = false;
};
ConstantOracle hamiltonian_constant();

// exploratory: derived brackets on the R[2]-bundle; reported, never asserted
CheckReport r2_derived_brackets(const TransitiveCourantModel& T);

// ---------------------------------------------------------------------------------------------
// Nested contraction factors for k distinct degree 1 slots, computed on a scratch chart.
std::vector<long> contraction_sign_table(int up_to);

}  // namespace gradedq
