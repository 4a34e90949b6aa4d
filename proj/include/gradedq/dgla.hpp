// DGLA targets concentrated in degrees 0, -1, -2 and the morphism equations from a Lie algebroid.
#pragma once

#include <algorithm>
#include <concepts>
#include <map>
#include <string>
#include <vector>

#include "gradedq/linfty.hpp"
#include "gradedq/signs.hpp"

namespace gradedq {

// square matrix of body functions, m[row][col]; a map W -> W sends e_col to sum_row m[row][col] e_row
using Matrix = std::vector<std::vector<GPoly>>;

Matrix matrix_zero(std::size_t n, const ChartPtr& body);
bool matrix_is_zero(const Matrix& m);
Matrix matrix_mul(const Matrix& a, const Matrix& b);
Matrix matrix_add(const Matrix& a, const Matrix& b, const Rational& c = 1);
FrameVector matrix_apply(const Matrix& m, const FrameVector& v);
// entrywise derivative along a body vector field
Matrix matrix_derive(const GVectorField& X, const Matrix& m);

// covariant differential operator D(f e_b) = X(f) e_b + f sum_a M[a][b] e_a
struct Cdo {
    GVectorField symbol;
    Matrix matrix;
};
FrameVector cdo_apply(const Cdo& D, const FrameVector& s);
Cdo cdo_commutator(const Cdo& a, const Cdo& b);

// Element of a classical DGLA, stored by homogeneous parts.
//   degree  0: a covariant differential operator
//   degree -1: a section, plus an endomorphism for the Sheng-Zhu DGLA
//   degree -2: a section of the lowest bundle (rank one for the quadratic DGLA)
struct ClassicalElement {
    Cdo cdo;
    FrameVector mid;
    Matrix mid_endo;
    FrameVector low;

    bool is_zero() const;
    bool operator==(const ClassicalElement& o) const;
};

enum class ClassicalKind {
    Gauge,      // D(g_M): sections of g_M in degree -1, derivations in degree 0
    Quadratic,  // D(g_M, <,>): adds functions in degree -2
    ShengZhu,   // D(T*M + T*M) on coordinates of the body
};

class ClassicalDgla {
public:
    using Element = ClassicalElement;

    // bundle of Lie algebras with brackets [e_a, e_b] = sum_c brackets[{a,b}][c] e_c
    static ClassicalDgla gauge(ChartPtr body, std::vector<std::string> names, std::map<Tuple, FrameVector> brackets);
    static ClassicalDgla quadratic(ChartPtr body, std::vector<std::string> names, std::map<Tuple, FrameVector> brackets,
                                   std::vector<std::vector<Rational>> pairing);
    static ClassicalDgla sheng_zhu(ChartPtr body);

    ClassicalKind kind() const { return kind_; }
    const ChartPtr& body() const { return body_; }
    std::size_t rank() const { return names_.size(); }
    const std::vector<std::string>& names() const { return names_; }
    const std::vector<std::vector<Rational>>& pairing() const { return pairing_; }
    // [e_a, e_b] in g_M; zero for Sheng-Zhu
    FrameVector fiber_bracket(const FrameVector& u, const FrameVector& v) const;
    Matrix ad(const FrameVector& u) const;
    Rational pair(std::size_t a, std::size_t b) const { return pairing_.at(a).at(b); }

    Element zero() const;
    Element from_cdo(Cdo D) const;
    Element from_mid(FrameVector s, Matrix endo = {}) const;
    Element from_low(FrameVector s) const;
    Element part(const Element& x, int degree) const;
    // degrees of the nonzero homogeneous parts
    std::vector<int> degrees(const Element& x) const;

    Element add(Element a, const Element& b, const Rational& c = 1) const;
    Element scale(const GPoly& f, const Element& x) const;
    Element bracket(const Element& a, const Element& b) const;
    Element differential(const Element& x) const;
    std::string to_string(const Element& x) const;

    // spanning elements with coefficients 1 and the first body coordinate
    std::vector<Element> sample_elements() const;

private:
    Element bracket_h(const Element& a, int p, const Element& b, int q) const;

    ClassicalKind kind_ = ClassicalKind::Gauge;
    ChartPtr body_;
    std::vector<std::string> names_;
    std::map<Tuple, FrameVector> brackets_;
    std::vector<std::vector<Rational>> pairing_;
};

// (X(M), -[Q_M, -], [ , ]) on a chart whose degree 0 generators form the body
class VectorFieldDgla {
public:
    using Element = GVectorField;

    VectorFieldDgla(ChartPtr chart, GVectorField QM);
    const ChartPtr& chart() const { return chart_; }
    const GVectorField& QM() const { return QM_; }

    Element zero() const { return GVectorField(chart_); }
    Element part(const Element& x, int degree) const;
    std::vector<int> degrees(const Element& x) const;
    Element add(Element a, const Element& b, const Rational& c = 1) const;
    Element scale(const GPoly& f, const Element& x) const;
    Element bracket(const Element& a, const Element& b) const;
    Element differential(const Element& x) const;
    std::string to_string(const Element& x) const { return x.is_zero() ? "0" : x.to_string(); }

private:
    ChartPtr chart_;
    GVectorField QM_;
};

template <class D>
concept DglaTarget = requires(const D& d, const typename D::Element& x, const GPoly& f) {
    { d.zero() } -> std::same_as<typename D::Element>;
    { d.add(x, x) } -> std::same_as<typename D::Element>;
    { d.scale(f, x) } -> std::same_as<typename D::Element>;
    { d.bracket(x, x) } -> std::same_as<typename D::Element>;
    { d.differential(x) } -> std::same_as<typename D::Element>;
    { d.degrees(x) } -> std::same_as<std::vector<int>>;
    { d.part(x, 0) } -> std::same_as<typename D::Element>;
    { d.to_string(x) } -> std::same_as<std::string>;
    { x.is_zero() } -> std::same_as<bool>;
};

// Lie algebroid source given on a degree 0 frame: brackets of frame elements with body coefficients.
struct LieSource {
    ChartPtr body;
    std::vector<std::string> names;
    std::map<Tuple, FrameVector> brackets;  // keys a < b

    std::size_t rank() const { return names.size(); }
    FrameVector bracket(std::size_t a, std::size_t b) const;
};

// C-infinity(M)-linear L-infinity morphism from a Lie algebroid into a DGLA, by values on strictly increasing tuples.
template <DglaTarget D>
struct LieMorphism {
    LieSource source;
    std::map<Tuple, typename D::Element> components;
};

namespace detail {

template <DglaTarget D>
typename D::Element component_on(const D& target, const LieMorphism<D>& F, const Tuple& t) {
    std::vector<std::size_t> order(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return t[a] < t[b]; });
    Tuple key;
    for (auto o : order) key.push_back(t[o]);
    for (std::size_t i = 1; i < key.size(); ++i)
        if (key[i] == key[i - 1]) return target.zero();
    auto it = F.components.find(key);
    if (it == F.components.end()) return target.zero();
    std::vector<int> zeros(t.size(), 0);
    int s = reorder_sign(zeros, order, true);
    return s > 0 ? it->second : target.add(target.zero(), it->second, -1);
}

template <DglaTarget D>
typename D::Element component_linear(const D& target, const LieMorphism<D>& F, const FrameVector& v, const Tuple& rest) {
    auto acc = target.zero();
    for (std::size_t a = 0; a < v.size(); ++a) {
        if (v[a].is_zero()) continue;
        Tuple t{a};
        t.insert(t.end(), rest.begin(), rest.end());
        auto c = component_on(target, F, t);
        if (!c.is_zero()) acc = target.add(acc, target.scale(v[a], c));
    }
    return acc;
}

}  // namespace detail

// For every n and a_1 < ... < a_n:
//   sum_{i<j} (-1)^{i+j+1} F_{n-1}([a_i,a_j], rest)
//     = d F_n(a) + sum_s sum_{tau in Sh(s,n-s), tau(1)<tau(s+1)} sgn(tau) (-1)^{s-1} [F_s(..), F_{n-s}(..)]
template <DglaTarget D>
CheckReport check_lie_morphism(const D& target, const LieMorphism<D>& F, int up_to_arity) {
    CheckReport rep;
    rep.check = "lie_morphism";
    rep.conventions.push_back(
        "sum_{i<j} (-1)^{i+j+1} F_{n-1}([a_i,a_j],..) = d F_n + sum_s sum_tau sgn(tau) (-1)^{s-1} [F_s, F_{n-s}]");
    std::vector<int> zeros(F.source.rank(), 0);
    for (int n = 1; n <= up_to_arity; ++n) {
        for (const Tuple& a : canonical_tuples(zeros, Flavor::Linfty, n)) {
            auto lhs = target.zero();
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) {
                    Tuple rest;
                    for (int k = 0; k < n; ++k)
                        if (k != i && k != j) rest.push_back(a[k]);
                    auto term = detail::component_linear(target, F, F.source.bracket(a[i], a[j]), rest);
                    lhs = target.add(lhs, term, sign_of(i + j + 1));
                }
            auto rhs = target.differential(detail::component_on(target, F, a));
            for (int s = 1; s < n; ++s) {
                for (const auto& u : unshuffles(n, s)) {
                    if (u.head[0] > u.tail[0]) continue;
                    Tuple h, t;
                    for (auto p : u.head) h.push_back(a[p]);
                    for (auto p : u.tail) t.push_back(a[p]);
                    int sg = reorder_sign(std::vector<int>(n, 0), concat(u), true) * sign_of(s - 1);
                    auto b = target.bracket(detail::component_on(target, F, h), detail::component_on(target, F, t));
                    if (!b.is_zero()) rhs = target.add(rhs, b, sg);
                }
            }
            auto res = target.add(lhs, rhs, -1);
            if (!res.is_zero()) {
                std::string where = "arity " + std::to_string(n) + " (";
                for (int k = 0; k < n; ++k) where += (k ? ", " : "") + F.source.names.at(a[k]);
                rep.fail({where + ")", n, target.to_string(res), std::nullopt});
            }
        }
    }
    return rep;
}

// Graded antisymmetry, Jacobi, d^2 = 0 and the derivation rule on the given elements.
template <DglaTarget D>
CheckReport check_dgla(const D& target, const std::vector<typename D::Element>& elements) {
    CheckReport rep;
    rep.check = "dgla";
    rep.conventions.push_back("[x,y] = -(-1)^{|x||y|}[y,x]; [x,[y,z]] = [[x,y],z] + (-1)^{|x||y|}[y,[x,z]]");
    rep.conventions.push_back("d[x,y] = [dx,y] + (-1)^{|x|}[x,dy]");
    // split into homogeneous parts first
    std::vector<std::pair<typename D::Element, int>> hom;
    for (const auto& e : elements)
        for (int d : target.degrees(e)) hom.emplace_back(target.part(e, d), d);
    auto report = [&](const std::string& law, const std::string& where, const typename D::Element& r) {
        if (!r.is_zero()) rep.fail({law + " " + where, -1, target.to_string(r), std::nullopt});
    };
    for (std::size_t i = 0; i < hom.size(); ++i) {
        const auto& [x, dx] = hom[i];
        report("d^2", std::to_string(i), target.differential(target.differential(x)));
        for (std::size_t j = 0; j < hom.size(); ++j) {
            const auto& [y, dy] = hom[j];
            auto xy = target.bracket(x, y);
            std::string ij = std::to_string(i) + "," + std::to_string(j);
            report("antisymmetry", ij, target.add(xy, target.bracket(y, x), sign_of(dx * dy)));
            auto der = target.add(target.differential(xy), target.bracket(target.differential(x), y), -1);
            der = target.add(der, target.bracket(x, target.differential(y)), -sign_of(dx));
            report("derivation", ij, der);
            for (std::size_t k = 0; k < hom.size(); ++k) {
                const auto& [z, dz] = hom[k];
                (void)dz;
                auto jac = target.add(target.bracket(x, target.bracket(y, z)), target.bracket(xy, z), -1);
                jac = target.add(jac, target.bracket(y, target.bracket(x, z)), -sign_of(dx * dy));
                report("jacobi", ij + "," + std::to_string(k), jac);
            }
        }
    }
    return rep;
}

}  // namespace gradedq
