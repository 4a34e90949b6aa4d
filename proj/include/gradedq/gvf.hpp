// Vector fields on a graded chart, stored as their values on the generators.
#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gradedq/gca.hpp"

namespace gradedq {

class GVectorField {
public:
    GVectorField() = default;
    explicit GVectorField(ChartPtr chart);

    // coordinate derivation d/d(gen)
    static GVectorField partial(ChartPtr chart, std::size_t gen);

    const ChartPtr& chart() const { return chart_; }
    std::size_t size() const { return coeffs_.size(); }
    const GPoly& coeff(std::size_t gen) const { return coeffs_.at(gen); }
    const std::vector<GPoly>& coeffs() const { return coeffs_; }
    void set(std::size_t gen, GPoly p);
    void add(std::size_t gen, const GPoly& p);

    bool is_zero() const;
    // degree of a homogeneous field; nullopt for zero or inhomogeneous fields
    std::optional<int> degree() const;
    bool is_homogeneous() const;
    std::size_t term_count() const;

    GVectorField& operator+=(const GVectorField& o);
    GVectorField& operator-=(const GVectorField& o);
    GVectorField& operator*=(const Rational& c);
    GVectorField operator-() const;
    bool operator==(const GVectorField& o) const;

    // "gen: poly; gen: poly" over the nonzero components
    std::string to_string() const;

private:
    ChartPtr chart_;
    std::vector<GPoly> coeffs_;
};

GVectorField operator+(GVectorField a, const GVectorField& b);
GVectorField operator-(GVectorField a, const GVectorField& b);
GVectorField operator*(const Rational& c, GVectorField a);
// left multiplication by a function: (f X)(z) = f X(z)
GVectorField operator*(const GPoly& f, const GVectorField& X);

GPoly vf_apply(const GVectorField& X, const GPoly& f);
// graded commutator; both fields must be homogeneous (zero fields are allowed)
GVectorField lie_bracket(const GVectorField& X, const GVectorField& Y);
// [Q,Q] = 2 Q(Q(z)) on generators
GVectorField homological_residual(const GVectorField& Q);
bool is_homological(const GVectorField& Q);

// set generators to zero inside every coefficient
GVectorField vf_zero_out(const GVectorField& X, const std::vector<std::size_t>& gens);
// remove the components along the given generators
GVectorField vf_drop(const GVectorField& X, const std::vector<std::size_t>& gens);
GVectorField restrict_and_project(const GVectorField& X, const std::vector<std::size_t>& zeroed,
                                  const std::vector<std::size_t>& dropped);
// re-express on another chart; components and coefficients must only use shared generators
GVectorField vf_transport(const GVectorField& X, const ChartPtr& target);

struct PushforwardResult {
    bool projectable = false;
    GVectorField image;                  // on the chart of kept generators, when projectable
    std::vector<std::string> offending;  // kept generators whose coefficient leaves the kept set
};
PushforwardResult pushforward_check(const GVectorField& X, const std::vector<std::size_t>& kept);

// true when X has no components along the listed (body) generators
bool vertical_check(const GVectorField& X, const std::vector<std::size_t>& body);

ChartPtr subchart(const ChartPtr& chart, const std::vector<std::size_t>& gens);

// Split every coefficient monomial by (number of xi factors, number of eta factors).
using Bidegree = std::pair<int, int>;
std::map<Bidegree, GVectorField> bidegree_split(const GVectorField& X, const std::vector<std::size_t>& xi,
                                                const std::vector<std::size_t>& eta);

}  // namespace gradedq
