// Multibracket tables on finite frames, decalage, derived brackets and morphism checks.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "gradedq/gvf.hpp"
#include "gradedq/report.hpp"

namespace gradedq {

enum class Flavor {
    Linfty,   // brackets of degree 2-k, graded antisymmetric
    Shifted,  // L-infinity[1]: brackets of degree 1, graded symmetric
};

struct FrameElement {
    std::string name;
    int degree = 0;
    bool operator==(const FrameElement&) const = default;
};

using Tuple = std::vector<std::size_t>;
// coefficients over the body chart, one per frame element
using FrameVector = std::vector<GPoly>;

FrameVector frame_zero(std::size_t rank, const ChartPtr& body);
FrameVector frame_unit(std::size_t rank, std::size_t i, const ChartPtr& body);
bool frame_is_zero(const FrameVector& v);
void frame_add(FrameVector& acc, const FrameVector& v, const Rational& c = 1);
FrameVector frame_scale(const GPoly& f, const FrameVector& v);
std::string frame_to_string(const FrameVector& v, const std::vector<FrameElement>& frame);

struct MultibracketTable {
    Flavor flavor = Flavor::Linfty;
    ChartPtr body;
    std::vector<FrameElement> frame;
    std::map<Tuple, FrameVector> entries;  // keys are non-decreasing index tuples
    std::vector<GVectorField> anchor;      // body vector field per frame element; empty means none

    MultibracketTable() = default;
    MultibracketTable(Flavor f, ChartPtr body_chart, std::vector<FrameElement> fr);

    std::size_t rank() const { return frame.size(); }
    bool has_anchor() const { return !anchor.empty(); }
    const GVectorField& anchor_of(std::size_t i) const { return anchor.at(i); }
    void set_anchor(std::size_t i, GVectorField X);

    // sign relating an ordered tuple to its sorted key; 0 when the tuple vanishes by symmetry
    int canonical_sign(const Tuple& t, Tuple& sorted) const;
    // store a value given on any ordering
    void set(const Tuple& t, const FrameVector& v);
    FrameVector value(const Tuple& t) const;
    int max_arity() const;

    // multilinear extension over body functions, with the anchor Leibniz rule in arity 2
    FrameVector bracket(const std::vector<FrameVector>& args) const;
};

// non-decreasing tuples of a given size allowed by the symmetry of the flavor
std::vector<Tuple> canonical_tuples(const std::vector<int>& degrees, Flavor flavor, std::size_t size);

MultibracketTable decalage(const MultibracketTable& t);

// Derived brackets {s_1..s_k} = P[..[Q, d/dxi_1]..], d/dxi_k] and anchor [[Q, d/dxi], f].
// `body` and `fiber` index the chart of Q; frame element i is the i-th fiber generator.
MultibracketTable derived_brackets(const GVectorField& Q, const std::vector<std::size_t>& body,
                                   const std::vector<std::size_t>& fiber);

// Inverse of derived_brackets: the degree 1 field on `chart` with the given brackets and anchor.
GVectorField field_from_brackets(const MultibracketTable& table, const ChartPtr& chart,
                                 const std::vector<std::size_t>& body, const std::vector<std::size_t>& fiber);

CheckReport check_linfty(const MultibracketTable& t, int up_to_arity);

// Curved morphism from an L-infinity[1] source into the vector fields of a target chart,
// with bracket {P,R} = (-1)^{|P|}[P,R] and zero differential.
struct CurvedMorphism {
    MultibracketTable source;  // Shifted flavor
    ChartPtr target;
    std::map<Tuple, GVectorField> components;  // empty key holds phi_0

    GVectorField component(const Tuple& t) const;  // any ordering, zero when absent
};

CheckReport check_curved_morphism(const CurvedMorphism& m, int up_to_arity);
// same question answered through the Maurer-Cartan equation for phi_0 plus the
// non-curved equations for the phi_0-twisted differential
CheckReport check_twisted_morphism(const CurvedMorphism& m, int up_to_arity);

std::string tuple_to_string(const Tuple& t, const std::vector<FrameElement>& frame);

}  // namespace gradedq
