// Homological fields on A[1] x_M M versus L-infinity actions of A on M.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gradedq/dgla.hpp"
#include "gradedq/linfty.hpp"

namespace gradedq {

// Chart with body coordinates x (degree 0), algebroid fiber coordinates xi and module fiber coordinates eta.
struct FiberProductChart {
    ChartPtr chart;
    std::vector<std::size_t> body, xi, eta;  // increasing chart indices
    ChartPtr algebroid;                      // (x, xi)
    ChartPtr module;                         // (x, eta)

    // degree 0 generators not listed in either set form the body
    static FiberProductChart make(ChartPtr chart, const std::vector<std::string>& xi_names,
                                  const std::vector<std::string>& eta_names);
    std::vector<std::size_t> algebroid_gens() const;  // body and xi, increasing
    std::vector<std::size_t> module_gens() const;     // body and eta, increasing
};

struct ActionModel {
    FiberProductChart chart;
    MultibracketTable algebroid;  // L-infinity flavor on the xi frame, with anchor
    // F_k in L-infinity conventions, fields on the module chart keyed by sorted frame tuples; the empty key is F_0
    std::map<Tuple, GVectorField> components;

    GVectorField component(const Tuple& t) const;  // any ordering, zero when absent
    void set_component(const Tuple& t, const GVectorField& X);
    int max_arity() const;
    bool operator==(const ActionModel& o) const;
};

// Koszul sign relating the L-infinity component F_n to its shifted counterpart phi_n
int action_decalage_sign(const Tuple& t, const std::vector<FrameElement>& frame);

// Q_A[1] on the full chart from the algebroid table
GVectorField algebroid_field(const MultibracketTable& algebroid, const FiberProductChart& c);

// Shifted curved morphism into vector fields on the module chart
CurvedMorphism to_curved_morphism(const ActionModel& A);

struct InvalidField : Error {
    InvalidField(const std::string& what, std::string witness_text)
        : Error(what + (witness_text.empty() ? "" : ": " + witness_text)), witness(std::move(witness_text)) {}
    std::string witness;
};

// Rejects fields that do not project to (x, xi), non-homological fields unless `require_homological`
// is false, and, when `expected` is given, fields whose projection differs from that algebroid.
ActionModel decompose(const GVectorField& Q_tot, const FiberProductChart& c,
                      const MultibracketTable* expected = nullptr, bool require_homological = true);
// Throws InvalidField when the anchor or verticality conditions fail.
GVectorField assemble(const ActionModel& A);

// anchor and verticality conditions
CheckReport check_action_invariants(const ActionModel& A);

struct ActionCheckOptions {
    std::optional<int> arity;      // default: the exact bound from the component arities
    bool q_compatible = false;     // also require the zero section {xi = 0} to be a Q-submanifold
};
// Verdicts: "homological" (assembled field), "morphism" (curved morphism equations), "agree".
CheckReport check_action(const ActionModel& A, const ActionCheckOptions& opts = {});
int action_arity_bound(const ActionModel& A);

CheckReport check_roundtrip(const ActionModel& A);
CheckReport check_roundtrip(const GVectorField& Q_tot, const FiberProductChart& c);

struct BidegreeEntry {
    Bidegree bidegree;
    GVectorField part;
    std::vector<std::string> feeds;  // e.g. "F_2", "l_2", "m_0", or "Q_A" for the algebroid directions
};
struct BidegreeReport {
    std::vector<BidegreeEntry> entries;
    GVectorField total() const;
};
BidegreeReport bidegree_report(const GVectorField& X, const FiberProductChart& c);
// split of a field's residual, one Residual per (component, bidegree)
std::vector<Residual> residuals_by_bidegree(const GVectorField& R, const FiberProductChart& c, const std::string& prefix);

}  // namespace gradedq
