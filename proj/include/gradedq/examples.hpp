// Ready-made models for the example catalog and the test suites.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gradedq/constructions.hpp"

namespace gradedq::examples {

ChartPtr euclidean(std::size_t n, const std::string& prefix = "x");

// [e1,e2] = e3 and cyclic
std::map<Tuple, FrameVector> so3_brackets(const ChartPtr& body);
// Killing form of so(3) in the basis above: -2 on the diagonal
std::vector<std::vector<Rational>> so3_killing();
QuadraticBundleModel so3_bundle(const ChartPtr& body);

AlgebroidModel tangent_algebroid(const ChartPtr& body);

// so(3)-bundle over R^1 with nabla = d + x ad_{e3}, omega = 0
ExtensionModel atiyah_so3();
// so(3) + R z over R^3, nabla trivial, omega(d2, d3) = x1 z
ExtensionModel atiyah_broken();
// nabla = d + ad(theta), omega = curvature of theta, on R^3 with so(3)
ExtensionModel atiyah_curved();

// TR^2 acting on V_0 + V_{-1} with a nonzero differential, curved nabla and the matching omega_2
RuthModel ruth_two_term();

// TR^3 on the trivial line bundle, eta = dx1 dx2 dx3
CocycleModel cocycle_three_form();

struct McExample {
    ChartPtr body;
    MultibracketTable algebra;
    GVectorField alpha;
};
// so(3) over R^3 with alpha = [Z, Q_dR] for Z = (x1 x2 + x3^2) ad_{e3}
McExample mc_twist();

// H = (1 + x2) dx1 dx2 dx3 on R^3; the connection is curved when `curved` is set
ExactCourantModel exact_courant_r3(bool curved);

// so(3) with the Killing pairing over R^3, nabla trivial, omega = 0, H = 2 dx1 dx2 dx3
TransitiveCourantModel transitive_so3();

// R^4, so(3), theta = x1 e1 dx2 + x3 e1 dx4, omega = e1 (dx1 dx2 + dx3 dx4), H = c x1 dx2 dx3 dx4
TransitiveCourantModel pontryagin_demo(const Rational& c);

// aff(1) acting on (eta1, eta2) through exp(ad Z)(Q_A + Q_M) for a seeded random degree 0 Z
struct RandomAction {
    FiberProductChart chart;
    GVectorField Q;
};
RandomAction random_action(std::uint64_t seed);

struct CatalogEntry {
    std::string name;
    std::string construction;
    std::string description;
};
std::vector<CatalogEntry> catalog();

}  // namespace gradedq::examples
