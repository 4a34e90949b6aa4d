// Koszul signs, unshuffles and the nested-contraction sign sequence.
#pragma once

#include <cstddef>
#include <vector>

namespace gradedq {

inline int sign_of(int exponent) { return (exponent & 1) ? -1 : 1; }

// `order` lists original positions in their new sequence. Returns the Koszul sign of the
// reordering for elements of the given degrees; `antisym` multiplies in the permutation sign.
int reorder_sign(const std::vector<int>& degrees, const std::vector<std::size_t>& order, bool antisym);

struct Unshuffle {
    std::vector<std::size_t> head;  // tau(1) < ... < tau(i)
    std::vector<std::size_t> tail;  // tau(i+1) < ... < tau(n)
};
// all (i, n-i) unshuffles of positions 0..n-1
std::vector<Unshuffle> unshuffles(std::size_t n, std::size_t i);

inline std::vector<std::size_t> concat(const Unshuffle& u) {
    std::vector<std::size_t> o = u.head;
    o.insert(o.end(), u.tail.begin(), u.tail.end());
    return o;
}

struct ContractionSlot {
    int id;      // equal ids denote the same (even) coordinate
    int degree;
};
// Scalar s with [[..[xi^T W, d/dxi_T1], ..], d/dxi_Tk] = s W, for W independent of xi and
// xi^T W of the given field degree. Factors are listed in chart order; repeated ids are powers.
// Evaluated symbolically on a scratch chart; zero when the monomial vanishes.
long nested_contraction_factor(const std::vector<ContractionSlot>& factors, int field_degree = 1);

// sigma(k) for k odd degree-1 factors; closed form (-1)^{k(k-1)/2}
int contraction_sign(int k);

}  // namespace gradedq
