// Random charts, polynomials and vector fields for property tests.
#pragma once

#include <random>
#include <string>
#include <vector>

#include "gradedq/gvf.hpp"

namespace gradedq::testing {

using Rng = std::mt19937_64;

inline Rational random_rational(Rng& rng, int range = 3) {
    std::uniform_int_distribution<int> num(-range, range), den(1, 2);
    int n = 0;
    while (n == 0) n = num(rng);
    Rational q(n, den(rng));
    q.canonicalize();
    return q;
}

// up to `even` even generators (degrees 0 or 2) followed by `odd` odd generators (degrees 1 or 3)
inline ChartPtr random_chart(Rng& rng, int even, int odd) {
    std::vector<Generator> g;
    std::uniform_int_distribution<int> coin(0, 3);
    for (int i = 0; i < even; ++i) g.push_back({"x" + std::to_string(i + 1), coin(rng) == 0 ? 2 : 0});
    for (int i = 0; i < odd; ++i) g.push_back({"t" + std::to_string(i + 1), coin(rng) == 0 ? 3 : 1});
    std::shuffle(g.begin(), g.end(), rng);
    return make_chart(std::move(g));
}

inline Monomial random_monomial(Rng& rng, const Chart& c, int max_exp = 2) {
    Monomial m{std::vector<std::uint16_t>(c.size(), 0)};
    std::uniform_int_distribution<int> pick(0, 2);
    for (std::size_t i = 0; i < c.size(); ++i) {
        int e = pick(rng);
        if (c.odd(i)) e = (e == 2) ? 1 : 0;
        else e = std::min(e, max_exp);
        m.exp[i] = static_cast<std::uint16_t>(e);
    }
    return m;
}

inline GPoly random_poly(Rng& rng, const ChartPtr& c, int terms = 4) {
    GPoly p(c);
    for (int k = 0; k < terms; ++k) p.add_term(random_monomial(rng, *c), random_rational(rng));
    return p;
}

// homogeneous of the given degree; may come out zero when few monomials fit
inline GPoly random_homogeneous(Rng& rng, const ChartPtr& c, int degree, int terms = 3, int tries = 200) {
    GPoly p(c);
    int found = 0;
    for (int t = 0; t < tries && found < terms; ++t) {
        Monomial m = random_monomial(rng, *c);
        if (m.degree(*c) != degree) continue;
        p.add_term(m, random_rational(rng));
        ++found;
    }
    return p;
}

inline GVectorField random_field(Rng& rng, const ChartPtr& c, int degree, int density = 2) {
    GVectorField X(c);
    for (std::size_t z = 0; z < c->size(); ++z) {
        if (std::uniform_int_distribution<int>(0, 2)(rng) == 0) continue;
        int d = degree + c->degree(z);
        if (d < 0) continue;
        X.set(z, random_homogeneous(rng, c, d, density, 60));
    }
    return X;
}

}  // namespace gradedq::testing
