#include "gradedq/signs.hpp"

#include <map>
#include <mutex>
#include <string>

#include "gradedq/gvf.hpp"

namespace gradedq {

int reorder_sign(const std::vector<int>& degrees, const std::vector<std::size_t>& order, bool antisym) {
    int parity = 0;
    for (std::size_t p = 0; p < order.size(); ++p)
        for (std::size_t q = p + 1; q < order.size(); ++q)
            if (order[p] > order[q]) {
                parity += degrees[order[p]] * degrees[order[q]];
                if (antisym) parity += 1;
            }
    return sign_of(parity);
}

std::vector<Unshuffle> unshuffles(std::size_t n, std::size_t i) {
    std::vector<Unshuffle> out;
    if (i > n) return out;
    std::vector<std::size_t> pick(i);
    for (std::size_t k = 0; k < i; ++k) pick[k] = k;
    while (true) {
        Unshuffle u;
        u.head = pick;
        std::size_t h = 0;
        for (std::size_t p = 0; p < n; ++p) {
            if (h < i && pick[h] == p) ++h;
            else u.tail.push_back(p);
        }
        out.push_back(std::move(u));
        // next combination
        std::size_t k = i;
        while (k > 0 && pick[k - 1] == n - i + k - 1) --k;
        if (k == 0) break;
        ++pick[k - 1];
        for (std::size_t j = k; j < i; ++j) pick[j] = pick[j - 1] + 1;
    }
    return out;
}

long nested_contraction_factor(const std::vector<ContractionSlot>& factors, int field_degree) {
    static std::mutex mu;
    static std::map<std::pair<std::vector<std::pair<int, int>>, int>, long> cache;
    std::vector<std::pair<int, int>> key;
    for (const auto& f : factors) key.emplace_back(f.id, f.degree);
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find({key, field_degree});
        if (it != cache.end()) return it->second;
    }
    // scratch chart: one generator per distinct id, plus a target coordinate t
    std::vector<Generator> gens;
    std::vector<std::size_t> slot;
    std::map<int, std::size_t> by_id;
    int total = 0;
    for (const auto& f : factors) {
        total += f.degree;
        auto it = by_id.find(f.id);
        if (it == by_id.end()) {
            it = by_id.emplace(f.id, gens.size()).first;
            gens.push_back({"s" + std::to_string(f.id), f.degree});
        }
        slot.push_back(it->second);
    }
    int tdeg = total - field_degree;
    long result = 0;
    if (tdeg >= 0) {
        gens.push_back({"t", tdeg});
        ChartPtr c = make_chart(gens);
        std::size_t t = c->size() - 1;
        GPoly mono = GPoly::constant(c, 1);
        for (auto s : slot) mono = poly_mul(mono, GPoly::generator(c, s));
        GVectorField X(c);
        X.set(t, mono);
        for (auto s : slot) X = lie_bracket(X, GVectorField::partial(c, s));
        GPoly r = X.coeff(t);
        Rational v = r.constant_term();
        if (r.term_count() > 1 || v.get_den() != 1) throw Error("nested contraction did not reduce to a scalar");
        result = v.get_num().get_si();
    }
    std::lock_guard<std::mutex> lock(mu);
    cache[{key, field_degree}] = result;
    return result;
}

int contraction_sign(int k) { return sign_of(k * (k - 1) / 2); }

}  // namespace gradedq
