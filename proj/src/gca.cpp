#include "gradedq/gca.hpp"

#include <algorithm>
#include <bit>
#include <unordered_map>

namespace gradedq {

Chart::Chart(std::vector<Generator> gens) : gens_(std::move(gens)) {
    if (gens_.size() > 64) throw Error("chart has more than 64 generators");
    for (std::size_t i = 0; i < gens_.size(); ++i) {
        const auto& g = gens_[i];
        if (g.name.empty()) throw Error("generator with empty name");
        if (g.degree < 0) throw Error("generator '" + g.name + "' has negative degree");
        for (std::size_t j = 0; j < i; ++j)
            if (gens_[j].name == g.name) throw Error("duplicate generator name '" + g.name + "'");
        if (g.odd()) odd_mask_ |= (std::uint64_t{1} << i);
    }
}

std::optional<std::size_t> Chart::find(std::string_view name) const {
    for (std::size_t i = 0; i < gens_.size(); ++i)
        if (gens_[i].name == name) return i;
    return std::nullopt;
}

std::size_t Chart::index_of(std::string_view name) const {
    auto i = find(name);
    if (!i) throw Error("unknown generator '" + std::string(name) + "'");
    return *i;
}

ChartPtr make_chart(std::vector<Generator> gens) { return std::make_shared<const Chart>(std::move(gens)); }

bool same_chart(const ChartPtr& a, const ChartPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    return *a == *b;
}

bool Monomial::is_one() const {
    return std::all_of(exp.begin(), exp.end(), [](auto e) { return e == 0; });
}

int Monomial::total_count() const {
    int n = 0;
    for (auto e : exp) n += e;
    return n;
}

std::uint64_t Monomial::odd_bits(const Chart& c) const {
    std::uint64_t bits = 0;
    for (std::size_t i = 0; i < exp.size(); ++i)
        if (exp[i] && c.odd(i)) bits |= (std::uint64_t{1} << i);
    return bits;
}

int Monomial::degree(const Chart& c) const {
    int d = 0;
    for (std::size_t i = 0; i < exp.size(); ++i) d += exp[i] * c.degree(i);
    return d;
}

bool MonomialOrder::operator()(const Monomial& a, const Monomial& b) const {
    int ca = a.total_count(), cb = b.total_count();
    if (ca != cb) return ca < cb;
    return std::lexicographical_compare(b.exp.begin(), b.exp.end(), a.exp.begin(), a.exp.end());
}

int monomial_product_sign(const Monomial& a, const Monomial& b, const Chart& c) {
    std::uint64_t oa = a.odd_bits(c), ob = b.odd_bits(c);
    if (oa & ob) return 0;
    int parity = 0;
    while (ob) {
        int bit = std::countr_zero(ob);
        ob &= ob - 1;
        std::uint64_t above = (bit >= 63) ? 0 : (oa >> (bit + 1));
        parity ^= std::popcount(above) & 1;
    }
    return parity ? -1 : 1;
}

static void check_same(const GPoly& a, const GPoly& b) {
    if (!same_chart(a.chart(), b.chart())) throw ChartMismatch("polynomials live on different charts");
}

GPoly GPoly::constant(ChartPtr chart, const Rational& c) {
    GPoly p(chart);
    if (c != 0) p.terms_.emplace(Monomial{std::vector<std::uint16_t>(chart->size(), 0)}, c);
    return p;
}

GPoly GPoly::generator(ChartPtr chart, std::size_t i) {
    Monomial m{std::vector<std::uint16_t>(chart->size(), 0)};
    m.exp.at(i) = 1;
    GPoly p(chart);
    p.terms_.emplace(std::move(m), Rational(1));
    return p;
}

GPoly GPoly::generator(ChartPtr chart, std::string_view name) {
    std::size_t i = chart->index_of(name);
    return generator(std::move(chart), i);
}

GPoly GPoly::term(ChartPtr chart, Monomial m, const Rational& c) {
    GPoly p(chart);
    p.add_term(m, c);
    return p;
}

void GPoly::add_term(const Monomial& m, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

std::optional<int> GPoly::degree() const {
    auto info = degree_of(*this);
    if (!info.homogeneous) return std::nullopt;
    return info.degree;
}

bool GPoly::is_homogeneous() const { return degree_of(*this).homogeneous; }

int GPoly::parity() const {
    int p = -1;
    for (const auto& [m, c] : terms_) {
        int q = m.degree(*chart_) & 1;
        if (p >= 0 && p != q) throw NotHomogeneous("polynomial mixes even and odd terms");
        p = q;
    }
    return p < 0 ? 0 : p;
}

bool GPoly::depends_on(std::size_t gen) const {
    for (const auto& [m, c] : terms_)
        if (m.exp[gen]) return true;
    return false;
}

Rational GPoly::constant_term() const {
    for (const auto& [m, c] : terms_)
        if (m.is_one()) return c;
    return 0;
}

GPoly& GPoly::operator+=(const GPoly& o) {
    if (o.is_zero()) return *this;
    if (!chart_) chart_ = o.chart_;
    check_same(*this, o);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

GPoly& GPoly::operator-=(const GPoly& o) {
    if (o.is_zero()) return *this;
    if (!chart_) chart_ = o.chart_;
    check_same(*this, o);
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
}

GPoly& GPoly::operator*=(const Rational& c) {
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, v] : terms_) v *= c;
    return *this;
}

GPoly GPoly::operator-() const {
    GPoly r = *this;
    for (auto& [m, v] : r.terms_) v = -v;
    return r;
}

bool GPoly::operator==(const GPoly& o) const {
    if (is_zero() || o.is_zero()) return is_zero() && o.is_zero();
    return same_chart(chart_, o.chart_) && terms_ == o.terms_;
}

GPoly operator+(GPoly a, const GPoly& b) { return a += b; }
GPoly operator-(GPoly a, const GPoly& b) { return a -= b; }
GPoly operator*(const Rational& c, GPoly a) { return a *= c; }
GPoly operator*(const GPoly& a, const GPoly& b) { return poly_mul(a, b); }

GPoly poly_mul(const GPoly& a, const GPoly& b) {
    if (a.is_zero()) return GPoly(a.chart() ? a.chart() : b.chart());
    if (b.is_zero()) return GPoly(a.chart());
    check_same(a, b);
    const Chart& ch = *a.chart();
    GPoly r(a.chart());
    Monomial prod;
    prod.exp.resize(ch.size());
    for (const auto& [ma, ca] : a.terms()) {
        for (const auto& [mb, cb] : b.terms()) {
            int s = monomial_product_sign(ma, mb, ch);
            if (s == 0) continue;
            for (std::size_t i = 0; i < ch.size(); ++i) prod.exp[i] = ma.exp[i] + mb.exp[i];
            Rational c = ca * cb;
            if (s < 0) c = -c;
            r.add_term(prod, c);
        }
    }
    return r;
}

GPoly poly_partial(const GPoly& f, std::size_t gen) {
    GPoly r(f.chart());
    if (f.is_zero()) return r;
    const Chart& ch = *f.chart();
    if (gen >= ch.size()) throw Error("generator index out of range");
    std::uint64_t below = (gen == 0) ? 0 : ((std::uint64_t{1} << gen) - 1);
    for (const auto& [m, c] : f.terms()) {
        if (!m.exp[gen]) continue;
        Monomial d = m;
        Rational coeff = c * static_cast<long>(m.exp[gen]);
        if (ch.odd(gen) && (std::popcount(m.odd_bits(ch) & below) & 1)) coeff = -coeff;
        d.exp[gen] -= 1;
        r.add_term(d, coeff);
    }
    return r;
}

GPoly poly_restrict(const GPoly& f, const std::map<std::size_t, Rational>& values) {
    GPoly r(f.chart());
    if (!f.chart()) return r;
    const Chart& ch = *f.chart();
    for (const auto& [g, v] : values) {
        if (g >= ch.size()) throw Error("generator index out of range");
        if (ch.odd(g) && v != 0)
            throw InvalidRestriction("odd generator '" + ch[g].name + "' can only be restricted to 0");
    }
    for (const auto& [m, c] : f.terms()) {
        Monomial out = m;
        Rational coeff = c;
        bool vanish = false;
        for (const auto& [g, v] : values) {
            if (!m.exp[g]) continue;
            if (v == 0) {
                vanish = true;
                break;
            }
            for (int k = 0; k < m.exp[g]; ++k) coeff *= v;
            out.exp[g] = 0;
        }
        if (!vanish) r.add_term(out, coeff);
    }
    return r;
}

GPoly poly_zero_out(const GPoly& f, const std::vector<std::size_t>& gens) {
    std::map<std::size_t, Rational> v;
    for (auto g : gens) v[g] = 0;
    return poly_restrict(f, v);
}

static GPoly poly_pow(const GPoly& p, int k, const ChartPtr& target) {
    GPoly r = GPoly::constant(target, 1);
    for (int i = 0; i < k; ++i) r = poly_mul(r, p);
    return r;
}

GPoly poly_substitute(const GPoly& f, const std::vector<GPoly>& images, ChartPtr target) {
    GPoly r(target);
    if (f.is_zero()) return r;
    const Chart& ch = *f.chart();
    if (images.size() != ch.size()) throw Error("substitution needs one image per generator");
    for (std::size_t i = 0; i < ch.size(); ++i)
        if (!images[i].is_zero() && !same_chart(images[i].chart(), target))
            throw ChartMismatch("substitution image on wrong chart");
    for (const auto& [m, c] : f.terms()) {
        GPoly t = GPoly::constant(target, c);
        for (std::size_t i = 0; i < ch.size() && !t.is_zero(); ++i)
            if (m.exp[i]) t = poly_mul(t, images[i].is_zero() ? GPoly(target) : poly_pow(images[i], m.exp[i], target));
        r += t;
    }
    return r;
}

GPoly transport(const GPoly& f, const ChartPtr& target) {
    if (f.is_zero()) return GPoly(target);
    if (same_chart(f.chart(), target)) {
        if (f.chart() == target) return f;
        GPoly r(target);
        for (const auto& [m, c] : f.terms()) r.add_term(m, c);
        return r;
    }
    const Chart& src = *f.chart();
    std::vector<std::optional<std::size_t>> map(src.size());
    for (std::size_t i = 0; i < src.size(); ++i) {
        map[i] = target->find(src[i].name);
        if (map[i] && (*target)[*map[i]].degree != src[i].degree)
            throw ChartMismatch("generator '" + src[i].name + "' has different degrees in the two charts");
    }
    GPoly r(target);
    std::vector<std::size_t> odd_order;
    for (const auto& [m, c] : f.terms()) {
        Monomial out{std::vector<std::uint16_t>(target->size(), 0)};
        odd_order.clear();
        for (std::size_t i = 0; i < src.size(); ++i) {
            if (!m.exp[i]) continue;
            if (!map[i]) throw ChartMismatch("generator '" + src[i].name + "' is not in the target chart");
            out.exp[*map[i]] = m.exp[i];
            if (src.odd(i)) odd_order.push_back(*map[i]);
        }
        int inversions = 0;
        for (std::size_t a = 0; a < odd_order.size(); ++a)
            for (std::size_t b = a + 1; b < odd_order.size(); ++b)
                if (odd_order[a] > odd_order[b]) ++inversions;
        r.add_term(out, (inversions & 1) ? Rational(-c) : c);
    }
    return r;
}

DegreeInfo degree_of(const GPoly& f) {
    DegreeInfo info;
    for (const auto& [m, c] : f.terms()) {
        int d = m.degree(*f.chart());
        if (!info.degree) {
            info.degree = d;
        } else if (*info.degree != d) {
            info.homogeneous = false;
        }
    }
    if (!info.homogeneous) info.degree.reset();
    return info;
}

}  // namespace gradedq
