#include "gradedq/gvf.hpp"

#include <algorithm>

namespace gradedq {

GVectorField::GVectorField(ChartPtr chart) : chart_(std::move(chart)) {
    coeffs_.assign(chart_->size(), GPoly(chart_));
}

GVectorField GVectorField::partial(ChartPtr chart, std::size_t gen) {
    GVectorField X(chart);
    X.set(gen, GPoly::constant(chart, 1));
    return X;
}

void GVectorField::set(std::size_t gen, GPoly p) {
    if (!p.is_zero() && !same_chart(p.chart(), chart_)) throw ChartMismatch("coefficient on wrong chart");
    if (p.is_zero()) p = GPoly(chart_);
    coeffs_.at(gen) = std::move(p);
}

void GVectorField::add(std::size_t gen, const GPoly& p) {
    if (p.is_zero()) return;
    if (!same_chart(p.chart(), chart_)) throw ChartMismatch("coefficient on wrong chart");
    coeffs_.at(gen) += p;
}

bool GVectorField::is_zero() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](const GPoly& p) { return p.is_zero(); });
}

std::size_t GVectorField::term_count() const {
    std::size_t n = 0;
    for (const auto& p : coeffs_) n += p.term_count();
    return n;
}

std::optional<int> GVectorField::degree() const {
    std::optional<int> d;
    for (std::size_t z = 0; z < coeffs_.size(); ++z) {
        for (const auto& [m, c] : coeffs_[z].terms()) {
            int e = m.degree(*chart_) - chart_->degree(z);
            if (!d) d = e;
            else if (*d != e) return std::nullopt;
        }
    }
    return d;
}

bool GVectorField::is_homogeneous() const { return is_zero() || degree().has_value(); }

static void check_same(const GVectorField& a, const GVectorField& b) {
    if (!same_chart(a.chart(), b.chart())) throw ChartMismatch("vector fields live on different charts");
}

GVectorField& GVectorField::operator+=(const GVectorField& o) {
    if (!chart_) {
        *this = o;
        return *this;
    }
    if (!o.chart_) return *this;
    check_same(*this, o);
    for (std::size_t z = 0; z < coeffs_.size(); ++z) coeffs_[z] += o.coeffs_[z];
    return *this;
}

GVectorField& GVectorField::operator-=(const GVectorField& o) {
    if (!chart_) {
        *this = -o;
        return *this;
    }
    if (!o.chart_) return *this;
    check_same(*this, o);
    for (std::size_t z = 0; z < coeffs_.size(); ++z) coeffs_[z] -= o.coeffs_[z];
    return *this;
}

GVectorField& GVectorField::operator*=(const Rational& c) {
    for (auto& p : coeffs_) p *= c;
    return *this;
}

GVectorField GVectorField::operator-() const {
    GVectorField r = *this;
    for (auto& p : r.coeffs_) p = -p;
    return r;
}

bool GVectorField::operator==(const GVectorField& o) const {
    if (is_zero() || o.is_zero()) return is_zero() && o.is_zero();
    if (!same_chart(chart_, o.chart_)) return false;
    for (std::size_t z = 0; z < coeffs_.size(); ++z)
        if (!(coeffs_[z] == o.coeffs_[z])) return false;
    return true;
}

std::string GVectorField::to_string() const {
    std::string out;
    for (std::size_t z = 0; z < coeffs_.size(); ++z) {
        if (coeffs_[z].is_zero()) continue;
        if (!out.empty()) out += "; ";
        out += (*chart_)[z].name + ": " + coeffs_[z].to_string();
    }
    return out.empty() ? "0" : out;
}

GVectorField operator+(GVectorField a, const GVectorField& b) { return a += b; }
GVectorField operator-(GVectorField a, const GVectorField& b) { return a -= b; }
GVectorField operator*(const Rational& c, GVectorField a) { return a *= c; }

GVectorField operator*(const GPoly& f, const GVectorField& X) {
    GVectorField r(X.chart());
    if (f.is_zero()) return r;
    for (std::size_t z = 0; z < X.size(); ++z)
        if (!X.coeff(z).is_zero()) r.set(z, poly_mul(f, X.coeff(z)));
    return r;
}

GPoly vf_apply(const GVectorField& X, const GPoly& f) {
    GPoly r(X.chart());
    if (f.is_zero()) return r;
    if (!same_chart(X.chart(), f.chart())) throw ChartMismatch("field and polynomial on different charts");
    for (std::size_t z = 0; z < X.size(); ++z) {
        if (X.coeff(z).is_zero() || !f.depends_on(z)) continue;
        r += poly_mul(X.coeff(z), poly_partial(f, z));
    }
    return r;
}

GVectorField lie_bracket(const GVectorField& X, const GVectorField& Y) {
    if (X.is_zero() || Y.is_zero()) return GVectorField(X.chart() ? X.chart() : Y.chart());
    check_same(X, Y);
    auto dx = X.degree(), dy = Y.degree();
    if (!dx || !dy) throw NotHomogeneous("lie_bracket needs homogeneous vector fields");
    bool minus = ((*dx * *dy) & 1) == 0;
    GVectorField r(X.chart());
    for (std::size_t z = 0; z < X.size(); ++z) {
        GPoly c = vf_apply(X, Y.coeff(z));
        GPoly d = vf_apply(Y, X.coeff(z));
        if (minus) c -= d;
        else c += d;
        r.set(z, std::move(c));
    }
    return r;
}

GVectorField homological_residual(const GVectorField& Q) {
    auto d = Q.degree();
    if (!Q.is_zero() && (!d || *d != 1)) throw NotHomogeneous("homological check needs a degree 1 vector field");
    return lie_bracket(Q, Q);
}

bool is_homological(const GVectorField& Q) { return homological_residual(Q).is_zero(); }

GVectorField vf_zero_out(const GVectorField& X, const std::vector<std::size_t>& gens) {
    GVectorField r(X.chart());
    for (std::size_t z = 0; z < X.size(); ++z) r.set(z, poly_zero_out(X.coeff(z), gens));
    return r;
}

GVectorField vf_drop(const GVectorField& X, const std::vector<std::size_t>& gens) {
    GVectorField r = X;
    for (auto g : gens) r.set(g, GPoly(X.chart()));
    return r;
}

GVectorField restrict_and_project(const GVectorField& X, const std::vector<std::size_t>& zeroed,
                                  const std::vector<std::size_t>& dropped) {
    return vf_drop(vf_zero_out(X, zeroed), dropped);
}

GVectorField vf_transport(const GVectorField& X, const ChartPtr& target) {
    GVectorField r(target);
    const Chart& src = *X.chart();
    for (std::size_t z = 0; z < X.size(); ++z) {
        if (X.coeff(z).is_zero()) continue;
        auto t = target->find(src[z].name);
        if (!t) throw ChartMismatch("component along '" + src[z].name + "' has no counterpart in target chart");
        r.set(*t, transport(X.coeff(z), target));
    }
    return r;
}

ChartPtr subchart(const ChartPtr& chart, const std::vector<std::size_t>& gens) {
    std::vector<std::size_t> sorted = gens;
    std::sort(sorted.begin(), sorted.end());
    std::vector<Generator> g;
    for (auto i : sorted) g.push_back((*chart)[i]);
    return make_chart(std::move(g));
}

PushforwardResult pushforward_check(const GVectorField& X, const std::vector<std::size_t>& kept) {
    PushforwardResult res;
    std::vector<bool> is_kept(X.size(), false);
    for (auto k : kept) is_kept.at(k) = true;
    for (auto k : kept) {
        for (const auto& [m, c] : X.coeff(k).terms()) {
            bool bad = false;
            for (std::size_t i = 0; i < m.exp.size(); ++i)
                if (m.exp[i] && !is_kept[i]) bad = true;
            if (bad) {
                res.offending.push_back((*X.chart())[k].name);
                break;
            }
        }
    }
    res.projectable = res.offending.empty();
    if (res.projectable) {
        ChartPtr sub = subchart(X.chart(), kept);
        res.image = GVectorField(sub);
        for (auto k : kept) res.image.set(sub->index_of((*X.chart())[k].name), transport(X.coeff(k), sub));
    }
    return res;
}

bool vertical_check(const GVectorField& X, const std::vector<std::size_t>& body) {
    return std::all_of(body.begin(), body.end(), [&](std::size_t b) { return X.coeff(b).is_zero(); });
}

std::map<Bidegree, GVectorField> bidegree_split(const GVectorField& X, const std::vector<std::size_t>& xi,
                                                const std::vector<std::size_t>& eta) {
    std::map<Bidegree, GVectorField> out;
    for (std::size_t z = 0; z < X.size(); ++z) {
        for (const auto& [m, c] : X.coeff(z).terms()) {
            int p = 0, q = 0;
            for (auto i : xi) p += m.exp[i];
            for (auto i : eta) q += m.exp[i];
            auto [it, _] = out.try_emplace({p, q}, X.chart());
            it->second.add(z, GPoly::term(X.chart(), m, c));
        }
    }
    return out;
}

}  // namespace gradedq
