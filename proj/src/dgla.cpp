#include "gradedq/dgla.hpp"

namespace gradedq {

Matrix matrix_zero(std::size_t n, const ChartPtr& body) {
    return Matrix(n, std::vector<GPoly>(n, GPoly(body)));
}

bool matrix_is_zero(const Matrix& m) {
    for (const auto& row : m)
        for (const auto& p : row)
            if (!p.is_zero()) return false;
    return true;
}

Matrix matrix_mul(const Matrix& a, const Matrix& b) {
    const std::size_t n = a.size();
    if (n == 0) return a;
    Matrix r = matrix_zero(n, a[0][0].chart());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            if (a[i][k].is_zero()) continue;
            for (std::size_t j = 0; j < n; ++j)
                if (!b[k][j].is_zero()) r[i][j] += poly_mul(a[i][k], b[k][j]);
        }
    return r;
}

Matrix matrix_add(const Matrix& a, const Matrix& b, const Rational& c) {
    Matrix r = a;
    for (std::size_t i = 0; i < b.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            if (!b[i][j].is_zero()) r[i][j] += c * b[i][j];
    return r;
}

FrameVector matrix_apply(const Matrix& m, const FrameVector& v) {
    FrameVector r = v;
    for (auto& p : r) p = GPoly(p.chart());
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m.size(); ++j)
            if (!m[i][j].is_zero() && !v[j].is_zero()) r[i] += poly_mul(m[i][j], v[j]);
    return r;
}

Matrix matrix_derive(const GVectorField& X, const Matrix& m) {
    Matrix r = m;
    for (auto& row : r)
        for (auto& p : row) p = p.is_zero() ? p : vf_apply(X, p);
    return r;
}

FrameVector cdo_apply(const Cdo& D, const FrameVector& s) {
    FrameVector r = matrix_apply(D.matrix, s);
    for (std::size_t a = 0; a < s.size(); ++a)
        if (!s[a].is_zero()) r[a] += vf_apply(D.symbol, s[a]);
    return r;
}

Cdo cdo_commutator(const Cdo& a, const Cdo& b) {
    Cdo r;
    r.symbol = lie_bracket(a.symbol, b.symbol);
    r.matrix = matrix_add(matrix_derive(a.symbol, b.matrix), matrix_derive(b.symbol, a.matrix), -1);
    r.matrix = matrix_add(r.matrix, matrix_mul(a.matrix, b.matrix));
    r.matrix = matrix_add(r.matrix, matrix_mul(b.matrix, a.matrix), -1);
    return r;
}

bool ClassicalElement::is_zero() const {
    return cdo.symbol.is_zero() && matrix_is_zero(cdo.matrix) && frame_is_zero(mid) && matrix_is_zero(mid_endo) &&
           frame_is_zero(low);
}

bool ClassicalElement::operator==(const ClassicalElement& o) const {
    return cdo.symbol == o.cdo.symbol && cdo.matrix == o.cdo.matrix && mid == o.mid && mid_endo == o.mid_endo &&
           low == o.low;
}

static std::vector<std::vector<Rational>> zero_pairing(std::size_t n) {
    return std::vector<std::vector<Rational>>(n, std::vector<Rational>(n, Rational(0)));
}

ClassicalDgla ClassicalDgla::gauge(ChartPtr body, std::vector<std::string> names, std::map<Tuple, FrameVector> brackets) {
    ClassicalDgla d;
    d.kind_ = ClassicalKind::Gauge;
    d.body_ = std::move(body);
    d.names_ = std::move(names);
    d.brackets_ = std::move(brackets);
    d.pairing_ = zero_pairing(d.names_.size());
    return d;
}

ClassicalDgla ClassicalDgla::quadratic(ChartPtr body, std::vector<std::string> names,
                                       std::map<Tuple, FrameVector> brackets, std::vector<std::vector<Rational>> pairing) {
    ClassicalDgla d = gauge(std::move(body), std::move(names), std::move(brackets));
    d.kind_ = ClassicalKind::Quadratic;
    if (pairing.size() != d.rank()) throw Error("pairing matrix has the wrong size");
    for (std::size_t a = 0; a < d.rank(); ++a) {
        if (pairing[a].size() != d.rank()) throw Error("pairing matrix has the wrong size");
        for (std::size_t b = 0; b < a; ++b)
            if (pairing[a][b] != pairing[b][a]) throw Error("pairing matrix is not symmetric");
    }
    d.pairing_ = std::move(pairing);
    return d;
}

ClassicalDgla ClassicalDgla::sheng_zhu(ChartPtr body) {
    ClassicalDgla d;
    d.kind_ = ClassicalKind::ShengZhu;
    d.body_ = std::move(body);
    for (std::size_t i = 0; i < d.body_->size(); ++i) d.names_.push_back("d" + (*d.body_)[i].name);
    d.pairing_ = zero_pairing(d.names_.size());
    return d;
}

FrameVector ClassicalDgla::fiber_bracket(const FrameVector& u, const FrameVector& v) const {
    FrameVector r = frame_zero(rank(), body_);
    for (const auto& [key, val] : brackets_) {
        const std::size_t a = key[0], b = key[1];
        GPoly c = poly_mul(u[a], v[b]) - poly_mul(u[b], v[a]);
        if (!c.is_zero()) frame_add(r, frame_scale(c, val));
    }
    return r;
}

Matrix ClassicalDgla::ad(const FrameVector& u) const {
    Matrix m = matrix_zero(rank(), body_);
    for (std::size_t b = 0; b < rank(); ++b) {
        FrameVector col = fiber_bracket(u, frame_unit(rank(), b, body_));
        for (std::size_t a = 0; a < rank(); ++a) m[a][b] = col[a];
    }
    return m;
}

ClassicalElement ClassicalDgla::zero() const {
    ClassicalElement e;
    e.cdo.symbol = GVectorField(body_);
    e.cdo.matrix = matrix_zero(rank(), body_);
    e.mid = frame_zero(rank(), body_);
    e.mid_endo = kind_ == ClassicalKind::ShengZhu ? matrix_zero(rank(), body_) : Matrix{};
    std::size_t low_rank = kind_ == ClassicalKind::Gauge ? 0 : kind_ == ClassicalKind::Quadratic ? 1 : rank();
    e.low = frame_zero(low_rank, body_);
    return e;
}

ClassicalElement ClassicalDgla::from_cdo(Cdo D) const {
    ClassicalElement e = zero();
    if (D.matrix.size() != rank()) throw Error("differential operator matrix has the wrong size");
    e.cdo = std::move(D);
    return e;
}

ClassicalElement ClassicalDgla::from_mid(FrameVector s, Matrix endo) const {
    ClassicalElement e = zero();
    if (s.size() != rank()) throw Error("section has the wrong rank");
    e.mid = std::move(s);
    if (!endo.empty()) {
        if (kind_ != ClassicalKind::ShengZhu || endo.size() != rank()) throw Error("endomorphism part not allowed here");
        e.mid_endo = std::move(endo);
    }
    return e;
}

ClassicalElement ClassicalDgla::from_low(FrameVector s) const {
    ClassicalElement e = zero();
    if (s.size() != e.low.size()) throw Error("degree -2 element has the wrong rank");
    e.low = std::move(s);
    return e;
}

ClassicalElement ClassicalDgla::part(const ClassicalElement& x, int degree) const {
    ClassicalElement e = zero();
    if (degree == 0) e.cdo = x.cdo;
    if (degree == -1) {
        e.mid = x.mid;
        e.mid_endo = x.mid_endo;
    }
    if (degree == -2) e.low = x.low;
    return e;
}

std::vector<int> ClassicalDgla::degrees(const ClassicalElement& x) const {
    std::vector<int> d;
    if (!x.cdo.symbol.is_zero() || !matrix_is_zero(x.cdo.matrix)) d.push_back(0);
    if (!frame_is_zero(x.mid) || !matrix_is_zero(x.mid_endo)) d.push_back(-1);
    if (!frame_is_zero(x.low)) d.push_back(-2);
    return d;
}

ClassicalElement ClassicalDgla::add(ClassicalElement a, const ClassicalElement& b, const Rational& c) const {
    if (!b.cdo.symbol.is_zero()) a.cdo.symbol += c * b.cdo.symbol;
    a.cdo.matrix = matrix_add(a.cdo.matrix, b.cdo.matrix, c);
    frame_add(a.mid, b.mid, c);
    a.mid_endo = matrix_add(a.mid_endo, b.mid_endo, c);
    frame_add(a.low, b.low, c);
    return a;
}

ClassicalElement ClassicalDgla::scale(const GPoly& f0, const ClassicalElement& x) const {
    GPoly f = transport(f0, body_);
    ClassicalElement e = x;
    e.cdo.symbol = f * x.cdo.symbol;
    for (auto& row : e.cdo.matrix)
        for (auto& p : row) p = poly_mul(f, p);
    e.mid = frame_scale(f, x.mid);
    for (auto& row : e.mid_endo)
        for (auto& p : row) p = poly_mul(f, p);
    e.low = frame_scale(f, x.low);
    return e;
}

ClassicalElement ClassicalDgla::bracket_h(const ClassicalElement& a, int p, const ClassicalElement& b, int q) const {
    ClassicalElement r = zero();
    if (p < q) {
        // reverse with graded antisymmetry; only degree 0 against negative degrees lands here
        return add(r, bracket_h(b, q, a, p), -sign_of(p * q));
    }
    if (p == 0 && q == 0) {
        r.cdo = cdo_commutator(a.cdo, b.cdo);
    } else if (p == 0 && q == -1) {
        r.mid = cdo_apply(a.cdo, b.mid);
        if (kind_ == ClassicalKind::ShengZhu) {
            Matrix m = matrix_add(matrix_derive(a.cdo.symbol, b.mid_endo), matrix_mul(a.cdo.matrix, b.mid_endo));
            r.mid_endo = matrix_add(m, matrix_mul(b.mid_endo, a.cdo.matrix), -1);
        }
    } else if (p == 0 && q == -2) {
        if (kind_ == ClassicalKind::Quadratic) r.low[0] = vf_apply(a.cdo.symbol, b.low[0]);
        if (kind_ == ClassicalKind::ShengZhu) r.low = cdo_apply(a.cdo, b.low);
    } else if (p == -1 && q == -1) {
        if (kind_ == ClassicalKind::Quadratic) {
            GPoly s(body_);
            for (std::size_t i = 0; i < rank(); ++i)
                for (std::size_t j = 0; j < rank(); ++j)
                    if (pairing_[i][j] != 0 && !a.mid[i].is_zero() && !b.mid[j].is_zero())
                        s += pairing_[i][j] * poly_mul(a.mid[i], b.mid[j]);
            r.low[0] = s;
        }
        if (kind_ == ClassicalKind::ShengZhu) {
            r.low = matrix_apply(a.mid_endo, b.mid);
            frame_add(r.low, matrix_apply(b.mid_endo, a.mid));
        }
    }
    return r;
}

ClassicalElement ClassicalDgla::bracket(const ClassicalElement& a, const ClassicalElement& b) const {
    ClassicalElement r = zero();
    for (int p : degrees(a))
        for (int q : degrees(b))
            if (p + q >= -2) r = add(r, bracket_h(part(a, p), p, part(b, q), q));
    return r;
}

ClassicalElement ClassicalDgla::differential(const ClassicalElement& x) const {
    ClassicalElement r = zero();
    if (kind_ == ClassicalKind::ShengZhu) {
        r.cdo.matrix = x.mid_endo;
        r.mid = x.low;
    } else {
        // d mu = -ad_mu
        r.cdo.matrix = matrix_add(r.cdo.matrix, ad(x.mid), -1);
    }
    return r;
}

std::string ClassicalDgla::to_string(const ClassicalElement& x) const {
    std::vector<std::string> parts;
    auto matrix_text = [&](const Matrix& m) {
        std::string s;
        for (std::size_t i = 0; i < m.size(); ++i)
            for (std::size_t j = 0; j < m.size(); ++j) {
                if (m[i][j].is_zero()) continue;
                if (!s.empty()) s += "; ";
                s += names_[j] + "->" + names_[i] + ": " + m[i][j].to_string();
            }
        return s;
    };
    if (!x.cdo.symbol.is_zero()) parts.push_back("symbol {" + x.cdo.symbol.to_string() + "}");
    if (!matrix_is_zero(x.cdo.matrix)) parts.push_back("operator {" + matrix_text(x.cdo.matrix) + "}");
    std::vector<FrameElement> fr;
    for (const auto& n : names_) fr.push_back({n, 0});
    if (!frame_is_zero(x.mid)) parts.push_back("section {" + frame_to_string(x.mid, fr) + "}");
    if (!matrix_is_zero(x.mid_endo)) parts.push_back("endomorphism {" + matrix_text(x.mid_endo) + "}");
    if (!frame_is_zero(x.low)) {
        if (kind_ == ClassicalKind::Quadratic) parts.push_back("function {" + x.low[0].to_string() + "}");
        else parts.push_back("low section {" + frame_to_string(x.low, fr) + "}");
    }
    if (parts.empty()) return "0";
    std::string s;
    for (const auto& p : parts) s += (s.empty() ? "" : " + ") + p;
    return s;
}

std::vector<ClassicalElement> ClassicalDgla::sample_elements() const {
    std::vector<GPoly> coeffs{GPoly::constant(body_, 1)};
    if (body_->size() > 0) coeffs.push_back(GPoly::generator(body_, 0));
    std::vector<ClassicalElement> out;
    bool constant_brackets = true;
    for (const auto& [k, v] : brackets_)
        for (const auto& p : v)
            for (std::size_t g = 0; g < body_->size(); ++g) constant_brackets = constant_brackets && !p.depends_on(g);
    for (const auto& c : coeffs) {
        if (kind_ == ClassicalKind::ShengZhu || constant_brackets)
            for (std::size_t g = 0; g < body_->size(); ++g)
                out.push_back(scale(c, from_cdo({GVectorField::partial(body_, g), matrix_zero(rank(), body_)})));
        for (std::size_t a = 0; a < rank(); ++a) {
            if (kind_ == ClassicalKind::ShengZhu) {
                for (std::size_t b = 0; b < rank(); ++b) {
                    Matrix m = matrix_zero(rank(), body_);
                    m[a][b] = c;
                    out.push_back(from_cdo({GVectorField(body_), m}));
                    out.push_back(from_mid(frame_zero(rank(), body_), m));
                }
            } else {
                out.push_back(from_cdo({GVectorField(body_), ad(frame_scale(c, frame_unit(rank(), a, body_)))}));
            }
            out.push_back(from_mid(frame_scale(c, frame_unit(rank(), a, body_))));
            if (kind_ == ClassicalKind::ShengZhu) out.push_back(from_low(frame_scale(c, frame_unit(rank(), a, body_))));
        }
        if (kind_ == ClassicalKind::Quadratic) out.push_back(from_low({c}));
    }
    return out;
}

VectorFieldDgla::VectorFieldDgla(ChartPtr chart, GVectorField QM) : chart_(std::move(chart)), QM_(std::move(QM)) {
    if (!QM_.is_zero() && !same_chart(QM_.chart(), chart_)) throw ChartMismatch("Q_M lives on another chart");
    if (QM_.is_zero()) QM_ = GVectorField(chart_);
}

GVectorField VectorFieldDgla::part(const GVectorField& x, int degree) const {
    GVectorField r(chart_);
    for (std::size_t z = 0; z < chart_->size(); ++z) {
        GPoly c(chart_);
        for (const auto& [m, q] : x.coeff(z).terms())
            if (static_cast<int>(m.degree(*chart_)) - chart_->degree(z) == degree) c.add_term(m, q);
        r.set(z, c);
    }
    return r;
}

std::vector<int> VectorFieldDgla::degrees(const GVectorField& x) const {
    std::vector<int> d;
    for (std::size_t z = 0; z < chart_->size(); ++z)
        for (const auto& [m, q] : x.coeff(z).terms()) {
            int k = static_cast<int>(m.degree(*chart_)) - chart_->degree(z);
            if (std::find(d.begin(), d.end(), k) == d.end()) d.push_back(k);
        }
    std::sort(d.rbegin(), d.rend());
    return d;
}

GVectorField VectorFieldDgla::add(GVectorField a, const GVectorField& b, const Rational& c) const {
    if (!b.is_zero()) a += c * b;
    return a;
}

GVectorField VectorFieldDgla::scale(const GPoly& f, const GVectorField& x) const { return transport(f, chart_) * x; }

GVectorField VectorFieldDgla::bracket(const GVectorField& a, const GVectorField& b) const {
    GVectorField r(chart_);
    for (int p : degrees(a))
        for (int q : degrees(b)) r += lie_bracket(part(a, p), part(b, q));
    return r;
}

GVectorField VectorFieldDgla::differential(const GVectorField& x) const {
    if (QM_.is_zero()) return GVectorField(chart_);
    return -bracket(QM_, x);
}

FrameVector LieSource::bracket(std::size_t a, std::size_t b) const {
    if (a == b) return frame_zero(rank(), body);
    auto it = brackets.find(a < b ? Tuple{a, b} : Tuple{b, a});
    if (it == brackets.end()) return frame_zero(rank(), body);
    if (a < b) return it->second;
    FrameVector r = it->second;
    for (auto& p : r) p = -p;
    return r;
}

}  // namespace gradedq
