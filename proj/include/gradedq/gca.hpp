// Graded-commutative polynomials with exact rational coefficients.
#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gradedq {

using Rational = mpq_class;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
    using Error::Error;
};
class ChartMismatch : public Error {
public:
    using Error::Error;
};
class NotHomogeneous : public Error {
public:
    using Error::Error;
};
class InvalidRestriction : public Error {
public:
    using Error::Error;
};

struct Generator {
    std::string name;
    int degree = 0;
    bool odd() const { return (degree & 1) != 0; }
    bool operator==(const Generator&) const = default;
};

// Ordered list of coordinates. At most 64 generators.
class Chart {
public:
    Chart() = default;
    explicit Chart(std::vector<Generator> gens);

    std::size_t size() const { return gens_.size(); }
    const Generator& operator[](std::size_t i) const { return gens_[i]; }
    const std::vector<Generator>& generators() const { return gens_; }
    bool odd(std::size_t i) const { return gens_[i].odd(); }
    int degree(std::size_t i) const { return gens_[i].degree; }
    std::uint64_t odd_mask() const { return odd_mask_; }

    std::optional<std::size_t> find(std::string_view name) const;
    std::size_t index_of(std::string_view name) const;  // throws Error

    bool operator==(const Chart& o) const { return gens_ == o.gens_; }

private:
    std::vector<Generator> gens_;
    std::uint64_t odd_mask_ = 0;
};

using ChartPtr = std::shared_ptr<const Chart>;

ChartPtr make_chart(std::vector<Generator> gens);
bool same_chart(const ChartPtr& a, const ChartPtr& b);

// Exponent vector; odd generators carry exponent 0 or 1 and are ordered by chart position.
struct Monomial {
    std::vector<std::uint16_t> exp;

    bool is_one() const;
    int total_count() const;
    std::uint64_t odd_bits(const Chart& c) const;
    int degree(const Chart& c) const;
    bool operator==(const Monomial&) const = default;
};

struct MonomialOrder {
    bool operator()(const Monomial& a, const Monomial& b) const;
};

class GPoly {
public:
    using TermMap = std::map<Monomial, Rational, MonomialOrder>;

    GPoly() = default;
    explicit GPoly(ChartPtr chart) : chart_(std::move(chart)) {}

    static GPoly constant(ChartPtr chart, const Rational& c);
    static GPoly generator(ChartPtr chart, std::size_t i);
    static GPoly generator(ChartPtr chart, std::string_view name);
    static GPoly term(ChartPtr chart, Monomial m, const Rational& c);

    const ChartPtr& chart() const { return chart_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }

    // degree of a homogeneous polynomial; nullopt for zero or inhomogeneous input
    std::optional<int> degree() const;
    bool is_homogeneous() const;
    int parity() const;  // throws NotHomogeneous when parities are mixed

    bool depends_on(std::size_t gen) const;
    Rational constant_term() const;

    GPoly& operator+=(const GPoly& o);
    GPoly& operator-=(const GPoly& o);
    GPoly& operator*=(const Rational& c);
    GPoly operator-() const;

    // coefficient-wise access used by the builders
    void add_term(const Monomial& m, const Rational& c);

    bool operator==(const GPoly& o) const;

    std::string to_string() const;

private:
    ChartPtr chart_;
    TermMap terms_;
};

GPoly operator+(GPoly a, const GPoly& b);
GPoly operator-(GPoly a, const GPoly& b);
GPoly operator*(const GPoly& a, const GPoly& b);
GPoly operator*(const Rational& c, GPoly a);

GPoly poly_mul(const GPoly& a, const GPoly& b);
// left derivative: d_z(z m) = m and d_z(w m) = (-1)^{|z||w|} w d_z(m)
GPoly poly_partial(const GPoly& f, std::size_t gen);
GPoly poly_restrict(const GPoly& f, const std::map<std::size_t, Rational>& values);
GPoly poly_zero_out(const GPoly& f, const std::vector<std::size_t>& gens);
// algebra homomorphism sending generator i to images[i]
GPoly poly_substitute(const GPoly& f, const std::vector<GPoly>& images, ChartPtr target);
// re-express f in another chart by matching generator names
GPoly transport(const GPoly& f, const ChartPtr& target);

struct DegreeInfo {
    std::optional<int> degree;
    bool homogeneous = true;
};
DegreeInfo degree_of(const GPoly& f);

// Sign of the product of two monomials once odd factors are put in chart order.
// Returns 0 when an odd generator would be repeated.
int monomial_product_sign(const Monomial& a, const Monomial& b, const Chart& c);

GPoly parse_poly(std::string_view text, const ChartPtr& chart);
std::string monomial_to_string(const Monomial& m, const Chart& c);

std::string rational_to_string(const Rational& q);
Rational parse_rational(std::string_view text);

}  // namespace gradedq
