// Text form of polynomials: "3/2 x1^2 xi1 xi3 - xi2", '*' optional, parentheses allowed.
#include <cctype>
#include <sstream>

#include "gradedq/gca.hpp"

namespace gradedq {

std::string rational_to_string(const Rational& q) { return q.get_str(); }

Rational parse_rational(std::string_view text) {
    std::string s(text);
    auto trim = [](std::string& t) {
        while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back()))) t.pop_back();
        std::size_t i = 0;
        while (i < t.size() && std::isspace(static_cast<unsigned char>(t[i]))) ++i;
        t.erase(0, i);
    };
    trim(s);
    if (s.empty()) throw ParseError("empty rational");
    std::size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    bool seen_slash = false;
    for (std::size_t i = start; i < s.size(); ++i) {
        char ch = s[i];
        if (ch == '/' && !seen_slash && i > start && i + 1 < s.size()) {
            seen_slash = true;
            continue;
        }
        if (!std::isdigit(static_cast<unsigned char>(ch))) throw ParseError("bad rational '" + s + "'");
    }
    if (s[0] == '+') s.erase(0, 1);
    Rational q;
    if (q.set_str(s, 10) != 0) throw ParseError("bad rational '" + s + "'");
    if (q.get_den() == 0) throw ParseError("zero denominator in '" + s + "'");
    q.canonicalize();
    return q;
}

std::string monomial_to_string(const Monomial& m, const Chart& c) {
    std::string out;
    for (std::size_t i = 0; i < m.exp.size(); ++i) {
        if (!m.exp[i]) continue;
        if (!out.empty()) out += ' ';
        out += c[i].name;
        if (m.exp[i] > 1) out += '^' + std::to_string(m.exp[i]);
    }
    return out;
}

std::string GPoly::to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        bool neg = c < 0;
        Rational a = neg ? Rational(-c) : c;
        if (first) {
            if (neg) out += '-';
        } else {
            out += neg ? " - " : " + ";
        }
        first = false;
        std::string mono = monomial_to_string(m, *chart_);
        if (mono.empty()) {
            out += rational_to_string(a);
        } else if (a == 1) {
            out += mono;
        } else {
            out += rational_to_string(a) + ' ' + mono;
        }
    }
    return out;
}

namespace {

struct Token {
    enum Kind { Number, Ident, Plus, Minus, Star, Caret, LParen, RParen, End } kind;
    std::string text;
    std::size_t pos;
};

bool ident_start(unsigned char ch) { return std::isalpha(ch) || ch == '_' || ch >= 0x80; }
bool ident_char(unsigned char ch) { return ident_start(ch) || std::isdigit(ch) || ch == '\''; }

std::vector<Token> tokenize(std::string_view s) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < s.size()) {
        unsigned char ch = s[i];
        if (std::isspace(ch)) {
            ++i;
            continue;
        }
        std::size_t start = i;
        if (std::isdigit(ch)) {
            while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
            if (i + 1 < s.size() && s[i] == '/' && std::isdigit(static_cast<unsigned char>(s[i + 1]))) {
                ++i;
                while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
            }
            out.push_back({Token::Number, std::string(s.substr(start, i - start)), start});
            continue;
        }
        if (ident_start(ch)) {
            while (i < s.size() && ident_char(static_cast<unsigned char>(s[i]))) ++i;
            out.push_back({Token::Ident, std::string(s.substr(start, i - start)), start});
            continue;
        }
        Token::Kind k;
        switch (ch) {
            case '+': k = Token::Plus; break;
            case '-': k = Token::Minus; break;
            case '*': k = Token::Star; break;
            case '^': k = Token::Caret; break;
            case '(': k = Token::LParen; break;
            case ')': k = Token::RParen; break;
            default:
                throw ParseError("unexpected character '" + std::string(1, static_cast<char>(ch)) + "' at " +
                                 std::to_string(i));
        }
        out.push_back({k, std::string(1, static_cast<char>(ch)), i});
        ++i;
    }
    out.push_back({Token::End, "", s.size()});
    return out;
}

class Parser {
public:
    Parser(std::string_view src, const ChartPtr& chart) : src_(src), chart_(chart), toks_(tokenize(src)) {}

    GPoly parse() {
        GPoly p = expr();
        if (peek().kind != Token::End) fail("trailing input");
        return p;
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    Token take() { return toks_[pos_++]; }
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(msg + " at position " + std::to_string(peek().pos) + " in '" + std::string(src_) + "'");
    }

    GPoly expr() {
        GPoly acc(chart_);
        bool neg = false;
        if (peek().kind == Token::Plus || peek().kind == Token::Minus) neg = take().kind == Token::Minus;
        GPoly t = term();
        acc += neg ? -t : t;
        while (peek().kind == Token::Plus || peek().kind == Token::Minus) {
            neg = take().kind == Token::Minus;
            t = term();
            acc += neg ? -t : t;
        }
        return acc;
    }

    bool starts_factor() const {
        auto k = peek().kind;
        return k == Token::Number || k == Token::Ident || k == Token::LParen;
    }

    GPoly term() {
        GPoly acc = factor();
        while (true) {
            if (peek().kind == Token::Star) {
                take();
                acc = poly_mul(acc, factor());
            } else if (starts_factor()) {
                acc = poly_mul(acc, factor());
            } else {
                break;
            }
        }
        return acc;
    }

    GPoly factor() {
        GPoly base = primary();
        if (peek().kind == Token::Caret) {
            take();
            if (peek().kind != Token::Number || peek().text.find('/') != std::string::npos)
                fail("exponent must be a non-negative integer");
            int k = std::stoi(take().text);
            GPoly r = GPoly::constant(chart_, 1);
            for (int i = 0; i < k; ++i) r = poly_mul(r, base);
            return r;
        }
        return base;
    }

    GPoly primary() {
        const Token& t = peek();
        switch (t.kind) {
            case Token::Number: {
                Rational q = parse_rational(take().text);
                return GPoly::constant(chart_, q);
            }
            case Token::Ident: {
                auto idx = chart_->find(t.text);
                if (!idx) fail("unknown generator '" + t.text + "'");
                take();
                return GPoly::generator(chart_, *idx);
            }
            case Token::LParen: {
                take();
                GPoly inner = expr();
                if (peek().kind != Token::RParen) fail("expected ')'");
                take();
                return inner;
            }
            case Token::Minus: {
                take();
                return -primary();
            }
            default:
                fail("expected a number, generator or '('");
        }
    }

    std::string_view src_;
    ChartPtr chart_;
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

}  // namespace

GPoly parse_poly(std::string_view text, const ChartPtr& chart) {
    if (!chart) throw ParseError("no chart given");
    return Parser(text, chart).parse();
}

}  // namespace gradedq
