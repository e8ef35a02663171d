#include "dynsheaf/parser.hpp"

#include "dynsheaf/errors.hpp"

#include <cctype>
#include <cmath>

namespace dynsheaf {

namespace {

struct RationalFn {
    Poly num = Poly::constant(Cx(0));
    Poly den = Poly::constant(Cx(1));

    bool is_constant() const { return num.degree() <= 0 && den.degree() <= 0; }
    Cx constant_value() const { return num.coeff(0) / den.coeff(0); }
};

RationalFn rf_add(const RationalFn& a, const RationalFn& b) {
    return {a.num * b.den + b.num * a.den, a.den * b.den};
}
RationalFn rf_sub(const RationalFn& a, const RationalFn& b) {
    return {a.num * b.den - b.num * a.den, a.den * b.den};
}
RationalFn rf_mul(const RationalFn& a, const RationalFn& b) {
    return {a.num * b.num, a.den * b.den};
}
RationalFn rf_div(const RationalFn& a, const RationalFn& b, int col) {
    if (b.num.is_zero()) throw SyntaxError("division by zero at column " + std::to_string(col));
    return {a.num * b.den, a.den * b.num};
}
RationalFn rf_pow(RationalFn a, long e) {
    RationalFn r{Poly::constant(Cx(1)), Poly::constant(Cx(1))};
    bool invert = e < 0;
    unsigned long k = invert ? -e : e;
    while (k) {
        if (k & 1) r = rf_mul(r, a);
        a = rf_mul(a, a);
        k >>= 1;
    }
    if (invert) std::swap(r.num, r.den);
    return r;
}

struct Parser {
    const std::string& s;
    size_t pos = 0;

    explicit Parser(const std::string& text) : s(text) {}

    int column() const { return static_cast<int>(pos) + 1; }
    void skip_ws() {
        while (pos < s.size() && std::isspace((unsigned char)s[pos])) ++pos;
    }
    char peek() {
        skip_ws();
        return pos < s.size() ? s[pos] : '\0';
    }
    bool eat(char c) {
        if (peek() == c) {
            ++pos;
            return true;
        }
        return false;
    }

    RationalFn parse_expr() {
        RationalFn r = parse_term();
        while (true) {
            char c = peek();
            if (c == '+') {
                ++pos;
                r = rf_add(r, parse_term());
            } else if (c == '-') {
                ++pos;
                r = rf_sub(r, parse_term());
            } else {
                return r;
            }
        }
    }

    RationalFn parse_term() {
        RationalFn r = parse_unary();
        while (true) {
            char c = peek();
            if (c == '*') {
                ++pos;
                r = rf_mul(r, parse_unary());
            } else if (c == '/') {
                int col = column();
                ++pos;
                r = rf_div(r, parse_unary(), col);
            } else {
                return r;
            }
        }
    }

    RationalFn parse_unary() {
        char c = peek();
        if (c == '-') {
            ++pos;
            RationalFn r = parse_unary();
            r.num = -r.num;
            return r;
        }
        if (c == '+') {
            ++pos;
            return parse_unary();
        }
        return parse_power();
    }

    RationalFn parse_power() {
        RationalFn base = parse_atom();
        if (peek() != '^') return base;
        int op_col = column();
        ++pos;
        long e = parse_exponent(op_col);
        return rf_pow(base, e);
    }

    long parse_exponent(int op_col) {
        char c = peek();
        bool neg = false;
        if (c == '-') {
            ++pos;
            neg = true;
            c = peek();
        }
        if (std::isdigit((unsigned char)c)) {
            long v = 0;
            while (pos < s.size() && std::isdigit((unsigned char)s[pos])) {
                v = v * 10 + (s[pos] - '0');
                ++pos;
            }
            return neg ? -v : v;
        }
        if (c == '(') {
            ++pos;
            RationalFn inner = parse_expr();
            if (!eat(')')) throw SyntaxError("expected ')' at column " + std::to_string(column()));
            if (!inner.is_constant())
                throw NonRationalExpression("exponent must be an integer constant (column " +
                                            std::to_string(op_col) + ")");
            Cx v = inner.constant_value();
            double r = std::round(v.real());
            if (std::abs(v.imag()) > 1e-12 || std::abs(v.real() - r) > 1e-12)
                throw NonRationalExpression("exponent must be an integer constant (column " +
                                            std::to_string(op_col) + ")");
            long res = static_cast<long>(r);
            return neg ? -res : res;
        }
        if (c == 'z')
            throw NonRationalExpression("variable exponent at column " +
                                        std::to_string(column()));
        throw SyntaxError("missing exponent after '^' at column " + std::to_string(op_col));
    }

    RationalFn parse_atom() {
        char c = peek();
        if (c == '(') {
            ++pos;
            RationalFn r = parse_expr();
            if (!eat(')')) throw SyntaxError("expected ')' at column " + std::to_string(column()));
            return r;
        }
        if (c == 'z') {
            ++pos;
            return {Poly::identity(), Poly::constant(Cx(1))};
        }
        if (c == 'i') {
            ++pos;
            return {Poly::constant(Cx(0, 1)), Poly::constant(Cx(1))};
        }
        if (std::isdigit((unsigned char)c) || c == '.') {
            size_t start = pos;
            while (pos < s.size() &&
                   (std::isdigit((unsigned char)s[pos]) || s[pos] == '.' || s[pos] == 'e' ||
                    s[pos] == 'E' ||
                    ((s[pos] == '+' || s[pos] == '-') && pos > start &&
                     (s[pos - 1] == 'e' || s[pos - 1] == 'E'))))
                ++pos;
            double v = 0;
            try {
                v = std::stod(s.substr(start, pos - start));
            } catch (...) {
                throw SyntaxError("malformed number at column " + std::to_string(start + 1));
            }
            if (pos < s.size() && s[pos] == 'i') {
                ++pos;
                return {Poly::constant(Cx(0, v)), Poly::constant(Cx(1))};
            }
            return {Poly::constant(Cx(v)), Poly::constant(Cx(1))};
        }
        if (c == '\0') throw SyntaxError("unexpected end of input at column " +
                                         std::to_string(column()));
        throw SyntaxError(std::string("unexpected character '") + c + "' at column " +
                          std::to_string(column()));
    }
};

} // namespace

RationalMap parse_map(const std::string& text, const Tolerances& tol) {
    Parser p(text);
    RationalFn r = p.parse_expr();
    p.skip_ws();
    if (p.pos != text.size())
        throw SyntaxError(std::string("unexpected character '") + text[p.pos] +
                          "' at column " + std::to_string(p.column()));
    return make_map(r.num, r.den, tol);
}

} // namespace dynsheaf
