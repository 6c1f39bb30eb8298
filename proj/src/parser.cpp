#include "unitrat/parser.hpp"

#include <algorithm>
#include <cctype>
#include <map>

namespace unitrat {

namespace {

// exponent maps keyed by 1-based variable index until the dimension is known
using SparseMono = std::map<size_t, long>;

struct RawTerm {
    std::map<SparseMono, Rat> numerator;
    struct RawBlock {
        Rat c;
        SparseMono e;
        long mult;
    };
    std::vector<RawBlock> blocks;
};

struct Cursor {
    const std::string& s;
    size_t pos = 0;

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool eof() {
        skip_ws();
        return pos >= s.size();
    }
    char peek() {
        skip_ws();
        return pos < s.size() ? s[pos] : '\0';
    }
    char peek2() {
        skip_ws();
        size_t p = pos + 1;
        while (p < s.size() && std::isspace(static_cast<unsigned char>(s[p]))) ++p;
        return p < s.size() ? s[p] : '\0';
    }
    char get() {
        skip_ws();
        return pos < s.size() ? s[pos++] : '\0';
    }
    void expect(char c, const std::string& what) {
        if (peek() != c) fail("expected '" + std::string(1, c) + "' " + what);
        ++pos;
    }
    [[noreturn]] void fail(const std::string& msg) const {
        size_t line = 1, col = 1;
        for (size_t i = 0; i < pos && i < s.size(); ++i) {
            if (s[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw parse_error(msg, line, col);
    }

    bool at_digit() { return std::isdigit(static_cast<unsigned char>(peek())); }

    Int nat() {
        skip_ws();
        if (!at_digit()) fail("expected a number");
        std::string digits;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
            digits += s[pos++];
        return Int(digits);
    }

    long nat_small(const std::string& what) {
        Int n = nat();
        if (!n.fits_slong_p()) fail(what + " too large");
        return n.get_si();
    }
};

struct Parser {
    Cursor cur;
    size_t max_var = 0;

    // coef := ['-'] nat ['/' nat]; the '/' is taken only when a digit follows
    Rat coef() {
        bool neg = false;
        if (cur.peek() == '-') {
            cur.get();
            neg = true;
        }
        Int num = cur.nat();
        Int den = 1;
        if (cur.peek() == '/' && std::isdigit(static_cast<unsigned char>(cur.peek2()))) {
            cur.get();
            den = cur.nat();
            if (den == 0) cur.fail("zero denominator in coefficient");
        }
        Rat q(num, den);
        q.canonicalize();
        return neg ? Rat(-q) : q;
    }

    // var := 'x' nat
    size_t var() {
        if (cur.peek() != 'x') cur.fail("expected a variable");
        cur.get();
        long idx = cur.nat_small("variable index");
        if (idx < 1) cur.fail("variable index must be >= 1");
        max_var = std::max<size_t>(max_var, idx);
        return static_cast<size_t>(idx);
    }

    // mono := var ['^' nat] {'*' var ['^' nat]}; stops before '*' not
    // followed by a variable
    SparseMono mono() {
        SparseMono m;
        while (true) {
            size_t v = var();
            long e = 1;
            if (cur.peek() == '^') {
                cur.get();
                e = cur.nat_small("exponent");
            }
            m[v] += e;
            if (cur.peek() == '*' && cur.peek2() == 'x') {
                cur.get();
                continue;
            }
            break;
        }
        std::erase_if(m, [](const auto& kv) { return kv.second == 0; });
        return m;
    }

    // one signed coef-monomial term of a polynomial
    void poly_term(std::map<SparseMono, Rat>& out, int sign) {
        Rat c(sign);
        bool have = false;
        if (cur.peek() == '-' || cur.at_digit()) {
            c *= coef();
            have = true;
        }
        SparseMono m;
        if (cur.peek() == 'x') {
            m = mono();
            have = true;
        } else if (have && cur.peek() == '*' && cur.peek2() == 'x') {
            cur.get();
            m = mono();
        }
        if (!have) cur.fail("expected a coefficient or a monomial");
        out[m] += c;
        if (out[m] == 0) out.erase(m);
    }

    // poly := term | '(' term (('+'|'-') term)* ')'
    std::map<SparseMono, Rat> poly() {
        std::map<SparseMono, Rat> out;
        if (cur.peek() == '(') {
            cur.get();
            int sign = 1;
            if (cur.peek() == '+' || cur.peek() == '-') sign = cur.get() == '-' ? -1 : 1;
            poly_term(out, sign);
            while (cur.peek() == '+' || cur.peek() == '-') {
                sign = cur.get() == '-' ? -1 : 1;
                poly_term(out, sign);
            }
            cur.expect(')', "closing the numerator");
        } else {
            poly_term(out, 1);
        }
        return out;
    }

    // dfactor := '(' '1' '-' [coef '*'] mono ')' ['^' nat]
    RawTerm::RawBlock dfactor() {
        cur.expect('(', "opening a denominator factor");
        if (cur.peek() != '1') cur.fail("denominator not unit-product: factor must start with 1");
        cur.get();
        if (cur.peek() != '-')
            cur.fail("denominator not unit-product: expected '-' after the leading 1");
        cur.get();
        Rat c(1);
        if (cur.peek() == '-' || cur.at_digit()) {
            c = coef();
            if (c == 0) cur.fail("zero block constant");
            if (cur.peek() != '*') cur.fail("expected '*' between constant and monomial");
            cur.get();
        }
        SparseMono m = mono();
        if (m.empty()) cur.fail("denominator not unit-product: constant factor");
        if (cur.peek() == '+' || cur.peek() == '-')
            cur.fail("denominator not unit-product: more than two terms in a factor");
        cur.expect(')', "closing the denominator factor");
        long mult = 1;
        if (cur.peek() == '^') {
            cur.get();
            mult = cur.nat_small("multiplicity");
            if (mult < 1) cur.fail("multiplicity must be positive");
        }
        return {c, std::move(m), mult};
    }

    // denom := dfactor {'*' dfactor}, optionally wrapped in one extra pair of
    // parentheses
    std::vector<RawTerm::RawBlock> denom() {
        std::vector<RawTerm::RawBlock> blocks;
        const bool wrapped = cur.peek() == '(' && cur.peek2() == '(';
        if (wrapped) cur.get();
        blocks.push_back(dfactor());
        while (cur.peek() == '*') {
            cur.get();
            blocks.push_back(dfactor());
        }
        if (wrapped) cur.expect(')', "closing the denominator");
        return blocks;
    }

    RawTerm frac() {
        RawTerm t;
        t.numerator = poly();
        if (cur.peek() == '/') {
            cur.get();
            t.blocks = denom();
        }
        return t;
    }

    std::vector<RawTerm> input() {
        std::vector<RawTerm> terms;
        int sign = 1;
        if (cur.peek() == '+' || cur.peek() == '-') sign = cur.get() == '-' ? -1 : 1;
        terms.push_back(frac());
        if (sign < 0)
            for (auto& [m, c] : terms.back().numerator) c = -c;
        while (!cur.eof()) {
            char op = cur.get();
            if (op != '+' && op != '-') cur.fail("expected '+' or '-' between fractions");
            RawTerm t = frac();
            if (op == '-')
                for (auto& [m, c] : t.numerator) c = -c;
            terms.push_back(std::move(t));
        }
        return terms;
    }
};

Vec densify(const SparseMono& m, size_t dim) {
    Vec e(dim, 0);
    for (const auto& [v, x] : m) e[v - 1] = x;
    return e;
}

} // namespace

RationalExpr parse(const std::string& text) {
    Parser p{Cursor{text}};
    std::vector<RawTerm> raw = p.input();
    RationalExpr expr;
    expr.source = text;
    expr.dim = std::max<size_t>(p.max_var, 1);
    for (RawTerm& t : raw) {
        Polynomial num(expr.dim);
        for (const auto& [m, c] : t.numerator) num.add_term(densify(m, expr.dim), c);
        std::vector<Block> blocks;
        for (const RawTerm::RawBlock& b : t.blocks)
            blocks.push_back({b.c, densify(b.e, expr.dim), b.mult});
        expr.terms.emplace_back(expr.dim, std::move(num), std::move(blocks));
    }
    return expr;
}

std::string print(const RationalExpr& expr) {
    std::string out;
    for (size_t i = 0; i < expr.terms.size(); ++i) {
        if (i) out += " + ";
        out += expr.terms[i].to_string();
    }
    return out.empty() ? "0" : out;
}

} // namespace unitrat
