#ifndef UNITRAT_POLYNOMIAL_HPP
#define UNITRAT_POLYNOMIAL_HPP

#include <map>
#include <optional>

#include "unitrat/basics.hpp"

namespace unitrat {

/// Sparse multivariate polynomial over Q, exponent vectors as keys.
/// Zero coefficients are never stored.
class Polynomial {
public:
    using Terms = std::map<Vec, Rat>;

    Polynomial() = default;
    explicit Polynomial(size_t dim) : dim_(dim) {}
    Polynomial(size_t dim, const Rat& c) : dim_(dim) {
        if (c != 0) terms_[Vec(dim, 0)] = c;
    }

    static Polynomial monomial(const Vec& e, const Rat& c) {
        Polynomial p(e.size());
        if (c != 0) p.terms_[e] = c;
        return p;
    }

    size_t dim() const { return dim_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    Rat coeff(const Vec& e) const {
        auto it = terms_.find(e);
        return it == terms_.end() ? Rat(0) : it->second;
    }

    void add_term(const Vec& e, const Rat& c) {
        if (c == 0) return;
        auto [it, fresh] = terms_.emplace(e, c);
        if (!fresh) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    Polynomial& operator+=(const Polynomial& o) {
        for (const auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }
    Polynomial& operator-=(const Polynomial& o) {
        for (const auto& [e, c] : o.terms_) add_term(e, -c);
        return *this;
    }
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        Polynomial r(a.dim_ ? a.dim_ : b.dim_);
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) r.add_term(add(ea, eb), ca * cb);
        return r;
    }

    Polynomial& operator*=(const Rat& c) {
        if (c == 0) {
            terms_.clear();
            return *this;
        }
        for (auto& [e, v] : terms_) v *= c;
        return *this;
    }
    friend Polynomial operator*(Polynomial a, const Rat& c) { return a *= c; }
    friend Polynomial operator*(const Rat& c, Polynomial a) { return a *= c; }

    friend bool operator==(const Polynomial& a, const Polynomial& b) {
        return a.terms_ == b.terms_;
    }

    long total_deg() const {
        long d = 0;
        for (const auto& [e, c] : terms_) d = std::max(d, total_degree(e));
        return d;
    }

    // largest exponent appearing in any coordinate
    long max_coord_deg() const {
        long d = 0;
        for (const auto& [e, c] : terms_)
            for (long x : e) d = std::max(d, x);
        return d;
    }

    /// Substitute an affine expression for each variable: variable i becomes
    /// subs[i], a polynomial in the target variable set. Exponents must be
    /// nonnegative.
    Polynomial substitute(const std::vector<Polynomial>& subs, size_t out_dim) const {
        Polynomial r(out_dim);
        for (const auto& [e, c] : terms_) {
            Polynomial t(out_dim, c);
            for (size_t i = 0; i < e.size(); ++i)
                for (long k = 0; k < e[i]; ++k) t = t * subs[i];
            r += t;
        }
        return r;
    }

    Rat evaluate(const std::vector<Rat>& x) const {
        Rat r(0);
        for (const auto& [e, c] : terms_) {
            Rat t = c;
            for (size_t i = 0; i < e.size(); ++i) t *= rat_pow(x[i], e[i]);
            r += t;
        }
        return r;
    }

private:
    size_t dim_ = 0;
    Terms terms_;
};

/// Univariate polynomial over Q as a dense coefficient vector, lowest degree
/// first. Used for recursion coefficients and binomial-basis work.
class UniPoly {
public:
    UniPoly() = default;
    explicit UniPoly(std::vector<Rat> coeffs) : c_(std::move(coeffs)) { trim(); }
    static UniPoly constant(const Rat& c) { return UniPoly({c}); }

    const std::vector<Rat>& coeffs() const { return c_; }
    bool is_zero() const { return c_.empty(); }
    long degree() const { return c_.empty() ? -1 : static_cast<long>(c_.size()) - 1; }

    Rat operator()(const Rat& x) const {
        Rat r(0);
        for (size_t i = c_.size(); i-- > 0;) r = r * x + c_[i];
        return r;
    }

    UniPoly& operator+=(const UniPoly& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Rat(0));
        for (size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
        trim();
        return *this;
    }
    friend UniPoly operator*(const UniPoly& a, const UniPoly& b) {
        if (a.is_zero() || b.is_zero()) return UniPoly();
        std::vector<Rat> r(a.c_.size() + b.c_.size() - 1, Rat(0));
        for (size_t i = 0; i < a.c_.size(); ++i)
            for (size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
        return UniPoly(std::move(r));
    }
    UniPoly& operator*=(const Rat& s) {
        for (auto& x : c_) x *= s;
        trim();
        return *this;
    }
    friend bool operator==(const UniPoly& a, const UniPoly& b) { return a.c_ == b.c_; }

private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
    std::vector<Rat> c_;
};

} // namespace unitrat

#endif
