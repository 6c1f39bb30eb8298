#ifndef UNITRAT_BASICS_HPP
#define UNITRAT_BASICS_HPP

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace unitrat {

using Int = mpz_class;
using Rat = mpq_class;

// Lattice points, exponent vectors and period vectors. Desk-scale values,
// so machine integers suffice; all linear algebra on top of them is exact
// (Int/Rat).
using Vec = std::vector<long>;

// Raised when a configured resource budget is exhausted (frontier caps,
// split budgets, refinement cascades). Never used for wrong answers.
class capability_error : public std::runtime_error {
public:
    explicit capability_error(const std::string& what) : std::runtime_error(what) {}
};

inline long total_degree(const Vec& v) {
    long s = 0;
    for (long x : v) s += x;
    return s;
}

inline bool is_zero_vec(const Vec& v) {
    for (long x : v)
        if (x != 0) return false;
    return true;
}

inline Vec add(const Vec& a, const Vec& b) {
    Vec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline Vec sub(const Vec& a, const Vec& b) {
    Vec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline Vec scale(long k, const Vec& a) {
    Vec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = k * a[i];
    return r;
}

// componentwise a <= b
inline bool dominated(const Vec& a, const Vec& b) {
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

inline bool nonnegative(const Vec& v) {
    for (long x : v)
        if (x < 0) return false;
    return true;
}

inline std::string vec_to_string(const Vec& v) {
    std::string s = "(";
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(v[i]);
    }
    return s + ")";
}

// Exact rational text form `a`, `-a` or `a/b` with b > 0.
inline std::string rat_to_string(const Rat& q) {
    return q.get_str();
}

inline Rat rat_from_string(const std::string& s) {
    Rat q;
    if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational literal: " + s);
    q.canonicalize();
    if (q.get_den() < 0) throw std::invalid_argument("bad rational literal: " + s);
    return q;
}

inline Rat rat_pow(const Rat& base, long e) {
    if (e == 0) return Rat(1);
    Rat b = base;
    bool inv = e < 0;
    unsigned long n = inv ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
    if (inv) {
        if (b == 0) throw std::domain_error("0 has no negative power");
        b = Rat(1) / b;
    }
    Rat r(1);
    while (n) {
        if (n & 1) r *= b;
        b *= b;
        n >>= 1;
    }
    return r;
}

// binom(n, k) over the integers, exact
inline Int binomial(const Int& n, unsigned long k) {
    Int r = 1;
    for (unsigned long i = 0; i < k; ++i) {
        r *= (n - static_cast<long>(i));
        r /= static_cast<long>(i + 1);
    }
    return r;
}

} // namespace unitrat

#endif
