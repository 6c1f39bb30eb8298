#include "unitrat/precursive.hpp"

#include <algorithm>
#include <limits>

namespace unitrat {

namespace {

struct Evaluator {
    const PRecursiveSystem& sys;
    std::map<Vec, Rat> memo;

    // lex-least shift with nonzero polynomial on the stepping axis
    const PRecursion* step_anchor() const {
        const PRecursion* best = nullptr;
        for (const PRecursion& r : sys.recursions.at(0)) {
            if (r.q.is_zero()) continue;
            if (!best || r.shift < best->shift) best = &r;
        }
        return best;
    }

    Rat value(const Vec& n) {
        if (auto it = sys.initial.find(n); it != sys.initial.end()) return it->second;
        if (auto it = memo.find(n); it != memo.end()) return it->second;
        for (size_t i = 0; i < sys.dim; ++i) {
            if (n[i] < sys.k) {
                const PRecursiveSystem* sec = sys.section(i, n[i]);
                if (!sec) {
                    if (sys.dim == 1)
                        throw std::domain_error("evaluate: missing initial value at " +
                                                vec_to_string(n));
                    throw std::domain_error("evaluate: missing section (axis " +
                                            std::to_string(i + 1) + ", value " +
                                            std::to_string(n[i]) + ")");
                }
                Vec rest;
                for (size_t j = 0; j < sys.dim; ++j)
                    if (j != i) rest.push_back(n[j]);
                if (rest.empty())
                    throw std::domain_error("evaluate: missing initial value at " +
                                            vec_to_string(n));
                Rat v = evaluate(*sec, rest);
                memo[n] = v;
                return v;
            }
        }
        const PRecursion* anchor = step_anchor();
        if (!anchor) throw std::domain_error("evaluate: no usable recursion on axis 1");
        // equation instance at N = n + anchor.shift solves for f(n)
        Vec big = add(n, anchor->shift);
        Rat lead = anchor->q(Rat(big[0]));
        if (lead == 0)
            throw capability_error("evaluate: polynomial leading coefficient vanishes at n1 = " +
                                   std::to_string(big[0]));
        Rat acc(0);
        for (const PRecursion& r : sys.recursions.at(0)) {
            if (r.q.is_zero() || r.shift == anchor->shift) continue;
            Vec arg = sub(big, r.shift);
            acc += r.q(Rat(big[0])) * value(arg);
        }
        Rat v = -acc / lead;
        memo[n] = v;
        return v;
    }
};

} // namespace

Rat evaluate(const PRecursiveSystem& sys, const Vec& n) {
    if (n.size() != sys.dim) throw std::invalid_argument("evaluate: dimension mismatch");
    if (!nonnegative(n)) throw std::invalid_argument("evaluate: point outside N^d");
    Evaluator ev{sys, {}};
    return ev.value(n);
}

std::optional<Violation> check_solution(const PRecursiveSystem& sys,
                                        const std::function<Rat(const Vec&)>& f,
                                        long bound) {
    const size_t d = sys.dim;
    Vec n(d, sys.k);
    if (total_degree(n) > bound) return std::nullopt;
    while (true) {
        for (size_t j = 0; j < d; ++j) {
            Rat acc(0);
            for (const PRecursion& r : sys.recursions.at(j)) {
                if (r.q.is_zero()) continue;
                acc += r.q(Rat(n[j])) * f(sub(n, r.shift));
            }
            if (acc != 0) return Violation{j, n};
        }
        // next point in N_{>=k}^d with |n| <= bound, lexicographic
        size_t c = d;
        while (c > 0) {
            --c;
            ++n[c];
            if (total_degree(n) <= bound) break;
            n[c] = sys.k;
            if (c == 0) return std::nullopt;
        }
    }
}

std::optional<Violation> check_solution(const PRecursiveSystem& sys, const TruncatedSeries& f) {
    return check_solution(sys, [&](const Vec& n) { return f.coeff(n); }, f.bound());
}

std::optional<Violation> check_solution(const PRecursiveSystem& sys, const PiecewisePolyExp& f,
                                        long bound) {
    return check_solution(sys, [&](const Vec& n) { return evaluate_at(f, n); }, bound);
}

std::optional<Violation> check_solution(const PRecursiveSystem& sys, const SkewGeomSum& f,
                                        long bound) {
    return check_solution(sys, [&](const Vec& n) { return coefficient_at(f, n); }, bound);
}

namespace {

// integer zero-freeness of q on [c, infinity), via the Cauchy root bound
bool zero_free_from(const UniPoly& q, long c) {
    if (q.is_zero()) return true;
    const auto& a = q.coeffs();
    const size_t deg = a.size() - 1;
    if (deg == 0) return true;
    Rat bound(1);
    for (size_t i = 0; i < deg; ++i) {
        Rat t = abs(a[i] / a[deg]);
        if (t > bound) bound = t;
    }
    bound += 1; // Cauchy bound: no real roots beyond it
    Int hi_int;
    mpz_cdiv_q(hi_int.get_mpz_t(), bound.get_num().get_mpz_t(), bound.get_den().get_mpz_t());
    const long hi = hi_int.get_si();
    for (long t = c; t <= hi; ++t)
        if (q(Rat(t)) == 0) return false;
    return true;
}

} // namespace

VanishVerdict vanishing_propagate(const PRecursiveSystem& sys,
                                  const std::function<Rat(const Vec&)>& f, long c,
                                  const Vec& strips, long bound) {
    if (strips.size() != sys.dim)
        throw std::invalid_argument("vanishing_propagate: strip count mismatch");
    for (long l : strips)
        if (l < c) throw std::invalid_argument("vanishing_propagate: strip below c");
    for (const auto& axis : sys.recursions)
        for (const PRecursion& r : axis)
            if (!zero_free_from(r.q, c))
                throw std::invalid_argument(
                    "vanishing_propagate: stepping polynomial has a zero at an integer >= c");

    VanishVerdict verdict{VanishVerdict::confirmed, std::nullopt, strips};
    const size_t d = sys.dim;
    // hypothesis strips: for each axis i, N_{>=c}^{i-1} x [l_i, l_i+k-1] x N_{>=c}^{d-i}
    for (size_t i = 0; i < d && sys.k >= 1; ++i) {
        Vec n(d, c);
        n[i] = strips[i];
        if (total_degree(n) > bound) continue;
        while (true) {
            if (f(n) != 0) {
                verdict.kind = VanishVerdict::hypothesis_failed;
                verdict.witness = n;
                return verdict;
            }
            size_t cc = d;
            bool done = false;
            while (cc > 0) {
                --cc;
                ++n[cc];
                const long lo = (cc == i) ? strips[i] : c;
                const long hi_band = (cc == i) ? strips[i] + sys.k - 1
                                                    : std::numeric_limits<long>::max();
                if (n[cc] <= hi_band && total_degree(n) <= bound) break;
                n[cc] = lo;
                if (cc == 0) {
                    done = true;
                    break;
                }
            }
            if (done) break;
        }
    }
    // cross-check the asserted region
    Vec n = strips;
    if (total_degree(n) <= bound) {
        while (true) {
            if (f(n) != 0) {
                verdict.kind = VanishVerdict::crosscheck_failed;
                verdict.witness = n;
                return verdict;
            }
            size_t cc = d;
            bool done = false;
            while (cc > 0) {
                --cc;
                ++n[cc];
                if (total_degree(n) <= bound) break;
                n[cc] = strips[cc];
                if (cc == 0) {
                    done = true;
                    break;
                }
            }
            if (done) break;
        }
    }
    return verdict;
}

PRecursiveSystem derive_system(const UnitProductRational& r) {
    Polynomial q = r.denominator_polynomial();
    PRecursiveSystem sys;
    sys.dim = r.dim();
    sys.k = std::max(q.max_coord_deg(), r.numerator().max_coord_deg() + 1);
    sys.recursions.resize(sys.dim);
    for (size_t j = 0; j < sys.dim; ++j)
        for (const auto& [e, cf] : q.terms()) sys.recursions[j].push_back({e, UniPoly({cf})});
    return sys;
}

} // namespace unitrat
