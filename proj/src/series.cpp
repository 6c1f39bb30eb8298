#include "unitrat/series.hpp"

namespace unitrat {

TruncatedSeries expand_polynomial(const Polynomial& p, long bound) {
    TruncatedSeries s(p.dim(), bound);
    for (const auto& [e, c] : p.terms()) s.add_coeff(e, c);
    return s;
}

namespace {

// multiply f by the expansion of 1/(1 - c x^e)^mult, truncating
TruncatedSeries multiply_block(const TruncatedSeries& f, const Block& blk) {
    TruncatedSeries out(f.dim(), f.bound());
    const long w = total_degree(blk.e);
    for (const auto& [n, cf] : f.coeffs()) {
        const long room = f.bound() - total_degree(n);
        Rat ck(1); // binom(mult+k-1, k) * c^k
        for (long k = 0; k * w <= room; ++k) {
            if (k > 0) {
                ck *= blk.c;
                ck *= Rat(Int(blk.mult + k - 1));
                ck /= Rat(Int(k));
            }
            Vec m = n;
            for (size_t i = 0; i < m.size(); ++i) m[i] += k * blk.e[i];
            out.add_coeff(m, cf * ck);
        }
    }
    return out;
}

} // namespace

TruncatedSeries expand_rational(const UnitProductRational& r, long bound) {
    TruncatedSeries s = expand_polynomial(r.numerator(), bound);
    for (const Block& b : r.blocks()) s = multiply_block(s, b);
    return s;
}

TruncatedSeries expand_rational(const std::vector<UnitProductRational>& sum, long bound) {
    if (sum.empty()) return TruncatedSeries(1, bound);
    TruncatedSeries s(sum.front().dim(), bound);
    for (const UnitProductRational& r : sum) s += expand_rational(r, bound);
    return s;
}

namespace {

// [x^n] 1/prod_{i>=idx} (1 - c_i x^{e_i})^{m_i}
Rat denom_coefficient(const std::vector<Block>& blocks, size_t idx, const Vec& n) {
    if (idx == blocks.size()) return is_zero_vec(n) ? Rat(1) : Rat(0);
    const Block& b = blocks[idx];
    Rat sum(0);
    Rat ck(1);
    for (long k = 0;; ++k) {
        if (k > 0) {
            ck *= b.c;
            ck *= Rat(Int(b.mult + k - 1));
            ck /= Rat(Int(k));
        }
        Vec rest = n;
        bool fits = true;
        for (size_t i = 0; i < n.size() && fits; ++i) {
            rest[i] -= k * b.e[i];
            if (rest[i] < 0) fits = false;
        }
        if (!fits) break;
        sum += ck * denom_coefficient(blocks, idx + 1, rest);
    }
    return sum;
}

} // namespace

Rat coefficient_of(const UnitProductRational& r, const Vec& n) {
    Rat sum(0);
    for (const auto& [a, c] : r.numerator().terms()) {
        Vec rest = n;
        bool fits = true;
        for (size_t i = 0; i < n.size() && fits; ++i) {
            rest[i] -= a[i];
            if (rest[i] < 0) fits = false;
        }
        if (fits) sum += c * denom_coefficient(r.blocks(), 0, rest);
    }
    return sum;
}

TruncatedSeries hadamard_product(const TruncatedSeries& f1, const TruncatedSeries& f2) {
    if (f1.dim() != f2.dim()) throw std::invalid_argument("hadamard_product: dimension mismatch");
    TruncatedSeries out(f1.dim(), std::min(f1.bound(), f2.bound()));
    for (const auto& [n, c] : f1.coeffs()) {
        Rat c2 = f2.coeff(n);
        if (c2 != 0) out.add_coeff(n, c * c2);
    }
    return out;
}

TruncatedSeries hadamard_subinverse(const TruncatedSeries& f) {
    TruncatedSeries out(f.dim(), f.bound());
    for (const auto& [n, c] : f.coeffs()) out.add_coeff(n, Rat(1) / c);
    return out;
}

std::optional<Mismatch> compare(const TruncatedSeries& f1, const TruncatedSeries& f2) {
    if (f1.dim() != f2.dim()) throw std::invalid_argument("compare: dimension mismatch");
    const long bound = std::min(f1.bound(), f2.bound());
    auto it1 = f1.coeffs().begin(), it2 = f2.coeffs().begin();
    const auto end1 = f1.coeffs().end(), end2 = f2.coeffs().end();
    auto within = [&](const Vec& n) { return total_degree(n) <= bound; };
    while (it1 != end1 || it2 != end2) {
        while (it1 != end1 && !within(it1->first)) ++it1;
        while (it2 != end2 && !within(it2->first)) ++it2;
        if (it1 == end1 && it2 == end2) break;
        if (it2 == end2 || (it1 != end1 && it1->first < it2->first)) {
            return Mismatch{it1->first, it1->second, Rat(0)};
        }
        if (it1 == end1 || it2->first < it1->first) {
            return Mismatch{it2->first, Rat(0), it2->second};
        }
        if (it1->second != it2->second) return Mismatch{it1->first, it1->second, it2->second};
        ++it1;
        ++it2;
    }
    return std::nullopt;
}

} // namespace unitrat
