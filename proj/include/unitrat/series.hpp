#ifndef UNITRAT_SERIES_HPP
#define UNITRAT_SERIES_HPP

#include <map>
#include <optional>

#include "unitrat/unitproduct.hpp"

namespace unitrat {

/// Truncated multivariate power series over Q: all coefficients with total
/// degree <= bound; absent key means 0.
class TruncatedSeries {
public:
    TruncatedSeries(size_t dim, long bound) : dim_(dim), bound_(bound) {}

    size_t dim() const { return dim_; }
    long bound() const { return bound_; }
    const std::map<Vec, Rat>& coeffs() const { return coeffs_; }

    Rat coeff(const Vec& n) const {
        auto it = coeffs_.find(n);
        return it == coeffs_.end() ? Rat(0) : it->second;
    }
    void add_coeff(const Vec& n, const Rat& c) {
        if (c == 0 || total_degree(n) > bound_) return;
        auto [it, fresh] = coeffs_.emplace(n, c);
        if (!fresh) {
            it->second += c;
            if (it->second == 0) coeffs_.erase(it);
        }
    }

    TruncatedSeries& operator+=(const TruncatedSeries& o) {
        for (const auto& [n, c] : o.coeffs_) add_coeff(n, c);
        return *this;
    }

private:
    size_t dim_;
    long bound_;
    std::map<Vec, Rat> coeffs_;
};

/// Exact expansion of the represented rational function at the origin up to
/// total degree bound.
TruncatedSeries expand_rational(const UnitProductRational& r, long bound);
TruncatedSeries expand_rational(const std::vector<UnitProductRational>& sum, long bound);
TruncatedSeries expand_polynomial(const Polynomial& p, long bound);

/// Single coefficient of r at n, by enumerating the representations of n over
/// the block exponents (no global expansion).
Rat coefficient_of(const UnitProductRational& r, const Vec& n);

TruncatedSeries hadamard_product(const TruncatedSeries& f1, const TruncatedSeries& f2);
TruncatedSeries hadamard_subinverse(const TruncatedSeries& f);

struct Mismatch {
    Vec n;
    Rat c1, c2;
};

/// Lexicographically first exponent within the common bound where the
/// coefficients differ.
std::optional<Mismatch> compare(const TruncatedSeries& f1, const TruncatedSeries& f2);

} // namespace unitrat

#endif
