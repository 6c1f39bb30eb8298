#ifndef UNITRAT_PRECURSIVE_HPP
#define UNITRAT_PRECURSIVE_HPP

#include <functional>
#include <map>
#include <memory>

#include "unitrat/series.hpp"
#include "unitrat/skewgeom.hpp"

namespace unitrat {

/// One pair (a, Q_{j,a}) of a recursion sum_{a in [0,k]^d} Q_{j,a}(n_j) f(n-a) = 0.
struct PRecursion {
    Vec shift;
    UniPoly q;
};

/// Multivariate P-recursive system of size k: per-axis recursions valid on
/// N_{>=k}^d, k-section subsystems for d > 1, and initial values on the base
/// region.
struct PRecursiveSystem {
    size_t dim = 1;
    long k = 0;
    std::vector<std::vector<PRecursion>> recursions; // one list per axis
    struct Section {
        size_t axis;
        long value;
        std::shared_ptr<PRecursiveSystem> system; // dimension dim-1
    };
    std::vector<Section> sections;
    std::map<Vec, Rat> initial;

    const PRecursiveSystem* section(size_t axis, long value) const {
        for (const Section& s : sections)
            if (s.axis == axis && s.value == value) return s.system.get();
        return nullptr;
    }
};

/// Value at n determined by the recursions, sections and initial data.
/// Stepping resolves along the first axis, delegating to sections below the
/// size threshold. Throws capability_error when the stepping coefficient
/// vanishes, std::domain_error on missing initial data.
Rat evaluate(const PRecursiveSystem& sys, const Vec& n);

struct Violation {
    size_t axis;
    Vec n;
};

/// Verifies every recursion instance with n in N_{>=k}^d, |n| <= bound,
/// exactly; first violation or absent.
std::optional<Violation> check_solution(const PRecursiveSystem& sys,
                                        const std::function<Rat(const Vec&)>& f,
                                        long bound);

std::optional<Violation> check_solution(const PRecursiveSystem& sys, const TruncatedSeries& f);
std::optional<Violation> check_solution(const PRecursiveSystem& sys, const PiecewisePolyExp& f,
                                        long bound);
std::optional<Violation> check_solution(const PRecursiveSystem& sys, const SkewGeomSum& f,
                                        long bound);

struct VanishVerdict {
    enum Kind { confirmed, hypothesis_failed, crosscheck_failed } kind;
    std::optional<Vec> witness;
    Vec region_lower; // asserted vanishing region N_{>=l_1} x ... x N_{>=l_d}
};

/// The zero-propagation lemma: if f vanishes on the hypothesis strips
/// (checked up to the bound) and every stepping polynomial is zero-free on
/// integers >= c (certified exactly), then f vanishes on the product region;
/// cross-checked by evaluation up to the bound.
VanishVerdict vanishing_propagate(const PRecursiveSystem& sys,
                                  const std::function<Rat(const Vec&)>& f, long c,
                                  const Vec& strips, long bound);

/// Shift relations read off the denominator blocks of a unit-product
/// rational: valid on the interior; no sections or initial data.
PRecursiveSystem derive_system(const UnitProductRational& r);

} // namespace unitrat

#endif
