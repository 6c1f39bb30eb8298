#ifndef UNITRAT_SEMILINEAR_HPP
#define UNITRAT_SEMILINEAR_HPP

#include <optional>

#include "unitrat/diophantine.hpp"
#include "unitrat/factored.hpp"

namespace unitrat {

/// offset + period_1 N + ... + period_s N with Z-linearly independent periods.
/// Periods are kept lexicographically sorted so structural equality is
/// meaningful.
class SimpleLinearSet {
public:
    SimpleLinearSet(Vec offset, std::vector<Vec> periods);

    size_t dim() const { return offset_.size(); }
    const Vec& offset() const { return offset_; }
    const std::vector<Vec>& periods() const { return periods_; }
    size_t rank() const { return periods_.size(); }

    /// Unique coordinates m with n = offset + sum m_i period_i, or absent.
    std::optional<Vec> member_coords(const Vec& n) const;
    bool contains_point(const Vec& n) const { return member_coords(n).has_value(); }

    std::string to_string() const;

    friend bool operator==(const SimpleLinearSet& a, const SimpleLinearSet& b) {
        return a.offset_ == b.offset_ && a.periods_ == b.periods_;
    }
    friend bool operator<(const SimpleLinearSet& a, const SimpleLinearSet& b) {
        if (a.offset_ != b.offset_) return a.offset_ < b.offset_;
        return a.periods_ < b.periods_;
    }

private:
    Vec offset_;
    std::vector<Vec> periods_;
};

struct SemilinearSet {
    std::vector<SimpleLinearSet> components;
    bool disjoint = false;
    bool empty() const { return components.empty(); }
};

/// Certificate that Sub is contained in Sup: mu places Sub's offset, row i of
/// t expresses Sub.period_i as an N-combination of Sup's periods.
struct ContainmentCert {
    Vec mu;
    std::vector<Vec> t; // one row per Sub period, entries >= 0
};

std::optional<ContainmentCert> contains_simple(const SimpleLinearSet& sub,
                                               const SimpleLinearSet& sup);

/// Exact intersection as a disjoint union of simple linear sets.
SemilinearSet intersect_simple(const SimpleLinearSet& s1, const SimpleLinearSet& s2,
                               const SolveOptions& opts = {});

/// The prod n_i translates offset + sum j_i period_i + sum (n_i period_i) N;
/// they partition S.
std::vector<SimpleLinearSet> coset_refine(const SimpleLinearSet& s, const Vec& indices);

struct OverlapResult {
    size_t r = 0;
    std::vector<size_t> witness; // indices of one maximal overlapping subset
};

/// Largest k such that some k of the sets intersect, with a witness subset.
OverlapResult max_overlap(const std::vector<SimpleLinearSet>& sets,
                          const SolveOptions& opts = {});

std::vector<Vec> enumerate_upto(const SimpleLinearSet& s, long bound);
std::vector<Vec> enumerate_upto(const SemilinearSet& s, long bound);

/// Exact { n in N^d : lambda^n = c } via the prime-exponent system plus sign
/// parity.
SemilinearSet power_fiber(const std::vector<Rat>& lambda, const Rat& c,
                          const SolveOptions& opts = {});

/// Set literal "a1,...,ad ; b11,...,b1d ; ..." (offset first, then periods).
SimpleLinearSet parse_simple_set(const std::string& text);

/// Simplicial cone of a fan over a vector configuration; gens index into the
/// configuration, excluded lists the generators whose opposite facet is open.
struct FanCell {
    std::vector<size_t> gens;
    std::vector<size_t> excluded;
};

/// Placing triangulation of a vector configuration in input order, with
/// stellar subdivision at interior vectors so every nonzero input becomes a
/// ray, and half-open facet exclusions (against a generic reference point)
/// that make the cell cones partition the total cone.
std::vector<FanCell> placing_triangulation(const std::vector<Vec>& vectors);

/// Lattice points of the half-open fundamental parallelepiped of independent
/// periods: sum t_i p_i with t_i in [0,1), or (0,1] where open[i] is set.
std::vector<Vec> halfopen_box_points(const std::vector<Vec>& periods,
                                     const std::vector<bool>& open);

} // namespace unitrat

#endif
