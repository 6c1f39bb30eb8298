#ifndef UNITRAT_SKEWGEOM_HPP
#define UNITRAT_SKEWGEOM_HPP

#include "unitrat/polyexp.hpp"

namespace unitrat {

/// c0 x^{u0} / prod (1 - c_i x^{e_i}) with algebraically independent monomial
/// exponents e_i; its support is the simple linear set u0 + sum e_i N and the
/// coefficient there is c0 prod c_i^{m_i}.
struct SkewGeometric {
    Rat c0;
    Vec u0;
    std::vector<std::pair<Rat, Vec>> factors; // sorted by exponent

    SkewGeometric(Rat c0_, Vec u0_, std::vector<std::pair<Rat, Vec>> factors_);

    SimpleLinearSet support() const;
    UnitProductRational to_rational() const;

    friend bool operator==(const SkewGeometric& a, const SkewGeometric& b) {
        return a.c0 == b.c0 && a.u0 == b.u0 && a.factors == b.factors;
    }
};

enum class Ambiguity { unambiguous, trivially_ambiguous, ambiguous, unknown };

struct SkewGeomSum {
    std::vector<SkewGeometric> summands;
    Ambiguity status = Ambiguity::unknown;
};

SkewGeometric indicator_of(const SimpleLinearSet& s);

Rat coefficient_at(const SkewGeometric& f, const Vec& n);
Rat coefficient_at(const SkewGeomSum& f, const Vec& n);

/// Hadamard restriction to a simple linear subset of the support, via the
/// containment certificate.
SkewGeometric restrict_to(const SkewGeometric& f, const SimpleLinearSet& s);

std::vector<UnitProductRational> to_rational(const SkewGeomSum& f);

struct AmbiguityReport {
    Ambiguity status;
    size_t r = 0; // max_overlap of supports
    std::vector<size_t> witness;
};

AmbiguityReport classify_ambiguity(const SkewGeomSum& f);

/// Rewrites summand pairs whose shared-support coefficient vectors are
/// torsion-related (over Q: opposite signs) via coset refinement and
/// restriction, until all coefficient vectors on shared supports are
/// relatively non-torsion. The represented series is unchanged
/// (oracle-verified to degree 10).
SkewGeomSum torsion_normalize(const SkewGeomSum& f, size_t budget = 64);

struct GroupVerdict {
    enum Kind { polya, bezivin, fail } kind;
    size_t r_eff = 0;
    std::optional<bool> r_eff_le_r;
    std::optional<Rat> witness; // offending constant for fail
    std::string describe() const;
};

GroupVerdict certify_group(const SkewGeomSum& f, const GroupSpec& g,
                           std::optional<long> r = std::nullopt);

/// Coefficientwise reciprocal of an unambiguous sum; rejects ambiguous input.
SkewGeomSum subinverse_unambiguous(const SkewGeomSum& f);

/// Conversion from a partition-form piecewise representation whose formulas
/// are all constant; nullopt when a non-constant polynomial is present.
std::optional<SkewGeomSum> from_polyexp(const PiecewisePolyExp& p);

} // namespace unitrat

#endif
