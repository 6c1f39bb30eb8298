#ifndef UNITRAT_POLYEXP_HPP
#define UNITRAT_POLYEXP_HPP

#include "unitrat/semilinear.hpp"
#include "unitrat/unitproduct.hpp"

namespace unitrat {

/// One summand B(m) * beta^m of an exponential polynomial in s local
/// coordinates.
struct ExpPolyTerm {
    Polynomial b;          // polynomial in s variables
    std::vector<Rat> beta; // s nonzero bases

    friend bool operator==(const ExpPolyTerm& x, const ExpPolyTerm& y) {
        return x.beta == y.beta && x.b == y.b;
    }
};

/// Canonical form: beta vectors pairwise distinct, no B identically zero.
struct ExponentialPolynomial {
    size_t arity = 0;
    std::vector<ExpPolyTerm> terms;

    Rat evaluate(const Vec& m) const;

    friend bool operator==(const ExponentialPolynomial& x, const ExponentialPolynomial& y) {
        return x.arity == y.arity && x.terms == y.terms;
    }
};

struct PolyExpPiece {
    SimpleLinearSet set;
    ExponentialPolynomial formula; // arity = set.rank()
};

enum class Semantics { partition, additive };

/// Partition semantics: piece sets are pairwise disjoint; the value at n is
/// the formula of the unique containing piece, or 0. Additive semantics: the
/// value is the sum over all containing pieces.
struct PiecewisePolyExp {
    Semantics semantics = Semantics::additive;
    std::vector<PolyExpPiece> pieces;
};

/// One piece per numerator monomial x^a: the set a + sum e_i N with the
/// binomial-coefficient polynomial of each block multiplicity.
PiecewisePolyExp term_to_pieces(const DecompTerm& term);

Rat evaluate_at(const PiecewisePolyExp& p, const Vec& n);

/// Merges pieces with identical sets and beta-terms with equal bases, drops
/// vanished terms, orders everything deterministically. Idempotent.
PiecewisePolyExp canonicalize(const PiecewisePolyExp& p);

struct StructureVerdict {
    enum Kind { polya, bezivin, not_bezivin, constants_outside_group } kind;
    long l_max = 0;             // max beta-term count over pieces
    std::optional<bool> l_max_le_r;  // set when r was supplied
    std::optional<size_t> witness_piece;
    std::optional<size_t> witness_term;
    std::optional<Rat> witness_constant;
    std::string describe() const;
};

/// Classification of the coefficient structure against a group; requires
/// canonical partition form.
StructureVerdict classify_structure(const PiecewisePolyExp& p, const GroupSpec& g,
                                    std::optional<long> r = std::nullopt);

struct GlobalForm {
    std::vector<std::pair<Polynomial, std::vector<Rat>>> terms; // (A, alpha) pairs
};

struct GlobalLift {
    std::optional<GlobalForm> form;
    std::string reason; // set when absent
};

/// Global polynomial-exponential form A(n) alpha^n on the piece, when all
/// required N-th roots of the bases exist in Q.
GlobalLift lift_global(const PolyExpPiece& piece);

/// Inverse of term_to_pieces via the binomial basis; the identity is verified
/// against the oracle to degree 10.
UnitProductRational piece_to_rational(const PolyExpPiece& piece, bool verify = true);

struct PartitionUpgrade {
    std::optional<PiecewisePolyExp> result; // partition semantics when present
    std::string note;                       // capability note when absent
};

/// Upgrade an additive pile to partition semantics where the sanctioned
/// refinements reach one: merging equal sets, coset refinement along diagonal
/// containments, and the common-period translate partition.
PartitionUpgrade partition_upgrade(const PiecewisePolyExp& p, size_t budget = 64);

} // namespace unitrat

#endif
