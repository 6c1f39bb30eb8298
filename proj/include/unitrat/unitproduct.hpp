#ifndef UNITRAT_UNITPRODUCT_HPP
#define UNITRAT_UNITPRODUCT_HPP

#include <optional>

#include "unitrat/polynomial.hpp"

namespace unitrat {

/// One denominator factor (1 - c*x^e)^mult with c != 0 and e != 0.
struct Block {
    Rat c;
    Vec e;
    long mult = 1;

    friend bool operator==(const Block& a, const Block& b) {
        return a.c == b.c && a.e == b.e && a.mult == b.mult;
    }
};

/// numerator / prod (1 - c_i x^{e_i})^{mult_i}; the denominator has constant
/// term 1 by construction. Blocks are kept in canonical order (lexicographic
/// by e, then by c) and pairwise distinct as (c, e) pairs.
class UnitProductRational {
public:
    explicit UnitProductRational(size_t dim) : dim_(dim), numerator_(dim) {}
    UnitProductRational(size_t dim, Polynomial numerator, std::vector<Block> blocks);

    size_t dim() const { return dim_; }
    const Polynomial& numerator() const { return numerator_; }
    const std::vector<Block>& blocks() const { return blocks_; }
    bool is_zero() const { return numerator_.is_zero(); }

    /// Expanded denominator polynomial.
    Polynomial denominator_polynomial() const;

    UnitProductRational scaled(const Rat& s) const {
        return UnitProductRational(dim_, numerator_ * s, blocks_);
    }

    std::string to_string() const;

private:
    size_t dim_;
    Polynomial numerator_;
    std::vector<Block> blocks_;
};

/// Decomposition summand; independent_verified records that the block
/// exponents are linearly independent and the kernel character test is
/// trivially satisfied.
struct DecompTerm {
    UnitProductRational fraction;
    bool independent_verified = false;
};

/// Single fraction over the least common denominator (blockwise max
/// multiplicity); the result is checked against the input sum by truncated
/// expansion to degree 8.
UnitProductRational normalize_sum(const std::vector<UnitProductRational>& terms);

struct GcdSplit {
    std::vector<Block> blocks;
    std::optional<std::string> note; // set when the block stays unsplit
};

/// Splits 1 - c x^e along t = gcd(e) into rational binomial factors where the
/// required roots exist in Q; otherwise returns the block unchanged with a
/// note.
GcdSplit gcd_normalize(const Block& block);

struct KernelVerdict {
    enum Kind { independent, no_common_root, dependent_common_root } kind;
    std::vector<Int> kernel_vector; // witness for the non-independent verdicts
    Rat lambda;                     // character value, for no_common_root
};

/// Kernel character test on (c_i, e_i) pairs: the blocks have a common root
/// in the torus over the algebraic closure iff the character k -> prod c^k
/// is 1 on the whole integer kernel of the exponent matrix.
KernelVerdict kernel_character_test(const std::vector<std::pair<Rat, Vec>>& blocks);

struct DecomposeOptions {
    size_t step_budget = 10000;
    long dep_refine_max = 6; // support refinement ladder for the fallback
};

/// Leinartas decomposition specialized to binomial blocks: splits until every
/// term's blocks are linearly independent with trivially satisfied kernel
/// character, preserving the exact rational identity.
std::vector<DecompTerm> leinartas_decompose(const UnitProductRational& r,
                                            const DecomposeOptions& opts = {});

/// Exact check that the terms sum to r, by clearing denominators and
/// comparing sparse polynomials.
bool exact_sum_identity(const UnitProductRational& r, const std::vector<DecompTerm>& terms);

} // namespace unitrat

#endif
