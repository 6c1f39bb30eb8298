#ifndef UNITRAT_FACTORED_HPP
#define UNITRAT_FACTORED_HPP

#include <map>
#include <optional>

#include "unitrat/intmatrix.hpp"

namespace unitrat {

/// Signed prime factorization of a nonzero rational: sign * prod p^e with
/// nonzero integer exponents.
struct FactoredRational {
    int sign = 1; // +1 or -1
    std::map<unsigned long, long> factors;

    Rat reconstruct() const;
};

/// Exact signed prime factorization. Rejects zero; numerators/denominators
/// beyond the trial-division range raise a capability error.
FactoredRational factor_rational(const Rat& q);

/// Finitely generated subgroup of Q* presented by generators; membership is
/// solved on the exponent lattice over the combined prime support, with the
/// sign tracked as an extra Z/2 coordinate (doubled into Z via an auxiliary
/// variable).
class GroupSpec {
public:
    explicit GroupSpec(std::vector<Rat> generators);

    const std::vector<Rat>& generators() const { return gens_; }
    const std::vector<unsigned long>& prime_support() const { return primes_; }

    /// Exponent lattice: one row per prime in the support plus one sign row.
    const IntMatrix& lattice() const { return lattice_; }

    /// Integer exponents k with prod gen_i^{k_i} = g, or nullopt.
    std::optional<std::vector<Int>> member(const Rat& g) const;

    struct RootPower {
        long n;                    // minimal n >= 1 with c^n in the group
        std::vector<Int> certificate;   // member certificate for c^n
    };
    /// Minimal N >= 1 with c^N in the group; absence is exact (rational span
    /// plus sign parity).
    std::optional<RootPower> root_power_member(const Rat& c) const;

private:
    std::vector<Rat> gens_;
    std::vector<unsigned long> primes_;
    IntMatrix lattice_;   // (|primes|+1) x t, last row = sign bits
    IntMatrix extended_;  // lattice with the auxiliary doubling column
};

inline std::optional<std::vector<Int>> group_member(const Rat& g, const GroupSpec& gs) {
    return gs.member(g);
}

/// Order of c/c' as a root of unity over Q: 1 if c = c', 2 if c = -c',
/// absent otherwise.
std::optional<int> torsion_quotient(const Rat& c, const Rat& cp);

/// Exact rational n-th root, if it exists in Q.
std::optional<Rat> nth_root(const Rat& q, unsigned long n);

} // namespace unitrat

#endif
