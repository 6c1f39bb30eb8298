#ifndef UNITRAT_DIOPHANTINE_HPP
#define UNITRAT_DIOPHANTINE_HPP

#include "unitrat/intmatrix.hpp"

namespace unitrat {

/// Presentation of { x in N^k : A x = b }: the full solution set equals
/// the union over minimal_inhomogeneous of m + N-span(hilbert_basis).
struct DiophantineSolution {
    std::vector<Vec> minimal_inhomogeneous; // pairwise incomparable
    std::vector<Vec> hilbert_basis;         // minimal nonzero homogeneous solutions
    bool empty() const { return minimal_inhomogeneous.empty(); }
};

struct SolveOptions {
    size_t node_limit = 1000000; // frontier cap; exceeding it is a capability error
};

/// All minimal solutions of A x = b over N^k together with the Hilbert basis
/// of the homogeneous system, by Contejean-Devie completion.
DiophantineSolution solve_nonneg(const IntMatrix& a, const std::vector<Int>& b,
                                 const SolveOptions& opts = {});

/// A simple piece of a solution set: offset + N-combinations of linearly
/// independent period vectors.
struct SolutionPiece {
    Vec offset;
    std::vector<Vec> periods;
};

/// Partition of { x in N^k : A x = b } into disjoint simple pieces.
/// Periods of every piece are linearly independent over Z.
std::vector<SolutionPiece> disjoint_solution_pieces(const IntMatrix& a,
                                                    const std::vector<Int>& b,
                                                    const SolveOptions& opts = {});

} // namespace unitrat

#endif
