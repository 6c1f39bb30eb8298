#include "unitrat/diophantine.hpp"

#include <algorithm>
#include <set>

namespace unitrat {

namespace {

std::vector<Int> defect(const IntMatrix& a, const std::vector<Int>& neg_b, const Vec& p) {
    // a*p + p.back()*neg_b over the homogenized system [A | -b]
    std::vector<Int> v(a.rows(), Int(0));
    for (size_t i = 0; i < a.rows(); ++i) {
        for (size_t j = 0; j < a.cols(); ++j)
            if (p[j] != 0) v[i] += a.at(i, j) * p[j];
        v[i] += neg_b[i] * p.back();
    }
    return v;
}

bool is_zero(const std::vector<Int>& v) {
    for (const Int& x : v)
        if (x != 0) return false;
    return true;
}

} // namespace

DiophantineSolution solve_nonneg(const IntMatrix& a, const std::vector<Int>& b,
                                 const SolveOptions& opts) {
    if (b.size() != a.rows()) throw std::invalid_argument("solve_nonneg: dimension mismatch");
    const size_t k = a.cols();
    std::vector<Int> neg_b(b.size());
    for (size_t i = 0; i < b.size(); ++i) neg_b[i] = -b[i];

    // columns of the homogenized system [A | -b]
    std::vector<std::vector<Int>> col(k + 1, std::vector<Int>(a.rows()));
    for (size_t j = 0; j < k; ++j)
        for (size_t i = 0; i < a.rows(); ++i) col[j][i] = a.at(i, j);
    col[k] = neg_b;

    std::vector<Vec> minimal; // of the homogenized system
    std::set<Vec> frontier;
    size_t nodes = 0;
    for (size_t j = 0; j <= k; ++j) {
        Vec e(k + 1, 0);
        e[j] = 1;
        frontier.insert(e);
    }

    while (!frontier.empty()) {
        std::set<Vec> next;
        for (const Vec& p : frontier) {
            if (++nodes > opts.node_limit)
                throw capability_error("solve_nonneg: completion frontier exceeded " +
                                       std::to_string(opts.node_limit) + " nodes");
            bool dominated_by_min = false;
            for (const Vec& m : minimal)
                if (dominated(m, p)) {
                    dominated_by_min = true;
                    break;
                }
            if (dominated_by_min) continue;
            std::vector<Int> v = defect(a, neg_b, p);
            if (is_zero(v)) {
                minimal.push_back(p);
                continue;
            }
            for (size_t j = 0; j <= k; ++j) {
                // branch towards decreasing defect
                Int dp(0);
                for (size_t i = 0; i < a.rows(); ++i) dp += v[i] * col[j][i];
                if (dp < 0) {
                    Vec q = p;
                    ++q[j];
                    next.insert(std::move(q));
                }
            }
        }
        frontier = std::move(next);
    }

    DiophantineSolution out;
    for (const Vec& m : minimal) {
        Vec x(m.begin(), m.end() - 1);
        if (m.back() == 0)
            out.hilbert_basis.push_back(std::move(x));
        else if (m.back() == 1)
            out.minimal_inhomogeneous.push_back(std::move(x));
        // z >= 2 solutions are artifacts of homogenization
    }
    std::sort(out.hilbert_basis.begin(), out.hilbert_basis.end());
    std::sort(out.minimal_inhomogeneous.begin(), out.minimal_inhomogeneous.end());
    if (out.minimal_inhomogeneous.empty()) out.hilbert_basis.clear(); // empty solution set
    return out;
}

namespace {

struct PieceBuilder {
    const SolveOptions& opts;
    size_t work = 0;

    void charge() {
        if (++work > opts.node_limit)
            throw capability_error("disjoint_solution_pieces: split budget exhausted");
    }

    // Disjoint simple pieces of { x in N^k : A x = b, x not>= v for v in cons }.
    std::vector<SolutionPiece> pieces(const IntMatrix& a, const std::vector<Int>& b,
                                      const std::vector<Vec>& cons) {
        charge();
        const size_t k = a.cols();
        if (!cons.empty()) {
            const Vec v = cons.front();
            const std::vector<Vec> rest(cons.begin() + 1, cons.end());
            bool satisfiable = false;
            for (long x : v)
                if (x > 0) satisfiable = true;
            if (!satisfiable) return {};

            std::vector<SolutionPiece> out;
            // split on the first coordinate where x < v fails, fixing it to
            // each admissible value and shifting the earlier ones
            for (size_t c = 0; c < k; ++c) {
                if (v[c] <= 0) continue;
                for (long val = 0; val < v[c]; ++val) {
                    // region: x_{c'} >= v_{c'} for c' < c (where positive), x_c = val
                    Vec shift(k, 0);
                    for (size_t c2 = 0; c2 < c; ++c2)
                        if (v[c2] > 0) shift[c2] = v[c2];
                    shift[c] = val;
                    // reduced system without variable c
                    IntMatrix a2(a.rows(), k - 1);
                    std::vector<Int> b2 = b;
                    for (size_t i = 0; i < a.rows(); ++i) {
                        size_t jj = 0;
                        for (size_t j = 0; j < k; ++j) {
                            if (j == c) continue;
                            a2.at(i, jj++) = a.at(i, j);
                        }
                        for (size_t j = 0; j < k; ++j) b2[i] -= a.at(i, j) * shift[j];
                    }
                    // transport remaining constraints
                    std::vector<Vec> cons2;
                    bool region_dead = false;
                    for (const Vec& w : rest) {
                        if (w[c] > val) continue; // x_c = val already violates w
                        Vec w2;
                        w2.reserve(k - 1);
                        bool pos = false;
                        for (size_t j = 0; j < k; ++j) {
                            if (j == c) continue;
                            long t = w[j] - shift[j];
                            if (t > 0) pos = true;
                            w2.push_back(t);
                        }
                        if (!pos) {
                            region_dead = true; // every point here has x >= w
                            break;
                        }
                        cons2.push_back(std::move(w2));
                    }
                    if (region_dead) continue;
                    for (SolutionPiece& sp : pieces(a2, b2, cons2)) {
                        SolutionPiece full;
                        full.offset.resize(k);
                        size_t jj = 0;
                        for (size_t j = 0; j < k; ++j)
                            full.offset[j] = shift[j] + (j == c ? 0 : sp.offset[jj++]);
                        for (const Vec& per : sp.periods) {
                            Vec p(k, 0);
                            size_t j2 = 0;
                            for (size_t j = 0; j < k; ++j)
                                if (j != c) p[j] = per[j2++];
                            full.periods.push_back(std::move(p));
                        }
                        out.push_back(std::move(full));
                    }
                }
            }
            return out;
        }

        DiophantineSolution sol = solve_nonneg(a, b, opts);
        if (sol.empty()) return {};
        std::vector<SolutionPiece> out;
        for (size_t i = 0; i < sol.minimal_inhomogeneous.size(); ++i) {
            const Vec& mu = sol.minimal_inhomogeneous[i];
            std::vector<Vec> cons_i;
            for (size_t j = 0; j < i; ++j)
                cons_i.push_back(sub(sol.minimal_inhomogeneous[j], mu));
            std::vector<SolutionPiece> sub_pieces =
                cons_i.empty() ? cone_pieces(a, sol.hilbert_basis)
                               : pieces_homogeneous(a, sol.hilbert_basis, cons_i);
            for (SolutionPiece& sp : sub_pieces) {
                sp.offset = add(sp.offset, mu);
                out.push_back(std::move(sp));
            }
        }
        return out;
    }

    std::vector<SolutionPiece> pieces_homogeneous(const IntMatrix& a,
                                                  const std::vector<Vec>& hilbert,
                                                  const std::vector<Vec>& cons) {
        // same as pieces() with b = 0; hilbert passed along only to skip
        // recomputation in cone_pieces
        if (cons.empty()) return cone_pieces(a, hilbert);
        return pieces(a, std::vector<Int>(a.rows(), Int(0)), cons);
    }

    // Disjoint simple pieces of the full homogeneous solution monoid.
    std::vector<SolutionPiece> cone_pieces(const IntMatrix& a, const std::vector<Vec>& hilbert) {
        charge();
        const size_t k = a.cols();
        if (hilbert.empty()) return {SolutionPiece{Vec(k, 0), {}}};
        if (rank(IntMatrix::from_rows(hilbert, k)) == hilbert.size())
            return {SolutionPiece{Vec(k, 0), hilbert}};
        // Split off the lex-largest Hilbert element q: the monoid is the
        // disjoint union over j of j*q + { y : y - q not a solution }, and
        // appending q as a period of every piece of the base absorbs j.
        const Vec q = hilbert.back();
        std::vector<SolutionPiece> base = pieces_homogeneous(a, hilbert, {q});
        for (SolutionPiece& sp : base) sp.periods.push_back(q);
        return base;
    }
};

} // namespace

std::vector<SolutionPiece> disjoint_solution_pieces(const IntMatrix& a,
                                                    const std::vector<Int>& b,
                                                    const SolveOptions& opts) {
    PieceBuilder pb{opts};
    std::vector<SolutionPiece> out = pb.pieces(a, b, {});
    for (SolutionPiece& sp : out) std::sort(sp.periods.begin(), sp.periods.end());
    return out;
}

} // namespace unitrat
