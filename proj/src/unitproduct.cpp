#include "unitrat/unitproduct.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <sstream>

#include "unitrat/polyexp.hpp"
#include "unitrat/series.hpp"

namespace unitrat {

namespace {

bool block_order(const Block& a, const Block& b) {
    if (a.e != b.e) return a.e < b.e;
    return a.c < b.c;
}

Polynomial block_polynomial(const Block& b, size_t dim) {
    Polynomial p(dim, Rat(1));
    Polynomial body(dim, Rat(1));
    body.add_term(b.e, -b.c);
    for (long i = 0; i < b.mult; ++i) p = p * body;
    return p;
}

} // namespace

UnitProductRational::UnitProductRational(size_t dim, Polynomial numerator,
                                         std::vector<Block> blocks)
    : dim_(dim), numerator_(std::move(numerator)), blocks_(std::move(blocks)) {
    for (Block& b : blocks_) {
        if (b.c == 0) throw std::invalid_argument("UnitProductRational: zero block constant");
        if (b.e.size() != dim_ || is_zero_vec(b.e) || !nonnegative(b.e))
            throw std::invalid_argument("UnitProductRational: bad block exponent");
        if (b.mult < 1) throw std::invalid_argument("UnitProductRational: bad multiplicity");
    }
    std::sort(blocks_.begin(), blocks_.end(), block_order);
    std::vector<Block> merged;
    for (Block& b : blocks_) {
        if (!merged.empty() && merged.back().c == b.c && merged.back().e == b.e)
            merged.back().mult += b.mult;
        else
            merged.push_back(std::move(b));
    }
    blocks_ = std::move(merged);
}

Polynomial UnitProductRational::denominator_polynomial() const {
    Polynomial d(dim_, Rat(1));
    for (const Block& b : blocks_) d = d * block_polynomial(b, dim_);
    return d;
}

std::string UnitProductRational::to_string() const {
    std::ostringstream os;
    auto put_mono = [&](const Vec& e) {
        bool first = true;
        for (size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            if (!first) os << "*";
            os << "x" << (i + 1);
            if (e[i] > 1) os << "^" << e[i];
            first = false;
        }
        if (first) os << "1";
    };
    if (numerator_.is_zero()) return "0";
    const bool compound = numerator_.terms().size() > 1;
    if (compound && !blocks_.empty()) os << "(";
    bool first = true;
    for (const auto& [e, c] : numerator_.terms()) {
        Rat a = c;
        if (!first) {
            os << (a < 0 ? " - " : " + ");
            if (a < 0) a = -a;
        } else if (a < 0 && is_zero_vec(e)) {
            os << "-";
            a = -a;
        } else if (a < 0) {
            os << "-";
            a = -a;
        }
        first = false;
        if (is_zero_vec(e)) {
            os << rat_to_string(a);
        } else {
            if (a != 1) os << rat_to_string(a) << "*";
            put_mono(e);
        }
    }
    if (compound && !blocks_.empty()) os << ")";
    if (!blocks_.empty()) {
        os << "/";
        if (blocks_.size() > 1 || blocks_.front().mult > 1) os << "(";
        bool f2 = true;
        for (const Block& b : blocks_) {
            if (!f2) os << "*";
            f2 = false;
            os << "(1-";
            if (b.c != 1) os << rat_to_string(b.c) << "*";
            put_mono(b.e);
            os << ")";
            if (b.mult > 1) os << "^" << b.mult;
        }
        if (blocks_.size() > 1 || blocks_.front().mult > 1) os << ")";
    }
    return os.str();
}

UnitProductRational normalize_sum(const std::vector<UnitProductRational>& terms) {
    if (terms.empty()) throw std::invalid_argument("normalize_sum: empty sum");
    const size_t dim = terms.front().dim();
    for (const UnitProductRational& t : terms)
        if (t.dim() != dim) throw std::invalid_argument("normalize_sum: dimension mismatch");

    // least common denominator: blockwise max multiplicity
    std::vector<Block> lcd;
    for (const UnitProductRational& t : terms) {
        for (const Block& b : t.blocks()) {
            auto it = std::find_if(lcd.begin(), lcd.end(),
                                   [&](const Block& x) { return x.c == b.c && x.e == b.e; });
            if (it == lcd.end())
                lcd.push_back(b);
            else
                it->mult = std::max(it->mult, b.mult);
        }
    }
    std::sort(lcd.begin(), lcd.end(), block_order);

    Polynomial num(dim);
    for (const UnitProductRational& t : terms) {
        Polynomial part = t.numerator();
        for (const Block& b : lcd) {
            long have = 0;
            for (const Block& tb : t.blocks())
                if (tb.c == b.c && tb.e == b.e) have = tb.mult;
            if (b.mult > have)
                part = part * block_polynomial({b.c, b.e, b.mult - have}, dim);
        }
        num += part;
    }
    UnitProductRational out(dim, std::move(num), num.is_zero() ? std::vector<Block>{} : lcd);

    if (compare(expand_rational(out, 8), expand_rational(terms, 8)))
        throw std::logic_error("normalize_sum: oracle verification failed");
    return out;
}

GcdSplit gcd_normalize(const Block& block) {
    GcdSplit out;
    bool stuck_above_one = false;
    std::vector<Block> stack{block};
    while (!stack.empty()) {
        Block b = stack.back();
        stack.pop_back();
        long t = 0;
        for (long x : b.e) t = std::gcd(t, x);
        if (t % 2 == 0) {
            if (auto s = nth_root(b.c, 2)) {
                Vec half(b.e.size());
                for (size_t i = 0; i < b.e.size(); ++i) half[i] = b.e[i] / 2;
                stack.push_back({*s, half, b.mult});
                stack.push_back({-*s, half, b.mult});
                continue;
            }
        }
        if (t > 1) stuck_above_one = true;
        out.blocks.push_back(std::move(b));
    }
    std::sort(out.blocks.begin(), out.blocks.end(), block_order);
    if (stuck_above_one) out.note = "irrational roots";
    return out;
}

KernelVerdict kernel_character_test(const std::vector<std::pair<Rat, Vec>>& blocks) {
    if (blocks.empty()) throw std::invalid_argument("kernel_character_test: no blocks");
    const size_t d = blocks.front().second.size();
    std::vector<Vec> cols;
    for (const auto& [c, e] : blocks) cols.push_back(e);
    HnfResult h = hnf(IntMatrix::from_cols(cols, d));
    if (h.kernel.empty()) return {KernelVerdict::independent, {}, Rat(1)};
    for (const std::vector<Int>& k : h.kernel) {
        Rat lambda(1);
        for (size_t i = 0; i < blocks.size(); ++i) {
            if (!k[i].fits_slong_p()) throw capability_error("kernel vector overflow");
            lambda *= rat_pow(blocks[i].first, k[i].get_si());
        }
        if (lambda != 1) return {KernelVerdict::no_common_root, k, lambda};
    }
    return {KernelVerdict::dependent_common_root, h.kernel.front(), Rat(1)};
}

bool exact_sum_identity(const UnitProductRational& r, const std::vector<DecompTerm>& terms) {
    const size_t dim = r.dim();
    std::vector<Block> lcd = r.blocks();
    for (const DecompTerm& t : terms) {
        for (const Block& b : t.fraction.blocks()) {
            auto it = std::find_if(lcd.begin(), lcd.end(),
                                   [&](const Block& x) { return x.c == b.c && x.e == b.e; });
            if (it == lcd.end())
                lcd.push_back(b);
            else
                it->mult = std::max(it->mult, b.mult);
        }
    }
    auto cofactor = [&](const UnitProductRational& f) {
        Polynomial p = f.numerator();
        for (const Block& b : lcd) {
            long have = 0;
            for (const Block& fb : f.blocks())
                if (fb.c == b.c && fb.e == b.e) have = fb.mult;
            if (b.mult > have)
                p = p * block_polynomial({b.c, b.e, b.mult - have}, dim);
        }
        return p;
    };
    Polynomial lhs = cofactor(r);
    Polynomial rhs(dim);
    for (const DecompTerm& t : terms) rhs += cofactor(t.fraction);
    return lhs == rhs;
}

// ---------------------------------------------------------------------------
// Leinartas decomposition
// ---------------------------------------------------------------------------

namespace {

struct FallbackGen;

struct Decomposer {
    const DecomposeOptions& opts;
    size_t steps = 0;

    void charge() {
        if (++steps > opts.step_budget)
            throw capability_error("leinartas_decompose: step budget exhausted");
    }

    std::vector<DecompTerm> run(const UnitProductRational& r) {
        std::vector<DecompTerm> out;
        std::deque<UnitProductRational> queue{r};
        while (!queue.empty()) {
            UnitProductRational t = std::move(queue.front());
            queue.pop_front();
            if (t.is_zero()) continue;
            if (t.blocks().empty()) {
                out.push_back({t, true});
                continue;
            }
            std::vector<std::pair<Rat, Vec>> pairs;
            for (const Block& b : t.blocks()) pairs.emplace_back(b.c, b.e);
            KernelVerdict verdict = kernel_character_test(pairs);
            switch (verdict.kind) {
            case KernelVerdict::independent:
                out.push_back({t, true});
                break;
            case KernelVerdict::no_common_root:
                for (UnitProductRational& child : split_no_common_root(t, verdict))
                    queue.push_back(std::move(child));
                break;
            case KernelVerdict::dependent_common_root:
                for (DecompTerm& dt : dependent_fallback(t)) out.push_back(std::move(dt));
                break;
            }
        }
        // merge terms with identical denominators
        std::vector<DecompTerm> merged;
        for (DecompTerm& t : out) {
            auto it = std::find_if(merged.begin(), merged.end(), [&](const DecompTerm& m) {
                return m.fraction.blocks() == t.fraction.blocks();
            });
            if (it == merged.end()) {
                merged.push_back(std::move(t));
            } else {
                Polynomial num = it->fraction.numerator() + t.fraction.numerator();
                it->fraction = UnitProductRational(t.fraction.dim(), std::move(num),
                                                   it->fraction.blocks());
            }
        }
        std::erase_if(merged, [](const DecompTerm& t) { return t.fraction.is_zero(); });
        std::sort(merged.begin(), merged.end(), [](const DecompTerm& a, const DecompTerm& b) {
            return a.fraction.to_string() < b.fraction.to_string();
        });
        return merged;
    }

    std::vector<UnitProductRational> split_no_common_root(const UnitProductRational& t,
                                                          const KernelVerdict& verdict) {
        charge();
        const size_t dim = t.dim();
        const std::vector<Block>& blocks = t.blocks();
        const Rat& lambda = verdict.lambda;
        const Rat scale_a = Rat(1) / (Rat(1) - lambda);
        const Rat scale_b = -lambda / (Rat(1) - lambda);

        // v-lists with multiplicity from the kernel vector
        std::vector<size_t> alist, blist;
        for (size_t i = 0; i < blocks.size(); ++i) {
            const Int& k = verdict.kernel_vector[i];
            for (Int j = 0; j < abs(k); ++j) (k > 0 ? alist : blist).push_back(i);
        }

        std::vector<UnitProductRational> children;
        Polynomial check(dim);
        for (int side = 0; side < 2; ++side) {
            const std::vector<size_t>& list = side == 0 ? alist : blist;
            const Rat& scale = side == 0 ? scale_a : scale_b;
            Polynomial prefix(dim, Rat(1));
            for (size_t j = 0; j < list.size(); ++j) {
                const Block& blk = blocks[list[j]];
                // child: numerator * prefix * scale, block list[j] multiplicity - 1
                Polynomial child_num = t.numerator() * prefix * scale;
                std::vector<Block> child_blocks;
                for (size_t i = 0; i < blocks.size(); ++i) {
                    Block nb = blocks[i];
                    if (i == list[j]) --nb.mult;
                    if (nb.mult > 0) child_blocks.push_back(nb);
                }
                children.emplace_back(dim, std::move(child_num), std::move(child_blocks));

                Polynomial one_minus_v(dim, Rat(1));
                one_minus_v.add_term(blk.e, -blk.c);
                check += prefix * one_minus_v * scale;

                prefix = prefix * Polynomial::monomial(blk.e, blk.c);
            }
        }
        if (!(check == Polynomial(dim, Rat(1))))
            throw std::logic_error("leinartas split identity check failed");
        return children;
    }

    std::vector<DecompTerm> dependent_fallback(const UnitProductRational& t);
    std::optional<PolyExpPiece> fit_piece(const UnitProductRational& ta, const Vec& offset,
                                          const std::vector<FallbackGen>& gens, long deg);
};

struct RatMatrixSolver {
    // dense exact solve of a square system; returns empty on singularity
    static std::optional<std::vector<Rat>> solve(std::vector<std::vector<Rat>> m,
                                                 std::vector<Rat> rhs) {
        const size_t n = m.size();
        for (size_t col = 0; col < n; ++col) {
            size_t piv = col;
            while (piv < n && m[piv][col] == 0) ++piv;
            if (piv == n) return std::nullopt;
            std::swap(m[piv], m[col]);
            std::swap(rhs[piv], rhs[col]);
            const Rat inv = Rat(1) / m[col][col];
            for (size_t j = col; j < n; ++j) m[col][j] *= inv;
            rhs[col] *= inv;
            for (size_t i = 0; i < n; ++i) {
                if (i == col || m[i][col] == 0) continue;
                const Rat f = m[i][col];
                for (size_t j = col; j < n; ++j) m[i][j] -= f * m[col][j];
                rhs[i] -= f * rhs[col];
            }
        }
        return rhs;
    }
};

struct FallbackGen {
    Vec period;
    bool excluded; // opposite facet open: box coordinate in (0,1] instead of [0,1)
    Rat beta;
};

// lattice points of the half-open fundamental parallelepiped of the periods
std::vector<Vec> box_points(const std::vector<FallbackGen>& gens, size_t dim) {
    (void)dim;
    std::vector<Vec> periods;
    std::vector<bool> open;
    for (const FallbackGen& g : gens) {
        periods.push_back(g.period);
        open.push_back(g.excluded);
    }
    return halfopen_box_points(periods, open);
}

std::vector<DecompTerm> Decomposer::dependent_fallback(const UnitProductRational& t) {
    charge();
    const size_t dim = t.dim();
    const std::vector<Block>& blocks = t.blocks();
    std::vector<Vec> exps;
    for (const Block& b : blocks) exps.push_back(b.e);

    // character of a monoid element: product of block constants along any
    // representation (well-defined because the kernel character is trivial)
    IntMatrix emat = IntMatrix::from_cols(exps, dim);
    auto character = [&](const Vec& p) -> Rat {
        std::vector<Int> rhs(dim);
        for (size_t i = 0; i < dim; ++i) rhs[i] = p[i];
        DiophantineSolution sol = solve_nonneg(emat, rhs);
        if (sol.empty()) throw std::logic_error("character: point outside monoid");
        Rat beta(1);
        for (size_t i = 0; i < blocks.size(); ++i)
            beta *= rat_pow(blocks[i].c, sol.minimal_inhomogeneous.front()[i]);
        return beta;
    };

    long total_mult = 0;
    for (const Block& b : blocks) total_mult += b.mult;
    const long fit_deg = total_mult;

    std::vector<FanCell> cells = placing_triangulation(exps);

    for (long refine = 1; refine <= opts.dep_refine_max; ++refine) {
        charge();
        bool feasible = true;
        std::vector<DecompTerm> result;
        // decompose separately under each numerator monomial
        for (const auto& [a, coeff] : t.numerator().terms()) {
            UnitProductRational ta(dim, Polynomial::monomial(a, coeff), blocks);
            std::vector<PolyExpPiece> pieces;
            for (const FanCell& cell : cells) {
                std::vector<FallbackGen> gens;
                for (size_t g = 0; g < cell.gens.size(); ++g) {
                    const bool open =
                        std::find(cell.excluded.begin(), cell.excluded.end(), g) !=
                        cell.excluded.end();
                    Vec per = scale(refine, exps[cell.gens[g]]);
                    gens.push_back({std::move(per), open, Rat(0)});
                }
                std::sort(gens.begin(), gens.end(),
                          [](const FallbackGen& x, const FallbackGen& y) {
                              return x.period < y.period;
                          });
                for (FallbackGen& g : gens) g.beta = character(g.period);
                for (const Vec& w : box_points(gens, dim)) {
                    auto fitted = fit_piece(ta, add(a, w), gens, fit_deg);
                    if (fitted) pieces.push_back(std::move(*fitted));
                }
            }
            // exact verification of the identity for this monomial
            std::vector<DecompTerm> cand;
            for (const PolyExpPiece& p : pieces)
                cand.push_back({piece_to_rational(p, false), true});
            if (!exact_sum_identity(ta, cand)) {
                feasible = false;
                break;
            }
            for (DecompTerm& c : cand) result.push_back(std::move(c));
        }
        if (feasible) return result;
    }
    throw capability_error("leinartas_decompose: dependent-block fallback failed to verify");
}

std::optional<PolyExpPiece> Decomposer::fit_piece(const UnitProductRational& ta,
                                                  const Vec& offset,
                                                  const std::vector<FallbackGen>& gens,
                                                  long deg) {
    charge();
    const size_t s = gens.size();
    // grid of local coordinates [0..deg]^s
    std::vector<Vec> grid;
    Vec m(s, 0);
    while (true) {
        grid.push_back(m);
        size_t c = 0;
        while (c < s && ++m[c] > deg) m[c++] = 0;
        if (c == s) break;
    }
    std::vector<Rat> values;
    bool all_zero = true;
    for (const Vec& g : grid) {
        Vec n = offset;
        for (size_t j = 0; j < s; ++j)
            for (size_t c = 0; c < n.size(); ++c) n[c] += g[j] * gens[j].period[c];
        Rat y = coefficient_of(ta, n);
        for (size_t j = 0; j < s; ++j) y /= rat_pow(gens[j].beta, g[j]);
        if (y != 0) all_zero = false;
        values.push_back(std::move(y));
    }
    if (all_zero) return std::nullopt;
    // interpolate B with per-coordinate degree <= deg
    std::vector<std::vector<Rat>> mat(grid.size(), std::vector<Rat>(grid.size(), Rat(0)));
    for (size_t r = 0; r < grid.size(); ++r)
        for (size_t k = 0; k < grid.size(); ++k) {
            Rat v(1);
            for (size_t j = 0; j < s; ++j) v *= rat_pow(Rat(grid[r][j]), grid[k][j]);
            mat[r][k] = v;
        }
    auto coeffs = RatMatrixSolver::solve(std::move(mat), std::move(values));
    if (!coeffs) throw std::logic_error("fit_piece: singular interpolation grid");
    Polynomial b(s);
    for (size_t k = 0; k < grid.size(); ++k) b.add_term(grid[k], (*coeffs)[k]);
    if (b.is_zero()) return std::nullopt;
    std::vector<Vec> periods;
    std::vector<Rat> beta;
    for (const FallbackGen& g : gens) {
        periods.push_back(g.period);
        beta.push_back(g.beta);
    }
    ExponentialPolynomial formula{s, {{std::move(b), std::move(beta)}}};
    return PolyExpPiece{SimpleLinearSet(offset, periods), std::move(formula)};
}

} // namespace

std::vector<DecompTerm> leinartas_decompose(const UnitProductRational& r,
                                            const DecomposeOptions& opts) {
    if (r.is_zero()) return {};
    Decomposer d{opts};
    std::vector<DecompTerm> out = d.run(r);
    if (!exact_sum_identity(r, out))
        throw std::logic_error("leinartas_decompose: exact identity check failed");
    return out;
}

} // namespace unitrat
