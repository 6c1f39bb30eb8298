#include "unitrat/polyexp.hpp"

#include <algorithm>
#include <sstream>

#include "unitrat/series.hpp"

namespace unitrat {

namespace {

// binom(k+m-1, m) as a polynomial in m, degree k-1
UniPoly binomial_basis_poly(long k) {
    UniPoly p({Rat(1)});
    for (long j = 1; j < k; ++j) {
        p = p * UniPoly({Rat(Int(j)), Rat(1)});
        p *= Rat(1, Int(j));
    }
    return p;
}

Polynomial lift_unipoly(const UniPoly& u, size_t var, size_t arity) {
    Polynomial p(arity);
    for (size_t j = 0; j < u.coeffs().size(); ++j) {
        Vec e(arity, 0);
        e[var] = static_cast<long>(j);
        p.add_term(e, u.coeffs()[j]);
    }
    return p;
}

std::optional<std::vector<Rat>> dense_solve(std::vector<std::vector<Rat>> m,
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

} // namespace

Rat ExponentialPolynomial::evaluate(const Vec& m) const {
    Rat v(0);
    for (const ExpPolyTerm& t : terms) {
        std::vector<Rat> x(m.size());
        for (size_t i = 0; i < m.size(); ++i) x[i] = Rat(m[i]);
        Rat w = t.b.evaluate(x);
        for (size_t i = 0; i < m.size(); ++i) w *= rat_pow(t.beta[i], m[i]);
        v += w;
    }
    return v;
}

PiecewisePolyExp term_to_pieces(const DecompTerm& term) {
    if (!term.independent_verified)
        throw std::invalid_argument("term_to_pieces: term not independence-verified");
    const UnitProductRational& f = term.fraction;
    const size_t s = f.blocks().size();
    PiecewisePolyExp out;
    out.semantics = Semantics::additive;
    for (const auto& [a, coeff] : f.numerator().terms()) {
        std::vector<Vec> periods;
        std::vector<Rat> beta;
        Polynomial b(s, coeff);
        for (size_t i = 0; i < s; ++i) {
            const Block& blk = f.blocks()[i];
            periods.push_back(blk.e);
            beta.push_back(blk.c);
            b = b * lift_unipoly(binomial_basis_poly(blk.mult), i, s);
        }
        ExponentialPolynomial formula{s, {{std::move(b), std::move(beta)}}};
        out.pieces.push_back({SimpleLinearSet(a, periods), std::move(formula)});
    }
    return out;
}

Rat evaluate_at(const PiecewisePolyExp& p, const Vec& n) {
    Rat v(0);
    for (const PolyExpPiece& piece : p.pieces) {
        if (auto m = piece.set.member_coords(n)) {
            Rat w = piece.formula.evaluate(*m);
            if (p.semantics == Semantics::partition) return w;
            v += w;
        }
    }
    return v;
}

namespace {

ExponentialPolynomial normalize_formula(ExponentialPolynomial f) {
    std::sort(f.terms.begin(), f.terms.end(),
              [](const ExpPolyTerm& a, const ExpPolyTerm& b) { return a.beta < b.beta; });
    std::vector<ExpPolyTerm> merged;
    for (ExpPolyTerm& t : f.terms) {
        if (!merged.empty() && merged.back().beta == t.beta)
            merged.back().b += t.b;
        else
            merged.push_back(std::move(t));
    }
    std::erase_if(merged, [](const ExpPolyTerm& t) { return t.b.is_zero(); });
    f.terms = std::move(merged);
    return f;
}

} // namespace

PiecewisePolyExp canonicalize(const PiecewisePolyExp& p) {
    std::vector<PolyExpPiece> pieces = p.pieces;
    std::sort(pieces.begin(), pieces.end(),
              [](const PolyExpPiece& a, const PolyExpPiece& b) { return a.set < b.set; });
    PiecewisePolyExp out;
    out.semantics = p.semantics;
    for (PolyExpPiece& piece : pieces) {
        if (!out.pieces.empty() && out.pieces.back().set == piece.set) {
            for (ExpPolyTerm& t : piece.formula.terms)
                out.pieces.back().formula.terms.push_back(std::move(t));
        } else {
            out.pieces.push_back(std::move(piece));
        }
    }
    for (PolyExpPiece& piece : out.pieces) piece.formula = normalize_formula(piece.formula);
    std::erase_if(out.pieces, [](const PolyExpPiece& x) { return x.formula.terms.empty(); });
    return out;
}

std::string StructureVerdict::describe() const {
    std::ostringstream os;
    switch (kind) {
    case polya: os << "polya"; break;
    case bezivin: os << "bezivin(" << l_max << ")"; break;
    case not_bezivin:
        os << "not_bezivin";
        if (witness_piece) os << " [witness piece " << *witness_piece << "]";
        break;
    case constants_outside_group:
        os << "constants_outside_group";
        if (witness_constant) os << " [witness " << rat_to_string(*witness_constant) << "]";
        break;
    }
    if (l_max_le_r) os << (*l_max_le_r ? " (l_max <= r)" : " (l_max > r)");
    return os.str();
}

StructureVerdict classify_structure(const PiecewisePolyExp& p, const GroupSpec& g,
                                    std::optional<long> r) {
    if (p.semantics != Semantics::partition)
        throw std::invalid_argument("classify_structure: partition semantics required");
    StructureVerdict v{StructureVerdict::polya, 0, std::nullopt, std::nullopt, std::nullopt,
                       std::nullopt};
    for (const PolyExpPiece& piece : p.pieces)
        v.l_max = std::max<long>(v.l_max, piece.formula.terms.size());
    if (r) v.l_max_le_r = v.l_max <= *r;
    for (size_t i = 0; i < p.pieces.size(); ++i) {
        const PolyExpPiece& piece = p.pieces[i];
        for (size_t j = 0; j < piece.formula.terms.size(); ++j) {
            const Polynomial& b = piece.formula.terms[j].b;
            const bool constant = b.terms().size() == 1 && is_zero_vec(b.terms().begin()->first);
            if (!constant) {
                v.kind = StructureVerdict::not_bezivin;
                v.witness_piece = i;
                v.witness_term = j;
                return v;
            }
        }
    }
    for (size_t i = 0; i < p.pieces.size(); ++i) {
        for (const ExpPolyTerm& t : p.pieces[i].formula.terms) {
            const Rat c0 = t.b.terms().begin()->second;
            if (!g.member(c0)) {
                v.kind = StructureVerdict::constants_outside_group;
                v.witness_piece = i;
                v.witness_constant = c0;
                return v;
            }
            for (const Rat& beta : t.beta) {
                if (!g.member(beta)) {
                    v.kind = StructureVerdict::constants_outside_group;
                    v.witness_piece = i;
                    v.witness_constant = beta;
                    return v;
                }
            }
        }
    }
    bool all_single = true;
    for (const PolyExpPiece& piece : p.pieces)
        if (piece.formula.terms.size() != 1) all_single = false;
    v.kind = all_single ? StructureVerdict::polya : StructureVerdict::bezivin;
    return v;
}

GlobalLift lift_global(const PolyExpPiece& piece) {
    const size_t s = piece.set.rank(), d = piece.set.dim();
    const Vec& a = piece.set.offset();

    // Left inverse over Q of the period matrix with the smallest possible
    // common denominator N: row i solves l_i * B = e_i, and the minimal N_i
    // with N_i e_i in the integer row lattice of B is read off the lattice
    // basis. The root requirement beta^(1/N) is weakest for minimal N.
    std::vector<std::vector<Rat>> lmat(s, std::vector<Rat>(d, Rat(0)));
    Int n_den = 1;
    if (s > 0) {
        IntMatrix bt(s, d); // row i = period i, i.e. B^T
        for (size_t i = 0; i < s; ++i)
            for (size_t c = 0; c < d; ++c) bt.at(i, c) = piece.set.periods()[i][c];
        HnfResult lattice = hnf(bt.transposed()); // rows of H span image(B^T) in Z^s
        for (size_t i = 0; i < s; ++i) {
            // minimal N_i with N_i e_i in the lattice spanned by the rows of H
            std::vector<Rat> rem(s, Rat(0));
            rem[i] = 1;
            Int ni = 1;
            for (size_t row = 0; row < lattice.h.rows(); ++row) {
                size_t piv = s;
                for (size_t cc = 0; cc < s; ++cc)
                    if (lattice.h.at(row, cc) != 0) {
                        piv = cc;
                        break;
                    }
                if (piv == s) continue;
                Rat y = rem[piv] / Rat(lattice.h.at(row, piv));
                for (size_t cc = 0; cc < s; ++cc) rem[cc] -= y * Rat(lattice.h.at(row, cc));
                mpz_lcm(ni.get_mpz_t(), ni.get_mpz_t(), y.get_den().get_mpz_t());
            }
            for (const Rat& x : rem)
                if (x != 0) throw std::logic_error("lift_global: periods not independent");
            std::vector<Int> target(s, Int(0));
            target[i] = ni;
            auto li = solve_integer(bt, target); // B^T x = N_i e_i gives row l_i = x/N_i
            if (!li) throw std::logic_error("lift_global: left inverse solve failed");
            for (size_t c = 0; c < d; ++c) lmat[i][c] = Rat((*li)[c]) / Rat(ni);
            mpz_lcm(n_den.get_mpz_t(), n_den.get_mpz_t(), ni.get_mpz_t());
        }
    }
    std::vector<Rat> la(s, Rat(0));
    for (size_t i = 0; i < s; ++i)
        for (size_t c = 0; c < d; ++c) la[i] += lmat[i][c] * Rat(a[c]);
    if (!n_den.fits_ulong_p()) throw capability_error("lift_global: denominator overflow");
    const unsigned long n_root = n_den.get_ui();

    GlobalForm form;
    for (const ExpPolyTerm& t : piece.formula.terms) {
        std::vector<Rat> gamma(s);
        for (size_t i = 0; i < s; ++i) {
            auto g = nth_root(t.beta[i], n_root);
            if (!g) {
                return {std::nullopt, "irrational root: " + rat_to_string(t.beta[i]) + "^(1/" +
                                          std::to_string(n_root) + ")"};
            }
            gamma[i] = *g;
        }
        std::vector<Rat> alpha(d, Rat(1));
        for (size_t j = 0; j < d; ++j)
            for (size_t i = 0; i < s; ++i) {
                Rat q = lmat[i][j] * Rat(n_den); // integral
                alpha[j] *= rat_pow(gamma[i], q.get_num().get_si());
            }
        std::vector<Polynomial> subs;
        for (size_t i = 0; i < s; ++i) {
            Polynomial sub(d, -la[i]);
            for (size_t j = 0; j < d; ++j) {
                Vec e(d, 0);
                e[j] = 1;
                sub.add_term(e, lmat[i][j]);
            }
            subs.push_back(std::move(sub));
        }
        Polynomial big_a = t.b.substitute(subs, d);
        for (size_t i = 0; i < s; ++i) {
            Rat p = -la[i] * Rat(n_den); // integral
            big_a *= rat_pow(gamma[i], p.get_num().get_si());
        }
        form.terms.emplace_back(std::move(big_a), std::move(alpha));
    }

    // agreement check on enumeration
    for (const Vec& n : enumerate_upto(piece.set, 10)) {
        Rat want = piece.formula.evaluate(*piece.set.member_coords(n));
        Rat got(0);
        std::vector<Rat> x(d);
        for (size_t j = 0; j < d; ++j) x[j] = Rat(n[j]);
        for (const auto& [poly, alpha] : form.terms) {
            Rat w = poly.evaluate(x);
            for (size_t j = 0; j < d; ++j) w *= rat_pow(alpha[j], n[j]);
            got += w;
        }
        if (want != got) throw std::logic_error("lift_global: verification failed");
    }
    return {std::move(form), ""};
}

namespace {

// express b in the product binomial basis prod binom(k_i+m_i-1, m_i),
// k_i in [1, deg_i+1]; returns map from k-vector to coefficient
std::map<Vec, Rat> binomial_basis_coeffs(const Polynomial& b, size_t s) {
    Vec degs(s, 0);
    for (const auto& [e, c] : b.terms())
        for (size_t i = 0; i < s; ++i) degs[i] = std::max(degs[i], e[i]);
    // grid of evaluation points and of basis indices
    std::vector<Vec> grid, kidx;
    Vec m(s, 0);
    while (true) {
        grid.push_back(m);
        Vec k = m;
        for (long& x : k) ++x;
        kidx.push_back(k);
        size_t c = 0;
        while (c < s && ++m[c] > degs[c]) m[c++] = 0;
        if (c == s) break;
    }
    std::vector<std::vector<Rat>> mat(grid.size(), std::vector<Rat>(grid.size()));
    std::vector<Rat> rhs(grid.size());
    for (size_t r = 0; r < grid.size(); ++r) {
        std::vector<Rat> x(s);
        for (size_t i = 0; i < s; ++i) x[i] = Rat(grid[r][i]);
        rhs[r] = b.evaluate(x);
        for (size_t k = 0; k < kidx.size(); ++k) {
            Rat v(1);
            for (size_t i = 0; i < s; ++i) {
                // binom(k_i + m - 1, m) at m = grid[r][i]
                v *= Rat(binomial(Int(kidx[k][i] + grid[r][i] - 1), grid[r][i]));
            }
            mat[r][k] = v;
        }
    }
    auto sol = dense_solve(std::move(mat), std::move(rhs));
    if (!sol) throw std::logic_error("binomial basis conversion: singular system");
    std::map<Vec, Rat> out;
    for (size_t k = 0; k < kidx.size(); ++k)
        if ((*sol)[k] != 0) out[kidx[k]] = (*sol)[k];
    return out;
}

} // namespace

UnitProductRational piece_to_rational(const PolyExpPiece& piece, bool verify) {
    const size_t s = piece.set.rank(), d = piece.set.dim();
    std::vector<UnitProductRational> parts;
    for (const ExpPolyTerm& t : piece.formula.terms) {
        for (const auto& [k, lambda] : binomial_basis_coeffs(t.b, s)) {
            std::vector<Block> blocks;
            for (size_t i = 0; i < s; ++i)
                blocks.push_back({t.beta[i], piece.set.periods()[i], k[i]});
            parts.emplace_back(d, Polynomial::monomial(piece.set.offset(), lambda),
                               std::move(blocks));
        }
    }
    if (parts.empty()) return UnitProductRational(d);
    UnitProductRational out = normalize_sum(parts);
    if (verify) {
        TruncatedSeries series = expand_rational(out, 10);
        for (const auto& [n, c] : series.coeffs()) {
            auto m = piece.set.member_coords(n);
            Rat want = m ? piece.formula.evaluate(*m) : Rat(0);
            if (want != c) throw std::logic_error("piece_to_rational: oracle check failed");
        }
        for (const Vec& n : enumerate_upto(piece.set, 10)) {
            if (series.coeff(n) != piece.formula.evaluate(*piece.set.member_coords(n)))
                throw std::logic_error("piece_to_rational: oracle check failed");
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// partition upgrade
// ---------------------------------------------------------------------------

namespace {

// transport a formula onto a sub-structure of its set: old local coordinates
// m = delta + sum_j m'_j t_j with t_j the old coordinates of the new periods
ExponentialPolynomial transport_formula(const ExponentialPolynomial& f, const Vec& delta,
                                        const std::vector<Vec>& t_rows) {
    const size_t s_old = f.arity, s_new = t_rows.size();
    ExponentialPolynomial out{s_new, {}};
    for (const ExpPolyTerm& t : f.terms) {
        std::vector<Polynomial> subs;
        for (size_t i = 0; i < s_old; ++i) {
            Polynomial sub(s_new, Rat(Int(delta[i])));
            for (size_t j = 0; j < s_new; ++j) {
                if (t_rows[j][i] == 0) continue;
                Vec e(s_new, 0);
                e[j] = 1;
                sub.add_term(e, Rat(Int(t_rows[j][i])));
            }
            subs.push_back(std::move(sub));
        }
        Polynomial b = t.b.substitute(subs, s_new);
        std::vector<Rat> beta(s_new, Rat(1));
        for (size_t i = 0; i < s_old; ++i) {
            b *= rat_pow(t.beta[i], delta[i]);
            for (size_t j = 0; j < s_new; ++j) beta[j] *= rat_pow(t.beta[i], t_rows[j][i]);
        }
        out.terms.push_back({std::move(b), std::move(beta)});
    }
    return out;
}

struct Region {
    Vec offset; // class-relative coordinates
    std::vector<bool> kept;
    std::vector<size_t> covers; // indices into the class piece list
};

void upset_regions(const std::vector<std::pair<Vec, size_t>>& items, size_t s,
                   std::vector<Region>& out) {
    if (items.empty()) return;
    Vec mx(s, 0);
    for (const auto& [mu, q] : items)
        for (size_t i = 0; i < s; ++i) mx[i] = std::max(mx[i], mu[i]);
    // the all-covered region
    Region top{mx, std::vector<bool>(s, true), {}};
    for (const auto& [mu, q] : items) top.covers.push_back(q);
    out.push_back(std::move(top));
    // first-violated-coordinate complement
    for (size_t c = 0; c < s; ++c) {
        if (mx[c] <= 0) continue;
        for (long val = 0; val < mx[c]; ++val) {
            std::vector<std::pair<Vec, size_t>> sub;
            for (const auto& [mu, q] : items) {
                if (mu[c] > val) continue;
                Vec mu2;
                for (size_t i = 0; i < s; ++i) {
                    if (i == c) continue;
                    mu2.push_back(i < c ? 0 : mu[i]);
                }
                sub.emplace_back(std::move(mu2), q);
            }
            std::vector<Region> subregions;
            upset_regions(sub, s - 1, subregions);
            for (Region& r : subregions) {
                Region full;
                full.offset.resize(s);
                full.kept.resize(s);
                size_t pos = 0;
                for (size_t i = 0; i < s; ++i) {
                    if (i == c) {
                        full.offset[i] = val;
                        full.kept[i] = false;
                    } else {
                        full.offset[i] = r.offset[pos] + (i < c ? mx[i] : 0);
                        full.kept[i] = r.kept[pos];
                        ++pos;
                    }
                }
                full.covers = std::move(r.covers);
                out.push_back(std::move(full));
            }
        }
    }
}

// partition of a union of translates of one simple cone into disjoint pieces
std::optional<std::vector<PolyExpPiece>> partition_up_sets(
    const std::vector<PolyExpPiece>& pieces) {
    const std::vector<Vec>& periods = pieces.front().set.periods();
    const size_t s = periods.size(), d = pieces.front().set.dim();
    IntMatrix pmat = IntMatrix::from_cols(periods, d);
    // congruence classes modulo the period lattice
    std::vector<std::vector<std::pair<Vec, size_t>>> classes; // (t-coords, piece index)
    std::vector<Vec> class_base;
    for (size_t q = 0; q < pieces.size(); ++q) {
        const Vec& a = pieces[q].set.offset();
        bool placed = false;
        for (size_t cl = 0; cl < classes.size() && !placed; ++cl) {
            std::vector<Int> rhs(d);
            for (size_t c = 0; c < d; ++c) rhs[c] = a[c] - class_base[cl][c];
            if (auto tz = solve_integer(pmat, rhs)) {
                Vec t(s);
                for (size_t i = 0; i < s; ++i) {
                    if (!(*tz)[i].fits_slong_p()) return std::nullopt;
                    t[i] = (*tz)[i].get_si();
                }
                classes[cl].emplace_back(std::move(t), q);
                placed = true;
            }
        }
        if (!placed) {
            classes.push_back({{Vec(s, 0), q}});
            class_base.push_back(a);
        }
    }
    std::vector<PolyExpPiece> out;
    for (size_t cl = 0; cl < classes.size(); ++cl) {
        auto items = classes[cl];
        Vec lo(s, 0);
        for (size_t i = 0; i < s; ++i) {
            long m = items.front().first[i];
            for (const auto& [t, q] : items) m = std::min(m, t[i]);
            lo[i] = m;
        }
        for (auto& [t, q] : items)
            for (size_t i = 0; i < s; ++i) t[i] -= lo[i];
        std::vector<Region> regions;
        upset_regions(items, s, regions);
        for (const Region& r : regions) {
            if (r.covers.empty()) continue;
            // anchor on one covering piece to stay inside N^d
            size_t q0 = r.covers.front();
            Vec mu0;
            for (const auto& [t, q] : items)
                if (q == q0) mu0 = t;
            Vec off = pieces[q0].set.offset();
            for (size_t i = 0; i < s; ++i)
                for (size_t c = 0; c < d; ++c) off[c] += (r.offset[i] - mu0[i]) * periods[i][c];
            std::vector<Vec> kept_periods;
            std::vector<Vec> t_rows; // old coords of the kept unit directions
            for (size_t i = 0; i < s; ++i)
                if (r.kept[i]) {
                    kept_periods.push_back(periods[i]);
                    Vec unit(s, 0);
                    unit[i] = 1;
                    t_rows.push_back(unit);
                }
            ExponentialPolynomial formula{kept_periods.size(), {}};
            for (size_t q : r.covers) {
                Vec mu;
                for (const auto& [t, qq] : items)
                    if (qq == q) mu = t;
                ExponentialPolynomial part =
                    transport_formula(pieces[q].formula, sub(r.offset, mu), t_rows);
                for (ExpPolyTerm& t2 : part.terms) formula.terms.push_back(std::move(t2));
            }
            formula = normalize_formula(formula);
            if (formula.terms.empty()) continue;
            out.push_back({SimpleLinearSet(off, kept_periods), std::move(formula)});
        }
    }
    return out;
}

// Absorb a piece P into a neighbor Q when Q's periods are P's plus one extra
// direction w, Q sits at P.offset + w, and Q's formula shifted one step back
// restricts on the face to P's formula. The union is then the simple set at
// P.offset with Q's periods and the shifted formula.
std::vector<PolyExpPiece> coalesce(std::vector<PolyExpPiece> pieces) {
    auto face_restrict = [](const ExponentialPolynomial& f, size_t drop) {
        std::vector<Vec> rows;
        for (size_t i = 0; i < f.arity; ++i) {
            if (i == drop) continue;
            Vec unit(f.arity, 0);
            unit[i] = 1;
            rows.push_back(unit);
        }
        return normalize_formula(transport_formula(f, Vec(f.arity, 0), rows));
    };
    bool progress = true;
    while (progress) {
        progress = false;
        for (size_t qi = 0; qi < pieces.size() && !progress; ++qi) {
            const PolyExpPiece& q = pieces[qi];
            for (size_t pi = 0; pi < pieces.size() && !progress; ++pi) {
                if (pi == qi) continue;
                const PolyExpPiece& p = pieces[pi];
                if (q.set.rank() != p.set.rank() + 1) continue;
                // locate the extra period
                size_t extra = q.set.rank();
                {
                    size_t ip = 0;
                    bool ok = true;
                    for (size_t iq = 0; iq < q.set.rank() && ok; ++iq) {
                        if (ip < p.set.rank() && p.set.periods()[ip] == q.set.periods()[iq]) {
                            ++ip;
                        } else if (extra == q.set.rank()) {
                            extra = iq;
                        } else {
                            ok = false;
                        }
                    }
                    if (!ok || ip != p.set.rank() || extra == q.set.rank()) continue;
                }
                const Vec& w = q.set.periods()[extra];
                if (q.set.offset() != add(p.set.offset(), w)) continue;
                // shift Q's formula one step back along w
                std::vector<Vec> identity;
                for (size_t i = 0; i < q.set.rank(); ++i) {
                    Vec unit(q.set.rank(), 0);
                    unit[i] = 1;
                    identity.push_back(unit);
                }
                Vec delta(q.set.rank(), 0);
                delta[extra] = -1;
                ExponentialPolynomial shifted =
                    normalize_formula(transport_formula(q.formula, delta, identity));
                if (!(face_restrict(shifted, extra) == normalize_formula(p.formula))) continue;
                PolyExpPiece merged{SimpleLinearSet(p.set.offset(), q.set.periods()),
                                    std::move(shifted)};
                pieces.erase(pieces.begin() + std::max(pi, qi));
                pieces.erase(pieces.begin() + std::min(pi, qi));
                pieces.push_back(std::move(merged));
                progress = true;
            }
        }
    }
    return pieces;
}

bool pairwise_disjoint(const std::vector<PolyExpPiece>& pieces) {
    for (size_t i = 0; i < pieces.size(); ++i)
        for (size_t j = i + 1; j < pieces.size(); ++j)
            if (!intersect_simple(pieces[i].set, pieces[j].set).empty()) return false;
    return true;
}

bool all_same_periods(const std::vector<PolyExpPiece>& pieces) {
    for (const PolyExpPiece& piece : pieces)
        if (!(piece.set.periods() == pieces.front().set.periods())) return false;
    return true;
}

// group pieces by period list and apply the translate partition per group
std::optional<std::vector<PolyExpPiece>> group_up_sets(std::vector<PolyExpPiece> pieces) {
    std::map<std::vector<Vec>, std::vector<PolyExpPiece>> groups;
    for (PolyExpPiece& piece : pieces) groups[piece.set.periods()].push_back(std::move(piece));
    std::vector<PolyExpPiece> out;
    for (auto& [period_list, group] : groups) {
        auto part = partition_up_sets(group);
        if (!part) return std::nullopt;
        for (PolyExpPiece& piece : *part) out.push_back(std::move(piece));
    }
    return out;
}

} // namespace

PartitionUpgrade partition_upgrade(const PiecewisePolyExp& p, size_t budget) {
    PiecewisePolyExp cur = canonicalize(p);
    if (cur.semantics == Semantics::partition) return {cur, ""};
    if (cur.pieces.empty() || pairwise_disjoint(cur.pieces)) {
        cur.semantics = Semantics::partition;
        return {cur, ""};
    }
    // translate family over one common cone
    if (all_same_periods(cur.pieces)) {
        auto parts = partition_up_sets(cur.pieces);
        if (!parts) return {std::nullopt, "translate partition overflow"};
        PiecewisePolyExp out;
        out.semantics = Semantics::partition;
        out.pieces = coalesce(std::move(*parts));
        return {canonicalize(out), ""};
    }

    // refine every piece along the global half-open fan of all periods plus
    // the unit directions, through exact intersections
    const size_t d = cur.pieces.front().set.dim();
    std::vector<Vec> universe;
    for (const PolyExpPiece& piece : cur.pieces)
        for (const Vec& b : piece.set.periods()) universe.push_back(b);
    for (size_t c = 0; c < d; ++c) {
        Vec unit(d, 0);
        unit[c] = 1;
        universe.push_back(unit);
    }
    std::sort(universe.begin(), universe.end());
    universe.erase(std::unique(universe.begin(), universe.end()), universe.end());

    std::vector<FanCell> cells = placing_triangulation(universe);
    std::vector<SimpleLinearSet> boxes;
    for (const FanCell& cell : cells) {
        std::vector<Vec> gens;
        std::vector<bool> open(cell.gens.size(), false);
        for (size_t g = 0; g < cell.gens.size(); ++g) gens.push_back(universe[cell.gens[g]]);
        for (size_t g : cell.excluded) open[g] = true;
        for (const Vec& w : halfopen_box_points(gens, open)) boxes.emplace_back(w, gens);
    }

    PiecewisePolyExp refined;
    refined.semantics = Semantics::additive;
    for (const PolyExpPiece& piece : cur.pieces) {
        for (const SimpleLinearSet& box : boxes) {
            SemilinearSet inter = intersect_simple(piece.set, box);
            for (const SimpleLinearSet& comp : inter.components) {
                auto delta = piece.set.member_coords(comp.offset());
                if (!delta) return {std::nullopt, "refined component escaped its piece"};
                std::vector<Vec> t_rows;
                for (const Vec& q : comp.periods()) {
                    std::vector<Rat> rhs(d);
                    for (size_t c = 0; c < d; ++c) rhs[c] = Rat(q[c]);
                    auto t = solve_rational_unique(
                        IntMatrix::from_cols(piece.set.periods(), d), rhs);
                    if (!t) return {std::nullopt, "refined period outside the piece lattice"};
                    Vec row(t->size());
                    for (size_t j = 0; j < t->size(); ++j) {
                        if ((*t)[j].get_den() != 1 || (*t)[j] < 0)
                            return {std::nullopt, "refined period outside the piece lattice"};
                        row[j] = (*t)[j].get_num().get_si();
                    }
                    t_rows.push_back(std::move(row));
                }
                refined.pieces.push_back(
                    {comp, transport_formula(piece.formula, *delta, t_rows)});
                if (refined.pieces.size() > budget * 100)
                    return {std::nullopt, "fan refinement budget exhausted"};
            }
        }
    }
    refined = canonicalize(refined);
    if (!pairwise_disjoint(refined.pieces)) {
        auto grouped = group_up_sets(refined.pieces);
        if (!grouped) return {std::nullopt, "translate partition overflow"};
        refined.pieces = std::move(*grouped);
        refined = canonicalize(refined);
        if (!pairwise_disjoint(refined.pieces))
            return {std::nullopt, "pieces overlap after fan refinement"};
    }
    refined.pieces = coalesce(std::move(refined.pieces));
    refined = canonicalize(refined);
    refined.semantics = Semantics::partition;
    return {refined, ""};
}

} // namespace unitrat
