#include "unitrat/skewgeom.hpp"

#include <algorithm>

#include "unitrat/series.hpp"

namespace unitrat {

SkewGeometric::SkewGeometric(Rat c0_, Vec u0_, std::vector<std::pair<Rat, Vec>> factors_)
    : c0(std::move(c0_)), u0(std::move(u0_)), factors(std::move(factors_)) {
    for (const auto& [c, e] : factors) {
        if (c == 0) throw std::invalid_argument("SkewGeometric: zero factor constant");
        if (e.size() != u0.size() || is_zero_vec(e) || !nonnegative(e))
            throw std::invalid_argument("SkewGeometric: bad factor exponent");
    }
    std::sort(factors.begin(), factors.end(),
              [](const auto& a, const auto& b) { return a.second < b.second; });
    if (!factors.empty()) {
        std::vector<Vec> exps;
        for (const auto& [c, e] : factors) exps.push_back(e);
        if (rank(IntMatrix::from_rows(exps, u0.size())) != exps.size())
            throw std::invalid_argument("SkewGeometric: exponents not independent");
    }
}

SimpleLinearSet SkewGeometric::support() const {
    std::vector<Vec> periods;
    for (const auto& [c, e] : factors) periods.push_back(e);
    return SimpleLinearSet(u0, periods);
}

UnitProductRational SkewGeometric::to_rational() const {
    std::vector<Block> blocks;
    for (const auto& [c, e] : factors) blocks.push_back({c, e, 1});
    return UnitProductRational(u0.size(), Polynomial::monomial(u0, c0), std::move(blocks));
}

SkewGeometric indicator_of(const SimpleLinearSet& s) {
    std::vector<std::pair<Rat, Vec>> factors;
    for (const Vec& p : s.periods()) factors.emplace_back(Rat(1), p);
    return SkewGeometric(Rat(1), s.offset(), std::move(factors));
}

Rat coefficient_at(const SkewGeometric& f, const Vec& n) {
    if (f.c0 == 0) return Rat(0);
    auto m = f.support().member_coords(n);
    if (!m) return Rat(0);
    Rat v = f.c0;
    for (size_t i = 0; i < f.factors.size(); ++i) v *= rat_pow(f.factors[i].first, (*m)[i]);
    return v;
}

Rat coefficient_at(const SkewGeomSum& f, const Vec& n) {
    Rat v(0);
    for (const SkewGeometric& s : f.summands) v += coefficient_at(s, n);
    return v;
}

SkewGeometric restrict_to(const SkewGeometric& f, const SimpleLinearSet& s) {
    auto cert = contains_simple(s, f.support());
    if (!cert) throw std::invalid_argument("restrict_to: set not contained in the support");
    Rat d0 = f.c0;
    for (size_t j = 0; j < f.factors.size(); ++j) d0 *= rat_pow(f.factors[j].first, cert->mu[j]);
    std::vector<std::pair<Rat, Vec>> factors;
    for (size_t i = 0; i < s.periods().size(); ++i) {
        Rat c(1);
        for (size_t j = 0; j < f.factors.size(); ++j)
            c *= rat_pow(f.factors[j].first, cert->t[i][j]);
        factors.emplace_back(c, s.periods()[i]);
    }
    return SkewGeometric(d0, s.offset(), std::move(factors));
}

std::vector<UnitProductRational> to_rational(const SkewGeomSum& f) {
    std::vector<UnitProductRational> out;
    for (const SkewGeometric& s : f.summands) out.push_back(s.to_rational());
    return out;
}

AmbiguityReport classify_ambiguity(const SkewGeomSum& f) {
    std::vector<const SkewGeometric*> live;
    for (const SkewGeometric& s : f.summands)
        if (s.c0 != 0) live.push_back(&s);
    AmbiguityReport rep{Ambiguity::unambiguous, 0, {}};
    std::vector<SimpleLinearSet> supports;
    for (const SkewGeometric* s : live) supports.push_back(s->support());
    bool all_disjoint = true, equal_or_disjoint = true;
    for (size_t i = 0; i < supports.size(); ++i)
        for (size_t j = i + 1; j < supports.size(); ++j) {
            if (supports[i] == supports[j]) {
                all_disjoint = false;
                continue;
            }
            if (!intersect_simple(supports[i], supports[j]).empty()) {
                all_disjoint = false;
                equal_or_disjoint = false;
            }
        }
    rep.status = all_disjoint            ? Ambiguity::unambiguous
                 : equal_or_disjoint     ? Ambiguity::trivially_ambiguous
                                         : Ambiguity::ambiguous;
    OverlapResult ov = max_overlap(supports);
    rep.r = ov.r;
    rep.witness = ov.witness;
    return rep;
}

namespace {

SkewGeomSum merge_summands(SkewGeomSum f) {
    std::sort(f.summands.begin(), f.summands.end(),
              [](const SkewGeometric& a, const SkewGeometric& b) {
                  if (a.u0 != b.u0) return a.u0 < b.u0;
                  if (a.factors != b.factors) return a.factors < b.factors;
                  return a.c0 < b.c0;
              });
    std::vector<SkewGeometric> merged;
    for (SkewGeometric& s : f.summands) {
        if (!merged.empty() && merged.back().u0 == s.u0 && merged.back().factors == s.factors)
            merged.back().c0 += s.c0;
        else
            merged.push_back(std::move(s));
    }
    std::erase_if(merged, [](const SkewGeometric& s) { return s.c0 == 0; });
    f.summands = std::move(merged);
    return f;
}

} // namespace

SkewGeomSum torsion_normalize(const SkewGeomSum& f, size_t budget) {
    SkewGeomSum cur = merge_summands(f);
    TruncatedSeries before = expand_rational(to_rational(cur), 10);
    for (size_t round = 0;; ++round) {
        if (round >= budget) throw capability_error("torsion_normalize: refinement budget");
        bool changed = false;
        for (size_t i = 0; i < cur.summands.size() && !changed; ++i) {
            for (size_t j = i + 1; j < cur.summands.size() && !changed; ++j) {
                const SkewGeometric &a = cur.summands[i], &b = cur.summands[j];
                if (!(a.support() == b.support())) continue;
                for (size_t k = 0; k < a.factors.size(); ++k) {
                    if (a.factors[k].second != b.factors[k].second) continue;
                    auto n = torsion_quotient(a.factors[k].first, b.factors[k].first);
                    if (!n || *n == 1) continue;
                    // refine both summands along this period
                    Vec idx(a.factors.size(), 1);
                    idx[k] = *n;
                    std::vector<SimpleLinearSet> cosets = coset_refine(a.support(), idx);
                    std::vector<SkewGeometric> repl;
                    for (const SimpleLinearSet& cs : cosets) {
                        repl.push_back(restrict_to(a, cs));
                        repl.push_back(restrict_to(b, cs));
                    }
                    std::vector<SkewGeometric> next;
                    for (size_t q = 0; q < cur.summands.size(); ++q)
                        if (q != i && q != j) next.push_back(cur.summands[q]);
                    for (SkewGeometric& s : repl) next.push_back(std::move(s));
                    cur.summands = std::move(next);
                    cur = merge_summands(cur);
                    changed = true;
                    break;
                }
            }
        }
        if (!changed) break;
    }
    if (compare(before, expand_rational(to_rational(cur), 10)))
        throw std::logic_error("torsion_normalize: series changed");
    cur.status = Ambiguity::unknown;
    return cur;
}

std::string GroupVerdict::describe() const {
    switch (kind) {
    case polya: return "polya";
    case bezivin: return "bezivin(" + std::to_string(r_eff) + ")";
    case fail: return "fail(" + (witness ? rat_to_string(*witness) : std::string("?")) + ")";
    }
    return "?";
}

GroupVerdict certify_group(const SkewGeomSum& f, const GroupSpec& g,
                           std::optional<long> r) {
    GroupVerdict v{GroupVerdict::polya, 0, std::nullopt, std::nullopt};
    AmbiguityReport rep = classify_ambiguity(f);
    v.r_eff = rep.r;
    if (r) v.r_eff_le_r = static_cast<long>(rep.r) <= *r;
    for (const SkewGeometric& s : f.summands) {
        if (s.c0 == 0) continue;
        if (!g.member(s.c0)) {
            v.kind = GroupVerdict::fail;
            v.witness = s.c0;
            return v;
        }
        for (const auto& [c, e] : s.factors) {
            if (!g.member(c)) {
                v.kind = GroupVerdict::fail;
                v.witness = c;
                return v;
            }
        }
    }
    v.kind = rep.status == Ambiguity::unambiguous ? GroupVerdict::polya : GroupVerdict::bezivin;
    return v;
}

SkewGeomSum subinverse_unambiguous(const SkewGeomSum& f) {
    AmbiguityReport rep = classify_ambiguity(f);
    if (rep.status != Ambiguity::unambiguous)
        throw std::invalid_argument("subinverse_unambiguous: sum is not unambiguous");
    SkewGeomSum out;
    out.status = Ambiguity::unambiguous;
    for (const SkewGeometric& s : f.summands) {
        if (s.c0 == 0) continue;
        std::vector<std::pair<Rat, Vec>> factors;
        for (const auto& [c, e] : s.factors) factors.emplace_back(Rat(1) / c, e);
        out.summands.emplace_back(Rat(1) / s.c0, s.u0, std::move(factors));
    }
    TruncatedSeries check = hadamard_subinverse(expand_rational(to_rational(f), 10));
    if (compare(check, expand_rational(to_rational(out), 10)))
        throw std::logic_error("subinverse_unambiguous: oracle check failed");
    return out;
}

std::optional<SkewGeomSum> from_polyexp(const PiecewisePolyExp& p) {
    SkewGeomSum out;
    for (const PolyExpPiece& piece : p.pieces) {
        for (const ExpPolyTerm& t : piece.formula.terms) {
            if (t.b.terms().size() != 1 || !is_zero_vec(t.b.terms().begin()->first))
                return std::nullopt;
            std::vector<std::pair<Rat, Vec>> factors;
            for (size_t i = 0; i < piece.set.rank(); ++i)
                factors.emplace_back(t.beta[i], piece.set.periods()[i]);
            out.summands.emplace_back(t.b.terms().begin()->second, piece.set.offset(),
                                      std::move(factors));
        }
    }
    return merge_summands(out);
}

} // namespace unitrat
