#include "unitrat/semilinear.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace unitrat {

SimpleLinearSet::SimpleLinearSet(Vec offset, std::vector<Vec> periods)
    : offset_(std::move(offset)), periods_(std::move(periods)) {
    if (offset_.empty()) throw std::invalid_argument("SimpleLinearSet: dimension 0");
    if (!nonnegative(offset_)) throw std::invalid_argument("SimpleLinearSet: offset outside N^d");
    for (const Vec& p : periods_) {
        if (p.size() != offset_.size())
            throw std::invalid_argument("SimpleLinearSet: period dimension mismatch");
        if (!nonnegative(p) || is_zero_vec(p))
            throw std::invalid_argument("SimpleLinearSet: period must be nonzero in N^d");
    }
    std::sort(periods_.begin(), periods_.end());
    if (!periods_.empty() &&
        unitrat::rank(IntMatrix::from_rows(periods_, offset_.size())) != periods_.size())
        throw std::invalid_argument("SimpleLinearSet: periods not linearly independent");
}

std::optional<Vec> SimpleLinearSet::member_coords(const Vec& n) const {
    if (n.size() != dim()) throw std::invalid_argument("member_coords: dimension mismatch");
    if (periods_.empty()) return n == offset_ ? std::optional<Vec>(Vec{}) : std::nullopt;
    std::vector<Rat> rhs(dim());
    for (size_t i = 0; i < dim(); ++i) rhs[i] = Rat(n[i] - offset_[i]);
    auto m = solve_rational_unique(IntMatrix::from_cols(periods_, dim()), rhs);
    if (!m) return std::nullopt;
    Vec coords(periods_.size());
    for (size_t i = 0; i < m->size(); ++i) {
        const Rat& x = (*m)[i];
        if (x.get_den() != 1 || x < 0) return std::nullopt;
        if (!x.get_num().fits_slong_p()) throw capability_error("member_coords: coordinate overflow");
        coords[i] = x.get_num().get_si();
    }
    return coords;
}

std::string SimpleLinearSet::to_string() const {
    std::ostringstream os;
    auto put = [&](const Vec& v) {
        for (size_t i = 0; i < v.size(); ++i) {
            if (i) os << ",";
            os << v[i];
        }
    };
    put(offset_);
    for (const Vec& p : periods_) {
        os << " ; ";
        put(p);
    }
    return os.str();
}

std::optional<ContainmentCert> contains_simple(const SimpleLinearSet& sub,
                                               const SimpleLinearSet& sup) {
    if (sub.dim() != sup.dim()) throw std::invalid_argument("contains_simple: dimension mismatch");
    auto mu = sup.member_coords(sub.offset());
    if (!mu) return std::nullopt;
    ContainmentCert cert;
    cert.mu = *mu;
    if (!sub.periods().empty() && sup.periods().empty()) return std::nullopt;
    IntMatrix cols = IntMatrix::from_cols(sup.periods(), sup.dim());
    for (const Vec& p : sub.periods()) {
        if (sup.periods().empty()) return std::nullopt;
        std::vector<Rat> rhs(sup.dim());
        for (size_t i = 0; i < sup.dim(); ++i) rhs[i] = Rat(p[i]);
        auto t = solve_rational_unique(cols, rhs);
        if (!t) return std::nullopt;
        Vec row(t->size());
        for (size_t j = 0; j < t->size(); ++j) {
            const Rat& x = (*t)[j];
            if (x.get_den() != 1 || x < 0) return std::nullopt;
            row[j] = x.get_num().get_si();
        }
        cert.t.push_back(std::move(row));
    }
    return cert;
}

SemilinearSet intersect_simple(const SimpleLinearSet& s1, const SimpleLinearSet& s2,
                               const SolveOptions& opts) {
    if (s1.dim() != s2.dim()) throw std::invalid_argument("intersect_simple: dimension mismatch");
    const size_t d = s1.dim(), k1 = s1.rank(), k2 = s2.rank();
    IntMatrix a(d, k1 + k2);
    std::vector<Int> b(d);
    for (size_t i = 0; i < d; ++i) {
        for (size_t j = 0; j < k1; ++j) a.at(i, j) = s1.periods()[j][i];
        for (size_t j = 0; j < k2; ++j) a.at(i, k1 + j) = -s2.periods()[j][i];
        b[i] = s2.offset()[i] - s1.offset()[i];
    }
    SemilinearSet out;
    out.disjoint = true;
    for (const SolutionPiece& sp : disjoint_solution_pieces(a, b, opts)) {
        Vec off = s1.offset();
        for (size_t j = 0; j < k1; ++j)
            for (size_t i = 0; i < d; ++i) off[i] += sp.offset[j] * s1.periods()[j][i];
        std::vector<Vec> periods;
        for (const Vec& per : sp.periods) {
            Vec img(d, 0);
            for (size_t j = 0; j < k1; ++j)
                for (size_t i = 0; i < d; ++i) img[i] += per[j] * s1.periods()[j][i];
            periods.push_back(std::move(img));
        }
        out.components.emplace_back(std::move(off), std::move(periods));
    }
    std::sort(out.components.begin(), out.components.end());
    return out;
}

std::vector<SimpleLinearSet> coset_refine(const SimpleLinearSet& s, const Vec& indices) {
    if (indices.size() != s.rank()) throw std::invalid_argument("coset_refine: index count");
    for (long n : indices)
        if (n < 1) throw std::invalid_argument("coset_refine: indices must be positive");
    std::vector<SimpleLinearSet> out;
    Vec j(indices.size(), 0);
    while (true) {
        Vec off = s.offset();
        std::vector<Vec> periods;
        for (size_t i = 0; i < indices.size(); ++i) {
            for (size_t c = 0; c < s.dim(); ++c) off[c] += j[i] * s.periods()[i][c];
            periods.push_back(scale(indices[i], s.periods()[i]));
        }
        out.emplace_back(std::move(off), std::move(periods));
        size_t i = 0;
        while (i < indices.size() && ++j[i] == indices[i]) j[i++] = 0;
        if (i == indices.size()) break;
        if (indices.empty()) break;
    }
    return out;
}

namespace {

bool subset_has_common_point(const std::vector<SimpleLinearSet>& sets,
                             const std::vector<size_t>& idx, const SolveOptions& opts) {
    const size_t d = sets[idx[0]].dim();
    size_t vars = 0;
    for (size_t i : idx) vars += sets[i].rank();
    const size_t eqs = d * (idx.size() - 1);
    if (eqs == 0) return true;
    IntMatrix a(eqs, vars);
    std::vector<Int> b(eqs);
    size_t col0 = 0; // columns of the first set's coordinates
    size_t col = sets[idx[0]].rank();
    for (size_t j = 1; j < idx.size(); ++j) {
        const SimpleLinearSet& s0 = sets[idx[0]];
        const SimpleLinearSet& sj = sets[idx[j]];
        for (size_t i = 0; i < d; ++i) {
            const size_t row = (j - 1) * d + i;
            for (size_t t = 0; t < s0.rank(); ++t) a.at(row, col0 + t) = s0.periods()[t][i];
            for (size_t t = 0; t < sj.rank(); ++t) a.at(row, col + t) = -sj.periods()[t][i];
            b[row] = sj.offset()[i] - s0.offset()[i];
        }
        col += sj.rank();
    }
    return !solve_nonneg(a, b, opts).empty();
}

} // namespace

OverlapResult max_overlap(const std::vector<SimpleLinearSet>& sets, const SolveOptions& opts) {
    OverlapResult res;
    const size_t t = sets.size();
    if (t == 0) return res;
    // pairwise intersection table prunes larger subsets
    std::vector<std::vector<bool>> meets(t, std::vector<bool>(t, true));
    for (size_t i = 0; i < t; ++i)
        for (size_t j = i + 1; j < t; ++j)
            meets[i][j] = meets[j][i] = subset_has_common_point(sets, {i, j}, opts);
    for (size_t k = t; k >= 1; --k) {
        std::vector<size_t> idx(k);
        // iterate k-subsets
        std::vector<size_t> c(k);
        for (size_t i = 0; i < k; ++i) c[i] = i;
        while (true) {
            bool ok = true;
            for (size_t i = 0; i < k && ok; ++i)
                for (size_t j = i + 1; j < k && ok; ++j)
                    if (!meets[c[i]][c[j]]) ok = false;
            if (ok && (k <= 2 || subset_has_common_point(sets, c, opts))) {
                res.r = k;
                res.witness = c;
                return res;
            }
            // next combination
            size_t i = k;
            while (i > 0 && c[i - 1] == t - k + i - 1) --i;
            if (i == 0) break;
            ++c[i - 1];
            for (size_t j = i; j < k; ++j) c[j] = c[j - 1] + 1;
        }
    }
    return res;
}

namespace {

void enumerate_rec(const SimpleLinearSet& s, size_t i, Vec point, long budget,
                   std::set<Vec>& out) {
    if (i == s.rank()) {
        out.insert(std::move(point));
        return;
    }
    const Vec& p = s.periods()[i];
    const long w = total_degree(p);
    for (long m = 0;; ++m) {
        if (m * w > budget) break;
        Vec q = point;
        for (size_t c = 0; c < q.size(); ++c) q[c] += m * p[c];
        enumerate_rec(s, i + 1, std::move(q), budget - m * w, out);
    }
}

} // namespace

std::vector<Vec> enumerate_upto(const SimpleLinearSet& s, long bound) {
    std::set<Vec> out;
    const long base = total_degree(s.offset());
    if (base <= bound) enumerate_rec(s, 0, s.offset(), bound - base, out);
    return {out.begin(), out.end()};
}

std::vector<Vec> enumerate_upto(const SemilinearSet& s, long bound) {
    std::set<Vec> out;
    for (const SimpleLinearSet& c : s.components) {
        const long base = total_degree(c.offset());
        if (base <= bound) enumerate_rec(c, 0, c.offset(), bound - base, out);
    }
    return {out.begin(), out.end()};
}

SemilinearSet power_fiber(const std::vector<Rat>& lambda, const Rat& c,
                          const SolveOptions& opts) {
    if (lambda.empty()) throw std::invalid_argument("power_fiber: dimension 0");
    for (const Rat& l : lambda)
        if (l == 0) throw std::invalid_argument("power_fiber: zero entry");
    if (c == 0) throw std::invalid_argument("power_fiber: zero target");
    const size_t d = lambda.size();
    std::vector<FactoredRational> fl;
    for (const Rat& l : lambda) fl.push_back(factor_rational(l));
    FactoredRational fc = factor_rational(c);
    std::set<unsigned long> ps;
    for (const auto& f : fl)
        for (const auto& [p, e] : f.factors) ps.insert(p);
    for (const auto& [p, e] : fc.factors) ps.insert(p);
    std::vector<unsigned long> primes(ps.begin(), ps.end());

    // rows: one per prime, one sign-parity row with auxiliary variable
    const size_t np = primes.size();
    IntMatrix a(np + 1, d + 1);
    std::vector<Int> b(np + 1, Int(0));
    for (size_t i = 0; i < np; ++i) {
        for (size_t j = 0; j < d; ++j) {
            auto it = fl[j].factors.find(primes[i]);
            a.at(i, j) = it == fl[j].factors.end() ? 0 : it->second;
        }
        auto it = fc.factors.find(primes[i]);
        b[i] = it == fc.factors.end() ? 0 : it->second;
    }
    for (size_t j = 0; j < d; ++j) a.at(np, j) = fl[j].sign < 0 ? 1 : 0;
    a.at(np, d) = -2;
    b[np] = fc.sign < 0 ? 1 : 0;

    SemilinearSet out;
    out.disjoint = true;
    for (const SolutionPiece& sp : disjoint_solution_pieces(a, b, opts)) {
        Vec off(sp.offset.begin(), sp.offset.begin() + d);
        std::vector<Vec> periods;
        for (const Vec& per : sp.periods) {
            Vec q(per.begin(), per.begin() + d);
            if (!is_zero_vec(q)) periods.push_back(std::move(q));
        }
        out.components.emplace_back(std::move(off), std::move(periods));
    }
    std::sort(out.components.begin(), out.components.end());
    return out;
}

namespace {

std::optional<std::vector<Rat>> cone_coords(const std::vector<Vec>& gens, const Vec& v) {
    if (gens.empty()) return is_zero_vec(v) ? std::optional<std::vector<Rat>>({}) : std::nullopt;
    std::vector<Rat> rhs(v.size());
    for (size_t i = 0; i < v.size(); ++i) rhs[i] = Rat(v[i]);
    auto t = solve_rational_unique(IntMatrix::from_cols(gens, v.size()), rhs);
    if (!t) return std::nullopt;
    for (const Rat& x : *t)
        if (x < 0) return std::nullopt;
    return t;
}

// inward normal of the facet spanned by cell minus `opposite`, within the
// span of `span_rays`; u . opposite > 0
std::vector<Rat> facet_normal(const std::vector<Vec>& span_rays, const std::vector<Vec>& facet,
                              const Vec& opposite) {
    const size_t d = opposite.size();
    IntMatrix m(facet.size(), span_rays.size());
    for (size_t r = 0; r < facet.size(); ++r)
        for (size_t j = 0; j < span_rays.size(); ++j) {
            Int dot = 0;
            for (size_t c = 0; c < d; ++c) dot += Int(facet[r][c]) * Int(span_rays[j][c]);
            m.at(r, j) = dot;
        }
    HnfResult h = hnf(m);
    for (const std::vector<Int>& alpha : h.kernel) {
        std::vector<Rat> u(d, Rat(0));
        for (size_t j = 0; j < span_rays.size(); ++j)
            for (size_t c = 0; c < d; ++c) u[c] += Rat(alpha[j]) * Rat(span_rays[j][c]);
        Rat dot(0);
        for (size_t c = 0; c < d; ++c) dot += u[c] * Rat(opposite[c]);
        if (dot == 0) continue;
        if (dot < 0)
            for (Rat& x : u) x = -x;
        return u;
    }
    throw std::logic_error("facet_normal: degenerate cell");
}

int sign_generic(const std::vector<Rat>& u, const Vec& xi) {
    Rat s(0);
    for (size_t c = 0; c < u.size(); ++c) s += u[c] * Rat(xi[c]);
    if (s != 0) return s < 0 ? -1 : 1;
    for (const Rat& x : u)
        if (x != 0) return x < 0 ? -1 : 1; // lexicographic perturbation
    return 0;
}

} // namespace

std::vector<FanCell> placing_triangulation(const std::vector<Vec>& vectors) {
    std::vector<FanCell> cells;
    std::vector<size_t> used;
    auto gens_of = [&](const FanCell& c) {
        std::vector<Vec> g;
        for (size_t i : c.gens) g.push_back(vectors[i]);
        return g;
    };
    for (size_t idx = 0; idx < vectors.size(); ++idx) {
        const Vec& v = vectors[idx];
        if (is_zero_vec(v)) continue;
        if (cells.empty()) {
            cells.push_back({{idx}, {}});
            used.push_back(idx);
            continue;
        }
        // a vector inside the current fan subdivides every cell containing it
        // (stellar subdivision), so that all inputs become rays
        bool inside = false;
        std::vector<FanCell> next;
        for (const FanCell& c : cells) {
            auto t = cone_coords(gens_of(c), v);
            if (!t) {
                next.push_back(c);
                continue;
            }
            inside = true;
            for (size_t g = 0; g < c.gens.size(); ++g) {
                if ((*t)[g] == 0) continue;
                FanCell nc;
                for (size_t g2 = 0; g2 < c.gens.size(); ++g2)
                    if (g2 != g) nc.gens.push_back(c.gens[g2]);
                nc.gens.push_back(idx);
                next.push_back(std::move(nc));
            }
        }
        if (inside) {
            cells = std::move(next);
            used.push_back(idx);
            continue;
        }
        std::vector<Vec> span_rays;
        for (size_t i : used) span_rays.push_back(vectors[i]);
        const size_t cur_rank = unitrat::rank(IntMatrix::from_rows(span_rays, v.size()));
        span_rays.push_back(v);
        if (unitrat::rank(IntMatrix::from_rows(span_rays, v.size())) > cur_rank) {
            // dimension grows: extend every cell by the new ray
            for (FanCell& c : cells) c.gens.push_back(idx);
            used.push_back(idx);
            continue;
        }
        span_rays.pop_back();
        // attach v to all visible boundary facets
        std::vector<FanCell> fresh;
        for (const FanCell& c : cells) {
            for (size_t g = 0; g < c.gens.size(); ++g) {
                std::vector<Vec> facet;
                for (size_t g2 = 0; g2 < c.gens.size(); ++g2)
                    if (g2 != g) facet.push_back(vectors[c.gens[g2]]);
                std::vector<Rat> u = facet_normal(span_rays, facet, vectors[c.gens[g]]);
                bool boundary = true;
                for (size_t i : used) {
                    Rat dot(0);
                    for (size_t cc = 0; cc < u.size(); ++cc) dot += u[cc] * Rat(vectors[i][cc]);
                    if (dot < 0) {
                        boundary = false;
                        break;
                    }
                }
                if (!boundary) continue;
                Rat dv(0);
                for (size_t cc = 0; cc < u.size(); ++cc) dv += u[cc] * Rat(v[cc]);
                if (dv < 0) {
                    FanCell nc;
                    for (size_t g2 = 0; g2 < c.gens.size(); ++g2)
                        if (g2 != g) nc.gens.push_back(c.gens[g2]);
                    nc.gens.push_back(idx);
                    fresh.push_back(std::move(nc));
                }
            }
        }
        std::set<std::vector<size_t>> seen;
        for (FanCell& c : fresh) {
            std::vector<size_t> key = c.gens;
            std::sort(key.begin(), key.end());
            if (seen.insert(key).second) cells.push_back(std::move(c));
        }
        used.push_back(idx);
    }

    // half-open exclusions against a generic reference point in the first cell
    if (!cells.empty()) {
        Vec xi(vectors.front().size(), 0);
        for (size_t i : cells.front().gens) xi = add(xi, vectors[i]);
        std::vector<Vec> span_rays;
        for (size_t i : used) span_rays.push_back(vectors[i]);
        for (FanCell& c : cells) {
            for (size_t g = 0; g < c.gens.size(); ++g) {
                std::vector<Vec> facet;
                for (size_t g2 = 0; g2 < c.gens.size(); ++g2)
                    if (g2 != g) facet.push_back(vectors[c.gens[g2]]);
                std::vector<Rat> u = facet_normal(span_rays, facet, vectors[c.gens[g]]);
                if (sign_generic(u, xi) < 0) c.excluded.push_back(g);
            }
        }
    }
    return cells;
}

std::vector<Vec> halfopen_box_points(const std::vector<Vec>& periods,
                                     const std::vector<bool>& open) {
    if (periods.empty()) return {};
    const size_t dim = periods.front().size();
    IntMatrix m = IntMatrix::from_cols(periods, dim);
    Vec hi(dim, 0);
    for (const Vec& p : periods)
        for (size_t c = 0; c < dim; ++c) hi[c] += p[c];
    std::vector<Vec> out;
    Vec w(dim, 0);
    while (true) {
        std::vector<Rat> rhs(dim);
        for (size_t c = 0; c < dim; ++c) rhs[c] = Rat(w[c]);
        if (auto t = solve_rational_unique(m, rhs)) {
            bool ok = true;
            for (size_t j = 0; j < periods.size() && ok; ++j) {
                const Rat& x = (*t)[j];
                ok = open[j] ? (x > 0 && x <= 1) : (x >= 0 && x < 1);
            }
            if (ok) out.push_back(w);
        }
        size_t c = 0;
        while (c < dim && ++w[c] > hi[c]) w[c++] = 0;
        if (c == dim) break;
    }
    std::sort(out.begin(), out.end());
    return out;
}

SimpleLinearSet parse_simple_set(const std::string& text) {
    std::vector<Vec> groups;
    std::string chunk;
    std::istringstream is(text);
    while (std::getline(is, chunk, ';')) {
        Vec v;
        std::istringstream cs(chunk);
        std::string num;
        while (std::getline(cs, num, ',')) {
            size_t pos = 0;
            long x = std::stoll(num, &pos);
            v.push_back(x);
        }
        if (!v.empty()) groups.push_back(std::move(v));
    }
    if (groups.empty()) throw std::invalid_argument("empty set literal");
    Vec offset = groups.front();
    return SimpleLinearSet(offset, {groups.begin() + 1, groups.end()});
}

} // namespace unitrat
