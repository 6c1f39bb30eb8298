#include "unitrat/intmatrix.hpp"

namespace unitrat {

std::vector<Int> IntMatrix::mul_vec(const std::vector<Int>& x) const {
    if (x.size() != cols_) throw std::invalid_argument("mul_vec size mismatch");
    std::vector<Int> r(rows_, Int(0));
    for (size_t i = 0; i < rows_; ++i)
        for (size_t j = 0; j < cols_; ++j) r[i] += at(i, j) * x[j];
    return r;
}

namespace {

void swap_rows(IntMatrix& m, size_t i, size_t j) {
    for (size_t k = 0; k < m.cols(); ++k) std::swap(m.at(i, k), m.at(j, k));
}

void addmul_row(IntMatrix& m, size_t dst, size_t src, const Int& f) {
    if (f == 0) return;
    for (size_t k = 0; k < m.cols(); ++k) m.at(dst, k) += f * m.at(src, k);
}

void negate_row(IntMatrix& m, size_t i) {
    for (size_t k = 0; k < m.cols(); ++k) m.at(i, k) = -m.at(i, k);
}

// Replace rows i, j by unimodular combinations realizing gcd in column col.
// Applies the same transform to u.
void gcd_rows(IntMatrix& h, IntMatrix& u, size_t i, size_t j, size_t col) {
    const Int a = h.at(i, col), b = h.at(j, col);
    if (b == 0) return;
    Int g, p, q;
    mpz_gcdext(g.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    const Int ag = a / g, bg = b / g;
    // rows (i,j) <- (p*i + q*j, -bg*i + ag*j); determinant p*ag + q*bg = 1
    for (size_t k = 0; k < h.cols(); ++k) {
        Int ri = p * h.at(i, k) + q * h.at(j, k);
        Int rj = -bg * h.at(i, k) + ag * h.at(j, k);
        h.at(i, k) = ri;
        h.at(j, k) = rj;
    }
    for (size_t k = 0; k < u.cols(); ++k) {
        Int ri = p * u.at(i, k) + q * u.at(j, k);
        Int rj = -bg * u.at(i, k) + ag * u.at(j, k);
        u.at(i, k) = ri;
        u.at(j, k) = rj;
    }
}

} // namespace

HnfResult hnf(const IntMatrix& a) {
    const size_t m = a.rows(), n = a.cols();
    IntMatrix h = a;
    IntMatrix u = IntMatrix::identity(m);

    size_t pr = 0; // pivot row
    std::vector<size_t> pivot_cols;
    for (size_t pc = 0; pc < n && pr < m; ++pc) {
        // gcd the column below pr into row pr
        size_t nz = pr;
        while (nz < m && h.at(nz, pc) == 0) ++nz;
        if (nz == m) continue;
        if (nz != pr) {
            swap_rows(h, pr, nz);
            swap_rows(u, pr, nz);
        }
        for (size_t r = pr + 1; r < m; ++r)
            if (h.at(r, pc) != 0) gcd_rows(h, u, pr, r, pc);
        if (h.at(pr, pc) < 0) {
            negate_row(h, pr);
            negate_row(u, pr);
        }
        // reduce entries above the pivot into [0, pivot)
        const Int& p = h.at(pr, pc);
        for (size_t r = 0; r < pr; ++r) {
            Int q;
            mpz_fdiv_q(q.get_mpz_t(), h.at(r, pc).get_mpz_t(), p.get_mpz_t());
            if (q != 0) {
                addmul_row(h, r, pr, -q);
                addmul_row(u, r, pr, -q);
            }
        }
        pivot_cols.push_back(pc);
        ++pr;
    }

    // kernel of A: rows of U' (from hnf of A^T) whose image rows vanish
    HnfResult res{std::move(h), std::move(u), {}};
    if (n > 0) {
        IntMatrix at = a.transposed();
        IntMatrix ht = at;
        IntMatrix ut = IntMatrix::identity(n);
        size_t r2 = 0;
        for (size_t pc = 0; pc < at.cols() && r2 < n; ++pc) {
            size_t nz = r2;
            while (nz < n && ht.at(nz, pc) == 0) ++nz;
            if (nz == n) continue;
            if (nz != r2) {
                swap_rows(ht, r2, nz);
                swap_rows(ut, r2, nz);
            }
            for (size_t r = r2 + 1; r < n; ++r)
                if (ht.at(r, pc) != 0) gcd_rows(ht, ut, r2, r, pc);
            ++r2;
        }
        for (size_t r = 0; r < n; ++r) {
            bool zero = true;
            for (size_t k = 0; k < at.cols() && zero; ++k)
                if (ht.at(r, k) != 0) zero = false;
            if (zero) {
                std::vector<Int> v(n);
                for (size_t k = 0; k < n; ++k) v[k] = ut.at(r, k);
                res.kernel.push_back(std::move(v));
            }
        }
    }
    return res;
}

size_t rank(const IntMatrix& a) {
    HnfResult r = hnf(a);
    size_t rk = 0;
    for (size_t i = 0; i < r.h.rows(); ++i) {
        bool zero = true;
        for (size_t j = 0; j < r.h.cols() && zero; ++j)
            if (r.h.at(i, j) != 0) zero = false;
        if (!zero) ++rk;
    }
    return rk;
}

std::optional<std::vector<Int>> solve_integer(const IntMatrix& a, const std::vector<Int>& b) {
    if (b.size() != a.rows()) throw std::invalid_argument("solve_integer size mismatch");
    const size_t m = a.rows(), n = a.cols();
    if (n == 0) {
        for (const Int& x : b)
            if (x != 0) return std::nullopt;
        return std::vector<Int>{};
    }
    // Column HNF: A * U^T = H^T with U*A^T = H. Forward-substitute H^T y = b,
    // then x = U^T y.
    HnfResult r = hnf(a.transposed());
    // H^T is m x n; column j of H^T is row j of H.
    std::vector<Int> y(n, Int(0));
    std::vector<Int> rem = b;
    for (size_t j = 0; j < n; ++j) {
        // pivot position of row j of H: first nonzero
        size_t piv = a.rows();
        for (size_t i = 0; i < m; ++i)
            if (r.h.at(j, i) != 0) {
                piv = i;
                break;
            }
        if (piv == a.rows()) continue; // zero row of H -> kernel direction
        const Int& p = r.h.at(j, piv);
        if (rem[piv] % p != 0) return std::nullopt;
        y[j] = rem[piv] / p;
        for (size_t i = 0; i < m; ++i) rem[i] -= y[j] * r.h.at(j, i);
    }
    for (const Int& x : rem)
        if (x != 0) return std::nullopt;
    std::vector<Int> sol(n, Int(0));
    for (size_t k = 0; k < n; ++k)
        for (size_t j = 0; j < n; ++j) sol[k] += r.u.at(j, k) * y[j];
    return sol;
}

namespace {

// Gaussian elimination over Q; returns reduced augmented system.
struct GaussResult {
    std::vector<std::vector<Rat>> rows; // echelon rows of [A|b]
    std::vector<size_t> pivot_col;
    bool consistent;
};

GaussResult gauss(const IntMatrix& a, const std::vector<Rat>& b) {
    const size_t m = a.rows(), n = a.cols();
    std::vector<std::vector<Rat>> rows(m, std::vector<Rat>(n + 1, Rat(0)));
    for (size_t i = 0; i < m; ++i) {
        for (size_t j = 0; j < n; ++j) rows[i][j] = Rat(a.at(i, j));
        rows[i][n] = b[i];
    }
    std::vector<size_t> pivots;
    size_t pr = 0;
    for (size_t pc = 0; pc < n && pr < m; ++pc) {
        size_t nz = pr;
        while (nz < m && rows[nz][pc] == 0) ++nz;
        if (nz == m) continue;
        std::swap(rows[pr], rows[nz]);
        const Rat inv = Rat(1) / rows[pr][pc];
        for (size_t j = pc; j <= n; ++j) rows[pr][j] *= inv;
        for (size_t i = 0; i < m; ++i) {
            if (i == pr || rows[i][pc] == 0) continue;
            const Rat f = rows[i][pc];
            for (size_t j = pc; j <= n; ++j) rows[i][j] -= f * rows[pr][j];
        }
        pivots.push_back(pc);
        ++pr;
    }
    bool ok = true;
    for (size_t i = pr; i < m; ++i)
        if (rows[i][n] != 0) ok = false;
    return {std::move(rows), std::move(pivots), ok};
}

} // namespace

std::optional<std::vector<Rat>> solve_rational_unique(const IntMatrix& a,
                                                      const std::vector<Rat>& b) {
    GaussResult g = gauss(a, b);
    if (!g.consistent) return std::nullopt;
    if (g.pivot_col.size() != a.cols())
        throw std::invalid_argument("solve_rational_unique: columns not independent");
    std::vector<Rat> x(a.cols(), Rat(0));
    for (size_t i = 0; i < g.pivot_col.size(); ++i) x[g.pivot_col[i]] = g.rows[i][a.cols()];
    return x;
}

bool solvable_rational(const IntMatrix& a, const std::vector<Rat>& b) {
    return gauss(a, b).consistent;
}

} // namespace unitrat
