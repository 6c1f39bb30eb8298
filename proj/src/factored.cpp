#include "unitrat/factored.hpp"

#include <algorithm>
#include <set>

namespace unitrat {

namespace {

// deterministic odd-prime table, built once
const std::vector<unsigned long>& prime_table() {
    static const std::vector<unsigned long> primes = [] {
        const size_t limit = 1u << 20;
        std::vector<bool> comp(limit, false);
        std::vector<unsigned long> ps;
        for (size_t i = 2; i < limit; ++i) {
            if (comp[i]) continue;
            ps.push_back(i);
            for (size_t j = i * i; j < limit; j += i) comp[j] = true;
        }
        return ps;
    }();
    return primes;
}

void factor_into(Int n, std::map<unsigned long, long>& out, long mult) {
    if (n == 1) return;
    if (!n.fits_ulong_p() && mpz_sizeinbase(n.get_mpz_t(), 2) > 64)
        throw capability_error("factor_rational: operand exceeds 2^64 after reduction");
    for (unsigned long p : prime_table()) {
        if (Int(p) * Int(p) > n) break;
        long e = 0;
        while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
            mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
            ++e;
        }
        if (e) out[p] += e * mult;
        if (n == 1) return;
    }
    // survivor: prime if below the square of the table bound, otherwise ask
    // a deterministic primality test before giving up
    if (n > 1) {
        if (mpz_probab_prime_p(n.get_mpz_t(), 40) == 0)
            throw capability_error("factor_rational: composite survivor beyond trial division");
        if (!n.fits_ulong_p())
            throw capability_error("factor_rational: prime factor beyond 64 bits");
        out[n.get_ui()] += mult;
    }
}

} // namespace

Rat FactoredRational::reconstruct() const {
    Rat r(sign);
    for (const auto& [p, e] : factors) r *= rat_pow(Rat(static_cast<unsigned long>(p)), e);
    return r;
}

FactoredRational factor_rational(const Rat& q) {
    if (q == 0) throw std::invalid_argument("factor_rational: zero input");
    FactoredRational f;
    f.sign = sgn(q) < 0 ? -1 : 1;
    Int num = abs(q.get_num());
    Int den = q.get_den();
    factor_into(num, f.factors, 1);
    factor_into(den, f.factors, -1);
    std::erase_if(f.factors, [](const auto& kv) { return kv.second == 0; });
    return f;
}

GroupSpec::GroupSpec(std::vector<Rat> generators) : gens_(std::move(generators)) {
    if (gens_.empty()) throw std::invalid_argument("GroupSpec: no generators");
    std::vector<FactoredRational> fs;
    for (const Rat& g : gens_) {
        if (g == 0) throw std::invalid_argument("GroupSpec: zero generator");
        fs.push_back(factor_rational(g));
    }
    std::set<unsigned long> ps;
    for (const auto& f : fs)
        for (const auto& [p, e] : f.factors) ps.insert(p);
    primes_.assign(ps.begin(), ps.end());

    const size_t t = gens_.size(), np = primes_.size();
    lattice_ = IntMatrix(np + 1, t);
    for (size_t j = 0; j < t; ++j) {
        for (size_t i = 0; i < np; ++i) {
            auto it = fs[j].factors.find(primes_[i]);
            lattice_.at(i, j) = it == fs[j].factors.end() ? 0 : it->second;
        }
        lattice_.at(np, j) = fs[j].sign < 0 ? 1 : 0;
    }
    extended_ = IntMatrix(np + 1, t + 1);
    for (size_t i = 0; i <= np; ++i)
        for (size_t j = 0; j < t; ++j) extended_.at(i, j) = lattice_.at(i, j);
    extended_.at(np, t) = 2; // sign congruence doubled into Z
}

std::optional<std::vector<Int>> GroupSpec::member(const Rat& g) const {
    if (g == 0) throw std::invalid_argument("group_member: zero input");
    FactoredRational f = factor_rational(g);
    const size_t np = primes_.size();
    std::vector<Int> target(np + 1, Int(0));
    for (const auto& [p, e] : f.factors) {
        auto it = std::lower_bound(primes_.begin(), primes_.end(), p);
        if (it == primes_.end() || *it != p) return std::nullopt; // prime outside support
        target[it - primes_.begin()] = e;
    }
    target[np] = f.sign < 0 ? 1 : 0;
    auto sol = solve_integer(extended_, target);
    if (!sol) return std::nullopt;
    sol->pop_back(); // drop the auxiliary doubling variable
    return sol;
}

std::optional<GroupSpec::RootPower> GroupSpec::root_power_member(const Rat& c) const {
    if (c == 0) throw std::invalid_argument("root_power_member: zero input");
    FactoredRational f = factor_rational(c);
    const size_t np = primes_.size(), t = gens_.size();
    std::vector<Rat> v(np, Rat(0));
    for (const auto& [p, e] : f.factors) {
        auto it = std::lower_bound(primes_.begin(), primes_.end(), p);
        if (it == primes_.end() || *it != p) return std::nullopt;
        v[it - primes_.begin()] = Rat(e);
    }
    // exponent sublattice spanned by the generator columns (sign row excluded)
    IntMatrix a(np, t);
    for (size_t i = 0; i < np; ++i)
        for (size_t j = 0; j < t; ++j) a.at(i, j) = lattice_.at(i, j);
    // basis of the image lattice: nonzero rows of the HNF of A^T
    HnfResult r = hnf(a.transposed());
    std::vector<Rat> rem = v;
    Int denom_lcm = 1;
    for (size_t row = 0; row < r.h.rows(); ++row) {
        size_t piv = np;
        for (size_t i = 0; i < np; ++i)
            if (r.h.at(row, i) != 0) {
                piv = i;
                break;
            }
        if (piv == np) continue;
        Rat y = rem[piv] / Rat(r.h.at(row, piv));
        for (size_t i = 0; i < np; ++i) rem[i] -= y * Rat(r.h.at(row, i));
        mpz_lcm(denom_lcm.get_mpz_t(), denom_lcm.get_mpz_t(), y.get_den().get_mpz_t());
    }
    for (const Rat& x : rem)
        if (x != 0) return std::nullopt; // not even in the rational span
    if (!denom_lcm.fits_slong_p()) return std::nullopt;
    const long n0 = denom_lcm.get_si();

    // sign parity repeats with period 2 in the multiplier, so testing the two
    // smallest candidate exponents is exhaustive
    for (long mult = 1; mult <= 2; ++mult) {
        const long n = mult * n0;
        std::vector<Int> target(np + 1, Int(0));
        for (size_t i = 0; i < np; ++i) {
            Rat scaled = v[i] * n;
            target[i] = scaled.get_num(); // integral: v has integer entries
        }
        target[np] = (f.sign < 0 && n % 2 != 0) ? 1 : 0;
        if (auto sol = solve_integer(extended_, target)) {
            sol->pop_back();
            return RootPower{n, std::move(*sol)};
        }
    }
    return std::nullopt;
}

std::optional<int> torsion_quotient(const Rat& c, const Rat& cp) {
    if (c == 0 || cp == 0) throw std::invalid_argument("torsion_quotient: zero input");
    if (c == cp) return 1;
    if (c == -cp) return 2;
    return std::nullopt;
}

std::optional<Rat> nth_root(const Rat& q, unsigned long n) {
    if (n == 0) throw std::invalid_argument("nth_root: n must be positive");
    if (n == 1) return q;
    if (q == 0) return Rat(0);
    if (q < 0 && n % 2 == 0) return std::nullopt;
    Int num = abs(q.get_num()), den = q.get_den();
    Int rn, rd;
    if (!mpz_root(rn.get_mpz_t(), num.get_mpz_t(), n)) return std::nullopt;
    if (!mpz_root(rd.get_mpz_t(), den.get_mpz_t(), n)) return std::nullopt;
    Rat r(rn, rd);
    r.canonicalize();
    return q < 0 ? -r : r;
}

} // namespace unitrat
