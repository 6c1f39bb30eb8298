#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "unitrat/parser.hpp"
#include "unitrat/series.hpp"

using namespace unitrat;

namespace {

UnitProductRational upr(const std::string& text) {
    RationalExpr e = parse(text);
    REQUIRE(e.terms.size() == 1);
    return e.terms.front();
}

} // namespace

TEST_CASE("expand_rational worked example values") {
    // 1/((1-x)(1-y)(1-xy)): diagonal coefficient is n+1
    TruncatedSeries f = expand_rational(upr("1/((1-x1)*(1-x2)*(1-x1*x2))"), 10);
    CHECK(f.coeff({2, 2}) == Rat(3));
    for (long n = 0; n <= 5; ++n) CHECK(f.coeff({n, n}) == Rat(n + 1));

    // Catalan combination: zero at (2,3), value 4 at (2,2)
    RationalExpr cat = parse(
        "1/((1-3*x1)*(1-x2)) - 1/((1-x1)*(1-2*x2)) - 1/((1-x1)*(1-x2))");
    TruncatedSeries g = expand_rational(cat.terms, 8);
    CHECK(g.coeff({2, 3}) == Rat(0));
    CHECK(g.coeff({1, 1}) == Rat(0));
    CHECK(g.coeff({2, 2}) == Rat(4));  // 3^2 - 2^2 - 1
    CHECK(g.coeff({3, 1}) == Rat(24)); // 27 - 2 - 1

    // polynomial numerator only
    TruncatedSeries p = expand_rational(upr("(1 + 2*x1 - x2^3)"), 10);
    CHECK(p.coeff({0, 0}) == Rat(1));
    CHECK(p.coeff({1, 0}) == Rat(2));
    CHECK(p.coeff({0, 3}) == Rat(-1));
    CHECK(p.coeffs().size() == 3);
}

TEST_CASE("expand_rational is linear") {
    std::mt19937 rng(5);
    std::vector<std::string> pool{"1/(1-2*x1)", "x1/(1-x1)^2", "(1+x1)/(1-3*x1)",
                                  "1/((1-x1)*(1-2*x1))"};
    for (int i = 0; i < 10; ++i) {
        UnitProductRational a = upr(pool[rng() % pool.size()]);
        UnitProductRational b = upr(pool[rng() % pool.size()]);
        TruncatedSeries sum = expand_rational(std::vector<UnitProductRational>{a, b}, 9);
        TruncatedSeries ea = expand_rational(a, 9);
        ea += expand_rational(b, 9);
        CHECK(!compare(sum, ea).has_value());
    }
}

TEST_CASE("denominator multiplication recovers the numerator") {
    UnitProductRational r = upr("(1 + x1*x2)/((1-2*x1)^2*(1-x2))");
    TruncatedSeries f = expand_rational(r, 8);
    Polynomial q = r.denominator_polynomial();
    TruncatedSeries prod(f.dim(), f.bound());
    for (const auto& [n, c] : f.coeffs())
        for (const auto& [e, qc] : q.terms()) prod.add_coeff(add(n, e), c * qc);
    for (const auto& [n, c] : prod.coeffs())
        if (total_degree(n) + q.total_deg() <= f.bound()) CHECK(c == r.numerator().coeff(n));
}

TEST_CASE("coefficient_of matches expansion pointwise") {
    UnitProductRational r = upr("(1 + x1)/((1-2*x1*x2)^2*(1-3*x2))");
    TruncatedSeries f = expand_rational(r, 9);
    for (const auto& [n, c] : f.coeffs()) CHECK(coefficient_of(r, n) == c);
    CHECK(coefficient_of(r, {1, 0}) == f.coeff({1, 0}));
    CHECK(coefficient_of(r, {0, 3}) == f.coeff({0, 3}));
}

TEST_CASE("hadamard product examples") {
    TruncatedSeries a = expand_rational(upr("1/(1-2*x1)"), 10);
    TruncatedSeries b = expand_rational(upr("1/(1-3*x1)"), 10);
    CHECK(!compare(hadamard_product(a, b), expand_rational(upr("1/(1-6*x1)"), 10)).has_value());

    // all-ones series is the identity
    TruncatedSeries f = expand_rational(upr("(1+3*x1*x2)/((1-2*x1)*(1-x2))"), 8);
    TruncatedSeries ones = expand_rational(upr("1/((1-x1)*(1-x2))"), 8);
    CHECK(!compare(hadamard_product(f, ones), f).has_value());

    TruncatedSeries zero(2, 8);
    CHECK(hadamard_product(f, zero).coeffs().empty());
}

TEST_CASE("hadamard subinverse examples") {
    TruncatedSeries f = expand_rational(upr("1/(1-6*x1*x2)"), 8);
    TruncatedSeries fi = hadamard_subinverse(f);
    CHECK(!compare(fi, expand_rational(upr("1/(1-1/6*x1*x2)"), 8)).has_value());
    CHECK(!compare(hadamard_subinverse(fi), f).has_value()); // involution
    TruncatedSeries zero(2, 8);
    CHECK(hadamard_subinverse(zero).coeffs().empty());
}

TEST_CASE("compare finds the lexicographically first mismatch") {
    TruncatedSeries a = expand_rational(upr("1/(1-2*x1)"), 8);
    TruncatedSeries b = expand_rational(upr("1/(1-3*x1)"), 8);
    CHECK(!compare(a, a).has_value());
    auto m = compare(a, b);
    REQUIRE(m.has_value());
    CHECK(m->n == Vec{1});
    CHECK(m->c1 == Rat(2));
    CHECK(m->c2 == Rat(3));
}

TEST_CASE("hadamard product is commutative and associative on truncations") {
    std::mt19937 rng(9);
    std::vector<std::string> pool{"1/(1-2*x1)", "(1+x1)/(1-3*x1)", "x1/(1-x1)^2"};
    for (int i = 0; i < 8; ++i) {
        TruncatedSeries a = expand_rational(upr(pool[rng() % pool.size()]), 8);
        TruncatedSeries b = expand_rational(upr(pool[rng() % pool.size()]), 8);
        TruncatedSeries c = expand_rational(upr(pool[rng() % pool.size()]), 8);
        CHECK(!compare(hadamard_product(a, b), hadamard_product(b, a)).has_value());
        CHECK(!compare(hadamard_product(hadamard_product(a, b), c),
                       hadamard_product(a, hadamard_product(b, c)))
                   .has_value());
    }
}
