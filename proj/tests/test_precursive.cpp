#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "unitrat/analyze.hpp"
#include "unitrat/precursive.hpp"

using namespace unitrat;

namespace {

// f(n) - n f(n-1) = 0, f(0) = 1
PRecursiveSystem factorial_system() {
    PRecursiveSystem sys;
    sys.dim = 1;
    sys.k = 1;
    sys.recursions.resize(1);
    sys.recursions[0].push_back({{0}, UniPoly({Rat(1)})});
    sys.recursions[0].push_back({{1}, UniPoly({Rat(0), Rat(-1)})}); // -y
    sys.initial[{0}] = Rat(1);
    return sys;
}

// f(m,n) - f(m-1,n) - f(m,n-1) = 0 with boundary sections identically 1
PRecursiveSystem pascal_system() {
    PRecursiveSystem sys;
    sys.dim = 2;
    sys.k = 1;
    sys.recursions.resize(2);
    for (size_t axis = 0; axis < 2; ++axis) {
        sys.recursions[axis].push_back({{0, 0}, UniPoly({Rat(1)})});
        sys.recursions[axis].push_back({{1, 0}, UniPoly({Rat(-1)})});
        sys.recursions[axis].push_back({{0, 1}, UniPoly({Rat(-1)})});
    }
    auto boundary = std::make_shared<PRecursiveSystem>();
    boundary->dim = 1;
    boundary->k = 1;
    boundary->recursions.resize(1);
    boundary->recursions[0].push_back({{0}, UniPoly({Rat(1)})});
    boundary->recursions[0].push_back({{1}, UniPoly({Rat(-1)})});
    boundary->initial[{0}] = Rat(1);
    sys.sections.push_back({0, 0, boundary});
    sys.sections.push_back({1, 0, boundary});
    return sys;
}

Rat factorial(long n) {
    Rat r(1);
    for (long i = 2; i <= n; ++i) r *= Rat(i);
    return r;
}

Rat binom(long n, long k) {
    if (k < 0 || k > n) return Rat(0);
    return factorial(n) / (factorial(k) * factorial(n - k));
}

} // namespace

TEST_CASE("evaluate the factorial system") {
    PRecursiveSystem sys = factorial_system();
    CHECK(evaluate(sys, {5}) == Rat(120));
    for (long n = 0; n <= 10; ++n) CHECK(evaluate(sys, {n}) == factorial(n));
}

TEST_CASE("evaluate the Pascal system") {
    PRecursiveSystem sys = pascal_system();
    CHECK(evaluate(sys, {3, 2}) == Rat(10));
    for (long m = 0; m <= 6; ++m)
        for (long n = 0; n <= 6; ++n) CHECK(evaluate(sys, {m, n}) == binom(m + n, n));
}

TEST_CASE("evaluate with zero initial data is identically zero") {
    PRecursiveSystem sys = factorial_system();
    sys.initial[{0}] = Rat(0);
    for (long n = 0; n <= 8; ++n) CHECK(evaluate(sys, {n}) == Rat(0));
}

TEST_CASE("evaluate error paths") {
    PRecursiveSystem sys = factorial_system();
    sys.initial.clear();
    CHECK_THROWS_AS(evaluate(sys, {3}), std::domain_error);

    // stepping coefficient that vanishes at the needed argument
    PRecursiveSystem bad;
    bad.dim = 1;
    bad.k = 1;
    bad.recursions.resize(1);
    bad.recursions[0].push_back({{0}, UniPoly({Rat(-3), Rat(1)})}); // y - 3
    bad.recursions[0].push_back({{1}, UniPoly({Rat(1)})});
    bad.initial[{0}] = Rat(1);
    CHECK_THROWS_AS(evaluate(bad, {3}), capability_error);
}

TEST_CASE("check_solution examples") {
    // f(m,n) = 2^m 3^n against its shift system
    PRecursiveSystem sys;
    sys.dim = 2;
    sys.k = 1;
    sys.recursions.resize(2);
    sys.recursions[0].push_back({{0, 0}, UniPoly({Rat(1)})});
    sys.recursions[0].push_back({{1, 0}, UniPoly({Rat(-2)})});
    sys.recursions[1].push_back({{0, 0}, UniPoly({Rat(1)})});
    sys.recursions[1].push_back({{0, 1}, UniPoly({Rat(-3)})});
    auto f = [](const Vec& n) -> Rat { return rat_pow(Rat(2), n[0]) * rat_pow(Rat(3), n[1]); };
    CHECK(!check_solution(sys, f, 8).has_value());

    // same series against a factorial-style system: violation at small n
    PRecursiveSystem wrong;
    wrong.dim = 2;
    wrong.k = 1;
    wrong.recursions.resize(2);
    wrong.recursions[0].push_back({{0, 0}, UniPoly({Rat(1)})});
    wrong.recursions[0].push_back({{1, 0}, UniPoly({Rat(0), Rat(-1)})});
    wrong.recursions[1].push_back({{0, 0}, UniPoly({Rat(1)})});
    wrong.recursions[1].push_back({{0, 1}, UniPoly({Rat(-3)})});
    auto v = check_solution(wrong, f, 8);
    REQUIRE(v.has_value());
    CHECK(v->n == Vec{1, 1});
}

TEST_CASE("check_solution accepts a system derived from denominator blocks") {
    RationalExpr e = parse("1/(1-2*x1*x2) + 1/(1-3*x1*x2) + "
                           "x2/((1-3*x1*x2)^2*(1-5*x2)) + x1/((1-x1*x2)*(1-x1))");
    UnitProductRational r = normalize_sum(e.terms);
    PRecursiveSystem sys = derive_system(r);
    const long bound = 2 * sys.k + 6; // keep the checked region nonempty
    TruncatedSeries f = expand_rational(e.terms, bound);
    CHECK(!check_solution(sys, [&](const Vec& n) { return f.coeff(n); }, bound).has_value());
}

TEST_CASE("vanishing_propagate confirms binomial cutoff") {
    // f(n) = binom(4,n): n f(n) + (n-5) f(n-1) = 0, zero-free from c = 6
    PRecursiveSystem sys;
    sys.dim = 1;
    sys.k = 1;
    sys.recursions.resize(1);
    sys.recursions[0].push_back({{0}, UniPoly({Rat(0), Rat(1)})});  // y
    sys.recursions[0].push_back({{1}, UniPoly({Rat(-5), Rat(1)})}); // y - 5
    auto f = [](const Vec& n) { return binom(4, n[0]); };
    // the recursion holds
    CHECK(!check_solution(sys, f, 12).has_value());
    VanishVerdict v = vanishing_propagate(sys, f, 6, {6}, 14);
    CHECK(v.kind == VanishVerdict::confirmed);
    CHECK(v.region_lower == Vec{6});

    // all-zero source trivially propagates
    auto zero = [](const Vec&) { return Rat(0); };
    CHECK(vanishing_propagate(sys, zero, 6, {6}, 12).kind == VanishVerdict::confirmed);

    // constant nonzero source fails the hypothesis with a witness
    auto one = [](const Vec&) { return Rat(1); };
    VanishVerdict w = vanishing_propagate(sys, one, 6, {6}, 12);
    CHECK(w.kind == VanishVerdict::hypothesis_failed);
    REQUIRE(w.witness.has_value());
    CHECK(*w.witness == Vec{6});

    // a stepping polynomial with a zero beyond c is rejected
    CHECK_THROWS_AS(vanishing_propagate(sys, f, 4, {4}, 12), std::invalid_argument);
}

TEST_CASE("evaluate is consistent with the series for derived systems") {
    // stepping-order independence probed through a second evaluation route:
    // the oracle series itself
    RationalExpr e = parse("1/((1-2*x1)*(1-3*x2))");
    UnitProductRational r = normalize_sum(e.terms);
    PRecursiveSystem sys = derive_system(r);
    TruncatedSeries f = expand_rational(e.terms, 12);
    CHECK(!check_solution(sys, f).has_value());
}

TEST_CASE("precursive JSON round trip") {
    PRecursiveSystem sys = pascal_system();
    nlohmann::json j = precursive_to_json(sys);
    PRecursiveSystem back = precursive_from_json(j);
    CHECK(back.dim == sys.dim);
    CHECK(back.k == sys.k);
    for (long m = 0; m <= 5; ++m)
        for (long n = 0; n <= 5; ++n) CHECK(evaluate(back, {m, n}) == evaluate(sys, {m, n}));
}
