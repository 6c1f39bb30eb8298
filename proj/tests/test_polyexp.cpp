#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "unitrat/parser.hpp"
#include "unitrat/polyexp.hpp"
#include "unitrat/series.hpp"

using namespace unitrat;

namespace {

UnitProductRational upr(const std::string& text) {
    RationalExpr e = parse(text);
    REQUIRE(e.terms.size() == 1);
    return e.terms.front();
}

DecompTerm independent_term(const std::string& text) {
    UnitProductRational f = upr(text);
    if (!f.blocks().empty()) {
        std::vector<std::pair<Rat, Vec>> pairs;
        for (const Block& b : f.blocks()) pairs.emplace_back(b.c, b.e);
        REQUIRE(kernel_character_test(pairs).kind == KernelVerdict::independent);
    }
    return {f, true};
}

Polynomial constpoly(size_t s, const Rat& c) { return Polynomial(s, c); }

} // namespace

TEST_CASE("term_to_pieces examples") {
    // 1/(1-3xy)^2: one piece on the diagonal, B(m) = m+1, beta = 3
    PiecewisePolyExp p = term_to_pieces(independent_term("1/(1-3*x1*x2)^2"));
    REQUIRE(p.pieces.size() == 1);
    CHECK(p.pieces[0].set == SimpleLinearSet({0, 0}, {{1, 1}}));
    REQUIRE(p.pieces[0].formula.terms.size() == 1);
    const ExpPolyTerm& t = p.pieces[0].formula.terms[0];
    CHECK(t.beta == std::vector<Rat>{Rat(3)});
    CHECK(t.b.coeff({0}) == Rat(1));
    CHECK(t.b.coeff({1}) == Rat(1)); // m + 1

    // y/((1-3xy)^2(1-5y)): periods sorted [(0,1),(1,1)], so B = m2+1, beta=(5,3)
    PiecewisePolyExp q = term_to_pieces(independent_term("x2/((1-3*x1*x2)^2*(1-5*x2))"));
    REQUIRE(q.pieces.size() == 1);
    CHECK(q.pieces[0].set == SimpleLinearSet({0, 1}, {{0, 1}, {1, 1}}));
    const ExpPolyTerm& t2 = q.pieces[0].formula.terms[0];
    CHECK(t2.beta == std::vector<Rat>{Rat(5), Rat(3)});
    CHECK(t2.b.coeff({0, 0}) == Rat(1));
    CHECK(t2.b.coeff({0, 1}) == Rat(1)); // 1 + m2

    // constant: single piece {0} with constant formula
    PiecewisePolyExp c = term_to_pieces(independent_term("7"));
    REQUIRE(c.pieces.size() == 1);
    CHECK(c.pieces[0].set.rank() == 0);
    CHECK(c.pieces[0].formula.terms[0].b.coeff({}) == Rat(7));
}

TEST_CASE("term_to_pieces matches the oracle on all small points") {
    std::vector<std::string> cases{
        "1/(1-3*x1*x2)^2", "x2/((1-3*x1*x2)^2*(1-5*x2))", "x1/((1-x1*x2)*(1-x1))",
        "(1+x1)/((1-2*x1)*(1-3*x2))", "1/((1-2*x1*x2)^3)"};
    for (const std::string& s : cases) {
        DecompTerm t = independent_term(s);
        PiecewisePolyExp p = term_to_pieces(t);
        TruncatedSeries f = expand_rational(t.fraction, 12);
        // all oracle coefficients reproduced
        for (const auto& [n, c] : f.coeffs()) CHECK(evaluate_at(p, n) == c);
        // evaluation vanishes off the support
        for (const PolyExpPiece& piece : p.pieces)
            for (const Vec& n : enumerate_upto(piece.set, 12))
                CHECK(evaluate_at(p, n) == f.coeff(n));
    }
}

TEST_CASE("evaluate_at on the worked bivariate example pieces") {
    RationalExpr e = parse("1/(1-2*x1*x2) + 1/(1-3*x1*x2) + "
                           "x2/((1-3*x1*x2)^2*(1-5*x2)) + x1/((1-x1*x2)*(1-x1))");
    PiecewisePolyExp pile;
    for (const UnitProductRational& f : e.terms)
        for (PolyExpPiece& piece : term_to_pieces({f, true}).pieces)
            pile.pieces.push_back(std::move(piece));
    pile = canonicalize(pile);
    CHECK(evaluate_at(pile, {2, 2}) == Rat(13)); // 2^m + 3^m at m=2
    CHECK(evaluate_at(pile, {1, 3}) == Rat(30)); // (m1+1) 3^m1 5^m2 at (1,1)
    CHECK(evaluate_at(pile, {3, 1}) == Rat(1));  // m > n piece
    CHECK(evaluate_at(pile, {0, 0}) == Rat(2));
    // the full coefficient table against the oracle
    TruncatedSeries f = expand_rational(e.terms, 12);
    Vec n{0, 0};
    for (n[0] = 0; n[0] <= 6; ++n[0])
        for (n[1] = 0; n[1] <= 6; ++n[1]) CHECK(evaluate_at(pile, n) == f.coeff(n));
}

TEST_CASE("canonicalize merges and is idempotent") {
    SimpleLinearSet diag({0, 0}, {{1, 1}});
    PiecewisePolyExp p;
    p.pieces.push_back({diag, {1, {{constpoly(1, Rat(1)), {Rat(2)}}}}});
    p.pieces.push_back({diag, {1, {{constpoly(1, Rat(1)), {Rat(3)}}}}});
    PiecewisePolyExp c = canonicalize(p);
    REQUIRE(c.pieces.size() == 1);
    CHECK(c.pieces[0].formula.terms.size() == 2);

    // cancellation drops the piece
    PiecewisePolyExp q;
    q.pieces.push_back({diag, {1, {{constpoly(1, Rat(1)), {Rat(2)}}}}});
    q.pieces.push_back({diag, {1, {{constpoly(1, Rat(-1)), {Rat(2)}}}}});
    CHECK(canonicalize(q).pieces.empty());

    std::mt19937 rng(7);
    for (int i = 0; i < 10; ++i) {
        PiecewisePolyExp r;
        for (int j = 0; j < 3; ++j) {
            Vec off{(long)(rng() % 3), (long)(rng() % 3)};
            r.pieces.push_back(
                {SimpleLinearSet(off, {{1, 1}}),
                 {1, {{constpoly(1, Rat((long)(rng() % 5) - 2)), {Rat(2)}}}}});
        }
        PiecewisePolyExp once = canonicalize(r);
        PiecewisePolyExp twice = canonicalize(once);
        REQUIRE(once.pieces.size() == twice.pieces.size());
        for (size_t k = 0; k < once.pieces.size(); ++k) {
            CHECK(once.pieces[k].set == twice.pieces[k].set);
            CHECK(once.pieces[k].formula == twice.pieces[k].formula);
        }
    }
}

TEST_CASE("classify_structure examples") {
    GroupSpec g23({Rat(2), Rat(3)});

    // diagonal sum 1/(1-2xy) + 1/(1-3xy): bezivin(2)
    PiecewisePolyExp p;
    p.semantics = Semantics::partition;
    p.pieces.push_back({SimpleLinearSet({0, 0}, {{1, 1}}),
                        {1,
                         {{constpoly(1, Rat(1)), {Rat(2)}},
                          {constpoly(1, Rat(1)), {Rat(3)}}}}});
    StructureVerdict v = classify_structure(canonicalize(p), g23);
    CHECK(v.kind == StructureVerdict::bezivin);
    CHECK(v.l_max == 2);

    // 1/((1-2x)(1-3y)): polya
    PiecewisePolyExp q;
    q.semantics = Semantics::partition;
    q.pieces.push_back({SimpleLinearSet({0, 0}, {{0, 1}, {1, 0}}),
                        {2, {{constpoly(2, Rat(1)), {Rat(3), Rat(2)}}}}});
    CHECK(classify_structure(canonicalize(q), g23).kind == StructureVerdict::polya);

    // non-constant polynomial: not_bezivin with a witness
    PiecewisePolyExp r;
    r.semantics = Semantics::partition;
    Polynomial m_plus_1(1, Rat(1));
    m_plus_1.add_term({1}, Rat(1));
    r.pieces.push_back({SimpleLinearSet({0, 0}, {{1, 1}}), {1, {{m_plus_1, {Rat(3)}}}}});
    StructureVerdict w = classify_structure(canonicalize(r), g23);
    CHECK(w.kind == StructureVerdict::not_bezivin);
    REQUIRE(w.witness_piece.has_value());
    CHECK(*w.witness_piece == 0);

    // constants outside the group
    PiecewisePolyExp s;
    s.semantics = Semantics::partition;
    s.pieces.push_back(
        {SimpleLinearSet({0}, {{1}}), {1, {{constpoly(1, Rat(1)), {Rat(5)}}}}});
    StructureVerdict x = classify_structure(canonicalize(s), g23);
    CHECK(x.kind == StructureVerdict::constants_outside_group);
    CHECK(*x.witness_constant == Rat(5));
}

TEST_CASE("lift_global examples") {
    // diagonal piece with beta = 6: A = 1, alpha = (6,1)
    PolyExpPiece diag{SimpleLinearSet({0, 0}, {{1, 1}}),
                      {1, {{constpoly(1, Rat(1)), {Rat(6)}}}}};
    GlobalLift l = lift_global(diag);
    REQUIRE(l.form.has_value());
    REQUIRE(l.form->terms.size() == 1);
    CHECK(l.form->terms[0].first.coeff({0, 0}) == Rat(1));
    // either 6^{n1} 1^{n2} or 1^{n1} 6^{n2}; both agree on the diagonal
    const auto& alpha = l.form->terms[0].second;
    const bool first = alpha == std::vector<Rat>{Rat(6), Rat(1)};
    const bool second = alpha == std::vector<Rat>{Rat(1), Rat(6)};
    CHECK((first || second));

    // 2N piece from 1/(1-2x^2): absent, irrational root
    PolyExpPiece even{SimpleLinearSet({0}, {{2}}), {1, {{constpoly(1, Rat(1)), {Rat(2)}}}}};
    GlobalLift l2 = lift_global(even);
    CHECK(!l2.form.has_value());
    CHECK(l2.reason.find("irrational root") != std::string::npos);

    // constant piece
    PolyExpPiece point{SimpleLinearSet({1, 2}, {}), {0, {{constpoly(0, Rat(7)), {}}}}};
    GlobalLift l3 = lift_global(point);
    REQUIRE(l3.form.has_value());
    CHECK(l3.form->terms[0].second == std::vector<Rat>{Rat(1), Rat(1)});
}

TEST_CASE("piece_to_rational examples and round trip") {
    // piece (1,1)N, B = m+1, beta = 3  ->  1/(1-3xy)^2
    Polynomial m_plus_1(1, Rat(1));
    m_plus_1.add_term({1}, Rat(1));
    PolyExpPiece p{SimpleLinearSet({0, 0}, {{1, 1}}), {1, {{m_plus_1, {Rat(3)}}}}};
    UnitProductRational r = piece_to_rational(p);
    CHECK(r.numerator() == Polynomial(2, Rat(1)));
    REQUIRE(r.blocks().size() == 1);
    CHECK(r.blocks()[0] == Block{Rat(3), {1, 1}, 2});

    // indicator-style constant piece on (1,2)+(1,0)N -> x y^2/(1-x)
    PolyExpPiece ind{SimpleLinearSet({1, 2}, {{1, 0}}),
                     {1, {{constpoly(1, Rat(1)), {Rat(1)}}}}};
    UnitProductRational r2 = piece_to_rational(ind);
    CHECK(r2.numerator() == Polynomial::monomial({1, 2}, Rat(1)));
    REQUIRE(r2.blocks().size() == 1);
    CHECK(r2.blocks()[0] == Block{Rat(1), {1, 0}, 1});

    // B(m) = m: 1/(1-bu)^2 - 1/(1-bu) after the binomial basis change
    Polynomial just_m(1);
    just_m.add_term({1}, Rat(1));
    PolyExpPiece pm{SimpleLinearSet({0}, {{1}}), {1, {{just_m, {Rat(2)}}}}};
    UnitProductRational r3 = piece_to_rational(pm);
    TruncatedSeries f3 = expand_rational(r3, 10);
    for (long n = 0; n <= 10; ++n) CHECK(f3.coeff({n}) == Rat(n) * rat_pow(Rat(2), n));

    // round trip: term_to_pieces o piece_to_rational is the identity
    for (const std::string& s :
         {std::string("1/(1-3*x1*x2)^2"), std::string("x2/((1-3*x1*x2)^2*(1-5*x2))")}) {
        RationalExpr e = parse(s);
        PiecewisePolyExp pieces = term_to_pieces({e.terms[0], true});
        REQUIRE(pieces.pieces.size() == 1);
        UnitProductRational back = piece_to_rational(pieces.pieces[0]);
        CHECK(back.numerator() == e.terms[0].numerator());
        CHECK(back.blocks() == e.terms[0].blocks());
    }
}

TEST_CASE("uniqueness of canonical exponential polynomials on a box") {
    // two canonical formulas of the same arity agreeing on the box must be
    // structurally identical; random distinct pairs must disagree inside it
    std::mt19937 rng(13);
    std::vector<Rat> bases{Rat(1), Rat(2), Rat(3), Rat(-2), Rat(1, 2)};
    for (int trial = 0; trial < 60; ++trial) {
        const size_t s = 1 + rng() % 2;
        auto random_formula = [&]() {
            ExponentialPolynomial f{s, {}};
            size_t terms = 1 + rng() % 2;
            for (size_t t = 0; t < terms; ++t) {
                std::vector<Rat> beta(s);
                for (auto& b : beta) b = bases[rng() % bases.size()];
                Polynomial poly(s);
                for (int mono = 0; mono < 2; ++mono) {
                    Vec e(s);
                    for (auto& x : e) x = rng() % 2;
                    poly.add_term(e, Rat((long)(rng() % 5) - 2));
                }
                if (!poly.is_zero()) f.terms.push_back({poly, beta});
            }
            return f;
        };
        ExponentialPolynomial a = random_formula(), b = random_formula();
        // canonical form via a throwaway piece
        auto canon = [&](ExponentialPolynomial f) {
            PiecewisePolyExp p;
            std::vector<Vec> periods;
            for (size_t i = 0; i < s; ++i) {
                Vec unit(s, 0);
                unit[i] = 1;
                periods.push_back(unit);
            }
            p.pieces.push_back({SimpleLinearSet(Vec(s, 0), periods), std::move(f)});
            PiecewisePolyExp c = canonicalize(p);
            return c.pieces.empty() ? ExponentialPolynomial{s, {}} : c.pieces[0].formula;
        };
        ExponentialPolynomial ca = canon(a), cb = canon(b);
        long maxdeg = 0;
        for (const auto& f : {ca, cb})
            for (const ExpPolyTerm& t : f.terms) maxdeg = std::max(maxdeg, t.b.total_deg());
        const long box = 1 + maxdeg + (long)(ca.terms.size() + cb.terms.size());
        bool agree = true;
        Vec m(s, 0);
        while (agree) {
            if (ca.evaluate(m) != cb.evaluate(m)) agree = false;
            size_t c = 0;
            while (c < s && ++m[c] > box) m[c++] = 0;
            if (c == s) break;
        }
        if (agree) {
            CHECK(ca == cb);
        } else {
            CHECK(!(ca == cb));
        }
    }
}

TEST_CASE("partition upgrade: equal-or-disjoint and containment refinement") {
    // 1/(1-x) + 1/(1-x^2): N and 2N pieces, diagonal containment index 2
    PiecewisePolyExp p;
    p.pieces.push_back(
        {SimpleLinearSet({0}, {{1}}), {1, {{constpoly(1, Rat(1)), {Rat(1)}}}}});
    p.pieces.push_back(
        {SimpleLinearSet({0}, {{2}}), {1, {{constpoly(1, Rat(1)), {Rat(1)}}}}});
    PartitionUpgrade up = partition_upgrade(p);
    REQUIRE(up.result.has_value());
    CHECK(up.result->semantics == Semantics::partition);
    // values: 2 on even, 1 on odd
    RationalExpr e = parse("1/(1-x1) + 1/(1-x1^2)");
    TruncatedSeries f = expand_rational(e.terms, 12);
    for (long n = 0; n <= 12; ++n) CHECK(evaluate_at(*up.result, {n}) == f.coeff({n}));
}

TEST_CASE("partition upgrade: translate family over a common cone") {
    // pieces (0,0)+N^2, (1,0)+N^2, (0,1)+N^2 with distinct bases
    PiecewisePolyExp p;
    auto unitset = [&](Vec off) {
        return SimpleLinearSet(std::move(off), {{0, 1}, {1, 0}});
    };
    p.pieces.push_back({unitset({0, 0}), {2, {{constpoly(2, Rat(1)), {Rat(1), Rat(2)}}}}});
    p.pieces.push_back({unitset({1, 0}), {2, {{constpoly(2, Rat(1)), {Rat(1), Rat(3)}}}}});
    p.pieces.push_back({unitset({0, 1}), {2, {{constpoly(2, Rat(2)), {Rat(5), Rat(1)}}}}});
    PartitionUpgrade up = partition_upgrade(p);
    REQUIRE(up.result.has_value());
    // compare against direct additive evaluation
    Vec n{0, 0};
    for (n[0] = 0; n[0] <= 8; ++n[0])
        for (n[1] = 0; n[1] <= 8; ++n[1]) CHECK(evaluate_at(*up.result, n) == evaluate_at(p, n));
    // disjointness of the partition
    for (size_t i = 0; i < up.result->pieces.size(); ++i)
        for (size_t j = i + 1; j < up.result->pieces.size(); ++j)
            CHECK(intersect_simple(up.result->pieces[i].set, up.result->pieces[j].set).empty());
}
