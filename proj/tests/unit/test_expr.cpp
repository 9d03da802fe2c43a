#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "simplab/errors.hpp"
#include "simplab/expr.hpp"

using namespace simplab;

namespace {

Expr x() { return Expr::var("x"); }
Expr y() { return Expr::var("y"); }
Expr z() { return Expr::var("z"); }
Expr w() { return Expr::var("w"); }

Assignment xyzw(long xv, long yv, long wv, long zv) {
    return Assignment({{"x", xv}, {"y", yv}, {"w", wv}, {"z", zv}});
}

}  // namespace

TEST_SUITE("expr") {

TEST_CASE("parse builds the grammar's tree") {
    CHECK(parse("x*w + y*z") == Expr::add(Expr::mul(x(), w()), Expr::mul(y(), z())));
    CHECK(parse("x^2") == Expr::mul(x(), x()));
    CHECK(parse("x^1") == x());
    CHECK(parse("x^0") == Expr::constant(1));
    CHECK(parse("x^3") == Expr::mul({x(), x(), x()}));
    CHECK(parse("a - b") == Expr::add(Expr::var("a"), Expr::neg(Expr::var("b"))));
    CHECK(parse("-3") == Expr::constant(-3));
    CHECK(parse("-x") == Expr::neg(x()));
    CHECK(parse("--x") == Expr::neg(Expr::neg(x())));
    CHECK(parse("  ( x )  ") == x());
    CHECK(parse("1+2+3").children().size() == 3);
    CHECK(parse("123456789012345678901234567890").value() == Integer("123456789012345678901234567890"));
}

TEST_CASE("parse rejects malformed text with an offset") {
    CHECK_THROWS_AS(parse("x(y+x)"), ParseError);
    CHECK_THROWS_AS(parse(""), ParseError);
    CHECK_THROWS_AS(parse("x+"), ParseError);
    CHECK_THROWS_AS(parse("(x"), ParseError);
    CHECK_THROWS_AS(parse("x^17"), ParseError);
    CHECK_THROWS_AS(parse("x^y"), ParseError);
    CHECK_THROWS_AS(parse("?a"), ParseError);
    CHECK_THROWS_AS(parse("x $ y"), ParseError);
    try {
        parse("x+*y");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.offset() == 2);
        CHECK(std::string(e.what()).find("offset 2") != std::string::npos);
    }
    ParseOptions patterns;
    patterns.pattern_variables = true;
    CHECK(parse("?a + 1", patterns).child(0).name() == "?a");
}

TEST_CASE("render is fully parenthesized") {
    CHECK(render(Expr::add(Expr::mul(x(), w()), Expr::mul(y(), z()))) == "((x*w)+(y*z))");
    CHECK(render(Expr::constant(-3)) == "(-3)");
    CHECK(render(Expr::neg(x())) == "(-(x))");
    CHECK(render(Expr::constant(7)) == "7");
}

TEST_CASE("structural equality and hashing") {
    const Expr a = parse("x*(y+1)");
    const Expr b = parse("x * ( y + 1 )");
    CHECK(a == b);
    CHECK(a.hash() == b.hash());
    CHECK(ExprHash{}(a) == std::hash<Expr>{}(b));
    CHECK(a != parse("x*(1+y)"));
    CHECK(a.size() == 5);
    CHECK(a.depth() == 2);
    CHECK_THROWS(Expr::add(std::vector<Expr>{x()}));
    CHECK_THROWS(Expr::mul(std::vector<Expr>{}));
}

TEST_CASE("evaluate") {
    CHECK(evaluate(parse("(x+y)*(w+z)"), xyzw(1, 2, 3, 4)) == 21);
    CHECK(evaluate(parse("x*w+y*z+x*z+y*w"), xyzw(1, 2, 3, 4)) == 21);
    CHECK(evaluate(Expr::constant(5), Assignment()) == 5);
    CHECK(evaluate(parse("x-y"), xyzw(3, 10, 0, 0)) == -7);
    CHECK(evaluate(parse("x^16"), Assignment({{"x", 3}})) == Integer("43046721"));
    try {
        evaluate(parse("x+q"), xyzw(1, 1, 1, 1));
        FAIL("expected UnboundVariableError");
    } catch (const UnboundVariableError& e) {
        CHECK(e.name() == "q");
    }
}

TEST_CASE("evaluate modulo a prime") {
    const Integer p(kEquivalencePrime);
    Assignment a({{"x", Integer(kEquivalencePrime) - 1}}, p);
    CHECK(evaluate(parse("x+2"), a) == 1);
    CHECK(evaluate(parse("-x"), a) == 1);
    CHECK_THROWS_AS(Assignment({}, Integer(97)), std::invalid_argument);
    CHECK_THROWS_AS(Assignment({}, Integer(kEquivalencePrime) + 1), std::invalid_argument);
}

TEST_CASE("cost counts operations per occurrence") {
    const CostModel unit;
    CHECK(cost(parse("(x+y)*(w+z)"), unit) == 3);
    CHECK(cost(parse("x*w+y*z+x*z+y*w"), unit) == 7);
    CHECK(cost(x(), unit) == 0);
    CHECK(cost(x(), CostModel{5, 7, 3}) == 0);
    CHECK(cost(parse("-x"), unit) == 0);
    CHECK(cost(parse("-x"), CostModel{1, 1, 2}) == 2);
    CHECK(cost(parse("x+y+z"), CostModel{3, 1, 0}) == 6);
    CHECK(cost(parse("(x*y)+(x*y)"), unit) == 3);
    CHECK(dag_cost(parse("(x*y)+(x*y)"), unit) == 2);
    CHECK_THROWS_AS((CostModel{0, 1, 0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((CostModel{1, 0, 0}.validate()), std::invalid_argument);
}

TEST_CASE("probably_equivalent") {
    const auto r = probably_equivalent(parse("x*w+y*z+x*z+y*w"), parse("(x+y)*(w+z)"), 16, 3);
    CHECK(r.equivalent);
    CHECK(r.trials_run == 16);

    const auto d = probably_equivalent(parse("x+y"), parse("x*y"), 16, 3);
    REQUIRE_FALSE(d.equivalent);
    REQUIRE(d.witness.has_value());
    Assignment at(*d.witness, Integer(kEquivalencePrime));
    CHECK(evaluate(parse("x+y"), at) != evaluate(parse("x*y"), at));

    const Expr e = parse("x*(y+3)");
    CHECK(probably_equivalent(e, e, 1, 9).equivalent);
    CHECK(probably_equivalent(parse("x"), parse("y"), 4, 0).equivalent == false);
    CHECK(probably_equivalent(parse("x*0"), parse("0"), 4, 0).equivalent);
    CHECK_THROWS_AS(probably_equivalent(e, e, 0, 0), std::invalid_argument);
}

TEST_CASE("property: round trip on random trees") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 300; ++i) {
        const Expr e = testing::random_expr(rng, 6);
        CHECK(parse(render(e)) == e);
    }
}

TEST_CASE("property: evaluation is a homomorphism") {
    std::mt19937_64 rng(12);
    for (int i = 0; i < 200; ++i) {
        const Expr a = testing::random_expr(rng, 5);
        const Expr b = testing::random_expr(rng, 5);
        const Assignment s = xyzw(long(rng() % 41) - 20, long(rng() % 41) - 20, long(rng() % 41) - 20,
                                  long(rng() % 41) - 20);
        const Integer va = evaluate(a, s), vb = evaluate(b, s);
        CHECK(evaluate(Expr::add(a, b), s) == va + vb);
        CHECK(evaluate(Expr::mul(a, b), s) == va * vb);
        CHECK(evaluate(Expr::neg(a), s) == -va);
    }
}

TEST_CASE("property: replacing a subtree by a cheaper one never raises cost") {
    std::mt19937_64 rng(13);
    const CostModel unit;
    for (int i = 0; i < 200; ++i) {
        const Expr big = testing::random_expr(rng, 4);
        const Expr small = testing::random_expr(rng, 2);
        if (cost(small, unit) >= cost(big, unit)) continue;
        const Expr context = testing::random_expr(rng, 3);
        CHECK(cost(Expr::add(context, small), unit) <= cost(Expr::add(context, big), unit));
        CHECK(cost(Expr::mul(small, context), unit) <= cost(Expr::mul(big, context), unit));
        CHECK(cost(Expr::neg(small), unit) <= cost(Expr::neg(big), unit));
    }
}

TEST_CASE("property: equivalence is reflexive and symmetric") {
    std::mt19937_64 rng(14);
    for (int i = 0; i < 100; ++i) {
        const Expr a = testing::random_expr(rng, 4);
        const Expr b = testing::random_expr(rng, 4);
        CHECK(probably_equivalent(a, a, 4, i).equivalent);
        CHECK(probably_equivalent(a, b, 4, i).equivalent == probably_equivalent(b, a, 4, i).equivalent);
    }
}

TEST_CASE("variables and substitute") {
    const Expr e = parse("x*y + x + 3");
    CHECK(variables(e) == std::set<std::string>{"x", "y"});
    CHECK(substitute(e, {{"x", parse("z+1")}}) == parse("(z+1)*y + (z+1) + 3"));
}

}  // TEST_SUITE
