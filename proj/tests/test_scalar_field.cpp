#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "stackel/errors.hpp"
#include "stackel/parser.hpp"
#include "stackel/sampling.hpp"
#include "stackel/scalar_field.hpp"

#include <cmath>

using namespace stk;

namespace {

const Chart chart2 = Chart::standard(2);

ScalarField exact(const std::string& text) {
    return parse_expression(text, chart2, Backend::Exact);
}

ScalarField numeric(const std::string& text) {
    return parse_expression(text, chart2, Backend::Numeric);
}

} // namespace

TEST_CASE("parser builds exact rational functions") {
    ScalarField f = exact("x1^2 + 1/2");
    Polynomial expected = Polynomial::variable(2, 0).pow(2) +
                          Polynomial::constant(2, rational(1, 2));
    CHECK(f.rational() == RationalFunction::from_polynomial(expected));

    ScalarField g = exact("1/x1^2");
    CHECK(g.rational().numerator() == Polynomial::constant(2, Rational(1)));
    CHECK(g.rational().denominator() == Polynomial::variable(2, 0).pow(2));
}

TEST_CASE("parser rejects transcendentals under the exact backend") {
    CHECK_THROWS_WITH_AS(exact("sin(x1)"),
                         "transcendental under EXACT: 'sin' (at position 0)", ParseError);
    CHECK_NOTHROW(numeric("sin(x1)"));
}

TEST_CASE("parser reports positions for syntax errors and unknown names") {
    try {
        exact("x1 + + 2");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.position() == 5);
    }
    try {
        exact("x1 + y");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.position() == 5);
        CHECK(std::string(e.what()).find("unknown identifier") != std::string::npos);
    }
    CHECK_THROWS_AS(exact("x1 + (x2"), ParseError);
    CHECK_THROWS_AS(exact("x1^x2"), ParseError);
}

TEST_CASE("grammar corners: decimals, leading minus, negative exponents") {
    CHECK(exact("0.25").rational().constant_value() == rational(1, 4));
    CHECK(exact("-x1").evaluate_exact(std::vector<Rational>{Rational(3), Rational(0)}) ==
          Rational(-3));
    ScalarField f = exact("x1^-2");
    CHECK(f == exact("1/x1^2"));
}

TEST_CASE("evaluation is exact on rational points and flags poles") {
    ScalarField f = exact("x1^2 + 1/2");
    std::vector<Rational> p{Rational(2), Rational(0)};
    CHECK(f.evaluate_exact(p) == rational(9, 2));

    ScalarField g = exact("1/x1^2");
    std::vector<Rational> one{Rational(1), Rational(0)};
    CHECK(g.evaluate_exact(one) == Rational(1));

    std::vector<Rational> origin{Rational(0), Rational(0)};
    CHECK_THROWS_AS(g.evaluate_exact(origin), PoleError);
    std::vector<double> dorigin{0.0, 0.0};
    CHECK_THROWS_AS(g.evaluate(dorigin), PoleError);
}

TEST_CASE("partial derivatives follow the quotient rule exactly") {
    CHECK(exact("x1^2").partial(0) == exact("2*x1"));
    ScalarField g = exact("1/x1^2");
    CHECK(g.partial(0) == exact("-2/x1^3"));
    CHECK(g.partial(1).is_identically_zero());
}

TEST_CASE("variable support of reduced representations") {
    CHECK(exact("1/x1^2").variable_support() == std::set<int>{0});
    CHECK(exact("x2 - x1").variable_support() == std::set<int>{0, 1});
    CHECK(exact("1").variable_support() == std::set<int>{});
    // Support is read off the reduced form, so cancelling terms drop out.
    CHECK(exact("x2 + x1 - x1").variable_support() == std::set<int>{1});
}

TEST_CASE("numeric support probe confirms absent variables") {
    SupportProbe probe = numeric("sin(x1)*x1").variable_support_probe();
    CHECK(probe.support == std::set<int>{0});
    CHECK(probe.consistent);
}

TEST_CASE("mixed partials commute") {
    ScalarField f = exact("x1^3*x2 + x2^2/x1");
    CHECK(f.partial(0).partial(1) == f.partial(1).partial(0));

    ScalarField g = numeric("sin(x1*x2) + exp(x2)/x1");
    ScalarField a = g.partial(0).partial(1);
    ScalarField b = g.partial(1).partial(0);
    SeededRng rng(17);
    std::vector<ScalarField> fields{a, b};
    for (int k = 0; k < 16; ++k) {
        std::vector<double> p = sample_point(fields, 2, rng);
        double va = a.evaluate(p);
        double vb = b.evaluate(p);
        CHECK(std::abs(va - vb) <= 1e-9 * (1.0 + std::abs(va)));
    }
}

TEST_CASE("backends agree on shared expressions") {
    const char* cases[] = {"x1^2 + 1/2", "1/x1^2", "(x1 + x2)^3/(1 + x1^2)", "2*x1*x2 - x2^2"};
    SeededRng rng(23);
    for (const char* text : cases) {
        ScalarField e = exact(text);
        ScalarField m = numeric(text);
        std::vector<ScalarField> fields{e};
        for (int k = 0; k < 16; ++k) {
            std::vector<double> p = sample_point(fields, 2, rng);
            double ve = e.evaluate(p);
            double vm = m.evaluate(p);
            CHECK(std::abs(ve - vm) <= 1e-12 * (1.0 + std::abs(ve)));
        }
    }
}

TEST_CASE("exact arithmetic stays canonical") {
    ScalarField f = exact("(x1 + x2)^2/(x1 - x2)");
    CHECK((f - f).is_identically_zero());

    // (x1^2 - 1)/(x1 - 1) reduces to x1 + 1.
    RationalFunction reduced(
        Polynomial::variable(2, 0).pow(2) - Polynomial::constant(2, Rational(1)),
        Polynomial::variable(2, 0) - Polynomial::constant(2, Rational(1)));
    CHECK(reduced == exact("x1 + 1").rational());

    ScalarField a = exact("(x1 + 1)/(x1 - 1)");
    ScalarField b = exact("(x1 - 1)/(x1 + 1)");
    CHECK((a * b) == ScalarField::one(chart2, Backend::Exact));
}

TEST_CASE("polynomial gcd properties on seeded products") {
    SeededRng rng(99);
    auto random_poly = [&](int nvars) {
        Polynomial p(nvars);
        int terms = static_cast<int>(rng.integer(1, 3));
        for (int t = 0; t < terms; ++t) {
            ExpVec e(static_cast<std::size_t>(nvars), 0);
            for (auto& k : e) k = static_cast<std::uint32_t>(rng.integer(0, 2));
            p = p + Polynomial::monomial(nvars, e, rng.rational(3, 2, true));
        }
        return p;
    };
    for (int round = 0; round < 20; ++round) {
        Polynomial g = random_poly(2);
        Polynomial a = random_poly(2);
        Polynomial b = random_poly(2);
        if (g.is_zero() || a.is_zero() || b.is_zero()) continue;
        Polynomial d = Polynomial::gcd(g * a, g * b);
        // g divides the gcd of (g a, g b).
        CHECK_NOTHROW(Polynomial::divide_exact(d, g.primitive_part()));
        // the gcd divides both products.
        CHECK_NOTHROW(Polynomial::divide_exact((g * a).primitive_part(), d));
        CHECK_NOTHROW(Polynomial::divide_exact((g * b).primitive_part(), d));
    }
}

TEST_CASE("backend mixing is rejected") {
    CHECK_THROWS_AS(exact("x1") + numeric("x1"), MixedOperandError);
    Chart other = Chart::standard(3);
    ScalarField f3 = parse_expression("x1", other, Backend::Exact);
    CHECK_THROWS_AS(exact("x1") + f3, MixedOperandError);
}
