#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "stackel/errors.hpp"
#include "stackel/parser.hpp"
#include "stackel/tensor_field.hpp"

using namespace stk;

namespace {

const Chart chart2 = Chart::standard(2);

FieldMatrix matrix2(const char* a11, const char* a12, const char* a21, const char* a22,
                    Backend backend = Backend::Exact) {
    std::vector<ScalarField> entries{
        parse_expression(a11, chart2, backend), parse_expression(a12, chart2, backend),
        parse_expression(a21, chart2, backend), parse_expression(a22, chart2, backend)};
    return FieldMatrix(chart2, std::move(entries));
}

Metric euclidean() { return Metric(chart2, matrix2("1", "0", "0", "1")); }
Metric polar() { return Metric(chart2, matrix2("1", "0", "0", "1/x1^2")); }

MomentaPolynomial mp(std::initializer_list<std::pair<ExpVec, const char*>> terms) {
    MomentaPolynomial out(chart2, Backend::Exact);
    for (const auto& [e, coeff] : terms)
        out.add_term(e, parse_expression(coeff, chart2, Backend::Exact));
    return out;
}

} // namespace

TEST_CASE("quadratic forms as momenta polynomials") {
    QuadraticIntegral flat(chart2, matrix2("1", "0", "0", "1"), "K");
    CHECK((quadratic_to_poly(flat) - mp({{{2, 0}, "1"}, {{0, 2}, "1"}})).zero_report().zero);

    QuadraticIntegral polar2h(chart2, matrix2("1", "0", "0", "1/x1^2"), "K");
    CHECK((quadratic_to_poly(polar2h) - mp({{{2, 0}, "1"}, {{0, 2}, "1/x1^2"}}))
              .zero_report()
              .zero);

    QuadraticIntegral cross(chart2, matrix2("0", "1", "1", "0"), "K");
    CHECK((quadratic_to_poly(cross) - mp({{{1, 1}, "2"}})).zero_report().zero);
}

TEST_CASE("killing residual vanishes exactly for Killing tensors") {
    QuadraticIntegral k1(chart2, matrix2("1", "0", "0", "0"), "K");
    CHECK(killing_residual(euclidean(), k1).zero_report().zero);

    QuadraticIntegral angular(chart2, matrix2("0", "0", "0", "1"), "p_theta^2");
    CHECK(killing_residual(polar(), angular).zero_report().zero);
}

TEST_CASE("killing residual of a non-Killing tensor, frozen expansion") {
    // {p1^2 + p2^2/x1^2, x2 p1^2} expands term by term to
    // 2 p1^2 p2 / x1^2 + 4 x2 p1 p2^2 / x1^3.
    QuadraticIntegral bad(chart2, matrix2("x2", "0", "0", "0"), "K");
    MomentaPolynomial residual = killing_residual(polar(), bad);
    MomentaPolynomial expected = mp({{{2, 1}, "2/x1^2"}, {{1, 2}, "4*x2/x1^3"}});
    CHECK((residual - expected).zero_report().zero);
    CHECK_FALSE(residual.zero_report().zero);
}

TEST_CASE("index lowering against the metric") {
    Metric g = polar();
    // K = g gives the identity (1,1)-tensor.
    QuadraticIntegral kg(chart2, g.inverse_components(), "K");
    FieldMatrix id = one_one(kg, g);
    CHECK(id.at(0, 0) == ScalarField::one(chart2, Backend::Exact));
    CHECK(id.at(1, 1) == ScalarField::one(chart2, Backend::Exact));
    CHECK(id.at(0, 1).is_identically_zero());
    CHECK(id.at(1, 0).is_identically_zero());

    // Polar angular integral: lowering multiplies by g_22 = x1^2.
    QuadraticIntegral angular(chart2, matrix2("0", "0", "0", "1"), "K");
    FieldMatrix l = one_one(angular, g);
    CHECK(l.at(0, 0).is_identically_zero());
    CHECK(l.at(1, 1) == parse_expression("x1^2", chart2, Backend::Exact));

    // Euclidean lowering is the identity map on components.
    QuadraticIntegral sym(chart2, matrix2("2", "1", "1", "2"), "K");
    FieldMatrix same = one_one(sym, euclidean());
    CHECK(same.at(0, 0) == parse_expression("2", chart2, Backend::Exact));
    CHECK(same.at(0, 1) == parse_expression("1", chart2, Backend::Exact));
}

TEST_CASE("liouville one-one tensor carries the coordinates as eigenvalues") {
    // g = diag(-1, 1)/(x2 - x1), K = diag(-x2, x1)/(x2 - x1); lowering gives
    // K^i_j = diag(x2, x1) by a 2x2 inverse and product done by hand.
    Metric g(chart2, matrix2("-1/(x2 - x1)", "0", "0", "1/(x2 - x1)"));
    QuadraticIntegral k(chart2, matrix2("-x2/(x2 - x1)", "0", "0", "x1/(x2 - x1)"), "I2");
    FieldMatrix l = one_one(k, g);
    CHECK(l.at(0, 0) == parse_expression("x2", chart2, Backend::Exact));
    CHECK(l.at(1, 1) == parse_expression("x1", chart2, Backend::Exact));
    CHECK(l.at(0, 1).is_identically_zero());
}

TEST_CASE("generic combinations") {
    QuadraticIntegral angular(chart2, matrix2("0", "0", "0", "1"), "I2");
    std::vector<QuadraticIntegral> ks{angular};

    QuadraticIntegral same = generic_combination(ks, CombinationSpec({Rational(1)}));
    CHECK(same.components.at(1, 1) == ScalarField::one(chart2, Backend::Exact));

    QuadraticIntegral scaled = generic_combination(ks, CombinationSpec({Rational(3)}));
    CHECK(scaled.components.at(1, 1) == parse_expression("3", chart2, Backend::Exact));
    CHECK(scaled.components.at(0, 0).is_identically_zero());

    QuadraticIntegral other(chart2, matrix2("1", "0", "0", "0"), "I3");
    std::vector<QuadraticIntegral> both{angular, other};
    QuadraticIntegral last =
        generic_combination(both, CombinationSpec({Rational(0), Rational(1)}));
    CHECK(last.components.at(0, 0) == ScalarField::one(chart2, Backend::Exact));
    CHECK(last.components.at(1, 1).is_identically_zero());

    CHECK_THROWS_AS(generic_combination(both, CombinationSpec({Rational(1)})),
                    std::invalid_argument);
    CHECK_THROWS_AS(CombinationSpec({Rational(0), Rational(0)}), std::invalid_argument);
}

TEST_CASE("metric commutes with itself for several metrics") {
    for (const Metric& g : {euclidean(), polar(),
                            Metric(chart2, matrix2("1/(x1-x2)", "0", "0", "-1/(x1-x2)"))}) {
        QuadraticIntegral kg(g.chart(), g.inverse_components(), "2H");
        CHECK(killing_residual(g, kg).zero_report().zero);
    }
}

TEST_CASE("killing residual is linear in the integral") {
    Metric g = polar();
    QuadraticIntegral ka(chart2, matrix2("x2", "0", "0", "0"), "A");
    QuadraticIntegral kb(chart2, matrix2("0", "x1", "x1", "1"), "B");
    Rational a = rational(3, 2), b = rational(-2, 1);
    QuadraticIntegral combined(
        chart2, ka.components.scaled(a) + kb.components.scaled(b), "aA+bB");
    MomentaPolynomial lhs = killing_residual(g, combined);
    MomentaPolynomial rhs =
        killing_residual(g, ka).scaled(a) + killing_residual(g, kb).scaled(b);
    CHECK((lhs - rhs).zero_report().zero);
}

TEST_CASE("lowered one-one tensor is self-adjoint") {
    Metric g = polar();
    QuadraticIntegral k(chart2, matrix2("x2", "1", "1", "x1"), "K");
    FieldMatrix l = one_one(k, g);
    FieldMatrix s = g.lowered() * l; // g_low K g_low, must be symmetric
    CHECK(s.is_symmetric());
}

TEST_CASE("degenerate metrics are rejected") {
    CHECK_THROWS_AS(Metric(chart2, matrix2("x1", "x1", "x1", "x1")), SingularError);
    CHECK_THROWS_AS(Metric(chart2, matrix2("1", "x1", "0", "1")), std::invalid_argument);
}
