#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "stackel/errors.hpp"
#include "stackel/frame_diag.hpp"
#include "stackel/parser.hpp"
#include "stackel/stackel.hpp"
#include "stackel/system_file.hpp"

using namespace stk;

namespace {

const Chart chart2 = Chart::standard(2);

ScalarField exact2(const char* text) { return parse_expression(text, chart2, Backend::Exact); }

StackelMatrix from_strings(const Chart& chart, std::vector<const char*> entries) {
    std::vector<ScalarField> fields;
    for (const char* text : entries)
        fields.push_back(parse_expression(text, chart, Backend::Exact));
    return StackelMatrix(chart, FieldMatrix(chart, std::move(fields)));
}

// S * I = P, componentwise, as exact momenta-polynomial identities.
void check_round_trip(const StackelSystem& system) {
    const int n = system.dimension();
    std::vector<MomentaPolynomial> integrals = system.integral_polys();
    // integrals are listed Hamiltonian-row first; undo the reordering so
    // integral j matches row j of S^-1.
    for (int i = 0; i < n; ++i) {
        MomentaPolynomial lhs(system.metric.chart(), system.metric.backend());
        for (int j = 0; j < n; ++j) {
            int list_index = system.list_index_of_row(j);
            lhs = lhs + integrals[static_cast<std::size_t>(list_index)].scaled(
                            system.source.entries.at(i, j));
        }
        ExpVec e(static_cast<std::size_t>(n), 0);
        e[static_cast<std::size_t>(i)] = 2;
        MomentaPolynomial p_i_sq(system.metric.chart(), system.metric.backend());
        p_i_sq.add_term(e, ScalarField::one(system.metric.chart(), system.metric.backend()));
        CHECK((lhs - p_i_sq).zero_report().zero);
    }
}

} // namespace

TEST_CASE("validation accepts the shipped matrices") {
    CHECK(validate_stackel(example_flat_matrix()).valid());
    CHECK(validate_stackel(example_polar_matrix()).valid());
    CHECK(validate_stackel(example_liouville_matrix()).valid());
    CHECK(validate_stackel(example_polar_matrix()).summary() == "valid");
}

TEST_CASE("validation flags foreign variables, singularity and zero rows") {
    StackelMatrix bad = from_strings(chart2, {"1", "x2", "0", "1"});
    StackelDiagnostics diag = validate_stackel(bad);
    CHECK_FALSE(diag.valid());
    REQUIRE(diag.univariance_violations.size() == 1);
    CHECK(diag.univariance_violations[0] == std::pair<int, int>{0, 1});
    CHECK(diag.summary().find("UNIVARIANCE_VIOLATION(1,2)") != std::string::npos);

    StackelMatrix singular = from_strings(chart2, {"1", "1", "1", "1"});
    CHECK_FALSE(validate_stackel(singular).nonsingular);
    CHECK(validate_stackel(singular).summary().find("SINGULAR") != std::string::npos);

    StackelMatrix zero_row = from_strings(chart2, {"1", "0", "0", "1"});
    StackelDiagnostics warn = validate_stackel(zero_row);
    CHECK(warn.valid()); // warnings only
    CHECK(warn.first_row_zeros == std::vector<int>{1});
    CHECK(warn.summary().find("FIRST_ROW_ZERO(2)") != std::string::npos);
}

TEST_CASE("flat construction: hand-inverted S") {
    StackelSystem system = stackel_integrals(example_flat_matrix());
    // S^-1 = [[1,1],[0,1]]
    CHECK(system.metric.inverse_components().at(0, 0) == exact2("1"));
    CHECK(system.metric.inverse_components().at(1, 1) == exact2("1"));
    CHECK(system.integrals[1].components.at(0, 0).is_identically_zero());
    CHECK(system.integrals[1].components.at(1, 1) == exact2("1"));
    check_round_trip(system);
}

TEST_CASE("polar construction: hand-inverted S") {
    StackelSystem system = stackel_integrals(example_polar_matrix());
    // S^-1 = [[1, 1/x1^2],[0,1]]
    CHECK(system.metric.inverse_components().at(0, 0) == exact2("1"));
    CHECK(system.metric.inverse_components().at(1, 1) == exact2("1/x1^2"));
    CHECK(system.integrals[1].components.at(1, 1) == exact2("1"));
    check_round_trip(system);
}

TEST_CASE("Liouville construction: hand-inverted S") {
    StackelSystem system = stackel_integrals(example_liouville_matrix());
    // det S = x2 - x1; S^-1 = [[-1, 1],[-x2, x1]] / (x2 - x1).
    CHECK(system.metric.inverse_components().at(0, 0) == exact2("-1/(x2 - x1)"));
    CHECK(system.metric.inverse_components().at(1, 1) == exact2("1/(x2 - x1)"));
    CHECK(system.integrals[1].components.at(0, 0) == exact2("-x2/(x2 - x1)"));
    CHECK(system.integrals[1].components.at(1, 1) == exact2("x1/(x2 - x1)"));
    check_round_trip(system);
}

TEST_CASE("generation refuses unusable matrices") {
    CHECK_THROWS_AS(stackel_integrals(from_strings(chart2, {"1", "x2", "0", "1"})),
                    std::invalid_argument);
    CHECK_THROWS_AS(stackel_integrals(from_strings(chart2, {"1", "1", "1", "1"})), SingularError);
    // Zeros in the Hamiltonian row of S^-1 make the metric degenerate.
    CHECK_THROWS_AS(stackel_integrals(from_strings(chart2, {"1", "0", "0", "1"})), SingularError);
}

TEST_CASE("a different Hamiltonian row can be selected") {
    // Row 2 of S^-1 works for the polar matrix only after swapping; use the
    // Liouville matrix, whose inverse has no zero at all.
    StackelSystem system = stackel_integrals(example_liouville_matrix(), 1);
    CHECK(system.metric.inverse_components().at(0, 0) == exact2("-x2/(x2 - x1)"));
    check_round_trip(system);
}

TEST_CASE("generated integrals commute and are Killing") {
    for (const StackelMatrix& s :
         {example_flat_matrix(), example_polar_matrix(), example_liouville_matrix()}) {
        StackelSystem system = stackel_integrals(s);
        for (const QuadraticIntegral& k : system.integrals)
            CHECK(killing_residual(system.metric, k).zero_report().zero);
        std::vector<MomentaPolynomial> polys = system.integral_polys();
        auto matrix = involution_matrix(polys);
        for (const auto& row : matrix)
            for (const ZeroReport& entry : row) CHECK(entry.zero);
    }
}

TEST_CASE("involution matrix flags non-commuting pairs") {
    MomentaPolynomial p1sq(chart2, Backend::Exact);
    p1sq.add_term({2, 0}, exact2("1"));
    MomentaPolynomial g(chart2, Backend::Exact);
    g.add_term({0, 2}, exact2("x1"));
    std::vector<MomentaPolynomial> list{p1sq, g};
    auto matrix = involution_matrix(list);
    CHECK(matrix[0][0].zero);
    CHECK(matrix[1][1].zero);
    CHECK_FALSE(matrix[0][1].zero);
    CHECK(matrix[0][1].residual > 0.0);
}

TEST_CASE("seeded random matrices are valid and satisfy the construction") {
    SeededRng rng(42);
    for (int n : {2, 3}) {
        Chart chart = Chart::standard(n);
        for (int round = 0; round < 3; ++round) {
            StackelMatrix s = random_stackel_matrix(n, rng);
            StackelDiagnostics diag = validate_stackel(s);
            CHECK(diag.valid());
            CHECK(diag.first_row_zeros.empty());
            StackelSystem system = stackel_integrals(s);
            check_round_trip(system);
            for (const QuadraticIntegral& k : system.integrals)
                CHECK(killing_residual(system.metric, k).zero_report().zero);
        }
        (void)chart;
    }
}

TEST_CASE("numeric backend runs the construction with sampled checks") {
    StackelMatrix s = example_polar_matrix(Backend::Numeric);
    StackelDiagnostics diag = validate_stackel(s);
    CHECK(diag.valid());
    StackelSystem system = stackel_integrals(s);
    CHECK(system.metric.backend() == Backend::Numeric);
    for (const QuadraticIntegral& k : system.integrals) {
        ZeroReport z = killing_residual(system.metric, k).zero_report();
        CHECK(z.residual < 1e-9);
    }
    auto matrix = involution_matrix(system.integral_polys());
    for (const auto& row : matrix)
        for (const ZeroReport& entry : row) CHECK(entry.zero);
}

TEST_CASE("system files round-trip through serialization exactly") {
    SeededRng rng(2718);
    for (int n : {2, 3}) {
        for (int round = 0; round < 2; ++round) {
            StackelSystem system = stackel_integrals(random_stackel_matrix(n, rng));
            std::string json = system_description_to_json(describe_system(system));
            BuiltSystem rebuilt = build_system(parse_system_description(json));
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) {
                    CHECK(rebuilt.metric.inverse_components().at(i, j) ==
                          system.metric.inverse_components().at(i, j));
                    for (std::size_t a = 1; a < system.integrals.size(); ++a)
                        CHECK(rebuilt.integrals[a].components.at(i, j) ==
                              system.integrals[a].components.at(i, j));
                }
            }
            REQUIRE(rebuilt.stackel.has_value());
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    CHECK(rebuilt.stackel->entries.at(i, j) == system.source.entries.at(i, j));
        }
    }
}

TEST_CASE("generated systems witness full restriction rank at sampled points") {
    StackelSystem system = stackel_integrals(example_polar_matrix());
    std::vector<ScalarField> guard;
    for (const QuadraticIntegral& k : system.integrals)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) guard.push_back(k.components.at(i, j));
    SeededRng rng(5);
    for (int round = 0; round < 8; ++round) {
        std::vector<Rational> point = sample_rational_point(guard, 2, rng);
        Eigen::VectorXd x(2);
        x << to_double(point[0]), to_double(point[1]);
        Eigen::MatrixXd g_at = evaluate_to_matrix(system.metric.inverse_components(), x);
        std::vector<Eigen::MatrixXd> ks;
        for (const QuadraticIntegral& k : system.integrals)
            ks.push_back(evaluate_to_matrix(k.components, x));
        DiagOutcome outcome = simultaneous_diagonalize(x, g_at, ks, 1e-9, 11);
        REQUIRE(outcome.ok());
        CHECK(restriction_rank(*outcome.frame) == 2);
        EigenvalueGapReport gaps = distinct_eigenvalue_check(g_at, ks[1], 1e-9);
        CHECK(gaps.distinct);
    }
}
