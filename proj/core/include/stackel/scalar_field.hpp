#pragma once

#include "stackel/chart.hpp"
#include "stackel/expression.hpp"
#include "stackel/rational_function.hpp"

#include <set>
#include <span>
#include <string>
#include <variant>

namespace stk {

enum class Backend { Exact, Numeric };

const char* backend_name(Backend b);

/// Outcome of the sampled confirmation run by variable_support() on the
/// numeric backend: each variable absent from the tree is perturbed at a few
/// random points and must not change the value.
struct SupportProbe {
    std::set<int> support;
    bool consistent = true;
    int flagged_variable = -1;
};

/// A coefficient function of the chart coordinates. Exact backend: a reduced
/// multivariate rational function (identities are decidable). Numeric
/// backend: an expression tree that may contain sin/cos/exp/sqrt.
/// Values are immutable; all operations return new fields.
class ScalarField {
public:
    ScalarField(Chart chart, RationalFunction value);
    ScalarField(Chart chart, ExprPtr tree);

    static ScalarField constant(const Chart& chart, const Rational& value, Backend backend);
    static ScalarField zero(const Chart& chart, Backend backend);
    static ScalarField one(const Chart& chart, Backend backend);
    static ScalarField coordinate(const Chart& chart, int index, Backend backend);

    Backend backend() const noexcept;
    const Chart& chart() const noexcept { return chart_; }

    const RationalFunction& rational() const; // exact backend only
    const ExprPtr& tree() const;              // numeric backend only

    ScalarField operator-() const;
    ScalarField operator+(const ScalarField& other) const;
    ScalarField operator-(const ScalarField& other) const;
    ScalarField operator*(const ScalarField& other) const;
    ScalarField operator/(const ScalarField& other) const;
    ScalarField pow(int exponent) const;
    ScalarField scaled(const Rational& factor) const;

    ScalarField partial(int var) const;

    double evaluate(std::span<const double> point) const;
    /// Exact rational evaluation; exact backend only.
    Rational evaluate_exact(std::span<const Rational> point) const;

    std::set<int> variable_support() const;
    SupportProbe variable_support_probe() const;

    /// Exact backend: decidable. Numeric backend: syntactic constant zero only
    /// (sampled zero tests live on MomentaPolynomial, where residuals belong).
    bool is_identically_zero() const;

    /// Structural equality. Exact fields are canonical, so this decides
    /// equality; numeric trees compare by shape.
    bool operator==(const ScalarField& other) const;

    /// Conversion of an exact field to an equivalent expression tree.
    ScalarField to_numeric() const;

    std::string to_string() const;

    /// Throws MixedOperandError unless charts and backends agree.
    void require_compatible(const ScalarField& other) const;

private:
    Chart chart_;
    std::variant<RationalFunction, ExprPtr> value_;
};

} // namespace stk
