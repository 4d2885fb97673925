#include "stackel/scalar_field.hpp"

#include "stackel/errors.hpp"

#include <cmath>
#include <random>

namespace stk {

const char* backend_name(Backend b) {
    return b == Backend::Exact ? "exact" : "numeric";
}

ScalarField::ScalarField(Chart chart, RationalFunction value)
    : chart_(std::move(chart)), value_(std::move(value)) {
    if (std::get<RationalFunction>(value_).nvars() != chart_.dimension())
        throw std::invalid_argument("rational function variable count does not match chart");
}

ScalarField::ScalarField(Chart chart, ExprPtr tree) : chart_(std::move(chart)), value_(std::move(tree)) {
    std::set<int> vars;
    std::get<ExprPtr>(value_)->collect_support(vars);
    for (int v : vars)
        if (v < 0 || v >= chart_.dimension())
            throw std::invalid_argument("expression references a variable outside the chart");
}

ScalarField ScalarField::constant(const Chart& chart, const Rational& value, Backend backend) {
    if (backend == Backend::Exact)
        return ScalarField(chart, RationalFunction::constant(chart.dimension(), value));
    return ScalarField(chart, Expr::constant(value));
}

ScalarField ScalarField::zero(const Chart& chart, Backend backend) {
    return constant(chart, Rational(0), backend);
}

ScalarField ScalarField::one(const Chart& chart, Backend backend) {
    return constant(chart, Rational(1), backend);
}

ScalarField ScalarField::coordinate(const Chart& chart, int index, Backend backend) {
    if (index < 0 || index >= chart.dimension()) throw std::out_of_range("coordinate index");
    if (backend == Backend::Exact)
        return ScalarField(chart, RationalFunction::variable(chart.dimension(), index));
    return ScalarField(chart, Expr::variable(index));
}

Backend ScalarField::backend() const noexcept {
    return std::holds_alternative<RationalFunction>(value_) ? Backend::Exact : Backend::Numeric;
}

const RationalFunction& ScalarField::rational() const {
    if (backend() != Backend::Exact) throw MixedOperandError("field is not exact-backed");
    return std::get<RationalFunction>(value_);
}

const ExprPtr& ScalarField::tree() const {
    if (backend() != Backend::Numeric) throw MixedOperandError("field is not numeric-backed");
    return std::get<ExprPtr>(value_);
}

void ScalarField::require_compatible(const ScalarField& other) const {
    if (chart_ != other.chart_) throw MixedOperandError("operands live on different charts");
    if (backend() != other.backend())
        throw MixedOperandError(std::string("backend mismatch: ") + backend_name(backend()) +
                                " vs " + backend_name(other.backend()));
}

ScalarField ScalarField::operator-() const {
    if (backend() == Backend::Exact) return ScalarField(chart_, -rational());
    return ScalarField(chart_, Expr::neg(tree()));
}

ScalarField ScalarField::operator+(const ScalarField& other) const {
    require_compatible(other);
    if (backend() == Backend::Exact) return ScalarField(chart_, rational() + other.rational());
    return ScalarField(chart_, Expr::add(tree(), other.tree()));
}

ScalarField ScalarField::operator-(const ScalarField& other) const {
    require_compatible(other);
    if (backend() == Backend::Exact) return ScalarField(chart_, rational() - other.rational());
    return ScalarField(chart_, Expr::sub(tree(), other.tree()));
}

ScalarField ScalarField::operator*(const ScalarField& other) const {
    require_compatible(other);
    if (backend() == Backend::Exact) return ScalarField(chart_, rational() * other.rational());
    return ScalarField(chart_, Expr::mul(tree(), other.tree()));
}

ScalarField ScalarField::operator/(const ScalarField& other) const {
    require_compatible(other);
    if (backend() == Backend::Exact) return ScalarField(chart_, rational() / other.rational());
    return ScalarField(chart_, Expr::div(tree(), other.tree()));
}

ScalarField ScalarField::pow(int exponent) const {
    if (backend() == Backend::Exact) return ScalarField(chart_, rational().pow(exponent));
    return ScalarField(chart_, Expr::pow(tree(), exponent));
}

ScalarField ScalarField::scaled(const Rational& factor) const {
    return *this * constant(chart_, factor, backend());
}

ScalarField ScalarField::partial(int var) const {
    if (var < 0 || var >= chart_.dimension()) throw std::out_of_range("coordinate index");
    if (backend() == Backend::Exact) return ScalarField(chart_, rational().derivative(var));
    return ScalarField(chart_, tree()->derivative(var));
}

double ScalarField::evaluate(std::span<const double> point) const {
    if (point.size() != static_cast<std::size_t>(chart_.dimension()))
        throw std::invalid_argument("point dimension");
    if (backend() == Backend::Exact) return rational().evaluate(point);
    return tree()->evaluate(point);
}

Rational ScalarField::evaluate_exact(std::span<const Rational> point) const {
    if (backend() != Backend::Exact)
        throw MixedOperandError("exact evaluation requires the exact backend");
    return rational().evaluate(point);
}

std::set<int> ScalarField::variable_support() const {
    return variable_support_probe().support;
}

SupportProbe ScalarField::variable_support_probe() const {
    SupportProbe probe;
    if (backend() == Backend::Exact) {
        probe.support = rational().support();
        return probe;
    }
    std::set<int> vars;
    tree()->collect_support(vars);
    probe.support = vars;
    // Confirm that variables absent from the tree really do not move the
    // value: perturb each one at 8 random points.
    std::mt19937_64 rng(0x5ca1ab1eULL);
    std::uniform_real_distribution<double> coord(-2.0, 2.0);
    const int n = chart_.dimension();
    for (int v = 0; v < n; ++v) {
        if (vars.count(v)) continue;
        for (int trial = 0; trial < 8; ++trial) {
            std::vector<double> point(static_cast<std::size_t>(n));
            for (auto& x : point) x = coord(rng);
            double base, moved;
            try {
                base = evaluate(point);
                point[static_cast<std::size_t>(v)] += 1.0 + coord(rng);
                moved = evaluate(point);
            } catch (const PoleError&) {
                continue;
            }
            if (std::abs(base - moved) > 1e-9 * (1.0 + std::abs(base))) {
                probe.consistent = false;
                probe.flagged_variable = v;
                return probe;
            }
        }
    }
    return probe;
}

bool ScalarField::is_identically_zero() const {
    if (backend() == Backend::Exact) return rational().is_zero();
    return tree()->is_constant(Rational(0));
}

namespace {

bool tree_equal(const ExprPtr& a, const ExprPtr& b) {
    if (a == b) return true;
    if (a->kind() != b->kind()) return false;
    switch (a->kind()) {
        case Expr::Kind::Constant: return a->value() == b->value();
        case Expr::Kind::Variable: return a->variable_index() == b->variable_index();
        case Expr::Kind::Pow:
            return a->exponent() == b->exponent() && tree_equal(a->lhs(), b->lhs());
        case Expr::Kind::Call:
            return a->fn() == b->fn() && tree_equal(a->lhs(), b->lhs());
        case Expr::Kind::Neg: return tree_equal(a->lhs(), b->lhs());
        default:
            return tree_equal(a->lhs(), b->lhs()) && tree_equal(a->rhs(), b->rhs());
    }
}

ExprPtr polynomial_to_tree(const Polynomial& p) {
    ExprPtr sum = Expr::constant(Rational(0));
    for (const auto& [e, c] : p.terms()) {
        ExprPtr term = Expr::constant(c);
        for (std::size_t i = 0; i < e.size(); ++i)
            if (e[i] > 0)
                term = Expr::mul(term, Expr::pow(Expr::variable(static_cast<int>(i)),
                                                 static_cast<int>(e[i])));
        sum = Expr::add(sum, term);
    }
    return sum;
}

} // namespace

bool ScalarField::operator==(const ScalarField& other) const {
    if (chart_ != other.chart_ || backend() != other.backend()) return false;
    if (backend() == Backend::Exact) return rational() == other.rational();
    return tree_equal(tree(), other.tree());
}

ScalarField ScalarField::to_numeric() const {
    if (backend() == Backend::Numeric) return *this;
    const RationalFunction& f = rational();
    ExprPtr num = polynomial_to_tree(f.numerator());
    if (f.denominator().is_constant() && f.denominator().constant_value() == 1)
        return ScalarField(chart_, num);
    return ScalarField(chart_, Expr::div(num, polynomial_to_tree(f.denominator())));
}

std::string ScalarField::to_string() const {
    if (backend() == Backend::Exact) return rational().to_string(chart_.names());
    return tree()->to_string(chart_.names());
}

} // namespace stk
