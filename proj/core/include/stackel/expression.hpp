#pragma once

#include "stackel/rational.hpp"

#include <memory>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace stk {

enum class UnaryFn { Sin, Cos, Exp, Sqrt };

const char* unary_fn_name(UnaryFn fn);

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Immutable expression tree over chart coordinates: the numeric scalar-field
/// backend. Factories fold constants and algebraic units so trees produced by
/// repeated arithmetic stay evaluable.
class Expr {
public:
    enum class Kind { Constant, Variable, Add, Sub, Mul, Div, Neg, Pow, Call };

    struct PrivateTag {};
    explicit Expr(PrivateTag) {}

    static ExprPtr constant(Rational value);
    static ExprPtr variable(int index);
    static ExprPtr add(ExprPtr a, ExprPtr b);
    static ExprPtr sub(ExprPtr a, ExprPtr b);
    static ExprPtr mul(ExprPtr a, ExprPtr b);
    static ExprPtr div(ExprPtr a, ExprPtr b);
    static ExprPtr neg(ExprPtr a);
    static ExprPtr pow(ExprPtr base, int exponent);
    static ExprPtr call(UnaryFn fn, ExprPtr arg);

    Kind kind() const noexcept { return kind_; }
    const Rational& value() const noexcept { return value_; }
    int variable_index() const noexcept { return var_; }
    int exponent() const noexcept { return exponent_; }
    UnaryFn fn() const noexcept { return fn_; }
    const ExprPtr& lhs() const noexcept { return lhs_; }
    const ExprPtr& rhs() const noexcept { return rhs_; }

    bool is_constant(const Rational& v) const {
        return kind_ == Kind::Constant && value_ == v;
    }

    double evaluate(std::span<const double> point) const;
    ExprPtr derivative(int var) const;
    void collect_support(std::set<int>& vars) const;

    std::string to_string(const std::vector<std::string>& names) const;

private:
    Kind kind_ = Kind::Constant;
    Rational value_;
    int var_ = 0;
    int exponent_ = 0;
    UnaryFn fn_ = UnaryFn::Sin;
    ExprPtr lhs_, rhs_;
};

} // namespace stk
