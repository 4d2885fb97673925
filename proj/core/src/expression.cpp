#include "stackel/expression.hpp"

#include "stackel/errors.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace stk {

const char* unary_fn_name(UnaryFn fn) {
    switch (fn) {
        case UnaryFn::Sin: return "sin";
        case UnaryFn::Cos: return "cos";
        case UnaryFn::Exp: return "exp";
        case UnaryFn::Sqrt: return "sqrt";
    }
    return "?";
}

namespace {

std::shared_ptr<Expr> blank() {
    return std::shared_ptr<Expr>(new Expr(Expr::PrivateTag{}));
}

bool is_const(const ExprPtr& e) { return e->kind() == Expr::Kind::Constant; }

} // namespace

ExprPtr Expr::constant(Rational value) {
    auto node = blank();
    node->kind_ = Kind::Constant;
    node->value_ = std::move(value);
    return node;
}

ExprPtr Expr::variable(int index) {
    auto node = blank();
    node->kind_ = Kind::Variable;
    node->var_ = index;
    return node;
}

ExprPtr Expr::add(ExprPtr a, ExprPtr b) {
    if (is_const(a) && is_const(b)) return constant(a->value() + b->value());
    if (a->is_constant(Rational(0))) return b;
    if (b->is_constant(Rational(0))) return a;
    auto node = blank();
    node->kind_ = Kind::Add;
    node->lhs_ = std::move(a);
    node->rhs_ = std::move(b);
    return node;
}

ExprPtr Expr::sub(ExprPtr a, ExprPtr b) {
    if (is_const(a) && is_const(b)) return constant(a->value() - b->value());
    if (b->is_constant(Rational(0))) return a;
    if (a->is_constant(Rational(0))) return neg(std::move(b));
    auto node = blank();
    node->kind_ = Kind::Sub;
    node->lhs_ = std::move(a);
    node->rhs_ = std::move(b);
    return node;
}

ExprPtr Expr::mul(ExprPtr a, ExprPtr b) {
    if (is_const(a) && is_const(b)) return constant(a->value() * b->value());
    if (a->is_constant(Rational(0)) || b->is_constant(Rational(0))) return constant(Rational(0));
    if (a->is_constant(Rational(1))) return b;
    if (b->is_constant(Rational(1))) return a;
    auto node = blank();
    node->kind_ = Kind::Mul;
    node->lhs_ = std::move(a);
    node->rhs_ = std::move(b);
    return node;
}

ExprPtr Expr::div(ExprPtr a, ExprPtr b) {
    if (is_const(a) && is_const(b) && b->value() != 0) return constant(a->value() / b->value());
    if (a->is_constant(Rational(0)) && !(is_const(b) && b->value() == 0)) return constant(Rational(0));
    if (b->is_constant(Rational(1))) return a;
    auto node = blank();
    node->kind_ = Kind::Div;
    node->lhs_ = std::move(a);
    node->rhs_ = std::move(b);
    return node;
}

ExprPtr Expr::neg(ExprPtr a) {
    if (is_const(a)) return constant(-a->value());
    if (a->kind() == Kind::Neg) return a->lhs();
    auto node = blank();
    node->kind_ = Kind::Neg;
    node->lhs_ = std::move(a);
    return node;
}

ExprPtr Expr::pow(ExprPtr base, int exponent) {
    if (exponent == 0) return constant(Rational(1));
    if (exponent == 1) return base;
    if (is_const(base) && !(base->value() == 0 && exponent < 0))
        return constant(rational_pow(base->value(), exponent));
    auto node = blank();
    node->kind_ = Kind::Pow;
    node->exponent_ = exponent;
    node->lhs_ = std::move(base);
    return node;
}

ExprPtr Expr::call(UnaryFn fn, ExprPtr arg) {
    auto node = blank();
    node->kind_ = Kind::Call;
    node->fn_ = fn;
    node->lhs_ = std::move(arg);
    return node;
}

double Expr::evaluate(std::span<const double> point) const {
    switch (kind_) {
        case Kind::Constant:
            return to_double(value_);
        case Kind::Variable:
            return point[static_cast<std::size_t>(var_)];
        case Kind::Add:
            return lhs_->evaluate(point) + rhs_->evaluate(point);
        case Kind::Sub:
            return lhs_->evaluate(point) - rhs_->evaluate(point);
        case Kind::Mul:
            return lhs_->evaluate(point) * rhs_->evaluate(point);
        case Kind::Div: {
            double d = rhs_->evaluate(point);
            if (d == 0.0) throw PoleError("division by zero in expression");
            double v = lhs_->evaluate(point) / d;
            if (!std::isfinite(v)) throw PoleError("non-finite value in expression");
            return v;
        }
        case Kind::Neg:
            return -lhs_->evaluate(point);
        case Kind::Pow: {
            double v = std::pow(lhs_->evaluate(point), exponent_);
            if (!std::isfinite(v)) throw PoleError("non-finite power in expression");
            return v;
        }
        case Kind::Call: {
            double a = lhs_->evaluate(point);
            switch (fn_) {
                case UnaryFn::Sin: return std::sin(a);
                case UnaryFn::Cos: return std::cos(a);
                case UnaryFn::Exp: return std::exp(a);
                case UnaryFn::Sqrt:
                    if (a < 0.0) throw PoleError("sqrt of negative value");
                    return std::sqrt(a);
            }
            break;
        }
    }
    throw std::logic_error("unreachable expression kind");
}

ExprPtr Expr::derivative(int var) const {
    switch (kind_) {
        case Kind::Constant:
            return constant(Rational(0));
        case Kind::Variable:
            return constant(Rational(var_ == var ? 1 : 0));
        case Kind::Add:
            return add(lhs_->derivative(var), rhs_->derivative(var));
        case Kind::Sub:
            return sub(lhs_->derivative(var), rhs_->derivative(var));
        case Kind::Mul:
            return add(mul(lhs_->derivative(var), rhs_), mul(lhs_, rhs_->derivative(var)));
        case Kind::Div:
            // (u/v)' = u'/v - u v'/v^2
            return sub(div(lhs_->derivative(var), rhs_),
                       div(mul(lhs_, rhs_->derivative(var)), pow(rhs_, 2)));
        case Kind::Neg:
            return neg(lhs_->derivative(var));
        case Kind::Pow:
            // (u^k)' = k u^(k-1) u'
            return mul(mul(constant(Rational(exponent_)), pow(lhs_, exponent_ - 1)),
                       lhs_->derivative(var));
        case Kind::Call: {
            ExprPtr inner = lhs_->derivative(var);
            switch (fn_) {
                case UnaryFn::Sin: return mul(call(UnaryFn::Cos, lhs_), inner);
                case UnaryFn::Cos: return neg(mul(call(UnaryFn::Sin, lhs_), inner));
                case UnaryFn::Exp: return mul(call(UnaryFn::Exp, lhs_), inner);
                case UnaryFn::Sqrt:
                    return div(inner, mul(constant(Rational(2)), call(UnaryFn::Sqrt, lhs_)));
            }
            break;
        }
    }
    throw std::logic_error("unreachable expression kind");
}

void Expr::collect_support(std::set<int>& vars) const {
    switch (kind_) {
        case Kind::Constant:
            return;
        case Kind::Variable:
            vars.insert(var_);
            return;
        default:
            if (lhs_) lhs_->collect_support(vars);
            if (rhs_) rhs_->collect_support(vars);
    }
}

std::string Expr::to_string(const std::vector<std::string>& names) const {
    std::ostringstream out;
    switch (kind_) {
        case Kind::Constant:
            out << stk::to_string(value_);
            break;
        case Kind::Variable:
            out << names.at(static_cast<std::size_t>(var_));
            break;
        case Kind::Add:
            out << "(" << lhs_->to_string(names) << " + " << rhs_->to_string(names) << ")";
            break;
        case Kind::Sub:
            out << "(" << lhs_->to_string(names) << " - " << rhs_->to_string(names) << ")";
            break;
        case Kind::Mul:
            out << "(" << lhs_->to_string(names) << "*" << rhs_->to_string(names) << ")";
            break;
        case Kind::Div:
            out << "(" << lhs_->to_string(names) << "/" << rhs_->to_string(names) << ")";
            break;
        case Kind::Neg:
            out << "(0 - " << lhs_->to_string(names) << ")";
            break;
        case Kind::Pow:
            out << "(" << lhs_->to_string(names) << ")^" << exponent_;
            break;
        case Kind::Call:
            out << unary_fn_name(fn_) << "(" << lhs_->to_string(names) << ")";
            break;
    }
    return out.str();
}

} // namespace stk
