#include "stackel/parser.hpp"

#include "stackel/errors.hpp"

#include <cctype>
#include <optional>

namespace stk {

namespace {

struct Token {
    enum class Kind { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };
    Kind kind;
    std::size_t position;
    std::string text; // Number / Ident payload
};

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) { advance(); }

    const Token& current() const { return current_; }

    void advance() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        std::size_t start = pos_;
        if (pos_ >= text_.size()) {
            current_ = {Token::Kind::End, start, ""};
            return;
        }
        char c = text_[pos_];
        switch (c) {
            case '+': current_ = {Token::Kind::Plus, start, "+"}; ++pos_; return;
            case '-': current_ = {Token::Kind::Minus, start, "-"}; ++pos_; return;
            case '*': current_ = {Token::Kind::Star, start, "*"}; ++pos_; return;
            case '/': current_ = {Token::Kind::Slash, start, "/"}; ++pos_; return;
            case '^': current_ = {Token::Kind::Caret, start, "^"}; ++pos_; return;
            case '(': current_ = {Token::Kind::LParen, start, "("}; ++pos_; return;
            case ')': current_ = {Token::Kind::RParen, start, ")"}; ++pos_; return;
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t end = pos_;
            bool seen_dot = false;
            while (end < text_.size()) {
                char d = text_[end];
                if (std::isdigit(static_cast<unsigned char>(d))) {
                    ++end;
                } else if (d == '.' && !seen_dot) {
                    seen_dot = true;
                    ++end;
                } else {
                    break;
                }
            }
            current_ = {Token::Kind::Number, start, std::string(text_.substr(pos_, end - pos_))};
            pos_ = end;
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t end = pos_;
            while (end < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_'))
                ++end;
            current_ = {Token::Kind::Ident, start, std::string(text_.substr(pos_, end - pos_))};
            pos_ = end;
            return;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", start);
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
    Token current_{Token::Kind::End, 0, ""};
};

std::optional<UnaryFn> function_by_name(const std::string& name) {
    if (name == "sin") return UnaryFn::Sin;
    if (name == "cos") return UnaryFn::Cos;
    if (name == "exp") return UnaryFn::Exp;
    if (name == "sqrt") return UnaryFn::Sqrt;
    return std::nullopt;
}

class Parser {
public:
    Parser(std::string_view text, const Chart& chart, Backend backend)
        : lexer_(text), chart_(chart), backend_(backend) {}

    ScalarField run() {
        ScalarField value = expr();
        if (lexer_.current().kind != Token::Kind::End)
            throw ParseError("unexpected trailing input", lexer_.current().position);
        return value;
    }

private:
    ScalarField expr() {
        bool negate = false;
        if (lexer_.current().kind == Token::Kind::Minus) {
            negate = true;
            lexer_.advance();
        }
        ScalarField value = term();
        if (negate) value = -value;
        while (true) {
            auto kind = lexer_.current().kind;
            if (kind == Token::Kind::Plus) {
                lexer_.advance();
                value = value + term();
            } else if (kind == Token::Kind::Minus) {
                lexer_.advance();
                value = value - term();
            } else {
                return value;
            }
        }
    }

    ScalarField term() {
        ScalarField value = factor();
        while (true) {
            auto kind = lexer_.current().kind;
            if (kind == Token::Kind::Star) {
                lexer_.advance();
                value = value * factor();
            } else if (kind == Token::Kind::Slash) {
                lexer_.advance();
                value = value / factor();
            } else {
                return value;
            }
        }
    }

    ScalarField factor() {
        ScalarField value = base();
        if (lexer_.current().kind == Token::Kind::Caret) {
            lexer_.advance();
            value = value.pow(integer_exponent());
        }
        return value;
    }

    int integer_exponent() {
        bool negative = false;
        if (lexer_.current().kind == Token::Kind::Minus) {
            negative = true;
            lexer_.advance();
        }
        const Token& tok = lexer_.current();
        if (tok.kind != Token::Kind::Number || tok.text.find('.') != std::string::npos)
            throw ParseError("expected integer exponent after '^'", tok.position);
        int value = 0;
        try {
            value = std::stoi(tok.text);
        } catch (const std::exception&) {
            throw ParseError("exponent out of range", tok.position);
        }
        lexer_.advance();
        return negative ? -value : value;
    }

    ScalarField base() {
        const Token tok = lexer_.current();
        switch (tok.kind) {
            case Token::Kind::Number: {
                lexer_.advance();
                return ScalarField::constant(chart_, rational_from_string(tok.text), backend_);
            }
            case Token::Kind::Ident: {
                lexer_.advance();
                if (lexer_.current().kind == Token::Kind::LParen) {
                    auto fn = function_by_name(tok.text);
                    if (!fn)
                        throw ParseError("unknown function '" + tok.text + "'", tok.position);
                    if (backend_ == Backend::Exact)
                        throw ParseError("transcendental under EXACT: '" + tok.text + "'",
                                         tok.position);
                    lexer_.advance();
                    ScalarField arg = expr();
                    expect(Token::Kind::RParen, "expected ')'");
                    return ScalarField(chart_, Expr::call(*fn, arg.tree()));
                }
                int index = chart_.index_of(tok.text);
                if (index < 0)
                    throw ParseError("unknown identifier '" + tok.text + "'", tok.position);
                return ScalarField::coordinate(chart_, index, backend_);
            }
            case Token::Kind::LParen: {
                lexer_.advance();
                ScalarField value = expr();
                expect(Token::Kind::RParen, "expected ')'");
                return value;
            }
            default:
                throw ParseError("expected a number, identifier or '('", tok.position);
        }
    }

    void expect(Token::Kind kind, const char* message) {
        if (lexer_.current().kind != kind)
            throw ParseError(message, lexer_.current().position);
        lexer_.advance();
    }

    Lexer lexer_;
    const Chart& chart_;
    Backend backend_;
};

} // namespace

ScalarField parse_expression(std::string_view text, const Chart& chart, Backend backend) {
    return Parser(text, chart, backend).run();
}

} // namespace stk
