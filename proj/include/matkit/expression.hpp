#pragma once

#include <map>
#include <memory>
#include <string>

namespace matkit {

/// A closed-form scalar expression in named variables.
///
/// Grammar: numbers, identifiers, + - * /, unary -, parentheses, and the
/// functions sin, cos, exp, abs, min(a,b), max(a,b), indicator(a <= b).
/// Anything richer enters the toolkit as a matrix literal instead.
class Expression {
public:
    using Env = std::map<std::string, double>;

    /// Parses `text`; throws InputError on syntax errors (with position).
    static Expression parse(const std::string& text);

    /// Evaluates under `env`; throws InputError on unbound variables and
    /// InvariantError if the result is not finite.
    double eval(const Env& env) const;

    const std::string& text() const { return text_; }

    Expression(Expression&&) noexcept;
    Expression& operator=(Expression&&) noexcept;
    Expression(const Expression&);
    Expression& operator=(const Expression&);
    ~Expression();

private:
    struct Node;
    explicit Expression(std::string text, std::unique_ptr<Node> root);

    std::string text_;
    std::unique_ptr<Node> root_;
};

} // namespace matkit
