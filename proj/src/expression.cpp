#include "matkit/expression.hpp"
#include "matkit/errors.hpp"

#include <cctype>
#include <cmath>
#include <vector>

namespace matkit {

namespace {

enum class Op { Const, Var, Add, Sub, Mul, Div, Neg, Sin, Cos, Exp, Abs, Min, Max, IndicatorLe };

} // namespace

struct Expression::Node {
    Op op;
    double value = 0.0;    // Const
    std::string name;      // Var
    std::unique_ptr<Node> a, b;
};

namespace {

using Node = Expression::Node;
using NodePtr = std::unique_ptr<Node>;

NodePtr make(Op op, NodePtr a = nullptr, NodePtr b = nullptr) {
    auto n = std::make_unique<Node>();
    n->op = op;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

class Parser {
public:
    explicit Parser(const std::string& s) : s_(s) {}

    NodePtr run() {
        auto n = expr();
        skip_ws();
        if (pos_ != s_.size()) fail("trailing input");
        return n;
    }

private:
    const std::string& s_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw InputError("expression error at position " + std::to_string(pos_) + ": " + msg +
                         " in '" + s_ + "'");
    }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    NodePtr expr() {
        auto n = term();
        for (;;) {
            if (eat('+')) {
                n = make(Op::Add, std::move(n), term());
            } else if (eat('-')) {
                n = make(Op::Sub, std::move(n), term());
            } else {
                return n;
            }
        }
    }

    NodePtr term() {
        auto n = factor();
        for (;;) {
            if (eat('*')) {
                n = make(Op::Mul, std::move(n), factor());
            } else if (eat('/')) {
                n = make(Op::Div, std::move(n), factor());
            } else {
                return n;
            }
        }
    }

    NodePtr factor() {
        if (eat('-')) return make(Op::Neg, factor());
        if (eat('+')) return factor();
        return primary();
    }

    NodePtr primary() {
        skip_ws();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return ident_or_call();
        if (eat('(')) {
            auto n = expr();
            if (!eat(')')) fail("expected ')'");
            return n;
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    NodePtr number() {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(s_.substr(pos_), &used);
        } catch (const std::exception&) {
            fail("bad number literal");
        }
        pos_ += used;
        auto n = make(Op::Const);
        n->value = v;
        return n;
    }

    NodePtr ident_or_call() {
        std::size_t start = pos_;
        while (pos_ < s_.size() &&
               (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
            ++pos_;
        std::string name = s_.substr(start, pos_ - start);
        if (peek() != '(') {
            if (name == "pi") {
                auto n = make(Op::Const);
                n->value = 3.14159265358979323846;
                return n;
            }
            auto n = make(Op::Var);
            n->name = name;
            return n;
        }
        eat('(');
        if (name == "sin" || name == "cos" || name == "exp" || name == "abs") {
            auto a = expr();
            if (!eat(')')) fail("expected ')'");
            Op op = name == "sin" ? Op::Sin : name == "cos" ? Op::Cos : name == "exp" ? Op::Exp : Op::Abs;
            return make(op, std::move(a));
        }
        if (name == "min" || name == "max") {
            auto a = expr();
            if (!eat(',')) fail("expected ','");
            auto b = expr();
            if (!eat(')')) fail("expected ')'");
            return make(name == "min" ? Op::Min : Op::Max, std::move(a), std::move(b));
        }
        if (name == "indicator") {
            auto a = expr();
            skip_ws();
            if (pos_ + 1 >= s_.size() || s_[pos_] != '<' || s_[pos_ + 1] != '=')
                fail("indicator expects 'a <= b'");
            pos_ += 2;
            auto b = expr();
            if (!eat(')')) fail("expected ')'");
            return make(Op::IndicatorLe, std::move(a), std::move(b));
        }
        fail("unknown function '" + name + "'");
    }
};

double eval_node(const Node& n, const Expression::Env& env) {
    switch (n.op) {
        case Op::Const: return n.value;
        case Op::Var: {
            auto it = env.find(n.name);
            if (it == env.end()) throw InputError("unbound variable '" + n.name + "'");
            return it->second;
        }
        case Op::Add: return eval_node(*n.a, env) + eval_node(*n.b, env);
        case Op::Sub: return eval_node(*n.a, env) - eval_node(*n.b, env);
        case Op::Mul: return eval_node(*n.a, env) * eval_node(*n.b, env);
        case Op::Div: return eval_node(*n.a, env) / eval_node(*n.b, env);
        case Op::Neg: return -eval_node(*n.a, env);
        case Op::Sin: return std::sin(eval_node(*n.a, env));
        case Op::Cos: return std::cos(eval_node(*n.a, env));
        case Op::Exp: return std::exp(eval_node(*n.a, env));
        case Op::Abs: return std::abs(eval_node(*n.a, env));
        case Op::Min: return std::min(eval_node(*n.a, env), eval_node(*n.b, env));
        case Op::Max: return std::max(eval_node(*n.a, env), eval_node(*n.b, env));
        case Op::IndicatorLe: return eval_node(*n.a, env) <= eval_node(*n.b, env) ? 1.0 : 0.0;
    }
    throw InputError("corrupt expression node");
}

NodePtr clone(const Node* n) {
    if (!n) return nullptr;
    auto c = std::make_unique<Node>();
    c->op = n->op;
    c->value = n->value;
    c->name = n->name;
    c->a = clone(n->a.get());
    c->b = clone(n->b.get());
    return c;
}

} // namespace

Expression Expression::parse(const std::string& text) {
    Parser p(text);
    return Expression(text, p.run());
}

double Expression::eval(const Env& env) const {
    double v = eval_node(*root_, env);
    if (!std::isfinite(v))
        throw InvariantError("expression '" + text_ + "' evaluated to a non-finite value");
    return v;
}

Expression::Expression(std::string text, std::unique_ptr<Node> root)
    : text_(std::move(text)), root_(std::move(root)) {}

Expression::Expression(Expression&&) noexcept = default;
Expression& Expression::operator=(Expression&&) noexcept = default;
Expression::Expression(const Expression& other) : text_(other.text_), root_(clone(other.root_.get())) {}
Expression& Expression::operator=(const Expression& other) {
    if (this != &other) {
        text_ = other.text_;
        root_ = clone(other.root_.get());
    }
    return *this;
}
Expression::~Expression() = default;

} // namespace matkit
