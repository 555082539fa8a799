#pragma once
/// @file expr.hpp
/// @brief Arithmetic expressions in the variables x and z.
///
/// Grammar (whitespace ignored):
///   expr   := term (('+' | '-') term)*
///   term   := unary (('*' | '/') unary)*
///   unary  := ('+' | '-') unary | atom
///   atom   := number | 'x' | 'z' | func '(' expr (',' expr)? ')' | '(' expr ')'
///   func   := 'sin' | 'cos' | 'exp' | 'pow'        (pow takes two arguments)
/// Evaluation is over Dual, so first partials come for free.

#include <heis/dual.hpp>

#include <cctype>
#include <charconv>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace heis {

class Expr {
public:
    static Expr parse(const std::string& text) {
        Parser p{text, 0};
        Expr e;
        e.root_ = p.expr();
        p.skip();
        if (p.pos != text.size()) throw std::invalid_argument("unexpected '" + text.substr(p.pos) + "' in expression");
        e.text_ = text;
        return e;
    }

    Dual operator()(const Dual& x, const Dual& z) const { return root_->eval(x, z); }
    double operator()(double x, double z) const { return root_->eval(Dual{x}, Dual{z}).v; }
    const std::string& text() const { return text_; }

    ScalarFn fn() const {
        auto root = root_;
        return [root](const Dual& x, const Dual& z) { return root->eval(x, z); };
    }

private:
    struct Node {
        enum Kind { num, var_x, var_z, add, sub, mul, div, neg, pow, sin, cos, exp } kind;
        double value = 0.0;
        std::shared_ptr<Node> a, b;

        Dual eval(const Dual& x, const Dual& z) const {
            switch (kind) {
                case num: return Dual{value};
                case var_x: return x;
                case var_z: return z;
                case add: return a->eval(x, z) + b->eval(x, z);
                case sub: return a->eval(x, z) - b->eval(x, z);
                case mul: return a->eval(x, z) * b->eval(x, z);
                case div: return a->eval(x, z) / b->eval(x, z);
                case neg: return -a->eval(x, z);
                case pow: return heis::pow(a->eval(x, z), b->eval(x, z));
                case sin: return heis::sin(a->eval(x, z));
                case cos: return heis::cos(a->eval(x, z));
                case exp: return heis::exp(a->eval(x, z));
            }
            return Dual{};
        }
    };
    using P = std::shared_ptr<Node>;

    static P make(Node::Kind k, P a = nullptr, P b = nullptr, double v = 0.0) {
        auto n = std::make_shared<Node>();
        n->kind = k;
        n->a = std::move(a);
        n->b = std::move(b);
        n->value = v;
        return n;
    }

    struct Parser {
        const std::string& s;
        std::size_t pos;

        void skip() {
            while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        }
        bool eat(char c) {
            skip();
            if (pos < s.size() && s[pos] == c) {
                ++pos;
                return true;
            }
            return false;
        }
        void expect(char c) {
            if (!eat(c)) throw std::invalid_argument(std::string("expected '") + c + "' in expression");
        }
        P expr() {
            P lhs = term();
            for (;;) {
                if (eat('+')) lhs = make(Node::add, lhs, term());
                else if (eat('-')) lhs = make(Node::sub, lhs, term());
                else return lhs;
            }
        }
        P term() {
            P lhs = unary();
            for (;;) {
                if (eat('*')) lhs = make(Node::mul, lhs, unary());
                else if (eat('/')) lhs = make(Node::div, lhs, unary());
                else return lhs;
            }
        }
        P unary() {
            if (eat('-')) return make(Node::neg, unary());
            if (eat('+')) return unary();
            return atom();
        }
        P atom() {
            skip();
            if (pos >= s.size()) throw std::invalid_argument("unexpected end of expression");
            if (eat('(')) {
                P e = expr();
                expect(')');
                return e;
            }
            const char c = s[pos];
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
                const char* begin = s.data() + pos;
                double v = 0.0;
                const auto [end, ec] = std::from_chars(begin, s.data() + s.size(), v);
                if (ec != std::errc()) throw std::invalid_argument("bad number in expression");
                pos += static_cast<std::size_t>(end - begin);
                return make(Node::num, nullptr, nullptr, v);
            }
            if (std::isalpha(static_cast<unsigned char>(c))) {
                std::size_t start = pos;
                while (pos < s.size() && std::isalpha(static_cast<unsigned char>(s[pos]))) ++pos;
                const std::string name = s.substr(start, pos - start);
                if (name == "x") return make(Node::var_x);
                if (name == "z") return make(Node::var_z);
                Node::Kind k;
                if (name == "sin") k = Node::sin;
                else if (name == "cos") k = Node::cos;
                else if (name == "exp") k = Node::exp;
                else if (name == "pow") k = Node::pow;
                else throw std::invalid_argument("unknown identifier '" + name + "' in expression");
                expect('(');
                P a = expr();
                P b;
                if (k == Node::pow) {
                    expect(',');
                    b = expr();
                }
                expect(')');
                return make(k, a, b);
            }
            throw std::invalid_argument(std::string("unexpected '") + c + "' in expression");
        }
    };

    P root_;
    std::string text_;
};

}  // namespace heis
