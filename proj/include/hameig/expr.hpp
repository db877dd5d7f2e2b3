#pragma once

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace hameig {

// Piecewise-polynomial/power expressions for declarative problem configs.
//
//   expr    = term { ("+" | "-") term } ;
//   term    = factor { ("*" | "/") factor } ;
//   factor  = unary [ "^" factor ] ;            (right associative)
//   unary   = "-" unary | primary ;
//   primary = number | name | name "(" expr { "," expr } ")" | "(" expr ")" ;
//
// Names resolve to the caller's variable list, to "pi", or to a function:
// sqrt, abs, exp, log, floor, step (1 for x > 0 else 0), min, max, pow.
class Expr {
    struct Node;
    using NodePtr = std::shared_ptr<const Node>;

    enum class Kind { number, variable, add, sub, mul, div, pow, neg, fn1, fn2 };
    enum class Fn { sqrt, abs, exp, log, floor, step, min, max, pow };

    struct Node {
        Kind kind;
        double value = 0.0;
        std::size_t var = 0;
        Fn fn = Fn::sqrt;
        NodePtr a, b;
    };

public:
    Expr() = default;

    static Expr parse(const std::string& src, const std::vector<std::string>& vars) {
        Parser p{src, 0, vars};
        Expr e;
        e.root_ = p.parse_expr();
        p.skip_ws();
        if (p.pos != src.size())
            p.fail("unexpected trailing input");
        e.source_ = src;
        e.nvars_ = vars.size();
        return e;
    }

    double eval(const std::vector<double>& vars) const {
        if (!root_) throw std::logic_error("Expr: eval on empty expression");
        if (vars.size() < nvars_)
            throw std::invalid_argument("Expr: not enough variable values");
        return eval_node(*root_, vars);
    }

    const std::string& source() const { return source_; }
    bool empty() const { return !root_; }

private:
    NodePtr root_;
    std::string source_;
    std::size_t nvars_ = 0;

    static double eval_node(const Node& n, const std::vector<double>& v) {
        switch (n.kind) {
        case Kind::number: return n.value;
        case Kind::variable: return v[n.var];
        case Kind::add: return eval_node(*n.a, v) + eval_node(*n.b, v);
        case Kind::sub: return eval_node(*n.a, v) - eval_node(*n.b, v);
        case Kind::mul: return eval_node(*n.a, v) * eval_node(*n.b, v);
        case Kind::div: return eval_node(*n.a, v) / eval_node(*n.b, v);
        case Kind::pow: return std::pow(eval_node(*n.a, v), eval_node(*n.b, v));
        case Kind::neg: return -eval_node(*n.a, v);
        case Kind::fn1: {
            double x = eval_node(*n.a, v);
            switch (n.fn) {
            case Fn::sqrt: return std::sqrt(x);
            case Fn::abs: return std::abs(x);
            case Fn::exp: return std::exp(x);
            case Fn::log: return std::log(x);
            case Fn::floor: return std::floor(x);
            case Fn::step: return x > 0.0 ? 1.0 : 0.0;
            default: break;
            }
            break;
        }
        case Kind::fn2: {
            double x = eval_node(*n.a, v), y = eval_node(*n.b, v);
            switch (n.fn) {
            case Fn::min: return std::min(x, y);
            case Fn::max: return std::max(x, y);
            case Fn::pow: return std::pow(x, y);
            default: break;
            }
            break;
        }
        }
        throw std::logic_error("Expr: malformed node");
    }

    struct Parser {
        const std::string& src;
        std::size_t pos;
        const std::vector<std::string>& vars;

        [[noreturn]] void fail(const std::string& what) const {
            throw std::invalid_argument("expression error at offset " +
                                        std::to_string(pos) + ": " + what +
                                        " in '" + src + "'");
        }

        void skip_ws() {
            while (pos < src.size() && std::isspace(unsigned(src[pos]))) ++pos;
        }

        bool eat(char c) {
            skip_ws();
            if (pos < src.size() && src[pos] == c) { ++pos; return true; }
            return false;
        }

        NodePtr parse_expr() {
            NodePtr n = parse_term();
            for (;;) {
                if (eat('+')) n = binary(Kind::add, n, parse_term());
                else if (eat('-')) n = binary(Kind::sub, n, parse_term());
                else return n;
            }
        }

        NodePtr parse_term() {
            NodePtr n = parse_factor();
            for (;;) {
                if (eat('*')) n = binary(Kind::mul, n, parse_factor());
                else if (eat('/')) n = binary(Kind::div, n, parse_factor());
                else return n;
            }
        }

        NodePtr parse_factor() {
            NodePtr n = parse_unary();
            if (eat('^')) return binary(Kind::pow, n, parse_factor());
            return n;
        }

        NodePtr parse_unary() {
            if (eat('-')) {
                auto node = std::make_shared<Node>();
                node->kind = Kind::neg;
                node->a = parse_unary();
                return node;
            }
            return parse_primary();
        }

        NodePtr parse_primary() {
            skip_ws();
            if (pos >= src.size()) fail("unexpected end of input");
            char c = src[pos];
            if (std::isdigit(unsigned(c)) || c == '.') return parse_number();
            if (std::isalpha(unsigned(c)) || c == '_') return parse_name();
            if (eat('(')) {
                NodePtr n = parse_expr();
                if (!eat(')')) fail("expected ')'");
                return n;
            }
            fail(std::string("unexpected character '") + c + "'");
        }

        NodePtr parse_number() {
            const char* begin = src.c_str() + pos;
            char* end = nullptr;
            double v = std::strtod(begin, &end);
            if (end == begin) fail("bad number");
            pos += std::size_t(end - begin);
            auto node = std::make_shared<Node>();
            node->kind = Kind::number;
            node->value = v;
            return node;
        }

        NodePtr parse_name() {
            std::size_t start = pos;
            while (pos < src.size() &&
                   (std::isalnum(unsigned(src[pos])) || src[pos] == '_'))
                ++pos;
            std::string name = src.substr(start, pos - start);

            skip_ws();
            bool call = pos < src.size() && src[pos] == '(';
            if (call) {
                ++pos;
                std::vector<NodePtr> args;
                args.push_back(parse_expr());
                while (eat(',')) args.push_back(parse_expr());
                if (!eat(')')) fail("expected ')'");
                return make_call(name, args);
            }

            for (std::size_t i = 0; i < vars.size(); ++i) {
                if (vars[i] == name) {
                    auto node = std::make_shared<Node>();
                    node->kind = Kind::variable;
                    node->var = i;
                    return node;
                }
            }
            if (name == "pi") {
                auto node = std::make_shared<Node>();
                node->kind = Kind::number;
                node->value = 3.14159265358979323846;
                return node;
            }
            fail("unknown name '" + name + "'");
        }

        NodePtr make_call(const std::string& name, std::vector<NodePtr>& args) {
            struct FnEntry { const char* name; Fn fn; std::size_t arity; };
            static const FnEntry table[] = {
                {"sqrt", Fn::sqrt, 1}, {"abs", Fn::abs, 1},   {"exp", Fn::exp, 1},
                {"log", Fn::log, 1},   {"floor", Fn::floor, 1}, {"step", Fn::step, 1},
                {"min", Fn::min, 2},   {"max", Fn::max, 2},   {"pow", Fn::pow, 2},
            };
            for (const FnEntry& e : table) {
                if (name != e.name) continue;
                if (args.size() != e.arity)
                    fail("function '" + name + "' takes " +
                         std::to_string(e.arity) + " argument(s)");
                auto node = std::make_shared<Node>();
                node->kind = e.arity == 1 ? Kind::fn1 : Kind::fn2;
                node->fn = e.fn;
                node->a = args[0];
                if (e.arity == 2) node->b = args[1];
                return node;
            }
            fail("unknown function '" + name + "'");
        }

        NodePtr binary(Kind k, NodePtr a, NodePtr b) {
            auto node = std::make_shared<Node>();
            node->kind = k;
            node->a = std::move(a);
            node->b = std::move(b);
            return node;
        }
    };
};

} // namespace hameig
