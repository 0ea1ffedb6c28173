#pragma once

#include <cctype>
#include <cstdio>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>

#include "fraccurv/common.hpp"
#include "fraccurv/jet.hpp"

namespace fraccurv {

enum class UnaryOp { Neg, Exp, Ln, Sin, Cos, Gamma };
enum class BinOp { Add, Sub, Mul, Div, Pow };

// Immutable expression tree over numbers, identifiers and the grammar
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := unary ('^' factor)?          // right-associative
//   unary  := '-' unary | atom
//   atom   := NUMBER | IDENT | IDENT '(' expr ')' | '(' expr ')'
// Identifiers other than the five function names are variables or parameters,
// resolved against an environment at evaluation time.
class Expr {
public:
    Expr() = default;

    static Expr number(double x) {
        auto n = std::make_shared<Node>();
        n->kind = Kind::Num;
        n->num = x;
        return Expr(std::move(n));
    }

    static Expr var(std::string name) {
        auto n = std::make_shared<Node>();
        n->kind = Kind::Var;
        n->name = std::move(name);
        return Expr(std::move(n));
    }

    static Expr unary(UnaryOp op, Expr a) {
        auto n = std::make_shared<Node>();
        n->kind = Kind::Unary;
        n->uop = op;
        n->lhs = a.root_;
        return Expr(std::move(n));
    }

    static Expr binary(BinOp op, Expr a, Expr b) {
        auto n = std::make_shared<Node>();
        n->kind = Kind::Bin;
        n->bop = op;
        n->lhs = a.root_;
        n->rhs = b.root_;
        return Expr(std::move(n));
    }

    static Expr parse(std::string_view text);

    bool valid() const { return root_ != nullptr; }

    bool is_number() const;
    double number_value() const { return root_->num; }

    // Fully parenthesized form; parse(str()) is structurally identical.
    std::string str() const { return print(root_.get()); }

    bool operator==(const Expr& other) const { return equal(root_.get(), other.root_.get()); }

    // Collects every identifier; throws UnboundParameter for any name not in
    // `allowed`.
    void check_idents(const std::set<std::string>& allowed) const {
        walk_idents(root_.get(), allowed);
    }

    template <class T>
    T eval(const std::map<std::string, T>& env) const {
        if (!root_) throw DomainError("empty expression");
        return eval_node<T>(root_.get(), env);
    }

private:
    enum class Kind { Num, Var, Unary, Bin };

    struct Node {
        Kind kind = Kind::Num;
        double num = 0.0;
        std::string name;
        UnaryOp uop = UnaryOp::Neg;
        BinOp bop = BinOp::Add;
        std::shared_ptr<const Node> lhs, rhs;
    };

    explicit Expr(std::shared_ptr<const Node> n) : root_(std::move(n)) {}

    template <class T>
    static T eval_node(const Node* n, const std::map<std::string, T>& env) {
        switch (n->kind) {
            case Kind::Num:
                return T(n->num);
            case Kind::Var: {
                auto it = env.find(n->name);
                if (it == env.end()) throw UnboundParameter(n->name);
                return it->second;
            }
            case Kind::Unary: {
                T a = eval_node<T>(n->lhs.get(), env);
                switch (n->uop) {
                    case UnaryOp::Neg:   return -a;
                    case UnaryOp::Exp:   return exp(a);
                    case UnaryOp::Ln:    return log(a);
                    case UnaryOp::Sin:   return sin(a);
                    case UnaryOp::Cos:   return cos(a);
                    case UnaryOp::Gamma: return tgamma(a);
                }
                throw DomainError("unreachable");
            }
            case Kind::Bin: {
                T a = eval_node<T>(n->lhs.get(), env);
                T b = eval_node<T>(n->rhs.get(), env);
                switch (n->bop) {
                    case BinOp::Add: return a + b;
                    case BinOp::Sub: return a - b;
                    case BinOp::Mul: return a * b;
                    case BinOp::Div: return a / b;
                    case BinOp::Pow: return pow(a, b);
                }
                throw DomainError("unreachable");
            }
        }
        throw DomainError("unreachable");
    }

    static std::string print(const Node* n) {
        switch (n->kind) {
            case Kind::Num: {
                char buf[40];
                std::snprintf(buf, sizeof(buf), "%.17g", n->num);
                return buf;
            }
            case Kind::Var:
                return n->name;
            case Kind::Unary: {
                const std::string a = print(n->lhs.get());
                switch (n->uop) {
                    case UnaryOp::Neg:   return "(-" + a + ")";
                    case UnaryOp::Exp:   return "exp(" + a + ")";
                    case UnaryOp::Ln:    return "ln(" + a + ")";
                    case UnaryOp::Sin:   return "sin(" + a + ")";
                    case UnaryOp::Cos:   return "cos(" + a + ")";
                    case UnaryOp::Gamma: return "gamma(" + a + ")";
                }
                return {};
            }
            case Kind::Bin: {
                const char* op = "+";
                switch (n->bop) {
                    case BinOp::Add: op = "+"; break;
                    case BinOp::Sub: op = "-"; break;
                    case BinOp::Mul: op = "*"; break;
                    case BinOp::Div: op = "/"; break;
                    case BinOp::Pow: op = "^"; break;
                }
                return "(" + print(n->lhs.get()) + op + print(n->rhs.get()) + ")";
            }
        }
        return {};
    }

    static bool equal(const Node* a, const Node* b) {
        if (a == b) return true;
        if (!a || !b || a->kind != b->kind) return false;
        switch (a->kind) {
            case Kind::Num:   return a->num == b->num;
            case Kind::Var:   return a->name == b->name;
            case Kind::Unary: return a->uop == b->uop && equal(a->lhs.get(), b->lhs.get());
            case Kind::Bin:
                return a->bop == b->bop && equal(a->lhs.get(), b->lhs.get())
                       && equal(a->rhs.get(), b->rhs.get());
        }
        return false;
    }

    static void walk_idents(const Node* n, const std::set<std::string>& allowed) {
        if (!n) return;
        if (n->kind == Kind::Var && !allowed.count(n->name)) throw UnboundParameter(n->name);
        walk_idents(n->lhs.get(), allowed);
        walk_idents(n->rhs.get(), allowed);
    }

    std::shared_ptr<const Node> root_;

    friend class ExprParser;
};

class ExprParser {
public:
    explicit ExprParser(std::string_view text) : text_(text) {}

    Expr run() {
        if (text_.empty()) throw ParseError(0, "empty expression");
        Expr e = parse_expr();
        skip_ws();
        if (pos_ != text_.size()) throw ParseError(pos_, "unexpected trailing input");
        return e;
    }

private:
    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool peek_is(char c) {
        skip_ws();
        return pos_ < text_.size() && text_[pos_] == c;
    }

    bool consume(char c) {
        if (peek_is(c)) {
            ++pos_;
            return true;
        }
        return false;
    }

    Expr parse_expr() {
        Expr lhs = parse_term();
        for (;;) {
            if (consume('+')) lhs = Expr::binary(BinOp::Add, lhs, parse_term());
            else if (consume('-')) lhs = Expr::binary(BinOp::Sub, lhs, parse_term());
            else return lhs;
        }
    }

    Expr parse_term() {
        Expr lhs = parse_factor();
        for (;;) {
            if (consume('*')) lhs = Expr::binary(BinOp::Mul, lhs, parse_factor());
            else if (consume('/')) lhs = Expr::binary(BinOp::Div, lhs, parse_factor());
            else return lhs;
        }
    }

    Expr parse_factor() {
        Expr base = parse_unary();
        if (consume('^')) return Expr::binary(BinOp::Pow, base, parse_factor());
        return base;
    }

    Expr parse_unary() {
        if (consume('-')) {
            Expr operand = parse_unary();
            // Fold "-<literal>" into a negative literal so printing and
            // reparsing an expression preserves its structure.
            if (operand.is_number()) return Expr::number(-operand.number_value());
            return Expr::unary(UnaryOp::Neg, operand);
        }
        return parse_atom();
    }

    Expr parse_atom() {
        skip_ws();
        if (pos_ >= text_.size()) throw ParseError(pos_, "unexpected end of input");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Expr e = parse_expr();
            if (!consume(')')) throw ParseError(pos_, "expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
        throw ParseError(pos_, std::string("unexpected character '") + c + "'");
    }

    Expr parse_number() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t mark = pos_;
            ++pos_;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
            if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            } else {
                pos_ = mark;  // 'e' belongs to a following identifier, not the number
            }
        }
        const std::string tok(text_.substr(start, pos_ - start));
        try {
            return Expr::number(std::stod(tok));
        } catch (const std::exception&) {
            throw ParseError(start, "malformed number '" + tok + "'");
        }
    }

    Expr parse_ident() {
        const std::size_t start = pos_;
        while (pos_ < text_.size()
               && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        const std::string name(text_.substr(start, pos_ - start));
        if (peek_is('(')) {
            UnaryOp op;
            if (name == "gamma") op = UnaryOp::Gamma;
            else if (name == "exp") op = UnaryOp::Exp;
            else if (name == "ln") op = UnaryOp::Ln;
            else if (name == "sin") op = UnaryOp::Sin;
            else if (name == "cos") op = UnaryOp::Cos;
            else throw ParseError(start, "unknown function '" + name + "'");
            ++pos_;  // '('
            Expr arg = parse_expr();
            if (!consume(')')) throw ParseError(pos_, "expected ')'");
            return Expr::unary(op, arg);
        }
        return Expr::var(name);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

inline Expr Expr::parse(std::string_view text) { return ExprParser(text).run(); }

inline bool Expr::is_number() const { return root_ && root_->kind == Kind::Num; }

// Order-2 jet of `expr` at t, differentiating with respect to `var`;
// every binding is treated as a constant.
inline Jet2 eval_jet2(const Expr& expr, double t,
                      const std::map<std::string, double>& bindings,
                      const std::string& var = "t") {
    std::map<std::string, Jet2> env;
    for (const auto& [k, v] : bindings) env.emplace(k, Jet2(v));
    env[var] = Jet2::variable(t);
    return expr.eval(env);
}

}  // namespace fraccurv
