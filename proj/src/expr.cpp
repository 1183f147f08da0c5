#include "hartogs/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <utility>
#include <vector>

namespace hartogs::expr {

namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
    Tok kind = Tok::End;
    std::size_t offset = 0;
    double number = 0.0;
    bool number_integral = false;   // literal written without '.' or exponent
    std::string ident;
};

Token make_token(Tok kind, std::size_t offset) {
    Token t;
    t.kind = kind;
    t.offset = offset;
    return t;
}

class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) {}

    Token next() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        const std::size_t start = pos_;
        if (pos_ >= text_.size()) return make_token(Tok::End, start);

        const char c = text_[pos_];
        switch (c) {
            case '+': ++pos_; return make_token(Tok::Plus, start);
            case '-': ++pos_; return make_token(Tok::Minus, start);
            case '*': ++pos_; return make_token(Tok::Star, start);
            case '/': ++pos_; return make_token(Tok::Slash, start);
            case '^': ++pos_; return make_token(Tok::Caret, start);
            case '(': ++pos_; return make_token(Tok::LParen, start);
            case ')': ++pos_; return make_token(Tok::RParen, start);
            default: break;
        }

        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return lex_number(start);

        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                ++pos_;
            Token t = make_token(Tok::Ident, start);
            t.ident = text_.substr(start, pos_ - start);
            return t;
        }

        throw SyntaxError(std::string("unexpected character '") + c + "'", start);
    }

private:
    Token lex_number(std::size_t start) {
        bool integral = true;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ < text_.size() && text_[pos_] == '.') {
            integral = false;
            ++pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            integral = false;
            ++pos_;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
            if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
                throw SyntaxError("malformed exponent in numeric literal", pos_);
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        }

        Token t = make_token(Tok::Number, start);
        const char* first = text_.data() + start;
        const char* last = text_.data() + pos_;
        auto [ptr, ec] = std::from_chars(first, last, t.number);
        if (ec != std::errc{} || ptr != last)
            throw SyntaxError("malformed numeric literal", start);
        t.number_integral = integral;
        return t;
    }

    const std::string& text_;
    std::size_t pos_ = 0;
};

NodePtr make(Node n) { return std::make_shared<const Node>(std::move(n)); }

NodePtr number(double v) {
    Node n;
    n.kind = Node::Kind::Number;
    n.number = v;
    return make(std::move(n));
}

NodePtr unary(Node::Kind k, NodePtr a) {
    Node n;
    n.kind = k;
    n.a = std::move(a);
    return make(std::move(n));
}

NodePtr binary(Node::Kind k, NodePtr a, NodePtr b) {
    Node n;
    n.kind = k;
    n.a = std::move(a);
    n.b = std::move(b);
    return make(std::move(n));
}

class Parser {
public:
    explicit Parser(const std::string& text) : lexer_(text) { advance(); }

    NodePtr parse_all() {
        NodePtr e = parse_sum();
        if (cur_.kind != Tok::End) throw SyntaxError("unexpected trailing input", cur_.offset);
        return e;
    }

private:
    void advance() { cur_ = lexer_.next(); }

    bool accept(Tok k) {
        if (cur_.kind != k) return false;
        advance();
        return true;
    }

    void expect(Tok k, const char* what) {
        if (cur_.kind != k) throw SyntaxError(std::string("expected ") + what, cur_.offset);
        advance();
    }

    NodePtr parse_sum() {
        NodePtr lhs = parse_product();
        for (;;) {
            if (accept(Tok::Plus)) lhs = binary(Node::Kind::Add, lhs, parse_product());
            else if (accept(Tok::Minus)) lhs = binary(Node::Kind::Sub, lhs, parse_product());
            else return lhs;
        }
    }

    NodePtr parse_product() {
        NodePtr lhs = parse_unary();
        for (;;) {
            if (accept(Tok::Star)) lhs = binary(Node::Kind::Mul, lhs, parse_unary());
            else if (accept(Tok::Slash)) lhs = binary(Node::Kind::Div, lhs, parse_unary());
            else return lhs;
        }
    }

    NodePtr parse_unary() {
        if (accept(Tok::Minus)) return unary(Node::Kind::Neg, parse_unary());
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_atom();
        while (accept(Tok::Caret)) {
            auto [value, integral] = parse_exponent_literal();
            Node n;
            n.kind = Node::Kind::Pow;
            n.a = base;
            n.exponent = value;
            n.exponent_integral = integral && std::abs(value) < 9.0e15;
            if (n.exponent_integral) n.exponent_int = static_cast<long long>(value);
            base = make(std::move(n));
        }
        return base;
    }

    // Exponents are literals so that integer powers can be recognised at parse
    // time; an optional sign and one level of parentheses are allowed.
    std::pair<double, bool> parse_exponent_literal() {
        if (accept(Tok::LParen)) {
            auto inner = parse_exponent_literal();
            expect(Tok::RParen, "')' after exponent");
            return inner;
        }
        double sign = 1.0;
        while (cur_.kind == Tok::Minus || cur_.kind == Tok::Plus) {
            if (cur_.kind == Tok::Minus) sign = -sign;
            advance();
        }
        if (cur_.kind != Tok::Number)
            throw SyntaxError("expected numeric exponent after '^'", cur_.offset);
        const double v = sign * cur_.number;
        const bool integral = cur_.number_integral;
        advance();
        return {v, integral};
    }

    NodePtr parse_atom() {
        if (cur_.kind == Tok::Number) {
            NodePtr n = number(cur_.number);
            advance();
            return n;
        }
        if (cur_.kind == Tok::Ident) {
            const std::string name = cur_.ident;
            const std::size_t off = cur_.offset;
            advance();
            if (name == "x") {
                Node n;
                n.kind = Node::Kind::Var;
                return make(std::move(n));
            }
            Node::Kind k;
            if (name == "exp") k = Node::Kind::Exp;
            else if (name == "log") k = Node::Kind::Log;
            else if (name == "sqrt") k = Node::Kind::Sqrt;
            else throw SyntaxError("unknown identifier '" + name + "'", off);
            expect(Tok::LParen, "'(' after function name");
            NodePtr arg = parse_sum();
            expect(Tok::RParen, "')'");
            return unary(k, std::move(arg));
        }
        if (accept(Tok::LParen)) {
            NodePtr e = parse_sum();
            expect(Tok::RParen, "')'");
            return e;
        }
        throw SyntaxError("expected operand", cur_.offset);
    }

    Lexer lexer_;
    Token cur_;
};

template <typename T>
T eval_node(const Node& n, const T& x) {
    switch (n.kind) {
        case Node::Kind::Number: return T::constant(n.number);
        case Node::Kind::Var: return x;
        case Node::Kind::Neg: return -eval_node(*n.a, x);
        case Node::Kind::Add: return eval_node(*n.a, x) + eval_node(*n.b, x);
        case Node::Kind::Sub: return eval_node(*n.a, x) - eval_node(*n.b, x);
        case Node::Kind::Mul: return eval_node(*n.a, x) * eval_node(*n.b, x);
        case Node::Kind::Div: return eval_node(*n.a, x) / eval_node(*n.b, x);
        case Node::Kind::Pow: {
            T base = eval_node(*n.a, x);
            return n.exponent_integral ? powi(base, n.exponent_int) : pow(base, n.exponent);
        }
        case Node::Kind::Exp: return exp(eval_node(*n.a, x));
        case Node::Kind::Log: return log(eval_node(*n.a, x));
        case Node::Kind::Sqrt: return sqrt(eval_node(*n.a, x));
    }
    throw Error("corrupt expression node");
}

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void unparse_node(const Node& n, std::string& out) {
    switch (n.kind) {
        case Node::Kind::Number: out += format_number(n.number); return;
        case Node::Kind::Var: out += 'x'; return;
        case Node::Kind::Neg:
            out += "(-";
            unparse_node(*n.a, out);
            out += ')';
            return;
        case Node::Kind::Add:
        case Node::Kind::Sub:
        case Node::Kind::Mul:
        case Node::Kind::Div: {
            const char op = n.kind == Node::Kind::Add   ? '+'
                            : n.kind == Node::Kind::Sub ? '-'
                            : n.kind == Node::Kind::Mul ? '*'
                                                        : '/';
            out += '(';
            unparse_node(*n.a, out);
            out += ' ';
            out += op;
            out += ' ';
            unparse_node(*n.b, out);
            out += ')';
            return;
        }
        case Node::Kind::Pow:
            out += '(';
            unparse_node(*n.a, out);
            out += '^';
            if (n.exponent_integral) out += std::to_string(n.exponent_int);
            else out += "(" + format_number(n.exponent) + ")";
            out += ')';
            return;
        case Node::Kind::Exp:
        case Node::Kind::Log:
        case Node::Kind::Sqrt: {
            out += n.kind == Node::Kind::Exp ? "exp(" : n.kind == Node::Kind::Log ? "log(" : "sqrt(";
            unparse_node(*n.a, out);
            out += ')';
            return;
        }
    }
}

} // namespace

ProfileExpression parse(const std::string& text) {
    Parser p(text);
    return ProfileExpression(p.parse_all(), text);
}

std::string unparse(const ProfileExpression& e) {
    std::string out;
    unparse_node(e.root(), out);
    return out;
}

double eval(const ProfileExpression& e, double x) { return eval_jet2(e, x).v; }

Jet2 eval_jet2(const ProfileExpression& e, double x) {
    Jet2 r = eval_node<Jet2>(e.root(), Jet2::variable(x));
    if (!std::isfinite(r.v) || !std::isfinite(r.d1) || !std::isfinite(r.d2))
        throw OverflowError("expression value or derivative overflows at x = " + format_number(x));
    return r;
}

bool structurally_equal(const Node& a, const Node& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case Node::Kind::Number: return a.number == b.number;
        case Node::Kind::Var: return true;
        case Node::Kind::Pow:
            return a.exponent == b.exponent && a.exponent_integral == b.exponent_integral &&
                   structurally_equal(*a.a, *b.a);
        default: break;
    }
    if (a.a && !structurally_equal(*a.a, *b.a)) return false;
    if (a.b && !structurally_equal(*a.b, *b.b)) return false;
    return true;
}

} // namespace hartogs::expr
