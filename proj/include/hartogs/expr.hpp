#pragma once

#include <memory>
#include <string>

#include "hartogs/jet2.hpp"

namespace hartogs::expr {

/// AST of the single-variable profile expression language.
///
/// Grammar (see README for the full write-up):
///   sum     := product (('+' | '-') product)*        left associative
///   product := unary (('*' | '/') unary)*            left associative
///   unary   := '-' unary | power
///   power   := atom ('^' exponent)*                  exponent is a signed literal
///   atom    := number | 'x' | 'exp' '(' sum ')' | 'log' '(' sum ')'
///            | 'sqrt' '(' sum ')' | '(' sum ')'
///
/// '^' binds tighter than unary minus, so "-x^2" is -(x^2). Exponents are
/// numeric literals (optionally parenthesised / negated): a literal written
/// without '.' or an exponent part is treated as an integer power, which is
/// defined for any base; fractional exponents require a positive base.
struct Node {
    enum class Kind { Number, Var, Neg, Add, Sub, Mul, Div, Pow, Exp, Log, Sqrt };

    Kind kind = Kind::Number;
    double number = 0.0;        // Kind::Number
    double exponent = 0.0;      // Kind::Pow
    bool exponent_integral = false;
    long long exponent_int = 0;
    std::shared_ptr<const Node> a, b;
};

using NodePtr = std::shared_ptr<const Node>;

/// A parsed expression together with its source text.
class ProfileExpression {
public:
    ProfileExpression() = default;
    ProfileExpression(NodePtr root, std::string text)
        : root_(std::move(root)), text_(std::move(text)) {}

    const Node& root() const { return *root_; }
    const std::string& text() const { return text_; }
    bool empty() const { return root_ == nullptr; }

private:
    NodePtr root_;
    std::string text_;
};

/// Parses `text`; throws SyntaxError (with byte offset) or InputError for
/// unknown identifiers.
ProfileExpression parse(const std::string& text);

/// Renders the AST back to text (fully parenthesised; structural round-trip).
std::string unparse(const ProfileExpression& e);

double eval(const ProfileExpression& e, double x);

/// Value plus first and second derivative at x, via jet arithmetic.
/// Throws DomainError for out-of-domain subterms and OverflowError when the
/// result (or a derivative) is not finite.
Jet2 eval_jet2(const ProfileExpression& e, double x);

bool structurally_equal(const Node& a, const Node& b);

} // namespace hartogs::expr
