#pragma once

#include "conecert/interval.hpp"

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace conecert {

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t offset, std::string message, std::string expected);

    /// Byte offset into the source text, never past its end.
    [[nodiscard]] std::size_t offset() const { return offset_; }
    [[nodiscard]] const std::string& message() const { return message_; }
    /// Hint naming what the parser was looking for; may be empty.
    [[nodiscard]] const std::string& expected() const { return expected_; }

private:
    std::size_t offset_;
    std::string message_;
    std::string expected_;
};

/// Evaluation failure (division by zero, log of a non-positive value, an
/// interval-mode exponent that is not a natural constant). Carries the byte
/// offset of the failing node in the source text.
class EvalError : public std::runtime_error {
public:
    EvalError(std::size_t offset, const std::string& message);
    [[nodiscard]] std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

enum class Builtin { exp, cos, sin, ln, min, max, phi, psi, capphi, abs };

/// Number of arguments a builtin takes.
int builtin_arity(Builtin b);
std::string_view builtin_name(Builtin b);

// Piecewise builtins, extended to z < 0 by clamping z to 0.
//   phi(z)    = 0 on [0,1/2],  2z-1 on (1/2,1], 1 beyond
//   psi(z)    = z on [0,1],    1 beyond
//   capphi(z) = 1 on [0,1/2],  2-2z on (1/2,1], 0 beyond
double phi(double z);
double psi(double z);
double capphi(double z);
Interval phi(Interval z);
Interval psi(Interval z);
Interval capphi(Interval z);

enum class NodeKind { constant, pi, variable, neg, add, sub, mul, div, pow, call };

struct ExprNode {
    NodeKind kind = NodeKind::constant;
    double value = 0.0;        // constant
    int var = 0;               // variable: 0 -> x1, 1 -> x2
    Builtin fn = Builtin::exp; // call
    std::vector<std::shared_ptr<const ExprNode>> args;
    std::size_t offset = 0; // byte offset of the node in its source
};

/// Immutable parsed nonlinearity f(x1, x2).
///
/// Grammar, loosest to tightest binding:
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := ('-' | '+') unary | power
///   power   := primary ('^' unary)?          right associative
///   primary := number | 'x1' | 'x2' | 'pi' | name '(' args ')' | '(' expr ')'
class Expr {
public:
    /// The constant 0.
    Expr();

    /// Parses src; throws ParseError.
    static Expr parse(std::string_view src);

    /// Throws EvalError.
    [[nodiscard]] double eval(double x1, double x2) const;
    /// Encloses the range of the expression over the box x1 × x2. Throws
    /// EvalError, including for '^' with a non-natural or non-constant
    /// exponent and for interval domain violations.
    [[nodiscard]] Interval eval(Interval x1, Interval x2) const;

    /// Fully parenthesised text that parses back to a structurally equal tree.
    [[nodiscard]] std::string unparse() const;
    [[nodiscard]] std::size_t node_count() const;
    [[nodiscard]] const std::string& source() const { return source_; }
    [[nodiscard]] const ExprNode& root() const { return *root_; }

    /// Structural equality (offsets and source text are ignored).
    [[nodiscard]] bool same_tree(const Expr& other) const;
    /// True when the tree references variable `var` (0 -> x1, 1 -> x2).
    [[nodiscard]] bool uses_variable(int var) const;

private:
    Expr(std::shared_ptr<const ExprNode> root, std::string source);

    std::shared_ptr<const ExprNode> root_;
    std::string source_;
};

} // namespace conecert
