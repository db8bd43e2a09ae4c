#include "conecert/expr.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <span>

namespace conecert {

ParseError::ParseError(std::size_t offset, std::string message, std::string expected)
    : std::runtime_error("parse error at offset " + std::to_string(offset) + ": " + message
                         + (expected.empty() ? std::string{} : " (expected " + expected + ")")),
      offset_(offset), message_(std::move(message)), expected_(std::move(expected))
{
}

EvalError::EvalError(std::size_t offset, const std::string& message)
    : std::runtime_error("evaluation error at offset " + std::to_string(offset) + ": " + message),
      offset_(offset)
{
}

namespace {

struct BuiltinInfo {
    Builtin fn;
    std::string_view name;
    int arity;
};

constexpr std::array<BuiltinInfo, 10> kBuiltins{{
    {Builtin::exp, "exp", 1},
    {Builtin::cos, "cos", 1},
    {Builtin::sin, "sin", 1},
    {Builtin::ln, "ln", 1},
    {Builtin::min, "min", 2},
    {Builtin::max, "max", 2},
    {Builtin::phi, "phi", 1},
    {Builtin::psi, "psi", 1},
    {Builtin::capphi, "capphi", 1},
    {Builtin::abs, "abs", 1},
}};

const BuiltinInfo& info(Builtin b)
{
    for (const auto& bi : kBuiltins) {
        if (bi.fn == b) {
            return bi;
        }
    }
    throw std::logic_error("unknown builtin");
}

// Affine piece slope*z + intercept on [lo, hi].
struct Piece {
    double lo;
    double hi;
    double slope;
    double intercept;
};

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::array<Piece, 3> kPhiPieces{{{0.0, 0.5, 0.0, 0.0}, {0.5, 1.0, 2.0, -1.0}, {1.0, kInf, 0.0, 1.0}}};
constexpr std::array<Piece, 2> kPsiPieces{{{0.0, 1.0, 1.0, 0.0}, {1.0, kInf, 0.0, 1.0}}};
constexpr std::array<Piece, 3> kCapphiPieces{{{0.0, 0.5, 0.0, 1.0}, {0.5, 1.0, -2.0, 2.0}, {1.0, kInf, 0.0, 0.0}}};

Interval clamp_nonneg(Interval z) { return {std::max(z.lo, 0.0), std::max(z.hi, 0.0)}; }

// Splits z at the piece breakpoints and hulls the affine images.
Interval piecewise(std::span<const Piece> pieces, Interval z)
{
    z = clamp_nonneg(z);
    std::optional<Interval> out;
    for (const auto& p : pieces) {
        const auto part = intersect(z, Interval{p.lo, p.hi});
        if (!part) {
            continue;
        }
        const Interval img = p.slope == 0.0 ? Interval(p.intercept) : p.slope * *part + p.intercept;
        out = out ? hull(*out, img) : img;
    }
    return *out;
}

// ---------------------------------------------------------------- parser

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    std::shared_ptr<const ExprNode> parse_all()
    {
        skip_ws();
        if (pos_ == src_.size()) {
            throw ParseError(pos_, "empty expression", "an expression");
        }
        auto e = parse_expr();
        skip_ws();
        if (pos_ != src_.size()) {
            throw ParseError(pos_, std::string("unexpected character '") + src_[pos_] + "'",
                             "an operator or end of input");
        }
        return e;
    }

private:
    using NodePtr = std::shared_ptr<const ExprNode>;

    std::string_view src_;
    std::size_t pos_ = 0;
    int depth_ = 0;

    static constexpr int kMaxDepth = 512;

    struct DepthGuard {
        Parser& p;
        explicit DepthGuard(Parser& parser) : p(parser)
        {
            if (++p.depth_ > kMaxDepth) {
                throw ParseError(p.pos_, "expression nested too deeply", "");
            }
        }
        ~DepthGuard() { --p.depth_; }
        DepthGuard(const DepthGuard&) = delete;
        DepthGuard& operator=(const DepthGuard&) = delete;
    };

    void skip_ws()
    {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) {
            ++pos_;
        }
    }

    bool peek(char c)
    {
        skip_ws();
        return pos_ < src_.size() && src_[pos_] == c;
    }

    void expect(char c, const char* what)
    {
        if (!peek(c)) {
            throw ParseError(pos_, pos_ == src_.size() ? "unexpected end of input" : "unexpected token",
                             what);
        }
        ++pos_;
    }

    static NodePtr binary(NodeKind k, NodePtr lhs, NodePtr rhs, std::size_t offset)
    {
        auto n = std::make_shared<ExprNode>();
        n->kind = k;
        n->offset = offset;
        n->args = {std::move(lhs), std::move(rhs)};
        return n;
    }

    NodePtr parse_expr()
    {
        DepthGuard guard(*this);
        auto lhs = parse_term();
        while (true) {
            skip_ws();
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) {
                const std::size_t at = pos_;
                const NodeKind k = src_[pos_] == '+' ? NodeKind::add : NodeKind::sub;
                ++pos_;
                lhs = binary(k, lhs, parse_term(), at);
            } else {
                return lhs;
            }
        }
    }

    NodePtr parse_term()
    {
        auto lhs = parse_unary();
        while (true) {
            skip_ws();
            if (pos_ < src_.size() && (src_[pos_] == '*' || src_[pos_] == '/')) {
                const std::size_t at = pos_;
                const NodeKind k = src_[pos_] == '*' ? NodeKind::mul : NodeKind::div;
                ++pos_;
                lhs = binary(k, lhs, parse_unary(), at);
            } else {
                return lhs;
            }
        }
    }

    NodePtr parse_unary()
    {
        DepthGuard guard(*this);
        skip_ws();
        if (pos_ < src_.size() && (src_[pos_] == '-' || src_[pos_] == '+')) {
            const std::size_t at = pos_;
            const bool negate = src_[pos_] == '-';
            ++pos_;
            auto operand = parse_unary();
            if (!negate) {
                return operand;
            }
            auto n = std::make_shared<ExprNode>();
            n->kind = NodeKind::neg;
            n->offset = at;
            n->args = {std::move(operand)};
            return n;
        }
        return parse_power();
    }

    NodePtr parse_power()
    {
        auto base = parse_primary();
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == '^') {
            const std::size_t at = pos_;
            ++pos_;
            return binary(NodeKind::pow, base, parse_unary(), at);
        }
        return base;
    }

    NodePtr parse_number()
    {
        const std::size_t start = pos_;
        std::size_t p = pos_;
        auto digits = [&] {
            const std::size_t s = p;
            while (p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]))) {
                ++p;
            }
            return p - s;
        };
        std::size_t n = digits();
        if (p < src_.size() && src_[p] == '.') {
            ++p;
            n += digits();
        }
        if (n == 0) {
            throw ParseError(start, "malformed number", "digits");
        }
        if (p < src_.size() && (src_[p] == 'e' || src_[p] == 'E')) {
            std::size_t q = p + 1;
            if (q < src_.size() && (src_[q] == '+' || src_[q] == '-')) {
                ++q;
            }
            if (q < src_.size() && std::isdigit(static_cast<unsigned char>(src_[q]))) {
                p = q;
                digits();
            } else {
                throw ParseError(q, "malformed exponent", "exponent digits");
            }
        }
        double v = 0.0;
        const auto res = std::from_chars(src_.data() + start, src_.data() + p, v);
        if (res.ec != std::errc{} || res.ptr != src_.data() + p || !std::isfinite(v)) {
            throw ParseError(start, "number out of range", "a finite number");
        }
        pos_ = p;
        auto node = std::make_shared<ExprNode>();
        node->kind = NodeKind::constant;
        node->value = v;
        node->offset = start;
        return node;
    }

    NodePtr parse_primary()
    {
        skip_ws();
        if (pos_ == src_.size()) {
            throw ParseError(pos_, "unexpected end of input", "a number, variable, call or '('");
        }
        const char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            auto e = parse_expr();
            expect(')', "')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            return parse_number();
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t start = pos_;
            while (pos_ < src_.size()
                   && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
                ++pos_;
            }
            const std::string_view name = src_.substr(start, pos_ - start);
            auto node = std::make_shared<ExprNode>();
            node->offset = start;
            if (name == "x1" || name == "x2") {
                if (peek('(')) {
                    throw ParseError(pos_, "variable used as a function", "an operator");
                }
                node->kind = NodeKind::variable;
                node->var = name == "x1" ? 0 : 1;
                return node;
            }
            if (name == "pi") {
                node->kind = NodeKind::pi;
                return node;
            }
            const auto it = std::find_if(kBuiltins.begin(), kBuiltins.end(),
                                         [&](const BuiltinInfo& b) { return b.name == name; });
            if (it == kBuiltins.end()) {
                throw ParseError(start, "unknown identifier '" + std::string(name) + "'",
                                 "x1, x2, pi or a builtin function");
            }
            expect('(', "'(' after function name");
            node->kind = NodeKind::call;
            node->fn = it->fn;
            node->args.push_back(parse_expr());
            while (peek(',')) {
                ++pos_;
                node->args.push_back(parse_expr());
            }
            if (static_cast<int>(node->args.size()) != it->arity) {
                throw ParseError(start,
                                 std::string(name) + " takes " + std::to_string(it->arity)
                                     + " argument(s), got " + std::to_string(node->args.size()),
                                 "");
            }
            expect(')', "')' closing the argument list");
            return node;
        }
        throw ParseError(pos_, std::string("unexpected character '") + c + "'",
                         "a number, variable, call or '('");
    }
};

// ------------------------------------------------------------ evaluation

double eval_node(const ExprNode& n, double x1, double x2)
{
    switch (n.kind) {
    case NodeKind::constant:
        return n.value;
    case NodeKind::pi:
        return std::numbers::pi;
    case NodeKind::variable:
        return n.var == 0 ? x1 : x2;
    case NodeKind::neg:
        return -eval_node(*n.args[0], x1, x2);
    case NodeKind::add:
        return eval_node(*n.args[0], x1, x2) + eval_node(*n.args[1], x1, x2);
    case NodeKind::sub:
        return eval_node(*n.args[0], x1, x2) - eval_node(*n.args[1], x1, x2);
    case NodeKind::mul:
        return eval_node(*n.args[0], x1, x2) * eval_node(*n.args[1], x1, x2);
    case NodeKind::div: {
        const double den = eval_node(*n.args[1], x1, x2);
        if (den == 0.0) {
            throw EvalError(n.offset, "division by zero");
        }
        return eval_node(*n.args[0], x1, x2) / den;
    }
    case NodeKind::pow: {
        const double b = eval_node(*n.args[0], x1, x2);
        const double e = eval_node(*n.args[1], x1, x2);
        const double r = std::pow(b, e);
        if (std::isnan(r) && !std::isnan(b) && !std::isnan(e)) {
            throw EvalError(n.offset, "power of a negative base with a non-integer exponent");
        }
        return r;
    }
    case NodeKind::call: {
        const double a = eval_node(*n.args[0], x1, x2);
        switch (n.fn) {
        case Builtin::exp:
            return std::exp(a);
        case Builtin::cos:
            return std::cos(a);
        case Builtin::sin:
            return std::sin(a);
        case Builtin::ln:
            if (!(a > 0.0)) {
                throw EvalError(n.offset, "ln of a non-positive value");
            }
            return std::log(a);
        case Builtin::min:
            return std::min(a, eval_node(*n.args[1], x1, x2));
        case Builtin::max:
            return std::max(a, eval_node(*n.args[1], x1, x2));
        case Builtin::phi:
            return phi(a);
        case Builtin::psi:
            return psi(a);
        case Builtin::capphi:
            return capphi(a);
        case Builtin::abs:
            return std::fabs(a);
        }
    }
    }
    throw EvalError(n.offset, "unknown node");
}

std::optional<unsigned> natural_exponent(const ExprNode& n)
{
    if (n.kind != NodeKind::constant || n.value < 0.0 || n.value != std::floor(n.value)
        || n.value > 1024.0) {
        return std::nullopt;
    }
    return static_cast<unsigned>(n.value);
}

Interval eval_node(const ExprNode& n, Interval x1, Interval x2)
{
    try {
        switch (n.kind) {
        case NodeKind::constant:
            return Interval(n.value);
        case NodeKind::pi:
            return pi_interval();
        case NodeKind::variable:
            return n.var == 0 ? x1 : x2;
        case NodeKind::neg:
            return -eval_node(*n.args[0], x1, x2);
        case NodeKind::add:
            return eval_node(*n.args[0], x1, x2) + eval_node(*n.args[1], x1, x2);
        case NodeKind::sub:
            return eval_node(*n.args[0], x1, x2) - eval_node(*n.args[1], x1, x2);
        case NodeKind::mul:
            return eval_node(*n.args[0], x1, x2) * eval_node(*n.args[1], x1, x2);
        case NodeKind::div:
            return eval_node(*n.args[0], x1, x2) / eval_node(*n.args[1], x1, x2);
        case NodeKind::pow: {
            const auto k = natural_exponent(*n.args[1]);
            if (!k) {
                throw EvalError(n.offset, "interval evaluation needs a constant natural exponent");
            }
            return pow_nat(eval_node(*n.args[0], x1, x2), *k);
        }
        case NodeKind::call: {
            const Interval a = eval_node(*n.args[0], x1, x2);
            switch (n.fn) {
            case Builtin::exp:
                return exp(a);
            case Builtin::cos:
                return cos(a);
            case Builtin::sin:
                return sin(a);
            case Builtin::ln:
                return log(a);
            case Builtin::min:
                return min(a, eval_node(*n.args[1], x1, x2));
            case Builtin::max:
                return max(a, eval_node(*n.args[1], x1, x2));
            case Builtin::phi:
                return phi(a);
            case Builtin::psi:
                return psi(a);
            case Builtin::capphi:
                return capphi(a);
            case Builtin::abs:
                return abs(a);
            }
        }
        }
    } catch (const DomainError& e) {
        throw EvalError(n.offset, e.what());
    }
    throw EvalError(n.offset, "unknown node");
}

void unparse_node(const ExprNode& n, std::string& out)
{
    auto bin = [&](const char* op) {
        out += '(';
        unparse_node(*n.args[0], out);
        out += op;
        unparse_node(*n.args[1], out);
        out += ')';
    };
    switch (n.kind) {
    case NodeKind::constant: {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", n.value);
        out += buf;
        return;
    }
    case NodeKind::pi:
        out += "pi";
        return;
    case NodeKind::variable:
        out += n.var == 0 ? "x1" : "x2";
        return;
    case NodeKind::neg:
        out += "(-";
        unparse_node(*n.args[0], out);
        out += ')';
        return;
    case NodeKind::add:
        bin(" + ");
        return;
    case NodeKind::sub:
        bin(" - ");
        return;
    case NodeKind::mul:
        bin(" * ");
        return;
    case NodeKind::div:
        bin(" / ");
        return;
    case NodeKind::pow:
        bin("^");
        return;
    case NodeKind::call:
        out += builtin_name(n.fn);
        out += '(';
        for (std::size_t i = 0; i < n.args.size(); ++i) {
            if (i > 0) {
                out += ", ";
            }
            unparse_node(*n.args[i], out);
        }
        out += ')';
        return;
    }
}

std::size_t count_nodes(const ExprNode& n)
{
    std::size_t c = 1;
    for (const auto& a : n.args) {
        c += count_nodes(*a);
    }
    return c;
}

bool same_node(const ExprNode& a, const ExprNode& b)
{
    if (a.kind != b.kind || a.args.size() != b.args.size()) {
        return false;
    }
    if (a.kind == NodeKind::constant && a.value != b.value) {
        return false;
    }
    if (a.kind == NodeKind::variable && a.var != b.var) {
        return false;
    }
    if (a.kind == NodeKind::call && a.fn != b.fn) {
        return false;
    }
    for (std::size_t i = 0; i < a.args.size(); ++i) {
        if (!same_node(*a.args[i], *b.args[i])) {
            return false;
        }
    }
    return true;
}

bool references(const ExprNode& n, int var)
{
    if (n.kind == NodeKind::variable) {
        return n.var == var;
    }
    return std::any_of(n.args.begin(), n.args.end(),
                       [var](const auto& a) { return references(*a, var); });
}

} // namespace

int builtin_arity(Builtin b) { return info(b).arity; }

std::string_view builtin_name(Builtin b) { return info(b).name; }

double phi(double z)
{
    z = std::max(z, 0.0);
    if (z <= 0.5) {
        return 0.0;
    }
    if (z <= 1.0) {
        return 2.0 * z - 1.0;
    }
    return 1.0;
}

double psi(double z)
{
    z = std::max(z, 0.0);
    return z <= 1.0 ? z : 1.0;
}

double capphi(double z)
{
    z = std::max(z, 0.0);
    if (z <= 0.5) {
        return 1.0;
    }
    if (z <= 1.0) {
        return 2.0 - 2.0 * z;
    }
    return 0.0;
}

Interval phi(Interval z) { return piecewise(kPhiPieces, z); }
Interval psi(Interval z) { return piecewise(kPsiPieces, z); }
Interval capphi(Interval z) { return piecewise(kCapphiPieces, z); }

Expr::Expr(std::shared_ptr<const ExprNode> root, std::string source)
    : root_(std::move(root)), source_(std::move(source))
{
}

Expr::Expr() : Expr(std::make_shared<const ExprNode>(), "0") {}

Expr Expr::parse(std::string_view src)
{
    Parser p(src);
    return Expr(p.parse_all(), std::string(src));
}

double Expr::eval(double x1, double x2) const { return eval_node(*root_, x1, x2); }

Interval Expr::eval(Interval x1, Interval x2) const { return eval_node(*root_, x1, x2); }

std::string Expr::unparse() const
{
    std::string out;
    unparse_node(*root_, out);
    return out;
}

std::size_t Expr::node_count() const { return count_nodes(*root_); }

bool Expr::same_tree(const Expr& other) const { return same_node(*root_, *other.root_); }

bool Expr::uses_variable(int var) const { return references(*root_, var); }

} // namespace conecert
