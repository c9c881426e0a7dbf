#include "nullframe/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>

namespace nullframe {

namespace {

const std::map<std::string, FuncKind, std::less<>> kFunctions = {
    {"sin", FuncKind::Sin},   {"cos", FuncKind::Cos}, {"sinh", FuncKind::Sinh},
    {"cosh", FuncKind::Cosh}, {"exp", FuncKind::Exp}, {"sqrt", FuncKind::Sqrt}};

using NodePtr = std::shared_ptr<const ExprNode>;

NodePtr make_node(ExprNode n) { return std::make_shared<const ExprNode>(std::move(n)); }

NodePtr constant_node(double v) {
    ExprNode n;
    n.kind = ExprNode::Kind::Constant;
    n.constant = v;
    return make_node(std::move(n));
}

NodePtr unary_node(ExprNode::Kind kind, NodePtr a) {
    ExprNode n;
    n.kind = kind;
    n.a = std::move(a);
    return make_node(std::move(n));
}

NodePtr binary_node(ExprNode::Kind kind, NodePtr a, NodePtr b) {
    ExprNode n;
    n.kind = kind;
    n.a = std::move(a);
    n.b = std::move(b);
    return make_node(std::move(n));
}

// ---------------------------------------------------------------------------
// Tokenizer / recursive-descent parser
// ---------------------------------------------------------------------------

struct Token {
    enum class Kind { Number, Ident, Op, LParen, RParen, End };
    Kind kind = Kind::End;
    double number = 0.0;
    std::string text;
    char op = 0;
    std::size_t pos = 0;
};

class Parser {
public:
    Parser(std::string_view text, const std::vector<std::string>& variables)
        : text_(text), variables_(variables) {
        advance();
    }

    NodePtr parse() {
        NodePtr e = parse_expr();
        if (tok_.kind != Token::Kind::End)
            throw SyntaxError("unexpected trailing input", tok_.pos);
        return e;
    }

private:
    std::string_view text_;
    const std::vector<std::string>& variables_;
    std::size_t cursor_ = 0;
    Token tok_;

    void advance() {
        while (cursor_ < text_.size() &&
               std::isspace(static_cast<unsigned char>(text_[cursor_])))
            ++cursor_;
        tok_ = Token{};
        tok_.pos = cursor_;
        if (cursor_ >= text_.size()) {
            tok_.kind = Token::Kind::End;
            return;
        }
        const char c = text_[cursor_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const char* begin = text_.data() + cursor_;
            const char* end = text_.data() + text_.size();
            double value = 0.0;
            auto res = std::from_chars(begin, end, value);
            if (res.ec != std::errc{})
                throw SyntaxError("malformed number", cursor_);
            tok_.kind = Token::Kind::Number;
            tok_.number = value;
            cursor_ += static_cast<std::size_t>(res.ptr - begin);
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t end = cursor_;
            while (end < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_'))
                ++end;
            tok_.kind = Token::Kind::Ident;
            tok_.text = std::string(text_.substr(cursor_, end - cursor_));
            cursor_ = end;
            return;
        }
        switch (c) {
            case '(':
                tok_.kind = Token::Kind::LParen;
                break;
            case ')':
                tok_.kind = Token::Kind::RParen;
                break;
            case '+': case '-': case '*': case '/': case '^':
                tok_.kind = Token::Kind::Op;
                tok_.op = c;
                break;
            default:
                throw SyntaxError(std::string("unexpected character '") + c + "'", cursor_);
        }
        ++cursor_;
    }

    bool accept_op(char op) {
        if (tok_.kind == Token::Kind::Op && tok_.op == op) {
            advance();
            return true;
        }
        return false;
    }

    NodePtr parse_expr() {
        NodePtr lhs = parse_term();
        for (;;) {
            if (accept_op('+'))
                lhs = binary_node(ExprNode::Kind::Add, lhs, parse_term());
            else if (accept_op('-'))
                lhs = binary_node(ExprNode::Kind::Sub, lhs, parse_term());
            else
                return lhs;
        }
    }

    NodePtr parse_term() {
        NodePtr lhs = parse_factor();
        for (;;) {
            if (accept_op('*'))
                lhs = binary_node(ExprNode::Kind::Mul, lhs, parse_factor());
            else if (accept_op('/'))
                lhs = binary_node(ExprNode::Kind::Div, lhs, parse_factor());
            else
                return lhs;
        }
    }

    NodePtr parse_factor() {
        if (accept_op('-')) return unary_node(ExprNode::Kind::Neg, parse_factor());
        if (accept_op('+')) return parse_factor();
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_primary();
        if (!accept_op('^')) return base;
        const std::size_t exp_pos = tok_.pos;
        NodePtr exponent = parse_factor();  // right-associative, allows -2
        if (!is_constant_subtree(*exponent))
            throw SyntaxError("power exponent must be constant", exp_pos);
        ExprNode n;
        n.kind = ExprNode::Kind::Pow;
        n.constant = fold_constant(*exponent);
        n.a = base;
        return make_node(std::move(n));
    }

    NodePtr parse_primary() {
        if (tok_.kind == Token::Kind::Number) {
            const double v = tok_.number;
            advance();
            return constant_node(v);
        }
        if (tok_.kind == Token::Kind::Ident) {
            const std::string name = tok_.text;
            advance();
            if (tok_.kind == Token::Kind::LParen) {
                auto fn = kFunctions.find(name);
                if (fn == kFunctions.end()) throw UnknownIdentifier(name);
                advance();
                NodePtr arg = parse_expr();
                expect_rparen();
                ExprNode n;
                n.kind = ExprNode::Kind::Call;
                n.func = fn->second;
                n.a = std::move(arg);
                return make_node(std::move(n));
            }
            auto it = std::find(variables_.begin(), variables_.end(), name);
            if (it == variables_.end()) throw UnknownIdentifier(name);
            ExprNode n;
            n.kind = ExprNode::Kind::Variable;
            n.var_index = static_cast<int>(it - variables_.begin());
            return make_node(std::move(n));
        }
        if (tok_.kind == Token::Kind::LParen) {
            advance();
            NodePtr e = parse_expr();
            expect_rparen();
            return e;
        }
        throw SyntaxError("expected a number, variable, function or '('", tok_.pos);
    }

    void expect_rparen() {
        if (tok_.kind != Token::Kind::RParen)
            throw SyntaxError("expected ')'", tok_.pos);
        advance();
    }

    static bool is_constant_subtree(const ExprNode& n) {
        switch (n.kind) {
            case ExprNode::Kind::Constant: return true;
            case ExprNode::Kind::Variable: return false;
            case ExprNode::Kind::Neg:
            case ExprNode::Kind::Pow:
            case ExprNode::Kind::Call: return is_constant_subtree(*n.a);
            default: return is_constant_subtree(*n.a) && is_constant_subtree(*n.b);
        }
    }

    static double fold_constant(const ExprNode& n);
};

// ---------------------------------------------------------------------------
// Generic evaluation
// ---------------------------------------------------------------------------

// Plain double arithmetic with the same domain checks the series types use.
struct ScalarValue {
    double v = 0.0;
    ScalarValue operator-() const { return {-v}; }
    friend ScalarValue operator+(ScalarValue a, ScalarValue b) { return {a.v + b.v}; }
    friend ScalarValue operator-(ScalarValue a, ScalarValue b) { return {a.v - b.v}; }
    friend ScalarValue operator*(ScalarValue a, ScalarValue b) { return {a.v * b.v}; }
    friend ScalarValue operator/(ScalarValue a, ScalarValue b) {
        if (b.v == 0.0) throw DomainError("division by zero");
        return {a.v / b.v};
    }
    friend ScalarValue pow(ScalarValue a, double p) {
        const double rounded = std::nearbyint(p);
        if (std::abs(p - rounded) != 0.0 && a.v < 0.0)
            throw DomainError("pow with non-integer exponent requires a non-negative base");
        if (a.v == 0.0 && p < 0.0) throw DomainError("zero raised to a negative power");
        return {std::pow(a.v, p)};
    }
    friend ScalarValue sin(ScalarValue a) { return {std::sin(a.v)}; }
    friend ScalarValue cos(ScalarValue a) { return {std::cos(a.v)}; }
    friend ScalarValue sinh(ScalarValue a) { return {std::sinh(a.v)}; }
    friend ScalarValue cosh(ScalarValue a) { return {std::cosh(a.v)}; }
    friend ScalarValue exp(ScalarValue a) { return {std::exp(a.v)}; }
    friend ScalarValue sqrt(ScalarValue a) {
        if (a.v < 0.0) throw DomainError("sqrt of a negative value");
        return {std::sqrt(a.v)};
    }
};

// Degree-2 multivariate Taylor value; unary functions go through the scalar
// chain rule with (f, f', f'') at the point.
struct ProbeValue {
    double v = 0.0;
    std::array<double, 4> g{};
    std::array<std::array<double, 4>, 4> h{};

    static ProbeValue constant(double value) {
        ProbeValue p;
        p.v = value;
        return p;
    }

    static ProbeValue coordinate(double value, int axis) {
        ProbeValue p;
        p.v = value;
        p.g[static_cast<std::size_t>(axis)] = 1.0;
        return p;
    }

    ProbeValue chain(double f, double fp, double fpp) const {
        ProbeValue r;
        r.v = f;
        for (int i = 0; i < 4; ++i) r.g[i] = fp * g[i];
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) r.h[i][j] = fpp * g[i] * g[j] + fp * h[i][j];
        return r;
    }

    ProbeValue operator-() const { return chain(-v, -1.0, 0.0); }

    friend ProbeValue operator+(const ProbeValue& a, const ProbeValue& b) {
        ProbeValue r;
        r.v = a.v + b.v;
        for (int i = 0; i < 4; ++i) r.g[i] = a.g[i] + b.g[i];
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) r.h[i][j] = a.h[i][j] + b.h[i][j];
        return r;
    }

    friend ProbeValue operator-(const ProbeValue& a, const ProbeValue& b) {
        return a + (-b);
    }

    friend ProbeValue operator*(const ProbeValue& a, const ProbeValue& b) {
        ProbeValue r;
        r.v = a.v * b.v;
        for (int i = 0; i < 4; ++i) r.g[i] = a.g[i] * b.v + a.v * b.g[i];
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                r.h[i][j] = a.h[i][j] * b.v + a.g[i] * b.g[j] + a.g[j] * b.g[i] +
                            a.v * b.h[i][j];
        return r;
    }

    friend ProbeValue operator/(const ProbeValue& a, const ProbeValue& b) {
        if (b.v == 0.0) throw DomainError("division by zero");
        const double inv = 1.0 / b.v;
        return a * b.chain(inv, -inv * inv, 2.0 * inv * inv * inv);
    }

    friend ProbeValue pow(const ProbeValue& a, double p) {
        const double rounded = std::nearbyint(p);
        const bool is_int = std::abs(p - rounded) == 0.0;
        if (!is_int && a.v < 0.0)
            throw DomainError("pow with non-integer exponent requires a non-negative base");
        if (a.v == 0.0) {
            if (p < 0.0) throw DomainError("zero raised to a negative power");
            if (!is_int && p < 2.0)
                throw DomainError("pow is not twice differentiable at zero for this exponent");
        }
        const double f = std::pow(a.v, p);
        const double fp = p == 0.0 ? 0.0 : p * std::pow(a.v, p - 1.0);
        const double fpp = (p == 0.0 || p == 1.0) ? 0.0 : p * (p - 1.0) * std::pow(a.v, p - 2.0);
        return a.chain(f, fp, fpp);
    }

    friend ProbeValue sin(const ProbeValue& a) {
        return a.chain(std::sin(a.v), std::cos(a.v), -std::sin(a.v));
    }
    friend ProbeValue cos(const ProbeValue& a) {
        return a.chain(std::cos(a.v), -std::sin(a.v), -std::cos(a.v));
    }
    friend ProbeValue sinh(const ProbeValue& a) {
        return a.chain(std::sinh(a.v), std::cosh(a.v), std::sinh(a.v));
    }
    friend ProbeValue cosh(const ProbeValue& a) {
        return a.chain(std::cosh(a.v), std::sinh(a.v), std::cosh(a.v));
    }
    friend ProbeValue exp(const ProbeValue& a) {
        const double e = std::exp(a.v);
        return a.chain(e, e, e);
    }
    friend ProbeValue sqrt(const ProbeValue& a) {
        if (a.v < 0.0) throw DomainError("sqrt of a negative value");
        if (a.v == 0.0) throw DomainError("sqrt is not differentiable at zero");
        const double r = std::sqrt(a.v);
        return a.chain(r, 0.5 / r, -0.25 / (r * a.v));
    }
};

template <typename T>
T eval_node(const ExprNode& n, std::span<const T> vars) {
    switch (n.kind) {
        case ExprNode::Kind::Constant: {
            if constexpr (std::is_same_v<T, ScalarValue>) return {n.constant};
            else if constexpr (std::is_same_v<T, ProbeValue>) return T::constant(n.constant);
            else return Jet::constant(n.constant, vars[0].order());
        }
        case ExprNode::Kind::Variable:
            return vars[static_cast<std::size_t>(n.var_index)];
        case ExprNode::Kind::Neg:
            return -eval_node(*n.a, vars);
        case ExprNode::Kind::Add:
            return eval_node(*n.a, vars) + eval_node(*n.b, vars);
        case ExprNode::Kind::Sub:
            return eval_node(*n.a, vars) - eval_node(*n.b, vars);
        case ExprNode::Kind::Mul:
            return eval_node(*n.a, vars) * eval_node(*n.b, vars);
        case ExprNode::Kind::Div:
            return eval_node(*n.a, vars) / eval_node(*n.b, vars);
        case ExprNode::Kind::Pow:
            return pow(eval_node(*n.a, vars), n.constant);
        case ExprNode::Kind::Call: {
            T arg = eval_node(*n.a, vars);
            switch (n.func) {
                case FuncKind::Sin: return sin(arg);
                case FuncKind::Cos: return cos(arg);
                case FuncKind::Sinh: return sinh(arg);
                case FuncKind::Cosh: return cosh(arg);
                case FuncKind::Exp: return exp(arg);
                case FuncKind::Sqrt: return sqrt(arg);
            }
            throw Error("unreachable function kind");
        }
    }
    throw Error("unreachable node kind");
}

double Parser::fold_constant(const ExprNode& n) {
    return eval_node<ScalarValue>(n, std::span<const ScalarValue>{}).v;
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

int precedence(const ExprNode& n) {
    switch (n.kind) {
        case ExprNode::Kind::Add:
        case ExprNode::Kind::Sub: return 1;
        case ExprNode::Kind::Mul:
        case ExprNode::Kind::Div: return 2;
        case ExprNode::Kind::Neg: return 3;
        case ExprNode::Kind::Pow: return 4;
        default: return 5;
    }
}

void print_node(const ExprNode& n, const std::vector<std::string>& vars, std::string& out) {
    auto child = [&](const ExprNode& c, int min_prec) {
        if (precedence(c) < min_prec) {
            out += '(';
            print_node(c, vars, out);
            out += ')';
        } else {
            print_node(c, vars, out);
        }
    };
    switch (n.kind) {
        case ExprNode::Kind::Constant:
            if (n.constant < 0.0) {
                out += '(' + format_double(n.constant) + ')';
            } else {
                out += format_double(n.constant);
            }
            return;
        case ExprNode::Kind::Variable:
            out += vars[static_cast<std::size_t>(n.var_index)];
            return;
        case ExprNode::Kind::Neg:
            out += '-';
            child(*n.a, 3);
            return;
        case ExprNode::Kind::Add:
            child(*n.a, 1);
            out += " + ";
            child(*n.b, 2);
            return;
        case ExprNode::Kind::Sub:
            child(*n.a, 1);
            out += " - ";
            child(*n.b, 2);
            return;
        case ExprNode::Kind::Mul:
            child(*n.a, 2);
            out += "*";
            child(*n.b, 3);
            return;
        case ExprNode::Kind::Div:
            child(*n.a, 2);
            out += "/";
            child(*n.b, 3);
            return;
        case ExprNode::Kind::Pow:
            child(*n.a, 5);
            out += '^';
            if (n.constant < 0.0) {
                out += '(' + format_double(n.constant) + ')';
            } else {
                out += format_double(n.constant);
            }
            return;
        case ExprNode::Kind::Call:
            switch (n.func) {
                case FuncKind::Sin: out += "sin"; break;
                case FuncKind::Cos: out += "cos"; break;
                case FuncKind::Sinh: out += "sinh"; break;
                case FuncKind::Cosh: out += "cosh"; break;
                case FuncKind::Exp: out += "exp"; break;
                case FuncKind::Sqrt: out += "sqrt"; break;
            }
            out += '(';
            print_node(*n.a, vars, out);
            out += ')';
            return;
    }
}

NodePtr substitute_node(const ExprNode& n, const std::vector<ExprAst>& repl) {
    switch (n.kind) {
        case ExprNode::Kind::Constant:
            return constant_node(n.constant);
        case ExprNode::Kind::Variable:
            return repl[static_cast<std::size_t>(n.var_index)].root_ptr();
        case ExprNode::Kind::Neg:
            return unary_node(ExprNode::Kind::Neg, substitute_node(*n.a, repl));
        case ExprNode::Kind::Pow: {
            ExprNode out;
            out.kind = ExprNode::Kind::Pow;
            out.constant = n.constant;
            out.a = substitute_node(*n.a, repl);
            return make_node(std::move(out));
        }
        case ExprNode::Kind::Call: {
            ExprNode out;
            out.kind = ExprNode::Kind::Call;
            out.func = n.func;
            out.a = substitute_node(*n.a, repl);
            return make_node(std::move(out));
        }
        default:
            return binary_node(n.kind, substitute_node(*n.a, repl),
                               substitute_node(*n.b, repl));
    }
}

bool equal_nodes(const ExprNode& a, const ExprNode& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case ExprNode::Kind::Constant: return a.constant == b.constant;
        case ExprNode::Kind::Variable: return a.var_index == b.var_index;
        case ExprNode::Kind::Neg: return equal_nodes(*a.a, *b.a);
        case ExprNode::Kind::Pow:
            return a.constant == b.constant && equal_nodes(*a.a, *b.a);
        case ExprNode::Kind::Call:
            return a.func == b.func && equal_nodes(*a.a, *b.a);
        default:
            return equal_nodes(*a.a, *b.a) && equal_nodes(*a.b, *b.b);
    }
}

void require_finite(double v) {
    if (!std::isfinite(v)) throw DomainError("evaluation produced a non-finite value");
}

}  // namespace

const ExprNode& ExprAst::root() const {
    if (!root_) throw InvalidArgument("empty expression");
    return *root_;
}

const std::vector<std::string>& ExprAst::variables() const {
    static const std::vector<std::string> kEmpty;
    return variables_ ? *variables_ : kEmpty;
}

ExprAst parse_expr(std::string_view text, const std::vector<std::string>& variables) {
    if (text.empty()) throw SyntaxError("empty expression", 0);
    Parser p(text, variables);
    return ExprAst(p.parse(), variables);
}

std::string to_string(const ExprAst& ast) {
    std::string out;
    print_node(ast.root(), ast.variables(), out);
    return out;
}

bool structurally_equal(const ExprAst& a, const ExprAst& b) {
    return equal_nodes(a.root(), b.root());
}

ExprAst substitute(const ExprAst& f, const std::vector<ExprAst>& replacements) {
    if (replacements.size() != f.variables().size())
        throw InvalidArgument("substitute: one replacement per variable required");
    if (replacements.empty()) return f;
    for (const ExprAst& r : replacements)
        if (r.empty()) throw InvalidArgument("substitute: empty replacement");
    return ExprAst(substitute_node(f.root(), replacements),
                   replacements.front().variables());
}

double eval_scalar(const ExprAst& ast, std::span<const double> values) {
    if (values.size() != ast.variables().size())
        throw InvalidArgument("eval_scalar: wrong number of variable values");
    std::vector<ScalarValue> vars(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) vars[i] = {values[i]};
    const double v = eval_node<ScalarValue>(ast.root(), vars).v;
    require_finite(v);
    return v;
}

Jet eval_jet(const ExprAst& ast, double t0, int order) {
    if (ast.variables().size() != 1)
        throw InvalidArgument("eval_jet: expression must have exactly one variable");
    if (order < 1) throw InvalidArgument("eval_jet: order must be >= 1");
    const Jet vars[] = {Jet::variable(t0, order)};
    Jet r = eval_node<Jet>(ast.root(), std::span<const Jet>(vars, 1));
    for (double c : r.coefficients()) require_finite(c);
    return r;
}

FieldProbe eval_field(const ExprAst& ast, const Vec4& p) {
    if (ast.variables().size() != 4)
        throw InvalidArgument("eval_field: expression must be declared over x1..x4");
    const ProbeValue vars[] = {
        ProbeValue::coordinate(p.x1, 0), ProbeValue::coordinate(p.x2, 1),
        ProbeValue::coordinate(p.x3, 2), ProbeValue::coordinate(p.x4, 3)};
    const ProbeValue r = eval_node<ProbeValue>(ast.root(), std::span<const ProbeValue>(vars, 4));
    FieldProbe probe;
    probe.value = r.v;
    probe.partials = {r.g[0], r.g[1], r.g[2], r.g[3]};
    probe.second = r.h;
    require_finite(probe.value);
    for (int i = 0; i < 4; ++i) {
        require_finite(probe.partials[i]);
        for (int j = 0; j < 4; ++j) require_finite(probe.second[i][j]);
    }
    return probe;
}

}  // namespace nullframe
