#pragma once

#include <array>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nullframe/jet.hpp"
#include "nullframe/minkowski.hpp"

namespace nullframe {

enum class FuncKind { Sin, Cos, Sinh, Cosh, Exp, Sqrt };

// Immutable expression tree. Nodes are shared freely after parsing; the
// power exponent is folded to a constant at parse time.
struct ExprNode {
    enum class Kind { Constant, Variable, Neg, Add, Sub, Mul, Div, Pow, Call };

    Kind kind = Kind::Constant;
    double constant = 0.0;  // Constant value, or the Pow exponent
    int var_index = -1;
    FuncKind func = FuncKind::Sin;
    std::shared_ptr<const ExprNode> a;
    std::shared_ptr<const ExprNode> b;
};

class ExprAst {
public:
    ExprAst() = default;
    ExprAst(std::shared_ptr<const ExprNode> root, std::vector<std::string> variables)
        : root_(std::move(root)),
          variables_(std::make_shared<const std::vector<std::string>>(std::move(variables))) {}

    bool empty() const { return root_ == nullptr; }
    const ExprNode& root() const;
    std::shared_ptr<const ExprNode> root_ptr() const { return root_; }
    const std::vector<std::string>& variables() const;

private:
    std::shared_ptr<const ExprNode> root_;
    std::shared_ptr<const std::vector<std::string>> variables_;
};

// Grammar (see docs/expressions.md):
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := ('-'|'+') factor | power
//   power  := primary ('^' factor)?        -- exponent must fold to a constant
//   primary:= number | variable | func '(' expr ')' | '(' expr ')'
// Throws SyntaxError (with offset) or UnknownIdentifier.
ExprAst parse_expr(std::string_view text, const std::vector<std::string>& variables);

// Canonical text form; parse(to_string(ast)) is structurally identical to ast.
std::string to_string(const ExprAst& ast);

bool structurally_equal(const ExprAst& a, const ExprAst& b);

// Replaces every variable of `f` by the same-index expression in
// `replacements` (all sharing one variable set). Pure tree substitution; no
// simplification.
ExprAst substitute(const ExprAst& f, const std::vector<ExprAst>& replacements);

// Value, first partials and second partials of a scalar field at one point.
struct FieldProbe {
    double value = 0.0;
    Vec4 partials;
    std::array<std::array<double, 4>, 4> second{};  // symmetric

    double max_abs_second() const {
        double m = 0.0;
        for (const auto& row : second)
            for (double v : row) m = std::max(m, std::abs(v));
        return m;
    }
};

double eval_scalar(const ExprAst& ast, std::span<const double> values);

// Taylor expansion at t0 through the given order; the ast must have exactly
// one declared variable. Series arithmetic throughout.
Jet eval_jet(const ExprAst& ast, double t0, int order);

// Degree-2 multivariate Taylor arithmetic over (x1..x4); the ast must be
// declared over exactly those four variables.
FieldProbe eval_field(const ExprAst& ast, const Vec4& p);

}  // namespace nullframe
