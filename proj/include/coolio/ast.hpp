#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include "coolio/source_span.hpp"

namespace coolio {

inline constexpr std::string_view kSelfType = "SELF_TYPE";
inline constexpr std::string_view kSelf = "self";

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

enum class BinaryOp { Add, Sub, Mul, Div, Less, LessEqual, Equal };

std::string_view binary_op_spelling(BinaryOp op);
bool is_arithmetic(BinaryOp op);
bool is_comparison(BinaryOp op);

struct AssignExpr {
  std::string name;
  ExprPtr value;
};

/// `receiver[@static_type].method(args)`; a null receiver is a dispatch
/// on self written as `method(args)`.
struct DispatchExpr {
  ExprPtr receiver;
  std::optional<std::string> static_type;
  std::string method;
  std::vector<ExprPtr> args;
};

struct IfExpr {
  ExprPtr condition;
  ExprPtr then_branch;
  ExprPtr else_branch;
};

struct WhileExpr {
  ExprPtr condition;
  ExprPtr body;
};

struct BlockExpr {
  std::vector<ExprPtr> body;
};

struct LetBinding {
  std::string name;
  std::string type;
  ExprPtr init;  // may be null
  SourceSpan span;
};

/// Bindings are scoped sequentially, as if nested one per binding.
struct LetExpr {
  std::vector<LetBinding> bindings;
  ExprPtr body;
};

struct CaseBranch {
  std::string name;
  std::string type;
  ExprPtr body;
  SourceSpan span;
};

struct CaseExpr {
  ExprPtr scrutinee;
  std::vector<CaseBranch> branches;
};

struct NewExpr {
  std::string type;
};

struct IsVoidExpr {
  ExprPtr operand;
};

struct NegateExpr {
  ExprPtr operand;
};

struct NotExpr {
  ExprPtr operand;
};

struct ParenExpr {
  ExprPtr inner;
};

struct BinaryExpr {
  BinaryOp op;
  ExprPtr lhs;
  ExprPtr rhs;
};

struct IdentifierExpr {
  std::string name;
};

struct IntConst {
  std::int32_t value;
};

struct StringConst {
  std::string value;
};

struct BoolConst {
  bool value;
};

using ExprNode =
    std::variant<AssignExpr, DispatchExpr, IfExpr, WhileExpr, BlockExpr, LetExpr, CaseExpr,
                 NewExpr, IsVoidExpr, NegateExpr, NotExpr, ParenExpr, BinaryExpr, IdentifierExpr,
                 IntConst, StringConst, BoolConst>;

struct Expr {
  ExprNode node;
  SourceSpan span;
  /// Filled by the typechecker; empty until then.
  std::string static_type;
};

template <typename Node>
ExprPtr make_expr(Node node, SourceSpan span = {}) {
  return std::make_unique<Expr>(Expr{ExprNode(std::move(node)), span, {}});
}

struct Formal {
  std::string name;
  std::string type;
  SourceSpan span;
};

struct Method {
  std::string name;
  std::vector<Formal> formals;
  std::string return_type;
  ExprPtr body;
};

struct Attribute {
  std::string name;
  std::string declared_type;
  ExprPtr init;  // may be null
};

struct Feature {
  std::variant<Method, Attribute> kind;
  SourceSpan span;

  const Method* as_method() const { return std::get_if<Method>(&kind); }
  const Attribute* as_attribute() const { return std::get_if<Attribute>(&kind); }
};

struct ClassDecl {
  std::string name;
  std::optional<std::string> parent;  // absent means Object
  std::vector<Feature> features;
  SourceSpan span;
};

struct Program {
  std::vector<ClassDecl> classes;
};

/// Structural equality ignoring spans and inferred types; parenthesized
/// expressions compare equal to their contents.
bool equivalent(const Expr& a, const Expr& b);
bool equivalent(const Program& a, const Program& b);

/// Strips any number of enclosing ParenExpr wrappers.
const Expr& unparenthesized(const Expr& e);

/// Short node-kind label used by the AST dump ("assign", "dispatch", ...).
std::string_view expr_kind_name(const Expr& e);

/// The COOL string literal (with quotes and escapes) denoting `value`.
std::string quote_string(std::string_view value);

/// Indented tree, two spaces per depth, one `kind [line]` node per line.
std::string dump_ast(const Program& program);

/// Calls `visit(child)` for every direct child expression of `e`.
template <typename Visitor>
void for_each_child(const Expr& e, Visitor&& visit) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, AssignExpr>) {
          visit(*n.value);
        } else if constexpr (std::is_same_v<T, DispatchExpr>) {
          if (n.receiver) visit(*n.receiver);
          for (const auto& a : n.args) visit(*a);
        } else if constexpr (std::is_same_v<T, IfExpr>) {
          visit(*n.condition);
          visit(*n.then_branch);
          visit(*n.else_branch);
        } else if constexpr (std::is_same_v<T, WhileExpr>) {
          visit(*n.condition);
          visit(*n.body);
        } else if constexpr (std::is_same_v<T, BlockExpr>) {
          for (const auto& b : n.body) visit(*b);
        } else if constexpr (std::is_same_v<T, LetExpr>) {
          for (const auto& b : n.bindings) {
            if (b.init) visit(*b.init);
          }
          visit(*n.body);
        } else if constexpr (std::is_same_v<T, CaseExpr>) {
          visit(*n.scrutinee);
          for (const auto& b : n.branches) visit(*b.body);
        } else if constexpr (std::is_same_v<T, IsVoidExpr> || std::is_same_v<T, NegateExpr> ||
                             std::is_same_v<T, NotExpr>) {
          visit(*n.operand);
        } else if constexpr (std::is_same_v<T, ParenExpr>) {
          visit(*n.inner);
        } else if constexpr (std::is_same_v<T, BinaryExpr>) {
          visit(*n.lhs);
          visit(*n.rhs);
        }
      },
      e.node);
}

}  // namespace coolio
