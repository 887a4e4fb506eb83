#include "coolio/ast.hpp"

#include <sstream>

namespace coolio {

std::string_view binary_op_spelling(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
    case BinaryOp::Less: return "<";
    case BinaryOp::LessEqual: return "<=";
    case BinaryOp::Equal: return "=";
  }
  return "?";
}

bool is_arithmetic(BinaryOp op) {
  return op == BinaryOp::Add || op == BinaryOp::Sub || op == BinaryOp::Mul || op == BinaryOp::Div;
}

bool is_comparison(BinaryOp op) { return !is_arithmetic(op); }

const Expr& unparenthesized(const Expr& e) {
  const Expr* cur = &e;
  while (const auto* p = std::get_if<ParenExpr>(&cur->node)) cur = p->inner.get();
  return *cur;
}

namespace {

bool same_optional(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return !a && !b;
  return equivalent(*a, *b);
}

bool same_list(const std::vector<ExprPtr>& a, const std::vector<ExprPtr>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!equivalent(*a[i], *b[i])) return false;
  }
  return true;
}

struct SameNode {
  template <typename A, typename B>
  bool operator()(const A&, const B&) const {
    return false;
  }

  bool operator()(const AssignExpr& a, const AssignExpr& b) const {
    return a.name == b.name && equivalent(*a.value, *b.value);
  }
  bool operator()(const DispatchExpr& a, const DispatchExpr& b) const {
    return a.method == b.method && a.static_type == b.static_type &&
           same_optional(a.receiver, b.receiver) && same_list(a.args, b.args);
  }
  bool operator()(const IfExpr& a, const IfExpr& b) const {
    return equivalent(*a.condition, *b.condition) && equivalent(*a.then_branch, *b.then_branch) &&
           equivalent(*a.else_branch, *b.else_branch);
  }
  bool operator()(const WhileExpr& a, const WhileExpr& b) const {
    return equivalent(*a.condition, *b.condition) && equivalent(*a.body, *b.body);
  }
  bool operator()(const BlockExpr& a, const BlockExpr& b) const { return same_list(a.body, b.body); }
  bool operator()(const LetExpr& a, const LetExpr& b) const {
    if (a.bindings.size() != b.bindings.size()) return false;
    for (std::size_t i = 0; i < a.bindings.size(); ++i) {
      const auto& x = a.bindings[i];
      const auto& y = b.bindings[i];
      if (x.name != y.name || x.type != y.type || !same_optional(x.init, y.init)) return false;
    }
    return equivalent(*a.body, *b.body);
  }
  bool operator()(const CaseExpr& a, const CaseExpr& b) const {
    if (a.branches.size() != b.branches.size()) return false;
    for (std::size_t i = 0; i < a.branches.size(); ++i) {
      const auto& x = a.branches[i];
      const auto& y = b.branches[i];
      if (x.name != y.name || x.type != y.type || !equivalent(*x.body, *y.body)) return false;
    }
    return equivalent(*a.scrutinee, *b.scrutinee);
  }
  bool operator()(const NewExpr& a, const NewExpr& b) const { return a.type == b.type; }
  bool operator()(const IsVoidExpr& a, const IsVoidExpr& b) const {
    return equivalent(*a.operand, *b.operand);
  }
  bool operator()(const NegateExpr& a, const NegateExpr& b) const {
    return equivalent(*a.operand, *b.operand);
  }
  bool operator()(const NotExpr& a, const NotExpr& b) const {
    return equivalent(*a.operand, *b.operand);
  }
  bool operator()(const BinaryExpr& a, const BinaryExpr& b) const {
    return a.op == b.op && equivalent(*a.lhs, *b.lhs) && equivalent(*a.rhs, *b.rhs);
  }
  bool operator()(const IdentifierExpr& a, const IdentifierExpr& b) const {
    return a.name == b.name;
  }
  bool operator()(const IntConst& a, const IntConst& b) const { return a.value == b.value; }
  bool operator()(const StringConst& a, const StringConst& b) const { return a.value == b.value; }
  bool operator()(const BoolConst& a, const BoolConst& b) const { return a.value == b.value; }
};

bool same_feature(const Feature& a, const Feature& b) {
  if (const auto* ma = a.as_method()) {
    const auto* mb = b.as_method();
    if (!mb || ma->name != mb->name || ma->return_type != mb->return_type ||
        ma->formals.size() != mb->formals.size()) {
      return false;
    }
    for (std::size_t i = 0; i < ma->formals.size(); ++i) {
      if (ma->formals[i].name != mb->formals[i].name ||
          ma->formals[i].type != mb->formals[i].type) {
        return false;
      }
    }
    return equivalent(*ma->body, *mb->body);
  }
  const auto* aa = a.as_attribute();
  const auto* ab = b.as_attribute();
  return ab && aa->name == ab->name && aa->declared_type == ab->declared_type &&
         same_optional(aa->init, ab->init);
}

class Dumper {
 public:
  std::string run(const Program& program) {
    line("program", program.classes.empty() ? 1 : program.classes.front().span.line);
    ++depth_;
    for (const auto& cls : program.classes) {
      line("class " + cls.name + " inherits " + cls.parent.value_or("Object"), cls.span.line);
      ++depth_;
      for (const auto& f : cls.features) feature(f);
      --depth_;
    }
    return out_.str();
  }

 private:
  void line(const std::string& text, int source_line, const std::string& type = {}) {
    out_ << std::string(static_cast<std::size_t>(depth_) * 2, ' ') << text;
    if (!type.empty()) out_ << " : " << type;
    out_ << " [" << source_line << "]\n";
  }

  void feature(const Feature& f) {
    if (const auto* m = f.as_method()) {
      std::string sig = "method " + m->name + "(";
      for (std::size_t i = 0; i < m->formals.size(); ++i) {
        if (i) sig += ", ";
        sig += m->formals[i].name + " : " + m->formals[i].type;
      }
      sig += ") : " + m->return_type;
      line(sig, f.span.line);
      ++depth_;
      expr(*m->body);
      --depth_;
      return;
    }
    const auto* a = f.as_attribute();
    line("attribute " + a->name + " : " + a->declared_type, f.span.line);
    if (a->init) {
      ++depth_;
      expr(*a->init);
      --depth_;
    }
  }

  void expr(const Expr& e) {
    std::string label(expr_kind_name(e));
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, AssignExpr>) {
            label += " " + n.name;
          } else if constexpr (std::is_same_v<T, DispatchExpr>) {
            label += " " + (n.static_type ? *n.static_type + "." : std::string()) + n.method;
          } else if constexpr (std::is_same_v<T, NewExpr>) {
            label += " " + n.type;
          } else if constexpr (std::is_same_v<T, BinaryExpr>) {
            label += " " + std::string(binary_op_spelling(n.op));
          } else if constexpr (std::is_same_v<T, IdentifierExpr>) {
            label += " " + n.name;
          } else if constexpr (std::is_same_v<T, IntConst>) {
            label += " " + std::to_string(n.value);
          } else if constexpr (std::is_same_v<T, StringConst>) {
            label += " " + quote_string(n.value);
          } else if constexpr (std::is_same_v<T, BoolConst>) {
            label += n.value ? " true" : " false";
          }
        },
        e.node);
    line(label, e.span.line, e.static_type);
    ++depth_;
    if (const auto* let = std::get_if<LetExpr>(&e.node)) {
      for (const auto& b : let->bindings) {
        line("binding " + b.name + " : " + b.type, b.span.line);
        if (b.init) {
          ++depth_;
          expr(*b.init);
          --depth_;
        }
      }
      expr(*let->body);
    } else if (const auto* kase = std::get_if<CaseExpr>(&e.node)) {
      expr(*kase->scrutinee);
      for (const auto& b : kase->branches) {
        line("branch " + b.name + " : " + b.type, b.span.line);
        ++depth_;
        expr(*b.body);
        --depth_;
      }
    } else {
      for_each_child(e, [&](const Expr& child) { expr(child); });
    }
    --depth_;
  }

  std::ostringstream out_;
  int depth_ = 0;
};

}  // namespace

std::string quote_string(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      default: out += c;
    }
  }
  return out + "\"";
}

bool equivalent(const Expr& a, const Expr& b) {
  return std::visit(SameNode{}, unparenthesized(a).node, unparenthesized(b).node);
}

bool equivalent(const Program& a, const Program& b) {
  if (a.classes.size() != b.classes.size()) return false;
  for (std::size_t i = 0; i < a.classes.size(); ++i) {
    const auto& x = a.classes[i];
    const auto& y = b.classes[i];
    if (x.name != y.name || x.parent.value_or("Object") != y.parent.value_or("Object") ||
        x.features.size() != y.features.size()) {
      return false;
    }
    for (std::size_t j = 0; j < x.features.size(); ++j) {
      if (!same_feature(x.features[j], y.features[j])) return false;
    }
  }
  return true;
}

std::string_view expr_kind_name(const Expr& e) {
  return std::visit(
      [](const auto& n) -> std::string_view {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, AssignExpr>) return "assign";
        if constexpr (std::is_same_v<T, DispatchExpr>) {
          if (!n.receiver) return "self_dispatch";
          return n.static_type ? "static_dispatch" : "dispatch";
        }
        if constexpr (std::is_same_v<T, IfExpr>) return "if";
        if constexpr (std::is_same_v<T, WhileExpr>) return "while";
        if constexpr (std::is_same_v<T, BlockExpr>) return "block";
        if constexpr (std::is_same_v<T, LetExpr>) return "let";
        if constexpr (std::is_same_v<T, CaseExpr>) return "case";
        if constexpr (std::is_same_v<T, NewExpr>) return "new";
        if constexpr (std::is_same_v<T, IsVoidExpr>) return "isvoid";
        if constexpr (std::is_same_v<T, NegateExpr>) return "negate";
        if constexpr (std::is_same_v<T, NotExpr>) return "not";
        if constexpr (std::is_same_v<T, ParenExpr>) return "paren";
        if constexpr (std::is_same_v<T, BinaryExpr>) return "binop";
        if constexpr (std::is_same_v<T, IdentifierExpr>) return "object";
        if constexpr (std::is_same_v<T, IntConst>) return "int";
        if constexpr (std::is_same_v<T, StringConst>) return "string";
        if constexpr (std::is_same_v<T, BoolConst>) return "bool";
      },
      e.node);
}

std::string dump_ast(const Program& program) { return Dumper().run(program); }

}  // namespace coolio
