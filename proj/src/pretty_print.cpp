#include <string>
#include <type_traits>

#include "coolio/parser.hpp"

namespace coolio {

namespace {

// Mirrors the parser's binding strengths. kPrimary covers atoms and every
// bracketed form (if/while/case/block/parens) that cannot absorb neighbours.
enum : int {
  kOpenEnded = 1,  // assignment, let
  kNot = 2,
  kCompare = 3,
  kAdditive = 4,
  kMultiplicative = 5,
  kIsVoid = 6,
  kNegate = 7,
  kDispatch = 8,
  kPrimary = 9,
};

// Operands of `~` and `isvoid`. `not` is excluded because its operand
// would swallow any binary operator that follows.
constexpr int kUnaryOperand = kIsVoid;

int binary_prec(BinaryOp op) {
  if (op == BinaryOp::Mul || op == BinaryOp::Div) return kMultiplicative;
  if (op == BinaryOp::Add || op == BinaryOp::Sub) return kAdditive;
  return kCompare;
}

int prec_of(const Expr& e) {
  return std::visit(
      [](const auto& n) -> int {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, AssignExpr> || std::is_same_v<T, LetExpr>) {
          return kOpenEnded;
        } else if constexpr (std::is_same_v<T, NotExpr>) {
          return kNot;
        } else if constexpr (std::is_same_v<T, BinaryExpr>) {
          return binary_prec(n.op);
        } else if constexpr (std::is_same_v<T, IsVoidExpr>) {
          return kIsVoid;
        } else if constexpr (std::is_same_v<T, NegateExpr>) {
          return kNegate;
        } else if constexpr (std::is_same_v<T, DispatchExpr>) {
          return n.receiver ? kDispatch : kPrimary;
        } else {
          return kPrimary;
        }
      },
      e.node);
}

class Printer {
 public:
  std::string take() { return std::move(out_); }

  void program(const Program& p) {
    for (std::size_t i = 0; i < p.classes.size(); ++i) {
      if (i) out_ += "\n";
      class_decl(p.classes[i]);
    }
  }

  void expr(const Expr& e, int min_prec = 0) {
    if (prec_of(e) < min_prec) {
      out_ += '(';
      node(e);
      out_ += ')';
    } else {
      node(e);
    }
  }

 private:
  void newline() {
    out_ += '\n';
    out_.append(static_cast<std::size_t>(indent_) * 2, ' ');
  }

  void class_decl(const ClassDecl& c) {
    out_ += "class " + c.name;
    if (c.parent) out_ += " inherits " + *c.parent;
    out_ += " {";
    ++indent_;
    for (const auto& f : c.features) {
      newline();
      feature(f);
    }
    --indent_;
    out_ += "\n};\n";
  }

  void feature(const Feature& f) {
    if (const auto* m = f.as_method()) {
      out_ += m->name + "(";
      for (std::size_t i = 0; i < m->formals.size(); ++i) {
        if (i) out_ += ", ";
        out_ += m->formals[i].name + " : " + m->formals[i].type;
      }
      out_ += ") : " + m->return_type + " {";
      ++indent_;
      newline();
      expr(*m->body);
      --indent_;
      newline();
      out_ += "};";
      return;
    }
    const auto* a = f.as_attribute();
    out_ += a->name + " : " + a->declared_type;
    if (a->init) {
      out_ += " <- ";
      expr(*a->init);
    }
    out_ += ";";
  }

  void args(const std::vector<ExprPtr>& list) {
    out_ += '(';
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (i) out_ += ", ";
      expr(*list[i]);
    }
    out_ += ')';
  }

  void node(const Expr& e) {
    std::visit([&](const auto& n) { print(n); }, e.node);
  }

  void print(const AssignExpr& n) {
    out_ += n.name + " <- ";
    expr(*n.value);
  }

  void print(const DispatchExpr& n) {
    if (n.receiver) {
      expr(*n.receiver, kDispatch);
      if (n.static_type) out_ += "@" + *n.static_type;
      out_ += '.';
    }
    out_ += n.method;
    args(n.args);
  }

  void print(const IfExpr& n) {
    out_ += "if ";
    expr(*n.condition);
    out_ += " then ";
    expr(*n.then_branch);
    out_ += " else ";
    expr(*n.else_branch);
    out_ += " fi";
  }

  void print(const WhileExpr& n) {
    out_ += "while ";
    expr(*n.condition);
    out_ += " loop ";
    expr(*n.body);
    out_ += " pool";
  }

  void print(const BlockExpr& n) {
    out_ += '{';
    ++indent_;
    for (const auto& item : n.body) {
      newline();
      expr(*item);
      out_ += ';';
    }
    --indent_;
    newline();
    out_ += '}';
  }

  void print(const LetExpr& n) {
    out_ += "let ";
    for (std::size_t i = 0; i < n.bindings.size(); ++i) {
      const auto& b = n.bindings[i];
      if (i) out_ += ", ";
      out_ += b.name + " : " + b.type;
      if (b.init) {
        out_ += " <- ";
        expr(*b.init);
      }
    }
    out_ += " in ";
    expr(*n.body);
  }

  void print(const CaseExpr& n) {
    out_ += "case ";
    expr(*n.scrutinee);
    out_ += " of";
    ++indent_;
    for (const auto& b : n.branches) {
      newline();
      out_ += b.name + " : " + b.type + " => ";
      expr(*b.body);
      out_ += ';';
    }
    --indent_;
    newline();
    out_ += "esac";
  }

  void print(const NewExpr& n) { out_ += "new " + n.type; }

  void print(const IsVoidExpr& n) {
    out_ += "isvoid ";
    expr(*n.operand, kUnaryOperand);
  }

  void print(const NegateExpr& n) {
    out_ += '~';
    expr(*n.operand, kUnaryOperand);
  }

  void print(const NotExpr& n) {
    out_ += "not ";
    expr(*n.operand, kNot);
  }

  void print(const ParenExpr& n) {
    out_ += '(';
    expr(*n.inner);
    out_ += ')';
  }

  void print(const BinaryExpr& n) {
    const int prec = binary_prec(n.op);
    // Left-associative arithmetic; comparisons do not associate at all.
    expr(*n.lhs, prec == kCompare ? prec + 1 : prec);
    out_ += ' ';
    out_ += binary_op_spelling(n.op);
    out_ += ' ';
    expr(*n.rhs, prec + 1);
  }

  void print(const IdentifierExpr& n) { out_ += n.name; }
  void print(const IntConst& n) { out_ += std::to_string(n.value); }
  void print(const StringConst& n) { out_ += quote_string(n.value); }
  void print(const BoolConst& n) { out_ += n.value ? "true" : "false"; }

  std::string out_;
  int indent_ = 0;
};

}  // namespace

std::string pretty_print(const Program& program) {
  Printer p;
  p.program(program);
  return p.take();
}

std::string pretty_print(const Expr& expr) {
  Printer p;
  p.expr(expr);
  return p.take();
}

}  // namespace coolio
