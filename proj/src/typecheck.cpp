#include <set>
#include <utility>

#include "coolio/parser.hpp"
#include "coolio/semantics.hpp"

namespace coolio {

namespace {

constexpr std::string_view kObject = "Object";
constexpr std::string_view kInt = "Int";
constexpr std::string_view kBool = "Bool";
constexpr std::string_view kString = "String";

bool is_basic(std::string_view t) { return t == kInt || t == kBool || t == kString; }

class TypeChecker {
 public:
  TypeChecker(const ClassTable& table, std::vector<Diagnostic>& diags)
      : table_(table), diags_(diags) {}

  void check_class(ClassDecl& cls) {
    current_ = cls.name;
    scopes_.clear();
    for (const auto* attr : table_.all_attributes(cls.name)) {
      scopes_.emplace_back(attr->name, attr->declared_type);
    }
    const ClassInfo& info = table_.at(cls.name);
    for (auto& feature : cls.features) {
      if (auto* attr = std::get_if<Attribute>(&feature.kind)) {
        check_attribute(info, *attr, feature.span);
      } else {
        check_method(info, std::get<Method>(feature.kind), feature.span);
      }
    }
  }

 private:
  void report(const SourceSpan& span, std::string message) {
    diags_.push_back(Diagnostic{Phase::Typechecking, span.line, std::move(message), span, {}});
  }

  bool conforms_to(std::string_view t1, std::string_view t2) const {
    return conforms(table_, t1, t2, current_);
  }

  std::optional<std::string> lookup(std::string_view name) const {
    if (name == kSelf) return std::string(kSelfType);
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      if (it->first == name) return it->second;
    }
    return std::nullopt;
  }

  // Only the table's registered entry is checked; duplicate features were
  // already reported while building the table.
  void check_attribute(const ClassInfo& info, Attribute& attr, const SourceSpan& span) {
    const AttributeInfo* entry = nullptr;
    for (const auto& a : info.attributes) {
      if (a.decl == &attr) entry = &a;
    }
    if (!attr.init) return;
    const std::string init_type = check(*attr.init);
    if (entry && !conforms_to(init_type, entry->declared_type)) {
      report(span, init_type + " does not conform to " + entry->declared_type +
                       " in initialization of attribute " + attr.name);
    }
  }

  void check_method(const ClassInfo& info, Method& method, const SourceSpan& span) {
    const MethodSignature* sig = nullptr;
    if (auto it = info.methods.find(method.name); it != info.methods.end() &&
                                                   it->second.decl == &method) {
      sig = &it->second;
    }
    const std::size_t depth = scopes_.size();
    for (std::size_t i = 0; i < method.formals.size(); ++i) {
      const auto& formal = method.formals[i];
      if (formal.name == kSelf) continue;
      std::string type = sig ? sig->formal_types[i] : std::string(kObject);
      scopes_.emplace_back(formal.name, std::move(type));
    }
    const std::string body_type = check(*method.body);
    scopes_.resize(depth);
    if (sig && !conforms_to(body_type, sig->return_type)) {
      report(span, body_type + " does not conform to declared return type " + sig->return_type +
                       " of method " + method.name);
    }
  }

  std::string valid_or_object(const std::string& type, const SourceSpan& span,
                              const std::string& what) {
    if (table_.is_valid_type(type)) return type;
    report(span, "class " + type + " of " + what + " is undefined");
    return std::string(kObject);
  }

  std::string check(Expr& e) {
    std::string type = std::visit([&](auto& n) { return check_node(e, n); }, e.node);
    e.static_type = type;
    return type;
  }

  std::string check_node(Expr& e, AssignExpr& n) {
    const std::string value_type = check(*n.value);
    if (n.name == kSelf) {
      report(e.span, "cannot assign to 'self'");
      return value_type;
    }
    auto declared = lookup(n.name);
    if (!declared) {
      report(e.span, "assignment to undeclared variable " + n.name);
      return value_type;
    }
    if (!conforms_to(value_type, *declared)) {
      report(e.span, value_type + " does not conform to " + *declared + " in assignment to " +
                         n.name);
    }
    return value_type;
  }

  std::string check_node(Expr& e, DispatchExpr& n) {
    const std::string receiver_type =
        n.receiver ? check(*n.receiver) : std::string(kSelfType);
    std::vector<std::string> arg_types;
    for (auto& arg : n.args) arg_types.push_back(check(*arg));

    std::string lookup_class = receiver_type == kSelfType ? current_ : receiver_type;
    if (n.static_type) {
      const std::string& target = *n.static_type;
      if (target == kSelfType) {
        report(e.span, "static dispatch to SELF_TYPE is not allowed");
        return std::string(kObject);
      }
      if (!table_.contains(target)) {
        report(e.span, "static dispatch to undefined class " + target);
        return std::string(kObject);
      }
      if (!conforms_to(receiver_type, target)) {
        report(e.span, receiver_type + " does not conform to " + target +
                           " in static dispatch to " + target + "." + n.method);
      }
      lookup_class = target;
    }

    const MethodSignature* sig = table_.lookup_method(lookup_class, n.method);
    if (!sig) {
      report(e.span, "dispatch to undefined method " + n.method + " in class " + lookup_class);
      return std::string(kObject);
    }
    if (sig->formal_types.size() != n.args.size()) {
      report(e.span, "method " + n.method + " called with " + std::to_string(n.args.size()) +
                         " arguments but expects " + std::to_string(sig->formal_types.size()));
    } else {
      for (std::size_t i = 0; i < arg_types.size(); ++i) {
        if (!conforms_to(arg_types[i], sig->formal_types[i])) {
          report(n.args[i]->span, arg_types[i] + " does not conform to " + sig->formal_types[i] +
                                      " in argument " + sig->formal_names[i] +
                                      " of call to method " + n.method);
        }
      }
    }
    return sig->return_type == kSelfType ? receiver_type : sig->return_type;
  }

  std::string check_node(Expr& e, IfExpr& n) {
    const std::string cond = check(*n.condition);
    if (cond != kBool) report(e.span, "predicate of 'if' is not Bool (found " + cond + ")");
    const std::string then_type = check(*n.then_branch);
    const std::string else_type = check(*n.else_branch);
    return join(table_, then_type, else_type, current_);
  }

  std::string check_node(Expr& e, WhileExpr& n) {
    const std::string cond = check(*n.condition);
    if (cond != kBool) report(e.span, "predicate of 'while' is not Bool (found " + cond + ")");
    check(*n.body);
    return std::string(kObject);
  }

  std::string check_node(Expr&, BlockExpr& n) {
    std::string last(kObject);
    for (auto& item : n.body) last = check(*item);
    return last;
  }

  std::string check_node(Expr&, LetExpr& n) {
    const std::size_t depth = scopes_.size();
    for (auto& b : n.bindings) {
      const std::string type = valid_or_object(b.type, b.span, "let variable " + b.name);
      if (b.init) {
        const std::string init_type = check(*b.init);
        if (!conforms_to(init_type, type)) {
          report(b.span, init_type + " does not conform to " + type +
                             " in initialization of let variable " + b.name);
        }
      }
      if (b.name == kSelf) {
        report(b.span, "'self' cannot be bound in a 'let' expression");
        continue;
      }
      scopes_.emplace_back(b.name, type);
    }
    const std::string body = check(*n.body);
    scopes_.resize(depth);
    return body;
  }

  std::string check_node(Expr&, CaseExpr& n) {
    check(*n.scrutinee);
    std::set<std::string> seen;
    std::optional<std::string> result;
    for (auto& b : n.branches) {
      std::string type = b.type;
      if (type == kSelfType) {
        report(b.span, "case branch " + b.name + " cannot have type SELF_TYPE");
        type = kObject;
      } else {
        type = valid_or_object(type, b.span, "case branch " + b.name);
      }
      if (!seen.insert(b.type).second) {
        report(b.span, "duplicate branch type " + b.type + " in case expression");
      }
      const std::size_t depth = scopes_.size();
      if (b.name == kSelf) {
        report(b.span, "'self' cannot be bound in a case branch");
      } else {
        scopes_.emplace_back(b.name, type);
      }
      const std::string body = check(*b.body);
      scopes_.resize(depth);
      result = result ? join(table_, *result, body, current_) : body;
    }
    return result.value_or(std::string(kObject));
  }

  std::string check_node(Expr& e, NewExpr& n) {
    if (table_.is_valid_type(n.type)) return n.type;
    report(e.span, "'new' used with undefined class " + n.type);
    return std::string(kObject);
  }

  std::string check_node(Expr&, IsVoidExpr& n) {
    check(*n.operand);
    return std::string(kBool);
  }

  std::string check_node(Expr& e, NegateExpr& n) {
    const std::string t = check(*n.operand);
    if (t != kInt) report(e.span, "operand of '~' is not Int (found " + t + ")");
    return std::string(kInt);
  }

  std::string check_node(Expr& e, NotExpr& n) {
    const std::string t = check(*n.operand);
    if (t != kBool) report(e.span, "operand of 'not' is not Bool (found " + t + ")");
    return std::string(kBool);
  }

  std::string check_node(Expr&, ParenExpr& n) { return check(*n.inner); }

  std::string check_node(Expr& e, BinaryExpr& n) {
    const std::string lhs = check(*n.lhs);
    const std::string rhs = check(*n.rhs);
    const std::string op(binary_op_spelling(n.op));
    if (n.op == BinaryOp::Equal) {
      if ((is_basic(lhs) || is_basic(rhs)) && lhs != rhs) {
        report(e.span, "illegal comparison between " + lhs + " and " + rhs);
      }
      return std::string(kBool);
    }
    if (lhs != kInt) report(e.span, "left operand of " + op + " is not Int (found " + lhs + ")");
    if (rhs != kInt) report(e.span, "right operand of " + op + " is not Int (found " + rhs + ")");
    return std::string(is_arithmetic(n.op) ? kInt : kBool);
  }

  std::string check_node(Expr& e, IdentifierExpr& n) {
    if (auto type = lookup(n.name)) return *type;
    report(e.span, "undeclared identifier " + n.name);
    return std::string(kObject);
  }

  std::string check_node(Expr&, IntConst&) { return std::string(kInt); }
  std::string check_node(Expr&, StringConst&) { return std::string(kString); }
  std::string check_node(Expr&, BoolConst&) { return std::string(kBool); }

  const ClassTable& table_;
  std::vector<Diagnostic>& diags_;
  std::string current_;
  std::vector<std::pair<std::string, std::string>> scopes_;
};

}  // namespace

std::vector<Diagnostic> typecheck(const ClassTable& table, Program& program) {
  std::vector<Diagnostic> diags;
  TypeChecker checker(table, diags);
  for (auto& cls : program.classes) {
    const ClassInfo* info = table.find(cls.name);
    if (!info || info->decl != &cls) continue;
    checker.check_class(cls);
  }
  return diags;
}

FrontendResult analyze_source(std::string_view source) {
  FrontendResult result;
  ParseResult parsed = parse_source(source);
  result.program = std::move(parsed.program);
  result.diagnostics = std::move(parsed.diagnostics);
  if (result.diagnostics.empty()) {
    ClassTableResult built = build_class_table(result.program);
    result.diagnostics = std::move(built.diagnostics);
    auto type_diags = typecheck(built.table, result.program);
    result.diagnostics.insert(result.diagnostics.end(), type_diags.begin(), type_diags.end());
    result.table.emplace(std::move(built.table));
  }
  sort_diagnostics(result.diagnostics);
  return result;
}

}  // namespace coolio
