#include "coolio/interpreter.hpp"

#include <pthread.h>

#include <charconv>
#include <deque>
#include <functional>
#include <istream>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace coolio {

namespace {

// Deep COOL recursion turns into deep host recursion, so evaluation runs on
// a thread with a generous stack.
constexpr std::size_t kEvalStackBytes = std::size_t{1} << 30;

void run_on_big_stack(const std::function<void()>& body) {
  pthread_attr_t attr;
  pthread_attr_init(&attr);
  pthread_attr_setstacksize(&attr, kEvalStackBytes);
  auto trampoline = [](void* arg) -> void* {
    (*static_cast<const std::function<void()>*>(arg))();
    return nullptr;
  };
  pthread_t thread;
  if (pthread_create(&thread, &attr, trampoline, const_cast<std::function<void()>*>(&body)) != 0) {
    pthread_attr_destroy(&attr);
    body();
    return;
  }
  pthread_attr_destroy(&attr);
  pthread_join(thread, nullptr);
}

using Location = std::size_t;

struct Object;

struct Val {
  Value::Kind kind = Value::Kind::Void;
  std::int32_t i = 0;
  bool b = false;
  std::shared_ptr<const std::string> s;
  Object* obj = nullptr;

  static Val integer(std::int32_t v) { return Val{Value::Kind::Int, v, false, nullptr, nullptr}; }
  static Val boolean(bool v) { return Val{Value::Kind::Bool, 0, v, nullptr, nullptr}; }
  static Val string(std::string v) {
    return Val{Value::Kind::String, 0, false, std::make_shared<const std::string>(std::move(v)),
               nullptr};
  }
  static Val object(Object* o) { return Val{Value::Kind::Object, 0, false, nullptr, o}; }

  const std::string& str() const { return *s; }
};

struct Object {
  const std::string* class_name;
  std::vector<Location> attributes;
};

struct RuntimeFailure {
  Diagnostic diagnostic;
};

struct AbortSignal {
  std::string message;
};

struct Frame {
  Val self;
  std::vector<std::pair<std::string_view, Location>> locals;
};

std::int32_t wrap(std::int64_t v) {
  return static_cast<std::int32_t>(static_cast<std::uint32_t>(static_cast<std::uint64_t>(v)));
}

class Interpreter {
 public:
  Interpreter(const ClassTable& table, std::istream& in, std::ostream& out,
              const RunOptions& options)
      : table_(table), in_(in), out_(out), options_(options) {}

  Val instantiate(std::string_view class_name, int line) {
    const ClassInfo& info = table_.at(class_name);
    if (info.name == "Int") return Val::integer(0);
    if (info.name == "Bool") return Val::boolean(false);
    if (info.name == "String") return Val::string("");
    const auto& attrs = layout(info.name);
    objects_.push_back(std::make_unique<Object>(Object{&info.name, {}}));
    Object* obj = objects_.back().get();
    for (const auto* a : attrs) obj->attributes.push_back(allocate(default_value(a->declared_type)));
    Frame frame{Val::object(obj), {}};
    for (std::size_t k = 0; k < attrs.size(); ++k) {
      if (attrs[k]->decl && attrs[k]->decl->init) {
        enter_call(line);
        Val v = eval(*attrs[k]->decl->init, frame);
        leave_call();
        store_[obj->attributes[k]] = std::move(v);
      }
    }
    return frame.self;
  }

  Val call(const Val& receiver, const MethodSignature& sig, std::vector<Val> args, int line) {
    if (!sig.decl) return builtin(receiver, sig, std::move(args), line);
    Frame frame{receiver, {}};
    for (std::size_t k = 0; k < args.size(); ++k) {
      frame.locals.emplace_back(sig.formal_names[k], allocate(std::move(args[k])));
    }
    enter_call(line);
    Val result = eval(*sig.decl->body, frame);
    leave_call();
    return result;
  }

  Val eval(const Expr& e, Frame& frame) {
    ++steps_;
    if (options_.fuel && steps_ > *options_.fuel) fail(e.span.line, "fuel exhausted");
    return std::visit([&](const auto& n) { return eval_node(e, n, frame); }, e.node);
  }

  std::uint64_t steps() const { return steps_; }
  std::size_t audit_violations() const { return audit_violations_; }

  Value snapshot(const Val& v) const {
    Value out;
    out.kind = v.kind;
    out.int_value = v.i;
    out.bool_value = v.b;
    if (v.s) out.string_value = *v.s;
    out.class_name = v.kind == Value::Kind::Void ? "" : std::string(class_of(v));
    return out;
  }

 private:
  [[noreturn]] void fail(int line, std::string message) {
    throw RuntimeFailure{Diagnostic{Phase::Evaluation, line, std::move(message), {}, {}}};
  }

  void enter_call(int line) {
    if (++depth_ > options_.max_call_depth) fail(line, "stack overflow");
  }
  void leave_call() { --depth_; }

  Location allocate(Val v) {
    store_.push_back(std::move(v));
    return store_.size() - 1;
  }

  Val default_value(std::string_view type) const {
    if (type == "Int") return Val::integer(0);
    if (type == "Bool") return Val::boolean(false);
    if (type == "String") return Val::string("");
    return Val{};
  }

  const std::vector<const AttributeInfo*>& layout(const std::string& class_name) {
    auto it = layouts_.find(class_name);
    if (it == layouts_.end()) {
      it = layouts_.emplace(class_name, table_.all_attributes(class_name)).first;
    }
    return it->second;
  }

  std::string_view class_of(const Val& v) const {
    switch (v.kind) {
      case Value::Kind::Int: return "Int";
      case Value::Kind::Bool: return "Bool";
      case Value::Kind::String: return "String";
      case Value::Kind::Object: return *v.obj->class_name;
      case Value::Kind::Void: break;
    }
    return "";
  }

  std::optional<Location> resolve(std::string_view name, Frame& frame) {
    for (auto it = frame.locals.rbegin(); it != frame.locals.rend(); ++it) {
      if (it->first == name) return audited(it->second, frame);
    }
    if (frame.self.kind == Value::Kind::Object) {
      const auto& attrs = layout(*frame.self.obj->class_name);
      for (std::size_t k = 0; k < attrs.size(); ++k) {
        if (attrs[k]->name == name) return audited(frame.self.obj->attributes[k], frame);
      }
    }
    return std::nullopt;
  }

  // The location must be in the store and owned by this frame's locals or
  // by self's attributes.
  Location audited(Location loc, const Frame& frame) {
    if (!options_.audit) return loc;
    bool reachable = false;
    for (const auto& local : frame.locals) reachable = reachable || local.second == loc;
    if (frame.self.kind == Value::Kind::Object) {
      for (Location a : frame.self.obj->attributes) reachable = reachable || a == loc;
    }
    if (loc >= store_.size() || !reachable) ++audit_violations_;
    return loc;
  }

  Val eval_node(const Expr& e, const AssignExpr& n, Frame& frame) {
    Val v = eval(*n.value, frame);
    auto loc = resolve(n.name, frame);
    if (!loc) fail(e.span.line, "assignment to unbound variable " + n.name);
    store_[*loc] = v;
    return v;
  }

  Val eval_node(const Expr& e, const DispatchExpr& n, Frame& frame) {
    Val receiver = n.receiver ? eval(*n.receiver, frame) : frame.self;
    std::vector<Val> args;
    args.reserve(n.args.size());
    for (const auto& a : n.args) args.push_back(eval(*a, frame));
    if (receiver.kind == Value::Kind::Void) {
      fail(e.span.line, "dispatch on void (method " + n.method + ")");
    }
    const std::string_view where = n.static_type ? std::string_view(*n.static_type) : class_of(receiver);
    const MethodSignature* sig = table_.lookup_method(where, n.method);
    if (!sig) fail(e.span.line, "undefined method " + n.method + " in class " + std::string(where));
    return call(receiver, *sig, std::move(args), e.span.line);
  }

  Val eval_node(const Expr& e, const IfExpr& n, Frame& frame) {
    Val c = eval(*n.condition, frame);
    expect(c, Value::Kind::Bool, e);
    return c.b ? eval(*n.then_branch, frame) : eval(*n.else_branch, frame);
  }

  Val eval_node(const Expr& e, const WhileExpr& n, Frame& frame) {
    while (true) {
      Val c = eval(*n.condition, frame);
      expect(c, Value::Kind::Bool, e);
      if (!c.b) break;
      eval(*n.body, frame);
    }
    return Val{};
  }

  Val eval_node(const Expr&, const BlockExpr& n, Frame& frame) {
    Val last;
    for (const auto& item : n.body) last = eval(*item, frame);
    return last;
  }

  Val eval_node(const Expr&, const LetExpr& n, Frame& frame) {
    const std::size_t depth = frame.locals.size();
    for (const auto& b : n.bindings) {
      Val v = b.init ? eval(*b.init, frame) : default_value(b.type);
      frame.locals.emplace_back(b.name, allocate(std::move(v)));
    }
    Val result = eval(*n.body, frame);
    frame.locals.resize(depth);
    return result;
  }

  Val eval_node(const Expr& e, const CaseExpr& n, Frame& frame) {
    Val v = eval(*n.scrutinee, frame);
    if (v.kind == Value::Kind::Void) fail(e.span.line, "case on void");
    const std::string dynamic(class_of(v));
    for (const auto& ancestor : table_.ancestors(dynamic)) {
      for (const auto& b : n.branches) {
        if (b.type != ancestor) continue;
        const std::size_t depth = frame.locals.size();
        frame.locals.emplace_back(b.name, allocate(v));
        Val result = eval(*b.body, frame);
        frame.locals.resize(depth);
        return result;
      }
    }
    fail(e.span.line, "no case branch matches class " + dynamic);
  }

  Val eval_node(const Expr& e, const NewExpr& n, Frame& frame) {
    if (n.type == kSelfType) return instantiate(class_of(frame.self), e.span.line);
    return instantiate(n.type, e.span.line);
  }

  Val eval_node(const Expr&, const IsVoidExpr& n, Frame& frame) {
    return Val::boolean(eval(*n.operand, frame).kind == Value::Kind::Void);
  }

  Val eval_node(const Expr& e, const NegateExpr& n, Frame& frame) {
    Val v = eval(*n.operand, frame);
    expect(v, Value::Kind::Int, e);
    return Val::integer(wrap(-static_cast<std::int64_t>(v.i)));
  }

  Val eval_node(const Expr& e, const NotExpr& n, Frame& frame) {
    Val v = eval(*n.operand, frame);
    expect(v, Value::Kind::Bool, e);
    return Val::boolean(!v.b);
  }

  Val eval_node(const Expr&, const ParenExpr& n, Frame& frame) { return eval(*n.inner, frame); }

  Val eval_node(const Expr& e, const BinaryExpr& n, Frame& frame) {
    Val lhs = eval(*n.lhs, frame);
    Val rhs = eval(*n.rhs, frame);
    if (n.op == BinaryOp::Equal) return Val::boolean(equal(lhs, rhs));
    expect(lhs, Value::Kind::Int, e);
    expect(rhs, Value::Kind::Int, e);
    const std::int64_t a = lhs.i;
    const std::int64_t b = rhs.i;
    switch (n.op) {
      case BinaryOp::Add: return Val::integer(wrap(a + b));
      case BinaryOp::Sub: return Val::integer(wrap(a - b));
      case BinaryOp::Mul: return Val::integer(wrap(a * b));
      case BinaryOp::Div:
        if (b == 0) fail(e.span.line, "division by zero");
        return Val::integer(wrap(a / b));
      case BinaryOp::Less: return Val::boolean(a < b);
      case BinaryOp::LessEqual: return Val::boolean(a <= b);
      case BinaryOp::Equal: break;
    }
    return Val{};
  }

  Val eval_node(const Expr& e, const IdentifierExpr& n, Frame& frame) {
    if (n.name == kSelf) return frame.self;
    auto loc = resolve(n.name, frame);
    if (!loc) fail(e.span.line, "unbound variable " + n.name);
    return store_[*loc];
  }

  Val eval_node(const Expr&, const IntConst& n, Frame&) { return Val::integer(n.value); }
  Val eval_node(const Expr&, const StringConst& n, Frame&) { return Val::string(n.value); }
  Val eval_node(const Expr&, const BoolConst& n, Frame&) { return Val::boolean(n.value); }

  // Accepted programs never get here with the wrong kind.
  void expect(const Val& v, Value::Kind kind, const Expr& e) {
    if (v.kind != kind) fail(e.span.line, "internal error: operand has unexpected runtime type");
  }

  static bool equal(const Val& a, const Val& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
      case Value::Kind::Void: return true;
      case Value::Kind::Int: return a.i == b.i;
      case Value::Kind::Bool: return a.b == b.b;
      case Value::Kind::String: return a.str() == b.str();
      case Value::Kind::Object: return a.obj == b.obj;
    }
    return false;
  }

  Val builtin(const Val& self, const MethodSignature& sig, std::vector<Val> args, int line) {
    const std::string& m = sig.name;
    if (m == "abort") throw AbortSignal{"abort called from class " + std::string(class_of(self))};
    if (m == "type_name") return Val::string(std::string(class_of(self)));
    if (m == "copy") {
      if (self.kind != Value::Kind::Object) return self;
      objects_.push_back(std::make_unique<Object>(Object{self.obj->class_name, {}}));
      Object* copy = objects_.back().get();
      for (Location loc : self.obj->attributes) copy->attributes.push_back(allocate(store_[loc]));
      return Val::object(copy);
    }
    if (m == "out_string") {
      out_ << args[0].str();
      return self;
    }
    if (m == "out_int") {
      out_ << args[0].i;
      return self;
    }
    if (m == "in_string") {
      std::string text;
      if (!std::getline(in_, text)) return Val::string("");
      if (!text.empty() && text.back() == '\r') text.pop_back();
      if (text.find('\0') != std::string::npos) return Val::string("");
      return Val::string(std::move(text));
    }
    if (m == "in_int") {
      std::string text;
      if (!std::getline(in_, text)) return Val::integer(0);
      std::size_t start = text.find_first_not_of(" \t");
      if (start == std::string::npos) return Val::integer(0);
      std::int32_t value = 0;
      auto [ptr, ec] = std::from_chars(text.data() + start, text.data() + text.size(), value);
      (void)ptr;
      return Val::integer(ec == std::errc{} ? value : 0);
    }
    if (m == "length") return Val::integer(static_cast<std::int32_t>(self.str().size()));
    if (m == "concat") return Val::string(self.str() + args[0].str());
    if (m == "substr") {
      const std::int64_t i = args[0].i;
      const std::int64_t l = args[1].i;
      const auto size = static_cast<std::int64_t>(self.str().size());
      if (i < 0 || l < 0 || i + l > size) fail(line, "substring out of range");
      return Val::string(self.str().substr(static_cast<std::size_t>(i), static_cast<std::size_t>(l)));
    }
    fail(line, "unknown built-in method " + m);
  }

  const ClassTable& table_;
  std::istream& in_;
  std::ostream& out_;
  const RunOptions& options_;
  std::deque<Val> store_;
  std::vector<std::unique_ptr<Object>> objects_;
  std::unordered_map<std::string, std::vector<const AttributeInfo*>> layouts_;
  std::uint64_t steps_ = 0;
  std::size_t audit_violations_ = 0;
  int depth_ = 0;
};

void finish(RunResult& result, const Interpreter& interp) {
  result.steps = interp.steps();
  result.audit_violations = interp.audit_violations();
}

}  // namespace

RunResult run_program(const Program&, const ClassTable& table, std::istream& in,
                      std::ostream& out, const RunOptions& options) {
  RunResult result;
  run_on_big_stack([&] {
    Interpreter interp(table, in, out, options);
    try {
      Val main = interp.instantiate("Main", 1);
      const MethodSignature* sig = table.lookup_method("Main", "main");
      if (!sig) {
        throw RuntimeFailure{Diagnostic{Phase::Evaluation, 1, "no method main in class Main", {}, {}}};
      }
      interp.call(main, *sig, {}, sig->decl ? sig->decl->body->span.line : 1);
    } catch (const RuntimeFailure& failure) {
      result.status = RunStatus::RuntimeError;
      result.error = failure.diagnostic;
    } catch (const AbortSignal& abort) {
      result.status = RunStatus::Aborted;
      result.abort_message = abort.message;
    }
    finish(result, interp);
  });
  out.flush();
  return result;
}

RunResult run_program(const Program& program, const ClassTable& table, std::string_view input,
                      const RunOptions& options) {
  std::istringstream in{std::string(input)};
  std::ostringstream out;
  RunResult result = run_program(program, table, in, out, options);
  result.output = out.str();
  return result;
}

EvalResult evaluate(const Expr& expr, const ClassTable& table, std::string_view self_class,
                    const RunOptions& options) {
  EvalResult result;
  std::istringstream in;
  std::ostringstream out;
  run_on_big_stack([&] {
    Interpreter interp(table, in, out, options);
    try {
      Frame frame{interp.instantiate(self_class, expr.span.line), {}};
      Val v = interp.eval(expr, frame);
      result.value = interp.snapshot(v);
    } catch (const RuntimeFailure& failure) {
      result.run.status = RunStatus::RuntimeError;
      result.run.error = failure.diagnostic;
    } catch (const AbortSignal& abort) {
      result.run.status = RunStatus::Aborted;
      result.run.abort_message = abort.message;
    }
    finish(result.run, interp);
  });
  result.run.output = out.str();
  return result;
}

}  // namespace coolio
