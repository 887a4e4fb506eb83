#include <algorithm>
#include <unordered_map>

#include "coolio/semantics.hpp"

namespace coolio {

namespace {

constexpr std::string_view kObject = "Object";

bool is_basic_value_class(std::string_view name) {
  return name == "Int" || name == "String" || name == "Bool";
}

bool is_builtin_class(std::string_view name) {
  return name == "Object" || name == "IO" || is_basic_value_class(name);
}

MethodSignature builtin_method(std::string name, std::vector<std::string> formal_types,
                               std::string return_type, std::string owner) {
  MethodSignature sig;
  sig.name = std::move(name);
  for (std::size_t i = 0; i < formal_types.size(); ++i) {
    sig.formal_names.push_back("arg" + std::to_string(i + 1));
  }
  sig.formal_types = std::move(formal_types);
  sig.return_type = std::move(return_type);
  sig.defining_class = std::move(owner);
  return sig;
}

}  // namespace

ClassTable::ClassTable() {
  auto add = [this](std::string name, std::string parent,
                    std::vector<MethodSignature> methods) {
    ClassInfo info;
    info.name = name;
    info.parent = std::move(parent);
    info.builtin = true;
    for (auto& m : methods) info.methods.emplace(m.name, std::move(m));
    order_.push_back(name);
    classes_.emplace(std::move(name), std::move(info));
  };
  add("Object", "",
      {builtin_method("abort", {}, "Object", "Object"),
       builtin_method("type_name", {}, "String", "Object"),
       builtin_method("copy", {}, "SELF_TYPE", "Object")});
  add("IO", "Object",
      {builtin_method("out_string", {"String"}, "SELF_TYPE", "IO"),
       builtin_method("out_int", {"Int"}, "SELF_TYPE", "IO"),
       builtin_method("in_string", {}, "String", "IO"),
       builtin_method("in_int", {}, "Int", "IO")});
  add("Int", "Object", {});
  add("String", "Object",
      {builtin_method("length", {}, "Int", "String"),
       builtin_method("concat", {"String"}, "String", "String"),
       builtin_method("substr", {"Int", "Int"}, "String", "String")});
  add("Bool", "Object", {});
}

bool ClassTable::contains(std::string_view name) const { return classes_.find(name) != classes_.end(); }

const ClassInfo* ClassTable::find(std::string_view name) const {
  auto it = classes_.find(name);
  return it == classes_.end() ? nullptr : &it->second;
}

const ClassInfo& ClassTable::at(std::string_view name) const {
  const ClassInfo* info = find(name);
  if (!info) throw UndefinedTypeError(std::string(name));
  return *info;
}

std::vector<std::string> ClassTable::ancestors(std::string_view name) const {
  std::vector<std::string> chain;
  const ClassInfo* cur = find(name);
  while (cur) {
    chain.push_back(cur->name);
    if (cur->parent.empty()) break;
    cur = find(cur->parent);
  }
  return chain;
}

const MethodSignature* ClassTable::lookup_method(std::string_view class_name,
                                                 std::string_view method) const {
  const ClassInfo* cur = find(class_name);
  while (cur) {
    if (auto it = cur->methods.find(std::string(method)); it != cur->methods.end()) {
      return &it->second;
    }
    if (cur->parent.empty()) break;
    cur = find(cur->parent);
  }
  return nullptr;
}

std::vector<const AttributeInfo*> ClassTable::all_attributes(std::string_view class_name) const {
  std::vector<std::string> chain = ancestors(class_name);
  std::reverse(chain.begin(), chain.end());
  std::vector<const AttributeInfo*> out;
  for (const auto& name : chain) {
    for (const auto& attr : at(name).attributes) out.push_back(&attr);
  }
  return out;
}

bool ClassTable::is_valid_type(std::string_view type) const {
  return type == kSelfType || contains(type);
}

class ClassTableBuilder {
 public:
  explicit ClassTableBuilder(const Program& program) : program_(program) {}

  ClassTableResult run() {
    register_classes();
    validate_parents();
    detect_cycles();
    collect_features();
    check_main();
    return ClassTableResult{std::move(table_), std::move(diags_)};
  }

 private:
  void report(const SourceSpan& span, std::string message) {
    diags_.push_back(Diagnostic{Phase::Typechecking, span.line, std::move(message), span, {}});
  }

  void register_classes() {
    for (const auto& cls : program_.classes) {
      if (cls.name == kSelfType) {
        report(cls.span, "SELF_TYPE cannot be used as a class name");
        continue;
      }
      if (is_builtin_class(cls.name)) {
        report(cls.span, "redefinition of basic class " + cls.name);
        continue;
      }
      if (table_.contains(cls.name)) {
        report(cls.span, "class " + cls.name + " was previously defined");
        continue;
      }
      ClassInfo info;
      info.name = cls.name;
      info.parent = cls.parent.value_or(std::string(kObject));
      info.decl = &cls;
      info.span = cls.span;
      table_.order_.push_back(cls.name);
      table_.classes_.emplace(cls.name, std::move(info));
    }
  }

  void validate_parents() {
    for (auto& [name, info] : table_.classes_) {
      if (info.builtin) continue;
      if (is_basic_value_class(info.parent) || info.parent == kSelfType) {
        report(info.span, "class " + name + " cannot inherit from " + info.parent);
        info.parent = kObject;
      } else if (!table_.contains(info.parent)) {
        report(info.span, "class " + name + " inherits from undefined class " + info.parent);
        info.parent = kObject;
      }
    }
  }

  // Parent links form a functional graph, so a walk from each class either
  // reaches Object or closes a loop. Members of a loop, and classes whose
  // ancestry runs into one, are removed from the table.
  void detect_cycles() {
    enum class Color { White, Gray, Black };
    std::unordered_map<std::string, Color> color;
    std::set<std::string> in_cycle;
    std::set<std::string> broken;

    for (const auto& start : table_.order_) {
      std::vector<std::string> path;
      std::string cur = start;
      while (true) {
        const ClassInfo& info = table_.classes_.at(cur);
        if (info.builtin) break;
        Color& c = color[cur];
        if (c == Color::Black) break;
        if (c == Color::Gray) {
          auto loop_start = std::find(path.begin(), path.end(), cur);
          in_cycle.insert(loop_start, path.end());
          break;
        }
        c = Color::Gray;
        path.push_back(cur);
        cur = info.parent;
      }
      for (const auto& name : path) color[name] = Color::Black;
    }

    for (const auto& name : table_.order_) {
      if (in_cycle.count(name) != 0) continue;
      std::string cur = name;
      std::set<std::string> seen;
      while (!table_.classes_.at(cur).builtin && seen.insert(cur).second) {
        if (in_cycle.count(cur) != 0) {
          broken.insert(name);
          break;
        }
        cur = table_.classes_.at(cur).parent;
      }
    }

    for (const auto& name : table_.order_) {
      const ClassInfo& info = table_.classes_.at(name);
      if (in_cycle.count(name) != 0) {
        report(info.span, "class " + name + " is involved in an inheritance cycle");
      } else if (broken.count(name) != 0) {
        report(info.span, "class " + name + " has an ancestor involved in an inheritance cycle");
      }
    }
    for (const auto& name : in_cycle) exclude(name);
    for (const auto& name : broken) exclude(name);
  }

  void exclude(const std::string& name) {
    table_.classes_.erase(name);
    table_.order_.erase(std::remove(table_.order_.begin(), table_.order_.end(), name),
                        table_.order_.end());
    table_.excluded_.insert(name);
  }

  std::string checked_type(const std::string& type, const SourceSpan& span,
                           const std::string& what) {
    if (table_.is_valid_type(type)) return type;
    report(span, "class " + type + " of " + what + " is undefined");
    return std::string(kObject);
  }

  void collect_features() {
    std::vector<std::string> by_depth = table_.order_;
    std::stable_sort(by_depth.begin(), by_depth.end(), [this](const auto& a, const auto& b) {
      return table_.ancestors(a).size() < table_.ancestors(b).size();
    });
    for (const auto& name : by_depth) {
      ClassInfo& info = table_.classes_.at(name);
      if (info.builtin) continue;
      for (const auto& feature : info.decl->features) {
        if (const auto* attr = feature.as_attribute()) {
          add_attribute(info, *attr, feature.span);
        } else {
          add_method(info, *feature.as_method(), feature.span);
        }
      }
    }
  }

  void add_attribute(ClassInfo& info, const Attribute& attr, const SourceSpan& span) {
    if (attr.name == kSelf) {
      report(span, "'self' cannot be the name of an attribute");
      return;
    }
    for (const auto& existing : info.attributes) {
      if (existing.name == attr.name) {
        report(span, "attribute " + attr.name + " is multiply defined in class " + info.name);
        return;
      }
    }
    for (const auto* inherited : table_.all_attributes(info.parent)) {
      if (inherited->name == attr.name) {
        report(span, "attribute " + attr.name + " is an attribute of inherited class " +
                         inherited->defining_class);
        return;
      }
    }
    AttributeInfo a;
    a.name = attr.name;
    a.declared_type = checked_type(attr.declared_type, span, "attribute " + attr.name);
    a.defining_class = info.name;
    a.decl = &attr;
    info.attributes.push_back(std::move(a));
  }

  void add_method(ClassInfo& info, const Method& method, const SourceSpan& span) {
    if (info.methods.count(method.name) != 0) {
      report(span, "method " + method.name + " is multiply defined in class " + info.name);
      return;
    }
    MethodSignature sig;
    sig.name = method.name;
    sig.defining_class = info.name;
    sig.decl = &method;
    std::set<std::string> seen;
    for (const auto& formal : method.formals) {
      if (formal.name == kSelf) {
        report(formal.span, "'self' cannot be the name of a formal parameter");
      } else if (!seen.insert(formal.name).second) {
        report(formal.span, "formal parameter " + formal.name + " is multiply defined in method " +
                                method.name);
      }
      std::string type = formal.type;
      if (type == kSelfType) {
        report(formal.span, "formal parameter " + formal.name + " cannot have type SELF_TYPE");
        type = kObject;
      } else {
        type = checked_type(type, formal.span, "formal parameter " + formal.name);
      }
      sig.formal_names.push_back(formal.name);
      sig.formal_types.push_back(std::move(type));
    }
    if (table_.is_valid_type(method.return_type)) {
      sig.return_type = method.return_type;
    } else {
      report(span, "undefined return type " + method.return_type + " in method " + method.name);
      sig.return_type = kObject;
    }

    if (const MethodSignature* original = table_.lookup_method(info.parent, method.name)) {
      check_override(sig, *original, span);
    }
    info.methods.emplace(method.name, std::move(sig));
  }

  void check_override(const MethodSignature& sig, const MethodSignature& original,
                      const SourceSpan& span) {
    if (sig.formal_types.size() != original.formal_types.size()) {
      report(span, "incompatible number of formal parameters in redefined method " + sig.name);
      return;
    }
    for (std::size_t i = 0; i < sig.formal_types.size(); ++i) {
      if (sig.formal_types[i] != original.formal_types[i]) {
        report(span, "in redefined method " + sig.name + ", parameter type " +
                         sig.formal_types[i] + " is different from original type " +
                         original.formal_types[i]);
      }
    }
    if (sig.return_type != original.return_type) {
      report(span, "in redefined method " + sig.name + ", return type " + sig.return_type +
                       " is different from original return type " + original.return_type);
    }
  }

  void check_main() {
    const ClassInfo* main_class = table_.find("Main");
    if (!main_class) {
      if (table_.excluded_.count("Main") == 0) {
        diags_.push_back(Diagnostic{Phase::Typechecking, 1, "class Main not found", {}, {}});
      }
      return;
    }
    const MethodSignature* main_method = table_.lookup_method("Main", "main");
    if (!main_method) {
      report(main_class->span, "no 'main' method in class Main");
    } else if (!main_method->formal_types.empty()) {
      report(main_class->span, "'main' method in class Main should have no arguments");
    }
  }

  const Program& program_;
  ClassTable table_;
  std::vector<Diagnostic> diags_;
};

ClassTableResult build_class_table(const Program& program) {
  return ClassTableBuilder(program).run();
}

bool conforms(const ClassTable& table, std::string_view t1, std::string_view t2,
              std::string_view current_class) {
  for (auto t : {t1, t2}) {
    if (!table.is_valid_type(t)) throw UndefinedTypeError(std::string(t));
  }
  if (t1 == kSelfType && t2 == kSelfType) return true;
  if (t2 == kSelfType) return false;
  if (t1 == kSelfType) {
    if (!table.contains(current_class)) throw UndefinedTypeError(std::string(current_class));
    t1 = current_class;
  }
  for (const auto& ancestor : table.ancestors(t1)) {
    if (ancestor == t2) return true;
  }
  return false;
}

std::string join(const ClassTable& table, std::string_view t1, std::string_view t2,
                 std::string_view current_class) {
  for (auto t : {t1, t2}) {
    if (!table.is_valid_type(t)) throw UndefinedTypeError(std::string(t));
  }
  if (t1 == kSelfType && t2 == kSelfType) return std::string(kSelfType);
  if (t1 == kSelfType || t2 == kSelfType) {
    if (!table.contains(current_class)) throw UndefinedTypeError(std::string(current_class));
  }
  if (t1 == kSelfType) t1 = current_class;
  if (t2 == kSelfType) t2 = current_class;
  const auto left = table.ancestors(t1);
  const std::set<std::string> left_set(left.begin(), left.end());
  for (const auto& ancestor : table.ancestors(t2)) {
    if (left_set.count(ancestor) != 0) return ancestor;
  }
  return std::string(kObject);
}

}  // namespace coolio
