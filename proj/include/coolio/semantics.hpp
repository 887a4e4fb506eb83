#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "coolio/ast.hpp"
#include "coolio/diagnostics.hpp"

namespace coolio {

/// Raised by conforms()/join() when asked about a type the table does not
/// define. Distinct from a `false` answer.
class UndefinedTypeError : public std::runtime_error {
 public:
  explicit UndefinedTypeError(const std::string& type)
      : std::runtime_error("undefined type " + type), type_(type) {}
  const std::string& type() const { return type_; }

 private:
  std::string type_;
};

struct MethodSignature {
  std::string name;
  std::vector<std::string> formal_names;
  std::vector<std::string> formal_types;
  std::string return_type;
  std::string defining_class;
  const Method* decl = nullptr;  // null for built-in methods
};

struct AttributeInfo {
  std::string name;
  std::string declared_type;
  std::string defining_class;
  const Attribute* decl = nullptr;
};

struct ClassInfo {
  std::string name;
  std::string parent;  // empty only for Object
  /// Attributes declared by this class itself, in source order.
  std::vector<AttributeInfo> attributes;
  /// Methods declared by this class itself.
  std::map<std::string, MethodSignature> methods;
  const ClassDecl* decl = nullptr;  // null for built-in classes
  SourceSpan span;
  bool builtin = false;
};

/// The inheritance tree plus per-class feature tables. Method and
/// attribute entries point into the Program the table was built from, so
/// that Program must outlive the table.
class ClassTable {
 public:
  ClassTable();

  bool contains(std::string_view name) const;
  const ClassInfo* find(std::string_view name) const;
  const ClassInfo& at(std::string_view name) const;

  /// Class names: built-ins first, then user classes in declaration order.
  const std::vector<std::string>& class_names() const { return order_; }

  /// `name` and its ancestors, nearest first, ending with Object.
  std::vector<std::string> ancestors(std::string_view name) const;

  /// Resolves a method by walking up from `class_name`.
  const MethodSignature* lookup_method(std::string_view class_name,
                                       std::string_view method) const;

  /// Every attribute visible in `class_name`, ancestors' attributes first.
  std::vector<const AttributeInfo*> all_attributes(std::string_view class_name) const;

  /// Type names valid in declarations: defined classes plus SELF_TYPE.
  bool is_valid_type(std::string_view type) const;

  /// Classes excluded after an inheritance error (cycle members).
  const std::set<std::string>& excluded() const { return excluded_; }

 private:
  friend class ClassTableBuilder;

  std::map<std::string, ClassInfo, std::less<>> classes_;
  std::vector<std::string> order_;
  std::set<std::string> excluded_;
};

struct ClassTableResult {
  ClassTable table;
  std::vector<Diagnostic> diagnostics;
};

ClassTableResult build_class_table(const Program& program);

/// Subtype relation. SELF_TYPE stands for SELF_TYPE of `current_class`.
/// Throws UndefinedTypeError for names the table does not know.
bool conforms(const ClassTable& table, std::string_view t1, std::string_view t2,
              std::string_view current_class);

/// Least upper bound in the inheritance tree.
std::string join(const ClassTable& table, std::string_view t1, std::string_view t2,
                 std::string_view current_class);

/// Annotates every expression with its static type and reports type errors
/// in phase Typechecking. Expressions whose type cannot be determined are
/// typed Object so checking can continue.
std::vector<Diagnostic> typecheck(const ClassTable& table, Program& program);

/// Convenience: lex, parse, build the class table and typecheck. Stops
/// before semantic analysis when there are syntax errors.
struct FrontendResult {
  Program program;
  std::optional<ClassTable> table;
  std::vector<Diagnostic> diagnostics;  // sorted

  bool ok() const { return diagnostics.empty(); }
};

FrontendResult analyze_source(std::string_view source);

}  // namespace coolio
