#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "coolio/ast.hpp"
#include "coolio/diagnostics.hpp"
#include "coolio/semantics.hpp"

namespace coolio {

struct RunOptions {
  /// Maximum number of evaluation steps; unlimited when empty.
  std::optional<std::uint64_t> fuel;
  /// Check every variable access against the live environment.
  bool audit = false;
  /// Nested method calls beyond this depth fail with "stack overflow".
  int max_call_depth = 10000;
};

enum class RunStatus { Ok, Aborted, RuntimeError };

struct RunResult {
  RunStatus status = RunStatus::Ok;
  /// Program output, when it was not streamed elsewhere.
  std::string output;
  std::optional<Diagnostic> error;
  std::string abort_message;
  std::uint64_t steps = 0;
  std::size_t audit_violations = 0;
};

/// Detached copy of a runtime value, safe to keep after evaluation ends.
struct Value {
  enum class Kind { Void, Int, Bool, String, Object };
  Kind kind = Kind::Void;
  std::int32_t int_value = 0;
  bool bool_value = false;
  std::string string_value;
  std::string class_name;  // dynamic class; empty for void
};

/// Runs `new Main.main()` on a program that typechecked cleanly.
/// `input` feeds in_string/in_int one line at a time.
RunResult run_program(const Program& program, const ClassTable& table, std::string_view input,
                      const RunOptions& options = {});

/// Same, with output written to `out` as it is produced.
RunResult run_program(const Program& program, const ClassTable& table, std::istream& in,
                      std::ostream& out, const RunOptions& options = {});

struct EvalResult {
  std::optional<Value> value;  // empty when evaluation did not finish
  RunResult run;
};

/// Evaluates one typechecked expression with `self` a fresh instance of
/// `self_class` and no local variables.
EvalResult evaluate(const Expr& expr, const ClassTable& table,
                    std::string_view self_class = "Object", const RunOptions& options = {});

}  // namespace coolio
