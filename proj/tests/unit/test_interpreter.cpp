#include <filesystem>
#include <fstream>
#include <sstream>

#include "coolio/interpreter.hpp"
#include "coolio/parser.hpp"
#include "coolio/semantics.hpp"
#include "doctest.h"
#include "generators.hpp"
#include "oracles.hpp"

using namespace coolio;

namespace {

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

RunResult run_source(const std::string& src, const std::string& input = "", RunOptions opts = {}) {
  auto fe = analyze_source(src);
  REQUIRE_MESSAGE(fe.ok(), (fe.diagnostics.empty() ? "" : format_diagnostic(fe.diagnostics[0])));
  return run_program(fe.program, *fe.table, input, opts);
}

std::string main_with(const std::string& body, const std::string& extra = "") {
  return extra + "class Main inherits IO {\n  main() : Object {\n    " + body + "\n  };\n};\n";
}

// Parses, typechecks (inside a Main method) and evaluates one expression.
struct Evaluated {
  std::string static_type;
  EvalResult result;
};

Evaluated eval_source(const std::string& expr) {
  auto fe = analyze_source(main_with(expr));
  REQUIRE_MESSAGE(fe.ok(), expr);
  const Method* m = nullptr;
  for (const auto& c : fe.program.classes) {
    for (const auto& f : c.features) {
      if (c.name == "Main" && f.as_method()) m = f.as_method();
    }
  }
  REQUIRE(m);
  return {m->body->static_type, evaluate(*m->body, *fe.table, "Main")};
}

}  // namespace

TEST_CASE("expression values") {
  auto sum = eval_source("3 + 7");
  CHECK(sum.static_type == "Int");
  REQUIRE(sum.result.value);
  CHECK(sum.result.value->kind == Value::Kind::Int);
  CHECK(sum.result.value->int_value == 10);

  CHECK(eval_source("while false loop 0 pool").result.value->kind == Value::Kind::Void);
  CHECK(eval_source("~5").result.value->int_value == -5);
  auto iv = eval_source("isvoid (new Object)").result.value;
  CHECK(iv->kind == Value::Kind::Bool);
  CHECK_FALSE(iv->bool_value);
  CHECK(eval_source("let x : Int in x").result.value->int_value == 0);
  CHECK(eval_source("let s : String in s").result.value->string_value.empty());
  CHECK(eval_source("let b : Bool in b").result.value->bool_value == false);
  CHECK(eval_source("let o : Object in o").result.value->kind == Value::Kind::Void);
  CHECK(eval_source("\"abc\".substr(1, 2)").result.value->string_value == "bc");
  CHECK(eval_source("(new Main).type_name()").result.value->string_value == "Main");
}

TEST_CASE("32-bit wraparound") {
  CHECK(eval_source("2147483647 + 1").result.value->int_value == -2147483647 - 1);
  CHECK(eval_source("~2147483647 - 2").result.value->int_value == 2147483647);
  CHECK(eval_source("65536 * 65536").result.value->int_value == 0);
  CHECK(eval_source("(~2147483647 - 1) / ~1").result.value->int_value == -2147483647 - 1);
  CHECK(eval_source("~7 / 2").result.value->int_value == -3);
}

TEST_CASE("runtime errors") {
  auto div = run_source(main_with("out_int(1 / 0)"));
  CHECK(div.status == RunStatus::RuntimeError);
  REQUIRE(div.error);
  CHECK(div.error->message == "division by zero");
  CHECK(div.error->phase == Phase::Evaluation);
  CHECK(div.error->line == 3);

  auto dv = run_source(main_with("let o : IO in o.out_string(\"x\")"));
  CHECK(dv.status == RunStatus::RuntimeError);
  CHECK(dv.error->message.starts_with("dispatch on void"));

  auto cv = run_source(main_with("let o : Object in case o of x : Object => 0; esac"));
  CHECK(cv.error->message == "case on void");

  auto nm = run_source(main_with("case 3 of s : String => 0; esac"));
  CHECK(nm.error->message == "no case branch matches class Int");

  auto sub = run_source(main_with("out_string(\"abc\".substr(2, 5))"));
  CHECK(sub.error->message == "substring out of range");
  CHECK(run_source(main_with("out_string(\"abc\".substr(~1, 1))")).error->message ==
        "substring out of range");
}

TEST_CASE("abort, fuel and call depth") {
  auto ab = run_source(main_with("{ out_string(\"before\"); abort(); out_string(\"after\"); }"));
  CHECK(ab.status == RunStatus::Aborted);
  CHECK(ab.abort_message == "abort called from class Main");
  CHECK(ab.output == "before");

  RunOptions fuel;
  fuel.fuel = 500;
  auto spin = run_source(main_with("while true loop 0 pool"), "", fuel);
  CHECK(spin.status == RunStatus::RuntimeError);
  CHECK(spin.error->message == "fuel exhausted");
  CHECK(spin.steps == 501);

  RunOptions shallow;
  shallow.max_call_depth = 50;
  auto rec = run_source("class Main { f(n : Int) : Int { f(n + 1) }; main() : Object { f(0) }; };", "",
                        shallow);
  CHECK(rec.error->message == "stack overflow");
}

TEST_CASE("dispatch resolves in the dynamic class") {
  const std::string classes =
      "class A { f() : String { type_name() }; g() : String { \"A\" }; };\n"
      "class B inherits A { g() : String { \"B\" }; };\n";
  CHECK(run_source(main_with("out_string((new B).f())", classes)).output == "B");
  CHECK(run_source(main_with("out_string((new B).g())", classes)).output == "B");
  CHECK(run_source(main_with("out_string((new B)@A.g())", classes)).output == "A");
  CHECK(run_source(main_with("let a : A <- new B in out_string(a.g())", classes)).output == "B");
}

TEST_CASE("evaluation order and copy") {
  const std::string cls =
      "class Log inherits IO { n : Int; tick(s : String) : Int { { out_string(s); n <- n + 1; } }; };\n";
  CHECK(run_source(main_with("let l : Log <- new Log in l.tick(\"a\") + l.tick(\"b\") * l.tick(\"c\")", cls))
            .output == "abc");
  CHECK(run_source(main_with("(new Log).tick(\"r\").type_name().concat((new Log).tick(\"s\").type_name())", cls))
            .output == "rs");
  const std::string cell = "class Cell { v : Int; set(x : Int) : SELF_TYPE { { v <- x; self; } }; get() : Int { v }; };\n";
  CHECK(run_source(main_with("let a : Cell <- (new Cell).set(1), b : Cell <- a.copy() in { b.set(2); out_int(a.get()); out_int(b.get()); }", cell))
            .output == "12");
}

TEST_CASE("input builtins read lines") {
  auto r = run_source(main_with("{ out_string(in_string()); out_int(in_int()); out_int(in_int()); out_string(in_string()); }"),
                      "hello there\n  12\nnot a number\n");
  CHECK(r.output == "hello there120");
}

TEST_CASE("corpus programs produce their expected output") {
  int count = 0;
  for (const auto& entry : std::filesystem::directory_iterator(COOLIO_CORPUS_DIR)) {
    const auto& p = entry.path();
    if (p.extension() != ".cl") continue;
    auto expected_path = p;
    expected_path.replace_extension(".out");
    if (!std::filesystem::exists(expected_path)) continue;
    auto input_path = p;
    input_path.replace_extension(".in");
    const std::string input = std::filesystem::exists(input_path) ? read_file(input_path) : "";
    INFO(p.string());
    RunOptions audit;
    audit.audit = true;
    auto first = run_source(read_file(p), input, audit);
    CHECK(first.status == RunStatus::Ok);
    CHECK(first.output == read_file(expected_path));
    CHECK(first.audit_violations == 0);
    auto second = run_source(read_file(p), input, audit);
    CHECK(second.output == first.output);
    CHECK(second.steps == first.steps);
    ++count;
  }
  CHECK(count >= 18);
}

TEST_CASE("property: closed arithmetic is statically Int and matches the oracle") {
  testsupport::Rng rng(31337);
  int checked = 0;
  while (checked < 1000) {
    auto tree = testsupport::random_arith(rng, 6);
    const auto expected = testsupport::arith_oracle(*tree);
    if (!expected) continue;  // division by zero somewhere
    const std::string src = testsupport::render_arith(*tree, rng);
    auto got = eval_source(src);
    REQUIRE_MESSAGE(got.static_type == "Int", src);
    REQUIRE_MESSAGE(got.result.value.has_value(), src);
    REQUIRE(got.result.value->kind == Value::Kind::Int);
    REQUIRE_MESSAGE(got.result.value->int_value == *expected, src);
    ++checked;
  }
}
