// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "coolio/assets.hpp"
#include "coolio/interpreter.hpp"
#include "coolio/lexer.hpp"
#include "coolio/lsp/server.hpp"
#include "coolio/lsp/transport.hpp"
#include "coolio/parser.hpp"
#include "coolio/semantics.hpp"
#include "generators.hpp"
#include "json.hpp"
#include "oracles.hpp"
#include "process.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string kBin = COOLIO_BIN;
const fs::path kCorpus = COOLIO_CORPUS_DIR;

// Time limits in milliseconds.
constexpr double kHelloLimitMs = 1000;
constexpr double kArithmeticLimitMs = 10000;
constexpr double kAttributeErrorLimitMs = 1000;
constexpr double kCoverageLimitMs = 5000;
constexpr double kLatticeLimitMs = 10000;
constexpr double kLspLimitMs = 2000;
constexpr double kNoLimit = 0;

constexpr int kArithmeticCases = 1000;
constexpr int kArithmeticDepth = 6;
constexpr int kHierarchies = 200;
constexpr int kMaxClasses = 12;

// Thrown by check() with a short reason.
struct Failure {
  std::string why;
};

void check(bool ok, const std::string& why) {
  if (!ok) throw Failure{why};
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

const char* kAttributeError =
    "class Main {\n"
    "  num : Int <- \"hello\";\n"
    "  main() : Object { 0 };\n"
    "};\n";

// ---------------------------------------------------------------------------

void hello_world() {
  auto r = testsupport::run_process({kBin, "run", (kCorpus / "hello.cl").string()});
  check(r.exit_code == 0, "exit code " + std::to_string(r.exit_code));
  check(r.out == "HelloWorld", "stdout was '" + r.out + "'");
  check(r.err.empty(), "stderr was '" + r.err + "'");
}

struct Evaluated {
  std::string static_type;
  coolio::EvalResult result;
};

Evaluated evaluate_in_main(const std::string& expr) {
  const std::string src = "class Main { main() : Object { " + expr + " }; };";
  auto fe = coolio::analyze_source(src);
  check(fe.ok(), "frontend rejected " + expr);
  const coolio::Method* m = fe.program.classes[0].features[0].as_method();
  return {m->body->static_type, coolio::evaluate(*m->body, *fe.table, "Main")};
}

void arithmetic() {
  auto base = evaluate_in_main("3 + 7");
  check(base.static_type == "Int", "3 + 7 typed " + base.static_type);
  check(base.result.value && base.result.value->kind == coolio::Value::Kind::Int &&
            base.result.value->int_value == 10,
        "3 + 7 did not evaluate to 10");

  testsupport::Rng rng(20230417);
  int mismatches = 0;
  int cases = 0;
  while (cases < kArithmeticCases) {
    auto tree = testsupport::random_arith(rng, kArithmeticDepth);
    const auto expected = testsupport::arith_oracle(*tree);
    if (!expected) continue;
    const std::string src = testsupport::render_arith(*tree, rng);
    auto got = evaluate_in_main(src);
    const bool ok = got.static_type == "Int" && got.result.value &&
                    got.result.value->kind == coolio::Value::Kind::Int &&
                    got.result.value->int_value == *expected;
    if (!ok) ++mismatches;
    ++cases;
  }
  check(mismatches == 0, std::to_string(mismatches) + " mismatches");
}

json lsp_request(int id, const std::string& method, json params = json::object()) {
  return {{"jsonrpc", "2.0"}, {"id", id}, {"method", method}, {"params", std::move(params)}};
}

json lsp_notification(const std::string& method, json params = json::object()) {
  return {{"jsonrpc", "2.0"}, {"method", method}, {"params", std::move(params)}};
}

void attribute_error() {
  auto fe = coolio::analyze_source(kAttributeError);
  check(fe.diagnostics.size() == 1, std::to_string(fe.diagnostics.size()) + " diagnostics");
  const auto& d = fe.diagnostics[0];
  check(d.phase == coolio::Phase::Typechecking, "wrong phase");
  check(d.line == 2, "line " + std::to_string(d.line));

  coolio::lsp::Server server;
  server.handle(lsp_request(1, "initialize"));
  auto out = server.handle(lsp_notification(
      "textDocument/didOpen",
      {{"textDocument", {{"uri", "file:///bad.cl"}, {"version", 1}, {"text", kAttributeError}}}}));
  check(out.size() == 1, "expected one notification");
  const auto& diags = out[0]["params"]["diagnostics"];
  check(diags.size() == 1, "published " + std::to_string(diags.size()) + " diagnostics");
  const auto& range = diags[0]["range"];
  check(range["start"]["line"] == 1 && range["end"]["line"] == 1, "range not on line 2");
  check(range["end"]["character"].get<int>() <= 23, "range runs past the line");
}

void collect_kinds(const coolio::Expr& e, std::set<std::string>& kinds) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, coolio::DispatchExpr>) {
          kinds.insert(n.static_type ? "static dispatch" : n.receiver ? "dispatch" : "self dispatch");
        } else if constexpr (std::is_same_v<T, coolio::LetExpr>) {
          kinds.insert(n.bindings.size() > 1 ? "multi-binding let" : "let");
        } else if constexpr (std::is_same_v<T, coolio::BinaryExpr>) {
          kinds.insert(std::string(coolio::binary_op_spelling(n.op)));
        } else {
          kinds.insert(std::string(coolio::expr_kind_name(e)));
        }
      },
      e.node);
  coolio::for_each_child(e, [&](const coolio::Expr& child) { collect_kinds(child, kinds); });
}

void expression_coverage() {
  std::set<std::string> kinds;
  int programs = 0;
  for (const auto& entry : fs::directory_iterator(kCorpus)) {
    const auto& p = entry.path();
    if (p.extension() != ".cl" || p.stem().string().starts_with("bad_") || p.stem() == "empty") {
      continue;
    }
    const std::string src = read_file(p);
    const std::string name = p.filename().string();
    check(coolio::tokenize(src).diagnostics.empty(), name + " does not lex");
    auto fe = coolio::analyze_source(src);
    check(fe.ok(), name + " does not typecheck");
    auto reparsed = coolio::parse_source(coolio::pretty_print(fe.program));
    check(reparsed.diagnostics.empty(), name + " pretty output does not parse");
    check(coolio::equivalent(fe.program, reparsed.program), name + " round trip changed the tree");
    for (const auto& cls : fe.program.classes) {
      for (const auto& f : cls.features) {
        if (const auto* m = f.as_method()) collect_kinds(*m->body, kinds);
        if (const auto* a = f.as_attribute(); a && a->init) collect_kinds(*a->init, kinds);
      }
    }
    ++programs;
  }
  const std::vector<std::string> required = {
      "assign", "static dispatch", "self dispatch", "if",  "while", "block", "multi-binding let",
      "case",   "new",             "isvoid",        "negate", "not", "paren", "+", "-", "*", "/",
      "<",      "<=",              "=",             "int", "string", "bool"};
  for (const auto& r : required) check(kinds.count(r) == 1, "no program uses " + r);
  check(programs > 0, "empty corpus");
}

// Source exercising every lexical class; the expected stream is written out
// by hand below.
const char* kLexicalSample =
    "class CLASS Else eLSE fi FI if In inherits ISVOID let LOOP pool Then while CASE esac NEW of NOT true tRUE false fALSE\n"
    "-- a line comment: class if \"not a string\n"
    "(* block (* nested\n"
    "   comment *) still\n"
    "   comment *)\n"
    "\"tab\\there\\nnl\\\"q\\\\b\\c\"\n"
    "0 42 007\n"
    "Type_1 object_1 SELF_TYPE self TRUE\n";

const std::vector<std::string> kLexicalExpected = {
    "1: CLASS class", "1: CLASS CLASS", "1: ELSE Else", "1: ELSE eLSE", "1: FI fi",
    "1: FI FI", "1: IF if", "1: IN In", "1: INHERITS inherits", "1: ISVOID ISVOID",
    "1: LET let", "1: LOOP LOOP", "1: POOL pool", "1: THEN Then", "1: WHILE while",
    "1: CASE CASE", "1: ESAC esac", "1: NEW NEW", "1: OF of", "1: NOT NOT",
    "1: TRUE true", "1: TRUE tRUE", "1: FALSE false", "1: FALSE fALSE",
    "6: STR_CONST \"tab\\there\\nnl\\\"q\\\\bc\"",
    "7: INT_CONST 0", "7: INT_CONST 42", "7: INT_CONST 007",
    "8: TYPEID Type_1", "8: OBJECTID object_1", "8: TYPEID SELF_TYPE", "8: OBJECTID self",
    "8: TYPEID TRUE"};

// Keyword row of the highlighting rules table, in its printed order.
const std::vector<std::string> kKeywordRow = {
    "class", "else", "false", "fi", "if", "in", "inherits", "isvoid", "let", "loop",
    "pool", "then", "while", "case", "esac", "new", "of", "not", "true"};

std::set<std::string> grammar_keywords(const json& grammar) {
  std::set<std::string> out;
  for (const char* rule : {"control", "keyword", "boolean"}) {
    std::string pattern = grammar["repository"][rule]["match"];
    for (const std::string junk : {"(?i:", "(?i)", "\\b"}) {
      for (auto pos = pattern.find(junk); pos != std::string::npos; pos = pattern.find(junk)) {
        pattern.erase(pos, junk.size());
      }
    }
    std::string cleaned;
    for (char c : pattern) {
      if (c != '(' && c != ')') cleaned += c;
    }
    std::stringstream ss(cleaned);
    for (std::string item; std::getline(ss, item, '|');) out.insert(item);
  }
  return out;
}

void lexical_coverage() {
  auto lexed = coolio::tokenize(kLexicalSample);
  std::vector<std::string> got;
  for (const auto& t : lexed.tokens) {
    if (t.kind == coolio::TokenKind::Eof) break;
    got.push_back(std::to_string(t.span.line) + ": " + std::string(coolio::token_kind_name(t.kind)) +
                  " " + (t.kind == coolio::TokenKind::StringLiteral ? coolio::quote_string(t.text) : t.lexeme));
  }
  for (std::size_t i = 0; i < std::max(got.size(), kLexicalExpected.size()); ++i) {
    const std::string g = i < got.size() ? got[i] : "<none>";
    const std::string e = i < kLexicalExpected.size() ? kLexicalExpected[i] : "<none>";
    check(g == e, "token " + std::to_string(i) + ": got '" + g + "', expected '" + e + "'");
  }
  check(lexed.diagnostics.size() == 1, std::to_string(lexed.diagnostics.size()) + " lexer diagnostics");
  check(lexed.diagnostics[0].line == 7 &&
            lexed.diagnostics[0].message == "integer literal 007 has a leading zero",
        "leading zero not rejected");

  const std::set<std::string> row(kKeywordRow.begin(), kKeywordRow.end());
  check(row.size() == kKeywordRow.size(), "duplicate keyword in row");
  check(grammar_keywords(json::parse(coolio::grammar_json())) == row,
        "grammar keywords differ from the keyword row");
}

void conformance_lattice() {
  testsupport::Rng rng(424242);
  for (int iter = 0; iter < kHierarchies; ++iter) {
    const auto h = testsupport::random_hierarchy(rng, kMaxClasses);
    check(static_cast<int>(h.names.size()) <= kMaxClasses, "hierarchy too large");
    auto fe = coolio::analyze_source(testsupport::hierarchy_source(h));
    check(fe.ok(), "generated hierarchy rejected");
    const coolio::ClassTable& t = *fe.table;
    const testsupport::AncestorOracle oracle(h);
    const auto& types = oracle.types();
    for (const auto& a : types) {
      check(coolio::conforms(t, a, a, "Main"), "reflexivity fails for " + a);
      for (const auto& b : types) {
        const bool ab = coolio::conforms(t, a, b, "Main");
        check(ab == oracle.conforms(a, b), "conforms(" + a + ", " + b + ") disagrees with oracle");
        const std::string j = coolio::join(t, a, b, "Main");
        check(j == oracle.join(a, b), "join(" + a + ", " + b + ") disagrees with oracle");
        check(coolio::conforms(t, a, j, "Main") && coolio::conforms(t, b, j, "Main"),
              "join is not an upper bound");
        for (const auto& c : types) {
          if (ab && coolio::conforms(t, b, c, "Main")) {
            check(coolio::conforms(t, a, c, "Main"), "transitivity fails");
          }
          if (coolio::conforms(t, a, c, "Main") && coolio::conforms(t, b, c, "Main")) {
            check(coolio::conforms(t, j, c, "Main"), "join is not least");
          }
        }
      }
    }
  }
}

void lsp_session() {
  const std::string uri = "file:///session.cl";
  const std::string fixed =
      "class Main {\n  num : Int <- 42;\n  main() : Object { 0 };\n};\n";
  const std::string with_prefix = fixed + "cla";
  std::string input;
  auto send = [&](const json& j) { input += coolio::lsp::frame(j.dump()); };
  send(lsp_request(1, "initialize", {{"capabilities", json::object()}}));
  send(lsp_notification("initialized"));
  send(lsp_notification("textDocument/didOpen",
                        {{"textDocument", {{"uri", uri}, {"languageId", "cool"}, {"version", 1}, {"text", kAttributeError}}}}));
  send(lsp_notification("textDocument/didChange",
                        {{"textDocument", {{"uri", uri}, {"version", 2}}},
                         {"contentChanges", json::array({{{"text", fixed}}})}}));
  send(lsp_notification("textDocument/didSave", {{"textDocument", {{"uri", uri}}}}));
  send(lsp_notification("textDocument/didChange",
                        {{"textDocument", {{"uri", uri}, {"version", 3}}},
                         {"contentChanges", json::array({{{"text", with_prefix}}})}}));
  send(lsp_request(2, "textDocument/completion",
                   {{"textDocument", {{"uri", uri}}}, {"position", {{"line", 4}, {"character", 3}}}}));
  send(lsp_request(3, "shutdown"));
  send(lsp_notification("exit"));

  auto r = testsupport::run_process({kBin, "lsp"}, input, 5000);
  check(!r.timed_out, "server did not exit");
  check(r.exit_code == 0, "exit status " + std::to_string(r.exit_code));

  // Every byte of output must belong to a well-formed frame.
  std::vector<json> msgs;
  std::istringstream stream(r.out);
  std::size_t consumed = 0;
  while (auto f = coolio::lsp::read_frame(stream)) {
    check(!f->malformed, "malformed frame header");
    json j = json::parse(f->body, nullptr, false);
    check(!j.is_discarded() && j.value("jsonrpc", "") == "2.0", "frame body is not JSON-RPC");
    consumed += coolio::lsp::frame(f->body).size();
    msgs.push_back(std::move(j));
  }
  check(consumed == r.out.size(), "stray bytes on stdout");
  check(msgs.size() == 5, std::to_string(msgs.size()) + " messages instead of 5");

  check(msgs[0]["id"] == 1 && msgs[0]["result"]["capabilities"].contains("completionProvider"),
        "bad initialize response");
  check(msgs[1]["method"] == "textDocument/publishDiagnostics" &&
            msgs[1]["params"]["diagnostics"].size() == 1 && msgs[1]["params"]["version"] == 1,
        "open did not publish one diagnostic");
  // The change is silent, so the next message is the save's publish.
  check(msgs[2]["method"] == "textDocument/publishDiagnostics" &&
            msgs[2]["params"]["diagnostics"].empty() && msgs[2]["params"]["version"] == 2,
        "save did not publish an empty list");
  check(msgs[3]["id"] == 2, "no completion response");
  bool found = false;
  for (const auto& item : msgs[3]["result"]) {
    if (item["insertText"] == "class ${1:Name} inherits ${2:Object}{\n\t${0:body}\n};" &&
        item["detail"] == "COOL: class inherits" && item["insertTextFormat"] == 2) {
      found = true;
    }
  }
  check(found, "class inherits snippet missing from completion");
  check(msgs[4]["id"] == 3 && msgs[4].contains("result") && msgs[4]["result"].is_null(),
        "bad shutdown response");
}

void asset_determinism() {
  const auto base = fs::temp_directory_path() / "coolio_acceptance_assets";
  fs::remove_all(base);
  fs::create_directories(base / "first");
  fs::create_directories(base / "second");
  for (const char* dir : {"first", "second"}) {
    auto r = testsupport::run_process({kBin, "emit-assets", "--out", (base / dir).string()});
    check(r.exit_code == 0, "emit-assets failed");
  }
  for (const char* name : {coolio::kGrammarFileName, coolio::kSnippetsFileName}) {
    const std::string a = read_file(base / "first" / name);
    const std::string b = read_file(base / "second" / name);
    check(!a.empty(), std::string(name) + " is empty");
    check(std::hash<std::string>{}(a) == std::hash<std::string>{}(b) && a == b,
          std::string(name) + " differs between runs");
  }
  const json grammar = json::parse(read_file(base / "first" / coolio::kGrammarFileName));
  check(grammar["scopeName"] == "source.cool", "wrong scopeName");
  check(grammar["repository"]["line_comment"]["name"] == "comment.line.double-dash.cool",
        "line comment rule name missing");
  const json snippets = json::parse(read_file(base / "first" / coolio::kSnippetsFileName));
  check(snippets["COOL_class_inherits"]["description"] == "COOL: class inherits",
        "class inherits snippet missing");
  fs::remove_all(base);
}

struct Criterion {
  const char* name;
  double limit_ms;
  std::function<void()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"hello-world-run", kHelloLimitMs, hello_world},
      {"arithmetic-agreement", kArithmeticLimitMs, arithmetic},
      {"attribute-type-error", kAttributeErrorLimitMs, attribute_error},
      {"expression-coverage", kCoverageLimitMs, expression_coverage},
      {"lexical-coverage", kNoLimit, lexical_coverage},
      {"conformance-lattice", kLatticeLimitMs, conformance_lattice},
      {"lsp-session", kLspLimitMs, lsp_session},
      {"asset-determinism", kNoLimit, asset_determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    std::string why;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run();
    } catch (const Failure& f) {
      why = f.why;
    } catch (const std::exception& e) {
      why = std::string("exception: ") + e.what();
    }
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    if (why.empty() && c.limit_ms > 0 && ms > c.limit_ms) {
      why = "took " + std::to_string(static_cast<long>(ms)) + " ms, limit " +
            std::to_string(static_cast<long>(c.limit_ms)) + " ms";
    }
    std::ostringstream line;
    line << (why.empty() ? "PASS " : "FAIL ") << c.name << " (" << static_cast<long>(ms) << " ms)";
    if (!why.empty()) line << ": " << why;
    std::cout << line.str() << std::endl;
    if (!why.empty()) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
