// coolio: command-line front end for the COOL tools.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "coolio/assets.hpp"
#include "coolio/interpreter.hpp"
#include "coolio/lexer.hpp"
#include "coolio/lsp/server.hpp"
#include "coolio/parser.hpp"
#include "coolio/semantics.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDiagnostics = 1;
constexpr int kExitUsage = 2;
constexpr int kExitAbort = 3;

std::optional<std::string> read_source(const std::string& path) {
  if (!std::filesystem::path(path).has_extension() ||
      std::filesystem::path(path).extension() != ".cl") {
    std::cerr << "warning: " << path << " does not have a .cl extension\n";
  }
  std::ifstream in(path, std::ios::binary);
  if (!in || std::filesystem::is_directory(path)) {
    std::cerr << "coolio: cannot read " << path << "\n";
    return std::nullopt;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int report(const std::vector<coolio::Diagnostic>& diagnostics) {
  for (const auto& d : diagnostics) std::cerr << coolio::format_diagnostic(d) << "\n";
  return diagnostics.empty() ? kExitOk : kExitDiagnostics;
}

int cmd_lex(const std::string& source) {
  coolio::LexResult lexed = coolio::tokenize(source);
  for (const auto& t : lexed.tokens) {
    if (t.kind == coolio::TokenKind::Eof) break;
    std::cout << t.span.line << ": " << coolio::token_kind_name(t.kind) << " ";
    if (t.kind == coolio::TokenKind::StringLiteral) {
      std::cout << coolio::quote_string(t.text);
    } else {
      std::cout << t.lexeme;
    }
    std::cout << "\n";
  }
  return report(lexed.diagnostics);
}

int cmd_parse(const std::string& source) {
  coolio::ParseResult parsed = coolio::parse_source(source);
  coolio::sort_diagnostics(parsed.diagnostics);
  if (parsed.diagnostics.empty()) std::cout << coolio::dump_ast(parsed.program);
  return report(parsed.diagnostics);
}

void print_class_map(const coolio::ClassTable& table) {
  for (const auto& name : table.class_names()) {
    const coolio::ClassInfo& info = table.at(name);
    if (info.builtin) continue;
    std::cout << "class " << info.name << " inherits " << info.parent << "\n";
    for (const auto& a : info.attributes) {
      std::cout << "  attribute " << a.name << " : " << a.declared_type << "\n";
    }
    for (const auto& [method_name, sig] : info.methods) {
      std::cout << "  method " << method_name << "(";
      for (std::size_t i = 0; i < sig.formal_types.size(); ++i) {
        if (i) std::cout << ", ";
        std::cout << sig.formal_names[i] << " : " << sig.formal_types[i];
      }
      std::cout << ") : " << sig.return_type << "\n";
    }
  }
}

int cmd_typecheck(const std::string& source) {
  coolio::FrontendResult result = coolio::analyze_source(source);
  if (result.ok()) {
    std::cout << "OK\n";
    print_class_map(*result.table);
  }
  return report(result.diagnostics);
}

int cmd_run(const std::string& source, std::optional<std::uint64_t> fuel) {
  coolio::FrontendResult result = coolio::analyze_source(source);
  if (!result.ok()) return report(result.diagnostics);
  coolio::RunOptions options;
  options.fuel = fuel;
  coolio::RunResult run = coolio::run_program(result.program, *result.table, std::cin, std::cout, options);
  std::cout.flush();
  switch (run.status) {
    case coolio::RunStatus::Ok: return kExitOk;
    case coolio::RunStatus::Aborted: std::cerr << run.abort_message << "\n"; return kExitAbort;
    case coolio::RunStatus::RuntimeError: return report({*run.error});
  }
  return kExitDiagnostics;
}

int cmd_emit_assets(const std::string& out_dir) {
  try {
    for (const auto& path : coolio::emit_assets(out_dir)) std::cout << path.string() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "coolio: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tools for the COOL language", "coolio"};
  app.require_subcommand(1);

  std::string file;
  auto add_phase = [&](const char* name, const char* help) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("file", file, "COOL source file (.cl)")->required();
    return sub;
  };
  auto* lex = add_phase("lex", "Print the token stream");
  auto* parse = add_phase("parse", "Print the syntax tree");
  auto* typecheck = add_phase("typecheck", "Type check and print the class map");
  auto* run = add_phase("run", "Type check, then execute Main.main()");
  std::optional<std::uint64_t> fuel;
  run->add_option("--fuel", fuel, "Stop after this many evaluation steps");
  auto* lsp = app.add_subcommand("lsp", "Run the language server on stdin/stdout");
  std::string out_dir = ".";
  auto* emit = app.add_subcommand("emit-assets", "Write the TextMate grammar and snippets");
  emit->add_option("--out", out_dir, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  if (*lsp) return coolio::lsp::serve(std::cin, std::cout);
  if (*emit) return cmd_emit_assets(out_dir);

  std::optional<std::string> source = read_source(file);
  if (!source) return kExitUsage;
  if (*lex) return cmd_lex(*source);
  if (*parse) return cmd_parse(*source);
  if (*typecheck) return cmd_typecheck(*source);
  if (*run) return cmd_run(*source, fuel);
  return kExitUsage;
}
