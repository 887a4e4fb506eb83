#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "coolio/ast.hpp"
#include "coolio/diagnostics.hpp"
#include "coolio/lexer.hpp"

namespace coolio {

struct ParseResult {
  Program program;
  std::vector<Diagnostic> diagnostics;
};

struct ExprParseResult {
  ExprPtr expr;  // null when nothing could be parsed
  std::vector<Diagnostic> diagnostics;
};

/// Expressions nested deeper than this are rejected with a diagnostic.
inline constexpr int kMaxNestingDepth = 1000;

/// Parses a whole program. Syntax errors are reported in phase Parsing and
/// the parser resynchronizes at the next feature (`;`) or class keyword,
/// so one error does not hide the rest of the file. Never throws.
ParseResult parse(std::span<const Token> tokens);

/// Parses a single expression that must span the whole token list.
ExprParseResult parse_expression(std::span<const Token> tokens);

/// Source-level conveniences: tokenize then parse, with lexing diagnostics
/// placed ahead of parsing diagnostics.
ParseResult parse_source(std::string_view source);
ExprParseResult parse_expression_source(std::string_view source);

/// Renders a program back to COOL: two-space indentation, one feature per
/// line group, parentheses only where operator precedence requires them.
std::string pretty_print(const Program& program);
std::string pretty_print(const Expr& expr);

}  // namespace coolio
