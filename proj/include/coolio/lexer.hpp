#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "coolio/diagnostics.hpp"
#include "coolio/source_span.hpp"

namespace coolio {

enum class TokenKind {
  // keywords
  KwClass,
  KwElse,
  KwFalse,
  KwFi,
  KwIf,
  KwIn,
  KwInherits,
  KwIsvoid,
  KwLet,
  KwLoop,
  KwPool,
  KwThen,
  KwWhile,
  KwCase,
  KwEsac,
  KwNew,
  KwOf,
  KwNot,
  KwTrue,
  // identifiers and literals
  TypeId,
  ObjectId,
  IntLiteral,
  StringLiteral,
  // operators and punctuation
  Assign,     // <-
  At,         // @
  Dot,        // .
  Comma,      // ,
  Semicolon,  // ;
  Colon,      // :
  LParen,
  RParen,
  LBrace,
  RBrace,
  Plus,
  Minus,
  Star,
  Slash,
  Tilde,
  Less,
  LessEqual,
  Equal,
  DoubleArrow,  // =>
  Eof,
};

struct Token {
  TokenKind kind = TokenKind::Eof;
  std::string lexeme;   // raw source text
  SourceSpan span;
  std::int32_t int_value = 0;  // IntLiteral only
  std::string text;            // decoded StringLiteral contents
};

bool is_keyword(TokenKind kind);

/// Lower-case spelling of each keyword, in the order the lexical rules
/// list them.
std::span<const std::string_view> keyword_spellings();

/// Upper-case name used by the `lex` dump (CLASS, TYPEID, ASSIGN, ...).
std::string_view token_kind_name(TokenKind kind);

/// Human-readable description for parser messages: the lexeme for fixed
/// tokens, a category for identifiers and literals.
std::string describe_token(const Token& token);

struct LexResult {
  std::vector<Token> tokens;
  std::vector<Diagnostic> diagnostics;
};

inline constexpr std::size_t kMaxStringLength = 1024;

/// Scans the whole source. Always terminates the token list with Eof and
/// never throws; malformed input becomes diagnostics in phase Lexing.
LexResult tokenize(std::string_view source);

}  // namespace coolio
