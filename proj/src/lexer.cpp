#include "coolio/lexer.hpp"

#include <array>
#include <cctype>
#include <cstdio>
#include <optional>
#include <utility>

#include "utf8.hpp"

namespace coolio {

namespace {

struct KeywordEntry {
  std::string_view spelling;
  TokenKind kind;
};

constexpr std::array<KeywordEntry, 19> kKeywords{{
    {"class", TokenKind::KwClass},
    {"else", TokenKind::KwElse},
    {"false", TokenKind::KwFalse},
    {"fi", TokenKind::KwFi},
    {"if", TokenKind::KwIf},
    {"in", TokenKind::KwIn},
    {"inherits", TokenKind::KwInherits},
    {"isvoid", TokenKind::KwIsvoid},
    {"let", TokenKind::KwLet},
    {"loop", TokenKind::KwLoop},
    {"pool", TokenKind::KwPool},
    {"then", TokenKind::KwThen},
    {"while", TokenKind::KwWhile},
    {"case", TokenKind::KwCase},
    {"esac", TokenKind::KwEsac},
    {"new", TokenKind::KwNew},
    {"of", TokenKind::KwOf},
    {"not", TokenKind::KwNot},
    {"true", TokenKind::KwTrue},
}};

constexpr std::array<std::string_view, 19> kKeywordSpellings = [] {
  std::array<std::string_view, 19> out{};
  for (std::size_t i = 0; i < kKeywords.size(); ++i) out[i] = kKeywords[i].spelling;
  return out;
}();

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
}

bool equals_ignore_case(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(a[i])) != b[i]) return false;
  }
  return true;
}

TokenKind classify_identifier(std::string_view word) {
  for (const auto& kw : kKeywords) {
    if (!equals_ignore_case(word, kw.spelling)) continue;
    // true/false must start lowercase; `True` is a type name.
    const bool boolean = kw.kind == TokenKind::KwTrue || kw.kind == TokenKind::KwFalse;
    if (boolean && word.front() != kw.spelling.front()) break;
    return kw.kind;
  }
  return std::isupper(static_cast<unsigned char>(word.front())) != 0 ? TokenKind::TypeId
                                                                      : TokenKind::ObjectId;
}

std::string printable(std::string_view raw) {
  std::string out;
  for (char c : raw) {
    const auto u = static_cast<unsigned char>(c);
    if (u < 0x20 || u == 0x7F) {
      char buf[8];
      std::snprintf(buf, sizeof buf, "\\x%02X", u);
      out += buf;
    } else {
      out += c;
    }
  }
  return out;
}

class Lexer {
 public:
  explicit Lexer(std::string_view source) : src_(source) {}

  LexResult run() {
    while (pos_ < src_.size()) scan_one();
    Token eof;
    eof.kind = TokenKind::Eof;
    eof.span = SourceSpan{pos_, pos_, line_, column_};
    result_.tokens.push_back(std::move(eof));
    return std::move(result_);
  }

 private:
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }

  void advance(std::size_t count = 1) {
    for (std::size_t i = 0; i < count && pos_ < src_.size(); ++i) {
      if (src_[pos_] == '\n') {
        ++line_;
        column_ = 1;
      } else {
        ++column_;
      }
      ++pos_;
    }
  }

  SourceSpan span_from(std::size_t start, int line, int column) const {
    return SourceSpan{start, pos_, line, column};
  }

  void report(const SourceSpan& span, std::string message) {
    result_.diagnostics.push_back(
        Diagnostic{Phase::Lexing, span.line, std::move(message), span, std::nullopt});
  }

  Token& emit(TokenKind kind, std::size_t start, int line, int column) {
    Token tok;
    tok.kind = kind;
    tok.span = span_from(start, line, column);
    tok.lexeme = std::string(src_.substr(start, pos_ - start));
    result_.tokens.push_back(std::move(tok));
    return result_.tokens.back();
  }

  void scan_one() {
    const std::size_t start = pos_;
    const int line = line_;
    const int column = column_;
    const char c = peek();

    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
      advance();
      return;
    }
    if (c == '-' && peek(1) == '-') {
      while (pos_ < src_.size() && peek() != '\n') advance();
      return;
    }
    if (c == '(' && peek(1) == '*') {
      block_comment(start, line, column);
      return;
    }
    if (c == '*' && peek(1) == ')') {
      advance(2);
      report(span_from(start, line, column), "unmatched '*)'");
      return;
    }
    if (c == '"') {
      string_literal(start, line, column);
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) != 0) {
      integer_literal(start, line, column);
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) != 0) {
      while (is_ident_char(peek())) advance();
      const auto word = src_.substr(start, pos_ - start);
      emit(classify_identifier(word), start, line, column);
      return;
    }
    if (auto kind = two_char_operator(c, peek(1)); kind) {
      advance(2);
      emit(*kind, start, line, column);
      return;
    }
    if (auto kind = one_char_operator(c); kind) {
      advance();
      emit(*kind, start, line, column);
      return;
    }
    advance(utf8::sequence_length(src_, pos_));
    const auto raw = src_.substr(start, pos_ - start);
    report(span_from(start, line, column), "invalid character '" + printable(raw) + "'");
  }

  static std::optional<TokenKind> two_char_operator(char a, char b) {
    if (a == '<' && b == '-') return TokenKind::Assign;
    if (a == '<' && b == '=') return TokenKind::LessEqual;
    if (a == '=' && b == '>') return TokenKind::DoubleArrow;
    return std::nullopt;
  }

  static std::optional<TokenKind> one_char_operator(char c) {
    switch (c) {
      case '@': return TokenKind::At;
      case '.': return TokenKind::Dot;
      case ',': return TokenKind::Comma;
      case ';': return TokenKind::Semicolon;
      case ':': return TokenKind::Colon;
      case '(': return TokenKind::LParen;
      case ')': return TokenKind::RParen;
      case '{': return TokenKind::LBrace;
      case '}': return TokenKind::RBrace;
      case '+': return TokenKind::Plus;
      case '-': return TokenKind::Minus;
      case '*': return TokenKind::Star;
      case '/': return TokenKind::Slash;
      case '~': return TokenKind::Tilde;
      case '<': return TokenKind::Less;
      case '=': return TokenKind::Equal;
      default: return std::nullopt;
    }
  }

  void block_comment(std::size_t start, int line, int column) {
    int depth = 0;
    while (pos_ < src_.size()) {
      if (peek() == '(' && peek(1) == '*') {
        ++depth;
        advance(2);
      } else if (peek() == '*' && peek(1) == ')') {
        --depth;
        advance(2);
        if (depth == 0) return;
      } else {
        advance();
      }
    }
    report(span_from(start, line, column), "unterminated block comment at end of file");
  }

  void integer_literal(std::size_t start, int line, int column) {
    while (std::isdigit(static_cast<unsigned char>(peek())) != 0) advance();
    const auto digits = src_.substr(start, pos_ - start);
    Token& tok = emit(TokenKind::IntLiteral, start, line, column);
    const SourceSpan span = tok.span;

    std::int64_t value = 0;
    bool overflow = false;
    for (char d : digits) {
      value = value * 10 + (d - '0');
      if (value > INT32_MAX) {
        overflow = true;
        break;
      }
    }
    tok.int_value = overflow ? 0 : static_cast<std::int32_t>(value);
    if (digits.size() > 1 && digits.front() == '0') {
      report(span, "integer literal " + std::string(digits) + " has a leading zero");
    }
    if (overflow) {
      report(span, "integer literal " + std::string(digits) + " is out of range");
    }
  }

  void string_literal(std::size_t start, int line, int column) {
    advance();  // opening quote
    std::string decoded;
    bool terminated = false;
    while (pos_ < src_.size()) {
      const char c = peek();
      if (c == '"') {
        advance();
        terminated = true;
        break;
      }
      if (c == '\n') break;
      if (c == '\\') {
        if (pos_ + 1 >= src_.size()) {
          advance();
          break;
        }
        const char escaped = peek(1);
        advance(2);
        switch (escaped) {
          case 'n': decoded += '\n'; break;
          case 't': decoded += '\t'; break;
          case 'b': decoded += '\b'; break;
          case 'f': decoded += '\f'; break;
          default: decoded += escaped; break;  // includes \\, \", and escaped newline
        }
        continue;
      }
      decoded += c;
      advance();
    }

    Token& tok = emit(TokenKind::StringLiteral, start, line, column);
    const SourceSpan span = tok.span;
    const std::size_t length = decoded.size();
    tok.text = std::move(decoded);
    if (!terminated) {
      report(span, pos_ >= src_.size() ? "unterminated string constant at end of file"
                                        : "unterminated string constant");
    } else if (length > kMaxStringLength) {
      report(span, "string constant too long (" + std::to_string(length) + " > " +
                       std::to_string(kMaxStringLength) + " characters)");
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
  LexResult result_;
};

}  // namespace

bool is_keyword(TokenKind kind) {
  return static_cast<int>(kind) <= static_cast<int>(TokenKind::KwTrue);
}

std::span<const std::string_view> keyword_spellings() { return kKeywordSpellings; }

std::string_view token_kind_name(TokenKind kind) {
  switch (kind) {
    case TokenKind::KwClass: return "CLASS";
    case TokenKind::KwElse: return "ELSE";
    case TokenKind::KwFalse: return "FALSE";
    case TokenKind::KwFi: return "FI";
    case TokenKind::KwIf: return "IF";
    case TokenKind::KwIn: return "IN";
    case TokenKind::KwInherits: return "INHERITS";
    case TokenKind::KwIsvoid: return "ISVOID";
    case TokenKind::KwLet: return "LET";
    case TokenKind::KwLoop: return "LOOP";
    case TokenKind::KwPool: return "POOL";
    case TokenKind::KwThen: return "THEN";
    case TokenKind::KwWhile: return "WHILE";
    case TokenKind::KwCase: return "CASE";
    case TokenKind::KwEsac: return "ESAC";
    case TokenKind::KwNew: return "NEW";
    case TokenKind::KwOf: return "OF";
    case TokenKind::KwNot: return "NOT";
    case TokenKind::KwTrue: return "TRUE";
    case TokenKind::TypeId: return "TYPEID";
    case TokenKind::ObjectId: return "OBJECTID";
    case TokenKind::IntLiteral: return "INT_CONST";
    case TokenKind::StringLiteral: return "STR_CONST";
    case TokenKind::Assign: return "ASSIGN";
    case TokenKind::At: return "AT";
    case TokenKind::Dot: return "DOT";
    case TokenKind::Comma: return "COMMA";
    case TokenKind::Semicolon: return "SEMI";
    case TokenKind::Colon: return "COLON";
    case TokenKind::LParen: return "LPAREN";
    case TokenKind::RParen: return "RPAREN";
    case TokenKind::LBrace: return "LBRACE";
    case TokenKind::RBrace: return "RBRACE";
    case TokenKind::Plus: return "PLUS";
    case TokenKind::Minus: return "MINUS";
    case TokenKind::Star: return "STAR";
    case TokenKind::Slash: return "SLASH";
    case TokenKind::Tilde: return "TILDE";
    case TokenKind::Less: return "LT";
    case TokenKind::LessEqual: return "LE";
    case TokenKind::Equal: return "EQ";
    case TokenKind::DoubleArrow: return "DARROW";
    case TokenKind::Eof: return "EOF";
  }
  return "UNKNOWN";
}

std::string describe_token(const Token& token) {
  switch (token.kind) {
    case TokenKind::Eof: return "end of file";
    case TokenKind::TypeId: return "type name '" + token.lexeme + "'";
    case TokenKind::ObjectId: return "identifier '" + token.lexeme + "'";
    case TokenKind::IntLiteral: return "integer " + token.lexeme;
    case TokenKind::StringLiteral: return "string constant";
    default: return "'" + token.lexeme + "'";
  }
}

LexResult tokenize(std::string_view source) { return Lexer(source).run(); }

}  // namespace coolio
