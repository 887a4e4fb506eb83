#include "coolio/parser.hpp"

#include <optional>
#include <utility>

namespace coolio {

namespace {

// Binding strength, loosest first. Assignment and `let` are handled as
// primaries whose bodies extend as far right as possible.
enum Prec : int {
  kPrecNot = 2,
  kPrecCompare = 3,
  kPrecAdditive = 4,
  kPrecMultiplicative = 5,
};

std::optional<BinaryOp> binary_op_for(TokenKind kind) {
  switch (kind) {
    case TokenKind::Plus: return BinaryOp::Add;
    case TokenKind::Minus: return BinaryOp::Sub;
    case TokenKind::Star: return BinaryOp::Mul;
    case TokenKind::Slash: return BinaryOp::Div;
    case TokenKind::Less: return BinaryOp::Less;
    case TokenKind::LessEqual: return BinaryOp::LessEqual;
    case TokenKind::Equal: return BinaryOp::Equal;
    default: return std::nullopt;
  }
}

int precedence(BinaryOp op) {
  switch (op) {
    case BinaryOp::Mul:
    case BinaryOp::Div: return kPrecMultiplicative;
    case BinaryOp::Add:
    case BinaryOp::Sub: return kPrecAdditive;
    default: return kPrecCompare;
  }
}

struct SyntaxError {};

class Parser {
 public:
  explicit Parser(std::span<const Token> tokens) : toks_(tokens) {
    if (toks_.empty()) {
      static const Token kEof{};
      toks_ = std::span<const Token>(&kEof, 1);
    }
  }

  ParseResult program() {
    ParseResult result;
    if (at(TokenKind::Eof)) {
      report(peek(), "program requires at least one class");
    }
    while (!at(TokenKind::Eof)) {
      if (!at(TokenKind::KwClass)) {
        report(peek(), "unexpected " + describe_token(peek()) + ", expected 'class'");
        skip_to_class();
        continue;
      }
      try {
        result.program.classes.push_back(class_decl());
      } catch (const SyntaxError&) {
        skip_to_class();
        continue;
      }
      if (at(TokenKind::Semicolon)) {
        advance();
      } else {
        report(peek(), "expected ';' after class definition, found " + describe_token(peek()));
        if (!at(TokenKind::KwClass)) skip_to_class();
      }
    }
    result.diagnostics = std::move(diags_);
    return result;
  }

  ExprParseResult single_expression() {
    ExprParseResult result;
    try {
      auto e = expr();
      if (!at(TokenKind::Eof)) {
        fail(peek(), "unexpected " + describe_token(peek()) + " after expression");
      }
      result.expr = std::move(e);
    } catch (const SyntaxError&) {
    }
    result.diagnostics = std::move(diags_);
    return result;
  }

 private:
  class DepthGuard {
   public:
    explicit DepthGuard(Parser& p) : p_(p) {
      if (p_.depth_ >= kMaxNestingDepth) p_.fail(p_.peek(), "expression nesting too deep");
      ++p_.depth_;
    }
    ~DepthGuard() { --p_.depth_; }
    DepthGuard(const DepthGuard&) = delete;
    DepthGuard& operator=(const DepthGuard&) = delete;

   private:
    Parser& p_;
  };

  const Token& peek(std::size_t ahead = 0) const {
    const std::size_t i = pos_ + ahead;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }

  bool at(TokenKind kind) const { return peek().kind == kind; }

  const Token& advance() {
    const Token& tok = peek();
    if (pos_ < toks_.size() - 1) {
      last_end_ = tok.span.end_offset;
      ++pos_;
    }
    return tok;
  }

  void report(const Token& tok, std::string message) {
    diags_.push_back(Diagnostic{Phase::Parsing, tok.span.line, std::move(message), tok.span, {}});
  }

  [[noreturn]] void fail(const Token& tok, std::string message) {
    report(tok, std::move(message));
    throw SyntaxError{};
  }

  const Token& expect(TokenKind kind, std::string_view what) {
    if (!at(kind)) {
      fail(peek(), "unexpected " + describe_token(peek()) + ", expected " + std::string(what));
    }
    return advance();
  }

  SourceSpan span_since(const Token& start) const {
    SourceSpan span = start.span;
    span.end_offset = std::max(last_end_, start.span.end_offset);
    return span;
  }

  void skip_to_class() {
    if (!at(TokenKind::Eof)) advance();
    while (!at(TokenKind::Eof) && !at(TokenKind::KwClass)) advance();
  }

  // Re-scans from the start of the failed feature with brace counting and
  // stops after the `;` that ends it, before the `}` that ends the class,
  // or before the next `class` keyword.
  void recover_feature(std::size_t feature_start) {
    pos_ = feature_start;
    int depth = 0;
    while (!at(TokenKind::Eof) && !at(TokenKind::KwClass)) {
      const TokenKind kind = peek().kind;
      if (kind == TokenKind::RBrace && depth == 0) return;
      if (kind == TokenKind::Semicolon && depth == 0) {
        advance();
        return;
      }
      if (kind == TokenKind::LBrace) ++depth;
      if (kind == TokenKind::RBrace) --depth;
      advance();
    }
  }

  ClassDecl class_decl() {
    const Token& start = expect(TokenKind::KwClass, "'class'");
    ClassDecl cls;
    cls.name = expect(TokenKind::TypeId, "a class name").lexeme;
    if (at(TokenKind::KwInherits)) {
      advance();
      cls.parent = expect(TokenKind::TypeId, "a parent class name").lexeme;
    }
    expect(TokenKind::LBrace, "'{'");
    while (!at(TokenKind::RBrace) && !at(TokenKind::Eof) && !at(TokenKind::KwClass)) {
      const std::size_t feature_start = pos_;
      try {
        cls.features.push_back(feature());
        if (!at(TokenKind::Semicolon)) {
          fail(peek(), "expected ';' after feature, found " + describe_token(peek()));
        }
        advance();
      } catch (const SyntaxError&) {
        recover_feature(feature_start);
      }
    }
    if (at(TokenKind::RBrace)) {
      advance();
    } else {
      report(peek(), "expected '}' to close class " + cls.name + ", found " +
                         describe_token(peek()));
    }
    cls.span = span_since(start);
    return cls;
  }

  Feature feature() {
    const Token& start = peek();
    const std::string name = expect(TokenKind::ObjectId, "a feature name").lexeme;
    if (at(TokenKind::LParen)) {
      advance();
      Method m;
      m.name = name;
      if (!at(TokenKind::RParen)) {
        m.formals.push_back(formal());
        while (at(TokenKind::Comma)) {
          advance();
          m.formals.push_back(formal());
        }
      }
      expect(TokenKind::RParen, "')'");
      expect(TokenKind::Colon, "':'");
      m.return_type = expect(TokenKind::TypeId, "a return type").lexeme;
      expect(TokenKind::LBrace, "'{'");
      m.body = expr();
      expect(TokenKind::RBrace, "'}'");
      return Feature{std::move(m), span_since(start)};
    }
    expect(TokenKind::Colon, "':' or '('");
    Attribute a;
    a.name = name;
    a.declared_type = expect(TokenKind::TypeId, "a type name").lexeme;
    if (at(TokenKind::Assign)) {
      advance();
      a.init = expr();
    }
    return Feature{std::move(a), span_since(start)};
  }

  Formal formal() {
    const Token& start = peek();
    Formal f;
    f.name = expect(TokenKind::ObjectId, "a formal parameter name").lexeme;
    expect(TokenKind::Colon, "':'");
    f.type = expect(TokenKind::TypeId, "a type name").lexeme;
    f.span = span_since(start);
    return f;
  }

  ExprPtr expr() { return binary(0); }

  ExprPtr binary(int min_prec) {
    DepthGuard guard(*this);
    const Token& start = peek();
    ExprPtr lhs = unary();
    int chain = 0;
    while (auto op = binary_op_for(peek().kind)) {
      const int prec = precedence(*op);
      if (prec < min_prec) break;
      if (depth_ + ++chain > kMaxNestingDepth) fail(peek(), "expression nesting too deep");
      advance();
      ExprPtr rhs = binary(prec + 1);
      lhs = make_expr(BinaryExpr{*op, std::move(lhs), std::move(rhs)}, span_since(start));
      if (prec == kPrecCompare) {
        if (auto next = binary_op_for(peek().kind); next && precedence(*next) == kPrecCompare) {
          fail(peek(), "comparison operators are non-associative; parenthesize " +
                           describe_token(peek()));
        }
      }
    }
    return lhs;
  }

  ExprPtr unary() {
    DepthGuard guard(*this);
    const Token& start = peek();
    switch (start.kind) {
      case TokenKind::KwNot: {
        advance();
        auto operand = binary(kPrecCompare);
        return make_expr(NotExpr{std::move(operand)}, span_since(start));
      }
      case TokenKind::Tilde: {
        advance();
        auto operand = unary();
        return make_expr(NegateExpr{std::move(operand)}, span_since(start));
      }
      case TokenKind::KwIsvoid: {
        advance();
        auto operand = unary();
        return make_expr(IsVoidExpr{std::move(operand)}, span_since(start));
      }
      default:
        return postfix();
    }
  }

  std::vector<ExprPtr> arguments() {
    expect(TokenKind::LParen, "'('");
    std::vector<ExprPtr> args;
    if (!at(TokenKind::RParen)) {
      args.push_back(expr());
      while (at(TokenKind::Comma)) {
        advance();
        args.push_back(expr());
      }
    }
    expect(TokenKind::RParen, "')' or ','");
    return args;
  }

  ExprPtr postfix() {
    const Token& start = peek();
    ExprPtr e = primary();
    while (at(TokenKind::At) || at(TokenKind::Dot)) {
      DispatchExpr d;
      if (at(TokenKind::At)) {
        advance();
        d.static_type = expect(TokenKind::TypeId, "a type name after '@'").lexeme;
        expect(TokenKind::Dot, "'.'");
      } else {
        advance();
      }
      d.method = expect(TokenKind::ObjectId, "a method name").lexeme;
      d.receiver = std::move(e);
      d.args = arguments();
      e = make_expr(std::move(d), span_since(start));
    }
    return e;
  }

  ExprPtr primary() {
    const Token& start = peek();
    switch (start.kind) {
      case TokenKind::ObjectId: {
        advance();
        if (at(TokenKind::Assign)) {
          advance();
          auto value = expr();
          return make_expr(AssignExpr{start.lexeme, std::move(value)}, span_since(start));
        }
        if (at(TokenKind::LParen)) {
          DispatchExpr d;
          d.method = start.lexeme;
          d.args = arguments();
          return make_expr(std::move(d), span_since(start));
        }
        return make_expr(IdentifierExpr{start.lexeme}, start.span);
      }
      case TokenKind::IntLiteral:
        advance();
        return make_expr(IntConst{start.int_value}, start.span);
      case TokenKind::StringLiteral:
        advance();
        return make_expr(StringConst{start.text}, start.span);
      case TokenKind::KwTrue:
      case TokenKind::KwFalse:
        advance();
        return make_expr(BoolConst{start.kind == TokenKind::KwTrue}, start.span);
      case TokenKind::LParen: {
        advance();
        auto inner = expr();
        expect(TokenKind::RParen, "')'");
        return make_expr(ParenExpr{std::move(inner)}, span_since(start));
      }
      case TokenKind::LBrace: return block();
      case TokenKind::KwIf: return if_expr();
      case TokenKind::KwWhile: return while_expr();
      case TokenKind::KwLet: return let_expr();
      case TokenKind::KwCase: return case_expr();
      case TokenKind::KwNew: {
        advance();
        auto type = expect(TokenKind::TypeId, "a type name after 'new'").lexeme;
        return make_expr(NewExpr{std::move(type)}, span_since(start));
      }
      default:
        fail(start, "unexpected " + describe_token(start) + ", expected an expression");
    }
  }

  ExprPtr block() {
    const Token& start = advance();
    BlockExpr b;
    if (at(TokenKind::RBrace)) fail(peek(), "a block must contain at least one expression");
    while (!at(TokenKind::RBrace)) {
      b.body.push_back(expr());
      expect(TokenKind::Semicolon, "';' after expression in block");
    }
    advance();
    return make_expr(std::move(b), span_since(start));
  }

  ExprPtr if_expr() {
    const Token& start = advance();
    auto cond = expr();
    expect(TokenKind::KwThen, "'then'");
    auto then_branch = expr();
    expect(TokenKind::KwElse, "'else'");
    auto else_branch = expr();
    expect(TokenKind::KwFi, "'fi'");
    return make_expr(IfExpr{std::move(cond), std::move(then_branch), std::move(else_branch)},
                     span_since(start));
  }

  ExprPtr while_expr() {
    const Token& start = advance();
    auto cond = expr();
    expect(TokenKind::KwLoop, "'loop'");
    auto body = expr();
    expect(TokenKind::KwPool, "'pool'");
    return make_expr(WhileExpr{std::move(cond), std::move(body)}, span_since(start));
  }

  ExprPtr let_expr() {
    const Token& start = advance();
    LetExpr let;
    do {
      if (!let.bindings.empty()) advance();  // ','
      const Token& bstart = peek();
      LetBinding b;
      b.name = expect(TokenKind::ObjectId, "a variable name in 'let'").lexeme;
      expect(TokenKind::Colon, "':'");
      b.type = expect(TokenKind::TypeId, "a type name").lexeme;
      if (at(TokenKind::Assign)) {
        advance();
        b.init = expr();
      }
      b.span = span_since(bstart);
      let.bindings.push_back(std::move(b));
    } while (at(TokenKind::Comma));
    expect(TokenKind::KwIn, "'in' or ','");
    let.body = expr();
    return make_expr(std::move(let), span_since(start));
  }

  ExprPtr case_expr() {
    const Token& start = advance();
    CaseExpr c;
    c.scrutinee = expr();
    expect(TokenKind::KwOf, "'of'");
    do {
      const Token& bstart = peek();
      CaseBranch b;
      b.name = expect(TokenKind::ObjectId, "a variable name in case branch").lexeme;
      expect(TokenKind::Colon, "':'");
      b.type = expect(TokenKind::TypeId, "a type name").lexeme;
      expect(TokenKind::DoubleArrow, "'=>'");
      b.body = expr();
      expect(TokenKind::Semicolon, "';' after case branch");
      b.span = span_since(bstart);
      c.branches.push_back(std::move(b));
    } while (!at(TokenKind::KwEsac) && !at(TokenKind::Eof));
    expect(TokenKind::KwEsac, "'esac'");
    return make_expr(std::move(c), span_since(start));
  }

  std::span<const Token> toks_;
  std::size_t pos_ = 0;
  std::size_t last_end_ = 0;
  int depth_ = 0;
  std::vector<Diagnostic> diags_;
};

}  // namespace

ParseResult parse(std::span<const Token> tokens) { return Parser(tokens).program(); }

ExprParseResult parse_expression(std::span<const Token> tokens) {
  return Parser(tokens).single_expression();
}

ParseResult parse_source(std::string_view source) {
  LexResult lexed = tokenize(source);
  ParseResult parsed = parse(lexed.tokens);
  lexed.diagnostics.insert(lexed.diagnostics.end(),
                           std::make_move_iterator(parsed.diagnostics.begin()),
                           std::make_move_iterator(parsed.diagnostics.end()));
  parsed.diagnostics = std::move(lexed.diagnostics);
  return parsed;
}

ExprParseResult parse_expression_source(std::string_view source) {
  LexResult lexed = tokenize(source);
  ExprParseResult parsed = parse_expression(lexed.tokens);
  lexed.diagnostics.insert(lexed.diagnostics.end(),
                           std::make_move_iterator(parsed.diagnostics.begin()),
                           std::make_move_iterator(parsed.diagnostics.end()));
  parsed.diagnostics = std::move(lexed.diagnostics);
  return parsed;
}

}  // namespace coolio
