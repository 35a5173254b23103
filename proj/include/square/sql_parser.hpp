#pragma once

#include <cctype>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "square/errors.hpp"
#include "square/sql_ast.hpp"
#include "square/text.hpp"

namespace square {

// Recursive-descent parser for the constrained subset:
//   SELECT ... FROM t [WHERE ...] [GROUP BY ...] [ORDER BY ...] [LIMIT n]
// Everything else — DDL, DML, joins, subqueries, set operations, comments,
// statement chaining — is rejected with a named error before any execution
// path can see it.
namespace sql {

struct Token {
  enum class Kind { Ident, Number, String, Symbol, End };
  Kind kind = Kind::End;
  std::string value;   // identifiers lowercased; symbols literal; strings unquoted
  std::string raw;     // as written
  std::size_t pos = 0;
};

namespace detail {

inline const std::set<std::string>& forbidden_statements() {
  static const std::set<std::string> kSet = {
      "insert", "update", "delete", "replace", "merge",  // DML
      "drop",   "create", "alter",  "truncate",          // DDL
      "pragma", "attach", "detach", "vacuum", "grant", "revoke", "with"};
  return kSet;
}

inline std::string classify_forbidden(const std::string& kw) {
  if (kw == "insert" || kw == "update" || kw == "delete" || kw == "replace" ||
      kw == "merge")
    return "DML";
  if (kw == "drop" || kw == "create" || kw == "alter" || kw == "truncate") return "DDL";
  if (kw == "with") return "common table expression";
  return "administrative statement";
}

inline std::vector<Token> tokenize(const std::string& input) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < input.size()) {
    char c = input[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '-' && i + 1 < input.size() && input[i + 1] == '-')
      throw SqlUnsupportedFeatureError("comment");
    if (c == '/' && i + 1 < input.size() && input[i + 1] == '*')
      throw SqlUnsupportedFeatureError("comment");
    if (c == '#') throw SqlUnsupportedFeatureError("comment");
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = i;
      while (i < input.size() && (std::isalnum(static_cast<unsigned char>(input[i])) ||
                                  input[i] == '_'))
        ++i;
      Token t;
      t.kind = Token::Kind::Ident;
      t.raw = input.substr(start, i - start);
      t.value = text::to_lower(t.raw);
      t.pos = start;
      out.push_back(std::move(t));
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && i + 1 < input.size() &&
         std::isdigit(static_cast<unsigned char>(input[i + 1])))) {
      std::size_t start = i;
      int dots = 0;
      while (i < input.size() && (std::isdigit(static_cast<unsigned char>(input[i])) ||
                                  input[i] == '.')) {
        if (input[i] == '.') ++dots;
        ++i;
      }
      if (dots > 1) throw SqlParseError("malformed number", start);
      Token t;
      t.kind = Token::Kind::Number;
      t.raw = input.substr(start, i - start);
      t.value = t.raw;
      t.pos = start;
      out.push_back(std::move(t));
      continue;
    }
    if (c == '\'') {
      std::size_t start = i;
      ++i;
      std::string s;
      bool closed = false;
      while (i < input.size()) {
        if (input[i] == '\'') {
          if (i + 1 < input.size() && input[i + 1] == '\'') {
            s.push_back('\'');
            i += 2;
            continue;
          }
          closed = true;
          ++i;
          break;
        }
        s.push_back(input[i++]);
      }
      if (!closed) throw SqlParseError("unterminated string literal", start);
      Token t;
      t.kind = Token::Kind::String;
      t.value = std::move(s);
      t.raw = input.substr(start, i - start);
      t.pos = start;
      out.push_back(std::move(t));
      continue;
    }
    auto push_symbol = [&](const std::string& sym) {
      Token t;
      t.kind = Token::Kind::Symbol;
      t.value = sym;
      t.raw = sym;
      t.pos = i;
      out.push_back(std::move(t));
      i += sym.size();
    };
    if (c == '<') {
      if (i + 1 < input.size() && input[i + 1] == '=') push_symbol("<=");
      else if (i + 1 < input.size() && input[i + 1] == '>') push_symbol("!=");
      else push_symbol("<");
      continue;
    }
    if (c == '>') {
      if (i + 1 < input.size() && input[i + 1] == '=') push_symbol(">=");
      else push_symbol(">");
      continue;
    }
    if (c == '!') {
      if (i + 1 < input.size() && input[i + 1] == '=') push_symbol("!=");
      else throw SqlParseError("unexpected character '!'", i);
      continue;
    }
    if (c == '=' || c == '(' || c == ')' || c == ',' || c == '*' || c == ';' ||
        c == '-' || c == '+') {
      push_symbol(std::string(1, c));
      continue;
    }
    if (c == '"' || c == '`')
      throw SqlUnsupportedFeatureError("quoted identifier");
    throw SqlParseError(std::string("unexpected character '") + c + "'", i);
  }
  Token end;
  end.kind = Token::Kind::End;
  end.pos = input.size();
  out.push_back(end);
  return out;
}

class Parser {
public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  SqlAst parse() {
    if (!is_keyword("select")) {
      const Token& t = peek();
      if (t.kind == Token::Kind::Ident && forbidden_statements().count(t.value))
        throw SqlUnsupportedFeatureError(classify_forbidden(t.value));
      throw SqlParseError("expected SELECT", t.pos);
    }
    advance();
    SqlAst ast;
    parse_select_list(ast);
    expect_keyword("from");
    ast.from_table = parse_table_name();
    if (is_keyword("where")) {
      advance();
      ast.where = parse_or_expr();
    }
    if (is_keyword("group")) {
      advance();
      expect_keyword("by");
      ast.group_by.push_back(expect_column());
      while (is_symbol(",")) {
        advance();
        ast.group_by.push_back(expect_column());
      }
    }
    if (is_keyword("having")) throw SqlUnsupportedFeatureError("HAVING");
    if (is_keyword("order")) {
      advance();
      expect_keyword("by");
      ast.order_by.push_back(parse_order_key());
      while (is_symbol(",")) {
        advance();
        ast.order_by.push_back(parse_order_key());
      }
    }
    if (is_keyword("limit")) {
      advance();
      const Token& t = peek();
      if (t.kind != Token::Kind::Number || t.value.find('.') != std::string::npos)
        throw SqlParseError("LIMIT requires an integer", t.pos);
      ast.limit = std::stol(t.value);
      advance();
    }
    finish_statement();
    return ast;
  }

private:
  const Token& peek(std::size_t ahead = 0) const {
    std::size_t idx = std::min(pos_ + ahead, tokens_.size() - 1);
    return tokens_[idx];
  }
  void advance() {
    if (pos_ + 1 < tokens_.size()) ++pos_;
  }
  bool is_keyword(const std::string& kw) const {
    return peek().kind == Token::Kind::Ident && peek().value == kw;
  }
  bool is_symbol(const std::string& sym) const {
    return peek().kind == Token::Kind::Symbol && peek().value == sym;
  }
  void expect_keyword(const std::string& kw) {
    if (!is_keyword(kw)) throw SqlParseError("expected " + text::to_lower(kw), peek().pos);
    advance();
  }

  void reject_reserved(const Token& t) const {
    static const std::set<std::string> kReserved = {
        "select", "from",  "where", "group", "order", "by",    "limit",
        "and",    "or",    "not",   "between", "in",  "like",  "as",
        "join",   "inner", "outer", "left",  "right", "cross", "union",
        "intersect", "except", "having", "distinct", "null",  "is",
        "true",   "false", "count", "sum",  "avg",   "min",   "max"};
    if (kReserved.count(t.value))
      throw SqlParseError("unexpected keyword " + t.raw, t.pos);
  }

  std::string expect_column() {
    const Token& t = peek();
    if (t.kind != Token::Kind::Ident) throw SqlParseError("expected column name", t.pos);
    if (t.value == "select") throw SqlUnsupportedFeatureError("subquery");
    reject_reserved(t);
    std::string name = t.value;
    advance();
    if (is_symbol("(")) throw SqlUnsupportedFeatureError("function call: " + name);
    return name;
  }

  std::optional<AggFn> aggregate_keyword() const {
    if (peek().kind != Token::Kind::Ident) return std::nullopt;
    const std::string& v = peek().value;
    if (v == "count") return AggFn::Count;
    if (v == "sum") return AggFn::Sum;
    if (v == "avg") return AggFn::Avg;
    if (v == "min") return AggFn::Min;
    if (v == "max") return AggFn::Max;
    return std::nullopt;
  }

  Projection parse_projection() {
    if (auto fn = aggregate_keyword()) {
      const Token& name = peek();
      advance();
      if (!is_symbol("(")) throw SqlParseError("expected ( after " + name.raw, peek().pos);
      advance();
      Projection p;
      if (is_symbol("*")) {
        if (*fn != AggFn::Count)
          throw SqlParseError("* is only valid inside COUNT", peek().pos);
        advance();
        p = Projection::count_star();
      } else {
        p = Projection::aggregate(*fn, expect_column());
      }
      if (!is_symbol(")")) throw SqlParseError("expected )", peek().pos);
      advance();
      return p;
    }
    return Projection::col(expect_column());
  }

  void parse_select_list(SqlAst& ast) {
    if (is_keyword("distinct")) throw SqlUnsupportedFeatureError("DISTINCT");
    if (is_symbol("*")) {
      advance();
      ast.projections.push_back(Projection::star());
      if (is_symbol(","))
        throw SqlParseError("* must be the only projection", peek().pos);
      return;
    }
    ast.projections.push_back(parse_projection());
    while (is_symbol(",")) {
      advance();
      ast.projections.push_back(parse_projection());
    }
  }

  std::string parse_table_name() {
    const Token& t = peek();
    if (t.kind == Token::Kind::Symbol && t.value == "(")
      throw SqlUnsupportedFeatureError("subquery");
    if (t.kind != Token::Kind::Ident) throw SqlParseError("expected table name", t.pos);
    if (t.value == "select") throw SqlUnsupportedFeatureError("subquery");
    std::string name = t.value;
    if (name != "t")
      throw SqlUnsupportedFeatureError("unknown table \"" + t.raw +
                                       "\" (single table \"t\" only)");
    advance();
    if (is_symbol(","))
      throw SqlUnsupportedFeatureError("join");
    if (peek().kind == Token::Kind::Ident &&
        (peek().value == "join" || peek().value == "inner" || peek().value == "left" ||
         peek().value == "right" || peek().value == "cross" || peek().value == "outer" ||
         peek().value == "natural"))
      throw SqlUnsupportedFeatureError("join");
    return name;
  }

  SqlLiteral parse_literal() {
    const Token& t = peek();
    if (t.kind == Token::Kind::Symbol && (t.value == "-" || t.value == "+")) {
      bool neg = t.value == "-";
      advance();
      const Token& n = peek();
      if (n.kind != Token::Kind::Number) throw SqlParseError("expected number", n.pos);
      double v = std::stod(n.value);
      std::string raw = (neg ? "-" : "") + n.raw;
      advance();
      return SqlLiteral::number(neg ? -v : v, raw);
    }
    if (t.kind == Token::Kind::Number) {
      double v = std::stod(t.value);
      std::string raw = t.raw;
      advance();
      return SqlLiteral::number(v, raw);
    }
    if (t.kind == Token::Kind::String) {
      std::string v = t.value;
      advance();
      return SqlLiteral::string(v);
    }
    if (t.kind == Token::Kind::Ident) {
      if (t.value == "true" || t.value == "false") {
        bool v = t.value == "true";
        advance();
        return SqlLiteral::boolean(v);
      }
      if (t.value == "null") throw SqlUnsupportedFeatureError("NULL literal");
      if (t.value == "select") throw SqlUnsupportedFeatureError("subquery");
    }
    throw SqlParseError("expected literal", t.pos);
  }

  SqlExpr parse_or_expr() {
    SqlExpr left = parse_and_expr();
    while (is_keyword("or")) {
      advance();
      SqlExpr right = parse_and_expr();
      SqlExpr node;
      node.kind = SqlExpr::Kind::Or;
      node.children = {std::move(left), std::move(right)};
      left = std::move(node);
    }
    return left;
  }

  SqlExpr parse_and_expr() {
    SqlExpr left = parse_unary();
    while (is_keyword("and")) {
      advance();
      SqlExpr right = parse_unary();
      SqlExpr node;
      node.kind = SqlExpr::Kind::And;
      node.children = {std::move(left), std::move(right)};
      left = std::move(node);
    }
    return left;
  }

  SqlExpr parse_unary() {
    if (is_keyword("not")) {
      advance();
      SqlExpr node;
      node.kind = SqlExpr::Kind::Not;
      node.children.push_back(parse_unary());
      return node;
    }
    if (is_symbol("(")) {
      advance();
      if (is_keyword("select")) throw SqlUnsupportedFeatureError("subquery");
      SqlExpr inner = parse_or_expr();
      if (!is_symbol(")")) throw SqlParseError("expected )", peek().pos);
      advance();
      return inner;
    }
    return parse_predicate();
  }

  SqlExpr parse_predicate() {
    std::string column = expect_column();
    bool negated = false;
    if (is_keyword("not")) {
      advance();
      negated = true;
      if (!is_keyword("between") && !is_keyword("in") && !is_keyword("like"))
        throw SqlParseError("expected BETWEEN, IN or LIKE after NOT", peek().pos);
    }
    SqlExpr node;
    node.column = column;
    if (is_keyword("is")) throw SqlUnsupportedFeatureError("IS NULL");
    if (is_keyword("between")) {
      advance();
      node.kind = SqlExpr::Kind::Between;
      node.literals.push_back(parse_literal());
      expect_keyword("and");
      node.literals.push_back(parse_literal());
    } else if (is_keyword("in")) {
      advance();
      if (!is_symbol("(")) throw SqlParseError("expected ( after IN", peek().pos);
      advance();
      if (is_keyword("select")) throw SqlUnsupportedFeatureError("subquery");
      node.kind = SqlExpr::Kind::In;
      node.literals.push_back(parse_literal());
      while (is_symbol(",")) {
        advance();
        node.literals.push_back(parse_literal());
      }
      if (!is_symbol(")")) throw SqlParseError("expected )", peek().pos);
      advance();
    } else if (is_keyword("like")) {
      advance();
      node.kind = SqlExpr::Kind::Like;
      SqlLiteral pattern = parse_literal();
      if (pattern.kind != SqlLiteral::Kind::String)
        throw SqlParseError("LIKE requires a string pattern", peek().pos);
      node.literals.push_back(std::move(pattern));
    } else if (peek().kind == Token::Kind::Symbol) {
      const std::string& sym = peek().value;
      CompareOp op;
      if (sym == "=") op = CompareOp::Eq;
      else if (sym == "!=") op = CompareOp::Ne;
      else if (sym == "<") op = CompareOp::Lt;
      else if (sym == "<=") op = CompareOp::Le;
      else if (sym == ">") op = CompareOp::Gt;
      else if (sym == ">=") op = CompareOp::Ge;
      else throw SqlParseError("expected comparison operator", peek().pos);
      advance();
      node.kind = SqlExpr::Kind::Compare;
      node.op = op;
      node.literals.push_back(parse_literal());
    } else {
      throw SqlParseError("expected predicate", peek().pos);
    }
    if (negated) {
      SqlExpr wrapper;
      wrapper.kind = SqlExpr::Kind::Not;
      wrapper.children.push_back(std::move(node));
      return wrapper;
    }
    return node;
  }

  OrderKey parse_order_key() {
    OrderKey key;
    if (aggregate_keyword() && peek(1).kind == Token::Kind::Symbol &&
        peek(1).value == "(") {
      key.target = parse_projection();
    } else {
      key.target = Projection::col(expect_column());
    }
    if (is_keyword("asc")) {
      advance();
      key.ascending = true;
    } else if (is_keyword("desc")) {
      advance();
      key.ascending = false;
    }
    return key;
  }

  void finish_statement() {
    if (is_symbol(";")) {
      advance();
      if (peek().kind != Token::Kind::End)
        throw SqlUnsupportedFeatureError("multiple statements");
    }
    const Token& t = peek();
    if (t.kind == Token::Kind::End) return;
    if (t.kind == Token::Kind::Ident) {
      if (t.value == "union" || t.value == "intersect" || t.value == "except")
        throw SqlUnsupportedFeatureError("set operation: " + t.value);
      if (forbidden_statements().count(t.value))
        throw SqlUnsupportedFeatureError(classify_forbidden(t.value));
    }
    throw SqlParseError("unexpected trailing input", t.pos);
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace detail
}  // namespace sql

// Parses the constrained subset or throws SqlParseError /
// SqlUnsupportedFeatureError; nothing outside the grammar yields an AST.
inline SqlAst parse_sql(const std::string& input) {
  auto tokens = sql::detail::tokenize(input);
  sql::detail::Parser parser(std::move(tokens));
  return parser.parse();
}

}  // namespace square
