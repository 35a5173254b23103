#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace square {

enum class AggFn { Count, Sum, Avg, Min, Max };

inline const char* to_string(AggFn fn) {
  switch (fn) {
    case AggFn::Count: return "COUNT";
    case AggFn::Sum: return "SUM";
    case AggFn::Avg: return "AVG";
    case AggFn::Min: return "MIN";
    case AggFn::Max: return "MAX";
  }
  return "COUNT";
}

enum class CompareOp { Eq, Ne, Lt, Le, Gt, Ge };

inline const char* to_string(CompareOp op) {
  switch (op) {
    case CompareOp::Eq: return "=";
    case CompareOp::Ne: return "!=";
    case CompareOp::Lt: return "<";
    case CompareOp::Le: return "<=";
    case CompareOp::Gt: return ">";
    case CompareOp::Ge: return ">=";
  }
  return "=";
}

struct SqlLiteral {
  enum class Kind { Number, String, Bool };
  Kind kind = Kind::Number;
  double num = 0.0;
  std::string str;
  bool b = false;
  std::string raw;  // the literal as written, used for rendering numbers

  static SqlLiteral number(double v, std::string raw) {
    SqlLiteral l;
    l.kind = Kind::Number;
    l.num = v;
    l.raw = std::move(raw);
    return l;
  }
  static SqlLiteral string(std::string v) {
    SqlLiteral l;
    l.kind = Kind::String;
    l.str = std::move(v);
    return l;
  }
  static SqlLiteral boolean(bool v) {
    SqlLiteral l;
    l.kind = Kind::Bool;
    l.b = v;
    l.raw = v ? "TRUE" : "FALSE";
    return l;
  }

  std::string render() const {
    if (kind == Kind::String) {
      std::string out = "'";
      for (char c : str) {
        if (c == '\'') out += "''";
        else out.push_back(c);
      }
      out += "'";
      return out;
    }
    return raw;
  }
};

struct Projection {
  enum class Kind { Star, Column, Aggregate };
  Kind kind = Kind::Column;
  std::string column;               // Column, or aggregate argument
  AggFn fn = AggFn::Count;          // Aggregate
  bool agg_star = false;            // COUNT(*)

  static Projection star() {
    Projection p;
    p.kind = Kind::Star;
    return p;
  }
  static Projection col(std::string name) {
    Projection p;
    p.kind = Kind::Column;
    p.column = std::move(name);
    return p;
  }
  static Projection aggregate(AggFn fn, std::string column) {
    Projection p;
    p.kind = Kind::Aggregate;
    p.fn = fn;
    p.column = std::move(column);
    return p;
  }
  static Projection count_star() {
    Projection p;
    p.kind = Kind::Aggregate;
    p.fn = AggFn::Count;
    p.agg_star = true;
    return p;
  }

  std::string render() const {
    switch (kind) {
      case Kind::Star: return "*";
      case Kind::Column: return column;
      case Kind::Aggregate:
        return std::string(to_string(fn)) + "(" + (agg_star ? "*" : column) + ")";
    }
    return column;
  }
};

// Boolean expression tree over comparisons, BETWEEN, IN, and LIKE.
struct SqlExpr {
  enum class Kind { Compare, Between, In, Like, And, Or, Not };
  Kind kind = Kind::Compare;
  CompareOp op = CompareOp::Eq;
  std::string column;
  std::vector<SqlLiteral> literals;
  std::vector<SqlExpr> children;

  std::string render() const {
    std::ostringstream out;
    switch (kind) {
      case Kind::Compare:
        out << column << " " << to_string(op) << " " << literals[0].render();
        break;
      case Kind::Between:
        out << column << " BETWEEN " << literals[0].render() << " AND "
            << literals[1].render();
        break;
      case Kind::In:
        out << column << " IN (";
        for (std::size_t i = 0; i < literals.size(); ++i) {
          if (i) out << ", ";
          out << literals[i].render();
        }
        out << ")";
        break;
      case Kind::Like:
        out << column << " LIKE " << literals[0].render();
        break;
      case Kind::And:
        out << "(" << children[0].render() << " AND " << children[1].render() << ")";
        break;
      case Kind::Or:
        out << "(" << children[0].render() << " OR " << children[1].render() << ")";
        break;
      case Kind::Not:
        out << "NOT (" << children[0].render() << ")";
        break;
    }
    return out.str();
  }
};

struct OrderKey {
  Projection target;  // column or aggregate
  bool ascending = true;
};

struct SqlAst {
  std::vector<Projection> projections;
  std::string from_table;
  std::optional<SqlExpr> where;
  std::vector<std::string> group_by;
  std::vector<OrderKey> order_by;
  std::optional<long> limit;

  bool has_aggregates() const {
    for (const auto& p : projections)
      if (p.kind == Projection::Kind::Aggregate) return true;
    return false;
  }

  std::string render() const {
    std::ostringstream out;
    out << "SELECT ";
    for (std::size_t i = 0; i < projections.size(); ++i) {
      if (i) out << ", ";
      out << projections[i].render();
    }
    out << " FROM " << from_table;
    if (where) out << " WHERE " << where->render();
    if (!group_by.empty()) {
      out << " GROUP BY ";
      for (std::size_t i = 0; i < group_by.size(); ++i) {
        if (i) out << ", ";
        out << group_by[i];
      }
    }
    if (!order_by.empty()) {
      out << " ORDER BY ";
      for (std::size_t i = 0; i < order_by.size(); ++i) {
        if (i) out << ", ";
        out << order_by[i].target.render() << (order_by[i].ascending ? " ASC" : " DESC");
      }
    }
    if (limit) out << " LIMIT " << *limit;
    return out.str();
  }
};

}  // namespace square
