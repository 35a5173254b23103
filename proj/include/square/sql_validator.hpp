#pragma once

#include <algorithm>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "square/errors.hpp"
#include "square/relational.hpp"
#include "square/sql_ast.hpp"
#include "square/text.hpp"

namespace square {

inline constexpr std::size_t kDefaultRowCap = 200;

struct ValidatedQuery {
  SqlAst ast;
  std::string sql_text;  // canonical rendering after cap injection
  std::size_t row_cap = kDefaultRowCap;

  // column names appearing anywhere in the query, for coverage heuristics
  std::set<std::string> referenced_columns;
};

namespace sql_validate_detail {

inline const ColumnSchema* find_column(const std::vector<ColumnSchema>& schema,
                                       const std::string& name) {
  std::string lower = text::to_lower(name);
  for (const auto& col : schema)
    if (col.name == lower) return &col;
  return nullptr;
}

inline std::string nearest_column(const std::vector<ColumnSchema>& schema,
                                  const std::string& name) {
  std::string lower = text::to_lower(name);
  std::string best;
  std::size_t best_dist = std::numeric_limits<std::size_t>::max();
  for (const auto& col : schema) {
    std::size_t d = text::edit_distance(lower, col.name);
    if (d < best_dist || (d == best_dist && col.name < best)) {
      best_dist = d;
      best = col.name;
    }
  }
  return best;
}

inline const ColumnSchema& resolve(const std::vector<ColumnSchema>& schema,
                                   std::string& name_in_out,
                                   std::set<std::string>& referenced) {
  const ColumnSchema* col = find_column(schema, name_in_out);
  if (!col) throw UnknownColumnError(name_in_out, nearest_column(schema, name_in_out));
  name_in_out = col->name;
  referenced.insert(col->name);
  return *col;
}

inline bool numeric_type(ColType t) { return t == ColType::Integer || t == ColType::Real; }

inline void check_literal(const ColumnSchema& col, SqlLiteral& lit) {
  switch (col.col_type) {
    case ColType::Integer:
    case ColType::Real:
      if (lit.kind != SqlLiteral::Kind::Number)
        throw TypeMismatchError(col.name, "numeric column compared to " + lit.render());
      return;
    case ColType::Text:
      if (lit.kind != SqlLiteral::Kind::String)
        throw TypeMismatchError(col.name, "text column compared to " + lit.render());
      return;
    case ColType::Date: {
      if (lit.kind != SqlLiteral::Kind::String)
        throw TypeMismatchError(col.name, "date column compared to " + lit.render());
      auto iso = text::parse_date_iso(lit.str);
      if (!iso)
        throw TypeMismatchError(col.name, "date column compared to non-date " + lit.render());
      lit.str = *iso;  // normalize so execution compares ISO forms
      return;
    }
    case ColType::Boolean:
      if (lit.kind != SqlLiteral::Kind::Bool)
        throw TypeMismatchError(col.name, "boolean column compared to " + lit.render());
      return;
  }
}

inline void validate_expr(SqlExpr& expr, const std::vector<ColumnSchema>& schema,
                          std::set<std::string>& referenced) {
  switch (expr.kind) {
    case SqlExpr::Kind::And:
    case SqlExpr::Kind::Or:
    case SqlExpr::Kind::Not:
      for (auto& child : expr.children) validate_expr(child, schema, referenced);
      return;
    case SqlExpr::Kind::Compare:
    case SqlExpr::Kind::Between:
    case SqlExpr::Kind::In: {
      const ColumnSchema& col = resolve(schema, expr.column, referenced);
      for (auto& lit : expr.literals) check_literal(col, lit);
      return;
    }
    case SqlExpr::Kind::Like: {
      const ColumnSchema& col = resolve(schema, expr.column, referenced);
      if (col.col_type != ColType::Text)
        throw TypeMismatchError(col.name, "LIKE requires a text column");
      return;
    }
  }
}

inline void validate_aggregate(const Projection& p, const std::vector<ColumnSchema>& schema) {
  if (p.agg_star) return;  // COUNT(*)
  const ColumnSchema* col = find_column(schema, p.column);
  if (!col) throw UnknownColumnError(p.column, nearest_column(schema, p.column));
  if ((p.fn == AggFn::Sum || p.fn == AggFn::Avg) && !numeric_type(col->col_type))
    throw TypeMismatchError(col->name,
                            std::string(to_string(p.fn)) + " requires a numeric column");
}

}  // namespace sql_validate_detail

// Resolves every column reference against the whitelisted schema, checks
// literal/column type compatibility, enforces grouping rules, and injects or
// lowers LIMIT to the row cap.
inline ValidatedQuery validate(SqlAst ast, const std::vector<ColumnSchema>& schema,
                               std::size_t row_cap = kDefaultRowCap) {
  using namespace sql_validate_detail;
  ValidatedQuery out;
  out.row_cap = row_cap;

  for (auto& name : ast.group_by) resolve(schema, name, out.referenced_columns);

  bool grouped = !ast.group_by.empty();
  bool has_agg = ast.has_aggregates();
  for (auto& p : ast.projections) {
    switch (p.kind) {
      case Projection::Kind::Star:
        if (grouped || has_agg)
          throw SqlUnsupportedFeatureError("* projection with aggregation");
        for (const auto& col : schema) out.referenced_columns.insert(col.name);
        break;
      case Projection::Kind::Column: {
        resolve(schema, p.column, out.referenced_columns);
        if ((grouped || has_agg) &&
            std::find(ast.group_by.begin(), ast.group_by.end(), p.column) ==
                ast.group_by.end())
          throw SqlUnsupportedFeatureError("ungrouped column " + p.column +
                                           " with aggregation");
        break;
      }
      case Projection::Kind::Aggregate:
        validate_aggregate(p, schema);
        if (!p.agg_star) {
          resolve(schema, p.column, out.referenced_columns);
        }
        break;
    }
  }

  if (ast.where) validate_expr(*ast.where, schema, out.referenced_columns);

  for (auto& key : ast.order_by) {
    if (key.target.kind == Projection::Kind::Aggregate) {
      if (!grouped && !has_agg)
        throw SqlUnsupportedFeatureError("aggregate in ORDER BY without aggregation");
      validate_aggregate(key.target, schema);
      if (!key.target.agg_star) resolve(schema, key.target.column, out.referenced_columns);
    } else {
      resolve(schema, key.target.column, out.referenced_columns);
      if (grouped && std::find(ast.group_by.begin(), ast.group_by.end(),
                               key.target.column) == ast.group_by.end())
        throw SqlUnsupportedFeatureError("ORDER BY column " + key.target.column +
                                         " outside GROUP BY");
    }
  }

  if (!ast.limit || *ast.limit > static_cast<long>(row_cap) || *ast.limit < 0)
    ast.limit = static_cast<long>(row_cap);

  out.ast = std::move(ast);
  out.sql_text = out.ast.render();
  return out;
}

}  // namespace square
