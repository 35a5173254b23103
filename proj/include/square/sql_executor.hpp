#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "square/errors.hpp"
#include "square/relational.hpp"
#include "square/sql_ast.hpp"
#include "square/sql_validator.hpp"

namespace square {

struct ResultRows {
  std::vector<std::string> columns;
  std::vector<std::vector<Value>> rows;
  bool truncated = false;  // true when the row cap bound the output

  bool empty() const { return rows.empty(); }
};

namespace sql_exec_detail {

enum class Tri { False, True, Unknown };

inline Tri tri_not(Tri t) {
  if (t == Tri::Unknown) return Tri::Unknown;
  return t == Tri::True ? Tri::False : Tri::True;
}
inline Tri tri_and(Tri a, Tri b) {
  if (a == Tri::False || b == Tri::False) return Tri::False;
  if (a == Tri::Unknown || b == Tri::Unknown) return Tri::Unknown;
  return Tri::True;
}
inline Tri tri_or(Tri a, Tri b) {
  if (a == Tri::True || b == Tri::True) return Tri::True;
  if (a == Tri::Unknown || b == Tri::Unknown) return Tri::Unknown;
  return Tri::False;
}

// Total order used by ORDER BY and MIN/MAX: numerics by value, text and dates
// bytewise, booleans false < true. NULL sorts before everything ascending.
inline int compare_values(const Value& a, const Value& b) {
  bool na = a.is_null(), nb = b.is_null();
  if (na || nb) return na && nb ? 0 : (na ? -1 : 1);
  bool num_a = a.kind == Value::Kind::Int || a.kind == Value::Kind::Real;
  bool num_b = b.kind == Value::Kind::Int || b.kind == Value::Kind::Real;
  if (num_a && num_b) {
    double x = a.as_double(), y = b.as_double();
    return x < y ? -1 : (x > y ? 1 : 0);
  }
  if (a.kind != b.kind) return a.kind < b.kind ? -1 : 1;
  switch (a.kind) {
    case Value::Kind::Text:
    case Value::Kind::Date:
      return a.s < b.s ? -1 : (a.s > b.s ? 1 : 0);
    case Value::Kind::Bool:
      return a.b == b.b ? 0 : (a.b ? 1 : -1);
    default:
      return 0;
  }
}

// SQL LIKE with % and _ wildcards, case-insensitive.
inline bool like_match(const std::string& value, const std::string& pattern) {
  std::string v, p;
  v.reserve(value.size());
  p.reserve(pattern.size());
  for (char c : value) v.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  for (char c : pattern) p.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  std::size_t vi = 0, pi = 0, star_v = std::string::npos, star_p = std::string::npos;
  while (vi < v.size()) {
    if (pi < p.size() && (p[pi] == '_' || p[pi] == v[vi])) {
      ++vi;
      ++pi;
    } else if (pi < p.size() && p[pi] == '%') {
      star_p = pi++;
      star_v = vi;
    } else if (star_p != std::string::npos) {
      pi = star_p + 1;
      vi = ++star_v;
    } else {
      return false;
    }
  }
  while (pi < p.size() && p[pi] == '%') ++pi;
  return pi == p.size();
}

inline Tri compare_with_literal(const Value& v, CompareOp op, const SqlLiteral& lit) {
  if (v.is_null()) return Tri::Unknown;
  int cmp = 0;
  switch (lit.kind) {
    case SqlLiteral::Kind::Number: {
      double x = v.as_double(), y = lit.num;
      cmp = x < y ? -1 : (x > y ? 1 : 0);
      break;
    }
    case SqlLiteral::Kind::String:
      cmp = v.s < lit.str ? -1 : (v.s > lit.str ? 1 : 0);
      break;
    case SqlLiteral::Kind::Bool:
      cmp = (v.b == lit.b) ? 0 : (v.b ? 1 : -1);
      break;
  }
  bool result = false;
  switch (op) {
    case CompareOp::Eq: result = cmp == 0; break;
    case CompareOp::Ne: result = cmp != 0; break;
    case CompareOp::Lt: result = cmp < 0; break;
    case CompareOp::Le: result = cmp <= 0; break;
    case CompareOp::Gt: result = cmp > 0; break;
    case CompareOp::Ge: result = cmp >= 0; break;
  }
  return result ? Tri::True : Tri::False;
}

inline Tri eval_expr(const SqlExpr& expr, const std::vector<Value>& row,
                     const std::map<std::string, std::size_t>& col_index) {
  switch (expr.kind) {
    case SqlExpr::Kind::And:
      return tri_and(eval_expr(expr.children[0], row, col_index),
                     eval_expr(expr.children[1], row, col_index));
    case SqlExpr::Kind::Or:
      return tri_or(eval_expr(expr.children[0], row, col_index),
                    eval_expr(expr.children[1], row, col_index));
    case SqlExpr::Kind::Not:
      return tri_not(eval_expr(expr.children[0], row, col_index));
    case SqlExpr::Kind::Compare:
      return compare_with_literal(row[col_index.at(expr.column)], expr.op,
                                  expr.literals[0]);
    case SqlExpr::Kind::Between: {
      const Value& v = row[col_index.at(expr.column)];
      if (v.is_null()) return Tri::Unknown;
      Tri lo = compare_with_literal(v, CompareOp::Ge, expr.literals[0]);
      Tri hi = compare_with_literal(v, CompareOp::Le, expr.literals[1]);
      return tri_and(lo, hi);
    }
    case SqlExpr::Kind::In: {
      const Value& v = row[col_index.at(expr.column)];
      if (v.is_null()) return Tri::Unknown;
      for (const auto& lit : expr.literals)
        if (compare_with_literal(v, CompareOp::Eq, lit) == Tri::True) return Tri::True;
      return Tri::False;
    }
    case SqlExpr::Kind::Like: {
      const Value& v = row[col_index.at(expr.column)];
      if (v.is_null()) return Tri::Unknown;
      return like_match(v.s, expr.literals[0].str) ? Tri::True : Tri::False;
    }
  }
  return Tri::False;
}

inline Value eval_aggregate(const Projection& p,
                            const std::vector<std::size_t>& group,
                            const std::vector<std::vector<Value>>& rows,
                            const std::map<std::string, std::size_t>& col_index,
                            const std::vector<ColumnSchema>& schema) {
  if (p.agg_star) return Value::integer(static_cast<long long>(group.size()));
  std::size_t ci = col_index.at(p.column);
  ColType col_type = ColType::Real;
  for (const auto& c : schema)
    if (c.name == p.column) col_type = c.col_type;

  std::vector<const Value*> present;
  for (std::size_t ri : group) {
    const Value& v = rows[ri][ci];
    if (!v.is_null()) present.push_back(&v);
  }
  switch (p.fn) {
    case AggFn::Count:
      return Value::integer(static_cast<long long>(present.size()));
    case AggFn::Sum: {
      if (present.empty()) return Value::null();
      if (col_type == ColType::Integer) {
        long long acc = 0;
        for (const Value* v : present) {
          if (__builtin_add_overflow(acc, v->i, &acc))
            throw OverflowError("SUM(" + p.column + ")");
        }
        return Value::integer(acc);
      }
      double acc = 0.0;
      for (const Value* v : present) acc += v->as_double();
      return Value::real(acc);
    }
    case AggFn::Avg: {
      if (present.empty()) return Value::null();
      double acc = 0.0;
      for (const Value* v : present) acc += v->as_double();
      return Value::real(acc / static_cast<double>(present.size()));
    }
    case AggFn::Min:
    case AggFn::Max: {
      if (present.empty()) return Value::null();
      const Value* best = present[0];
      for (const Value* v : present) {
        int cmp = compare_values(*v, *best);
        if ((p.fn == AggFn::Min && cmp < 0) || (p.fn == AggFn::Max && cmp > 0)) best = v;
      }
      return *best;
    }
  }
  return Value::null();
}

}  // namespace sql_exec_detail

// Bag-semantics interpreter over the materialized table. Output order is
// ORDER BY when present, otherwise row insertion order (or first-appearance
// group order). The interpreter is the only execution path; there is no
// embedded database underneath.
inline ResultRows execute(const ValidatedQuery& query, const RelationalTable& table) {
  using namespace sql_exec_detail;
  const SqlAst& ast = query.ast;

  std::map<std::string, std::size_t> col_index;
  for (std::size_t i = 0; i < table.schema.size(); ++i)
    col_index[table.schema[i].name] = i;

  std::vector<std::size_t> filtered;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    if (!ast.where ||
        eval_expr(*ast.where, table.rows[i], col_index) == Tri::True)
      filtered.push_back(i);
  }

  ResultRows out;
  for (const auto& p : ast.projections) {
    if (p.kind == Projection::Kind::Star) {
      for (const auto& c : table.schema) out.columns.push_back(c.name);
    } else {
      out.columns.push_back(p.render());
    }
  }

  bool grouped = !ast.group_by.empty();
  bool has_agg = ast.has_aggregates();

  struct OutputRow {
    std::vector<Value> values;      // projected values
    std::vector<Value> order_keys;  // evaluated ORDER BY keys
  };
  std::vector<OutputRow> output;

  if (!grouped && !has_agg) {
    for (std::size_t ri : filtered) {
      OutputRow row;
      for (const auto& p : ast.projections) {
        if (p.kind == Projection::Kind::Star) {
          for (std::size_t c = 0; c < table.schema.size(); ++c)
            row.values.push_back(table.rows[ri][c]);
        } else {
          row.values.push_back(table.rows[ri][col_index.at(p.column)]);
        }
      }
      for (const auto& key : ast.order_by)
        row.order_keys.push_back(table.rows[ri][col_index.at(key.target.column)]);
      output.push_back(std::move(row));
    }
  } else {
    // group rows by key tuple, preserving first-appearance order; without
    // GROUP BY all filtered rows form a single group
    std::vector<std::vector<Value>> keys;
    std::vector<std::vector<std::size_t>> groups;
    if (grouped) {
      for (std::size_t ri : filtered) {
        std::vector<Value> key;
        for (const auto& g : ast.group_by) key.push_back(table.rows[ri][col_index.at(g)]);
        std::size_t gi = 0;
        for (; gi < keys.size(); ++gi) {
          bool match = true;
          for (std::size_t k = 0; k < key.size(); ++k) {
            const Value& a = keys[gi][k];
            const Value& b = key[k];
            if (a.is_null() != b.is_null() || (!a.is_null() && !a.same_value(b))) {
              match = false;
              break;
            }
          }
          if (match) break;
        }
        if (gi == keys.size()) {
          keys.push_back(key);
          groups.emplace_back();
        }
        groups[gi].push_back(ri);
      }
    } else {
      keys.emplace_back();
      groups.push_back(filtered);
    }

    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
      OutputRow row;
      for (const auto& p : ast.projections) {
        if (p.kind == Projection::Kind::Aggregate) {
          row.values.push_back(
              eval_aggregate(p, groups[gi], table.rows, col_index, table.schema));
        } else {
          // validated: plain projections are group-by columns
          std::size_t k = 0;
          for (; k < ast.group_by.size(); ++k)
            if (ast.group_by[k] == p.column) break;
          row.values.push_back(keys[gi][k]);
        }
      }
      for (const auto& key : ast.order_by) {
        if (key.target.kind == Projection::Kind::Aggregate) {
          row.order_keys.push_back(eval_aggregate(key.target, groups[gi], table.rows,
                                                  col_index, table.schema));
        } else {
          std::size_t k = 0;
          for (; k < ast.group_by.size(); ++k)
            if (ast.group_by[k] == key.target.column) break;
          row.order_keys.push_back(k < keys[gi].size() ? keys[gi][k] : Value::null());
        }
      }
      output.push_back(std::move(row));
    }
  }

  if (!ast.order_by.empty()) {
    std::stable_sort(output.begin(), output.end(),
                     [&](const OutputRow& a, const OutputRow& b) {
                       for (std::size_t k = 0; k < ast.order_by.size(); ++k) {
                         int cmp = compare_values(a.order_keys[k], b.order_keys[k]);
                         if (cmp == 0) continue;
                         return ast.order_by[k].ascending ? cmp < 0 : cmp > 0;
                       }
                       return false;
                     });
  }

  std::size_t limit = ast.limit ? static_cast<std::size_t>(*ast.limit) : query.row_cap;
  out.truncated = output.size() > limit;
  if (out.truncated) output.resize(limit);
  out.rows.reserve(output.size());
  for (auto& row : output) out.rows.push_back(std::move(row.values));
  return out;
}

}  // namespace square
