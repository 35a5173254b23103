#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "square/cells.hpp"
#include "square/errors.hpp"
#include "square/structure.hpp"
#include "square/text.hpp"

namespace square {

enum class ColType { Integer, Real, Text, Boolean, Date };

inline const char* to_string(ColType t) {
  switch (t) {
    case ColType::Integer: return "integer";
    case ColType::Real: return "real";
    case ColType::Text: return "text";
    case ColType::Boolean: return "boolean";
    case ColType::Date: return "date";
  }
  return "text";
}

struct ColumnSchema {
  std::string name;            // cleaned identifier, unique in the schema
  std::string original_label;
  ColType col_type = ColType::Text;
  std::optional<std::string> unit;
};

// A typed, nullable cell. `display` always carries the original text_form so
// result rows can serve as verbatim evidence; computed values get a canonical
// rendering instead.
struct Value {
  enum class Kind { Null, Int, Real, Text, Bool, Date };
  Kind kind = Kind::Null;
  long long i = 0;
  double d = 0.0;
  std::string s;
  bool b = false;
  std::string display;

  bool is_null() const { return kind == Kind::Null; }

  double as_double() const { return kind == Kind::Int ? static_cast<double>(i) : d; }

  static Value null(std::string display = "") {
    Value v;
    v.display = std::move(display);
    return v;
  }
  static Value integer(long long x, std::string display = "") {
    Value v;
    v.kind = Kind::Int;
    v.i = x;
    v.display = display.empty() ? std::to_string(x) : std::move(display);
    return v;
  }
  static Value real(double x, std::string display = "") {
    Value v;
    v.kind = Kind::Real;
    v.d = x;
    if (display.empty()) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.10g", x);
      v.display = buf;
    } else {
      v.display = std::move(display);
    }
    return v;
  }
  static Value string(std::string x) {
    Value v;
    v.kind = Kind::Text;
    v.s = x;
    v.display = std::move(x);
    return v;
  }
  static Value boolean(bool x, std::string display = "") {
    Value v;
    v.kind = Kind::Bool;
    v.b = x;
    v.display = display.empty() ? (x ? "TRUE" : "FALSE") : std::move(display);
    return v;
  }
  static Value date(std::string iso, std::string display = "") {
    Value v;
    v.kind = Kind::Date;
    v.s = iso;
    v.display = display.empty() ? std::move(iso) : std::move(display);
    return v;
  }

  bool same_value(const Value& o) const {
    if (kind == Kind::Null || o.kind == Kind::Null) return kind == o.kind;
    bool num_a = kind == Kind::Int || kind == Kind::Real;
    bool num_b = o.kind == Kind::Int || o.kind == Kind::Real;
    if (num_a && num_b) return as_double() == o.as_double();
    if (kind != o.kind) return false;
    switch (kind) {
      case Kind::Text:
      case Kind::Date: return s == o.s;
      case Kind::Bool: return b == o.b;
      default: return false;
    }
  }
};

struct RelationalTable {
  std::string table_name = "t";
  std::vector<ColumnSchema> schema;
  std::vector<std::vector<Value>> rows;
};

namespace relational_detail {

// "Debt (% of GDP)" -> base "Debt", unit "% of GDP"
inline std::pair<std::string, std::optional<std::string>> split_unit_suffix(
    const std::string& label) {
  std::string t = text::trim(label);
  if (t.size() >= 2 && t.back() == ')') {
    std::size_t open = t.rfind('(');
    if (open != std::string::npos && open > 0) {
      std::string unit = text::trim(t.substr(open + 1, t.size() - open - 2));
      std::string base = text::trim(t.substr(0, open));
      if (!unit.empty() && !base.empty()) return {base, unit};
    }
  }
  return {t, std::nullopt};
}

inline std::string clean_identifier(const std::string& base) {
  std::string out;
  bool pending_sep = false;
  for (char c : base) {
    unsigned char uc = static_cast<unsigned char>(c);
    if (std::isalnum(uc)) {
      if (pending_sep && !out.empty()) out.push_back('_');
      pending_sep = false;
      out.push_back(static_cast<char>(std::tolower(uc)));
    } else if (std::isspace(uc)) {
      pending_sep = true;
    }
    // other characters are stripped
  }
  if (!out.empty() && std::isdigit(static_cast<unsigned char>(out[0])))
    out.insert(out.begin(), '_');
  return out;
}

}  // namespace relational_detail

// One ColumnSchema per column of a Flat sheet. Types follow the 90% rule over
// non-empty body cells with precedence integer > real > date > boolean > text.
inline std::vector<ColumnSchema> infer_schema(const Sheet& sheet, const SheetProfile& profile) {
  if (profile.sheet_class != SheetClass::Flat || profile.header_rows.length() != 1)
    throw NotFlatError(sheet.name);

  std::vector<ColumnSchema> schema;
  std::set<std::string> used;
  for (std::size_t c = 0; c < sheet.grid.n_cols(); ++c) {
    ColumnSchema col;
    col.original_label = sheet.grid.at(0, c).text_form;
    auto [base, unit] = relational_detail::split_unit_suffix(col.original_label);
    col.unit = unit;
    std::string name = relational_detail::clean_identifier(base);
    if (name.empty()) name = "col_" + std::to_string(c);
    std::string candidate = name;
    for (int suffix = 2; used.count(candidate); ++suffix)
      candidate = name + "_" + std::to_string(suffix);
    col.name = candidate;
    used.insert(candidate);

    std::size_t non_empty = 0, ints = 0, reals = 0, dates = 0, bools = 0;
    for (std::size_t r = 1; r < sheet.grid.n_rows(); ++r) {
      const CellValue& v = sheet.grid.at(r, c);
      if (v.empty()) continue;
      ++non_empty;
      if (v.numeric_form.has_value()) {
        ++reals;
        if (text::parses_as_integer(v.text_form)) ++ints;
      } else if (v.kind == CellKind::Date) {
        ++dates;
      } else if (v.kind == CellKind::Boolean) {
        ++bools;
      }
    }
    auto meets = [&](std::size_t n) { return non_empty > 0 && n * 10 >= non_empty * 9; };
    if (meets(ints)) col.col_type = ColType::Integer;
    else if (meets(reals)) col.col_type = ColType::Real;
    else if (meets(dates)) col.col_type = ColType::Date;
    else if (meets(bools)) col.col_type = ColType::Boolean;
    else col.col_type = ColType::Text;
    schema.push_back(std::move(col));
  }
  return schema;
}

// Materializes the body rows as typed tuples. A cell that does not parse as
// its column's type becomes NULL; the original display text is kept either way.
inline RelationalTable build_table(const Sheet& sheet, const SheetProfile& profile) {
  RelationalTable table;
  table.schema = infer_schema(sheet, profile);
  for (std::size_t r = 1; r < sheet.grid.n_rows(); ++r) {
    std::vector<Value> row;
    row.reserve(table.schema.size());
    for (std::size_t c = 0; c < table.schema.size(); ++c) {
      const CellValue& v = sheet.grid.at(r, c);
      const ColumnSchema& col = table.schema[c];
      if (v.empty()) {
        row.push_back(Value::null());
        continue;
      }
      switch (col.col_type) {
        case ColType::Integer:
          if (v.numeric_form && text::parses_as_integer(v.text_form))
            row.push_back(Value::integer(static_cast<long long>(std::llround(*v.numeric_form)),
                                         v.text_form));
          else row.push_back(Value::null(v.text_form));
          break;
        case ColType::Real:
          if (v.numeric_form) row.push_back(Value::real(*v.numeric_form, v.text_form));
          else row.push_back(Value::null(v.text_form));
          break;
        case ColType::Date:
          if (v.kind == CellKind::Date) row.push_back(Value::date(v.iso_date, v.text_form));
          else row.push_back(Value::null(v.text_form));
          break;
        case ColType::Boolean:
          if (v.kind == CellKind::Boolean)
            row.push_back(Value::boolean(v.boolean_value, v.text_form));
          else row.push_back(Value::null(v.text_form));
          break;
        case ColType::Text:
          row.push_back(Value::string(v.text_form));
          break;
      }
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace square
