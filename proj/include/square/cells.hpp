#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "square/errors.hpp"
#include "square/text.hpp"

namespace square {

enum class CellKind { Empty, Text, Number, Boolean, Date };

inline const char* to_string(CellKind k) {
  switch (k) {
    case CellKind::Empty: return "empty";
    case CellKind::Text: return "text";
    case CellKind::Number: return "number";
    case CellKind::Boolean: return "boolean";
    case CellKind::Date: return "date";
  }
  return "empty";
}

// One cell. text_form always holds the original display text byte-for-byte;
// typed forms are derived at load time and never replace it.
struct CellValue {
  CellKind kind = CellKind::Empty;
  std::string text_form;
  std::optional<double> numeric_form;
  std::string iso_date;      // normalized form when kind == Date
  bool boolean_value = false;

  bool empty() const { return kind == CellKind::Empty; }

  bool operator==(const CellValue&) const = default;

  // Classifies raw display text. "1,234" becomes a Number with numeric_form
  // 1234 while text_form keeps the separators.
  static CellValue from_text(std::string raw) {
    CellValue v;
    v.text_form = std::move(raw);
    std::string trimmed = text::trim(v.text_form);
    if (trimmed.empty()) {
      v.kind = CellKind::Empty;
      v.text_form.clear();
      return v;
    }
    if (auto num = text::parse_number(trimmed)) {
      v.kind = CellKind::Number;
      v.numeric_form = *num;
      return v;
    }
    if (auto iso = text::parse_date_iso(trimmed)) {
      v.kind = CellKind::Date;
      v.iso_date = *iso;
      return v;
    }
    if (auto b = text::parse_boolean(trimmed)) {
      v.kind = CellKind::Boolean;
      v.boolean_value = *b;
      return v;
    }
    v.kind = CellKind::Text;
    return v;
  }

  static CellValue number(double value, std::string display) {
    CellValue v;
    v.kind = CellKind::Number;
    v.numeric_form = value;
    v.text_form = std::move(display);
    return v;
  }
};

// 0-based inclusive bounds; area must cover at least two cells.
struct MergedRegion {
  long top = 0;
  long left = 0;
  long bottom = 0;
  long right = 0;

  bool operator==(const MergedRegion&) const = default;

  long area() const { return (bottom - top + 1) * (right - left + 1); }

  bool contains(long row, long col) const {
    return row >= top && row <= bottom && col >= left && col <= right;
  }

  bool intersects_rows(long first, long last) const {
    return top <= last && bottom >= first;
  }

  bool overlaps(const MergedRegion& o) const {
    return top <= o.bottom && bottom >= o.top && left <= o.right && right >= o.left;
  }
};

class CellGrid {
public:
  CellGrid() = default;
  CellGrid(std::size_t n_rows, std::size_t n_cols)
      : n_rows_(n_rows), n_cols_(n_cols), cells_(n_rows * n_cols) {}

  std::size_t n_rows() const { return n_rows_; }
  std::size_t n_cols() const { return n_cols_; }

  const CellValue& at(std::size_t row, std::size_t col) const {
    if (row >= n_rows_ || col >= n_cols_)
      throw OutOfBoundsError(static_cast<long>(row), static_cast<long>(col));
    return cells_[row * n_cols_ + col];
  }

  void set(std::size_t row, std::size_t col, CellValue v) {
    if (row >= n_rows_ || col >= n_cols_)
      throw OutOfBoundsError(static_cast<long>(row), static_cast<long>(col));
    cells_[row * n_cols_ + col] = std::move(v);
  }

  bool row_empty(std::size_t row) const {
    for (std::size_t c = 0; c < n_cols_; ++c)
      if (!at(row, c).empty()) return false;
    return true;
  }

  bool col_empty(std::size_t col) const {
    for (std::size_t r = 0; r < n_rows_; ++r)
      if (!at(r, col).empty()) return false;
    return true;
  }

  // Drops trailing fully-empty rows and columns. `keep_rows`/`keep_cols`
  // protect cells covered by merged regions that extend past the data.
  void trim_trailing_empty(std::size_t keep_rows = 0, std::size_t keep_cols = 0) {
    std::size_t rows = n_rows_;
    while (rows > keep_rows && rows > 0) {
      bool empty = true;
      for (std::size_t c = 0; c < n_cols_ && empty; ++c)
        if (!cells_[(rows - 1) * n_cols_ + c].empty()) empty = false;
      if (!empty) break;
      --rows;
    }
    std::size_t cols = n_cols_;
    while (cols > keep_cols && cols > 0) {
      bool empty = true;
      for (std::size_t r = 0; r < rows && empty; ++r)
        if (!cells_[r * n_cols_ + (cols - 1)].empty()) empty = false;
      if (!empty) break;
      --cols;
    }
    if (rows == n_rows_ && cols == n_cols_) return;
    std::vector<CellValue> next(rows * cols);
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c) next[r * cols + c] = cells_[r * n_cols_ + c];
    cells_ = std::move(next);
    n_rows_ = rows;
    n_cols_ = cols;
  }

  bool operator==(const CellGrid&) const = default;

private:
  std::size_t n_rows_ = 0;
  std::size_t n_cols_ = 0;
  std::vector<CellValue> cells_;
};

struct Sheet {
  std::string name;
  CellGrid grid;
  std::vector<MergedRegion> merges;

  bool empty() const { return grid.n_rows() == 0 || grid.n_cols() == 0; }
};

// Validates merge invariants for a freshly loaded or constructed sheet.
inline void validate_sheet(const Sheet& sheet, const std::string& source) {
  for (std::size_t i = 0; i < sheet.merges.size(); ++i) {
    const auto& m = sheet.merges[i];
    if (m.top > m.bottom || m.left > m.right)
      throw ParseError(source, "merged region has inverted bounds");
    if (m.area() < 2)
      throw ParseError(source, "merged region covers a single cell");
    if (m.bottom >= static_cast<long>(sheet.grid.n_rows()) ||
        m.right >= static_cast<long>(sheet.grid.n_cols()) || m.top < 0 || m.left < 0)
      throw ParseError(source, "merged region outside grid bounds");
    for (std::size_t j = i + 1; j < sheet.merges.size(); ++j) {
      if (m.overlaps(sheet.merges[j]))
        throw ParseError(source, "merged regions overlap");
    }
  }
}

struct Workbook {
  std::string source_path;
  std::vector<Sheet> sheets;

  const Sheet& sheet_by_name(const std::string& name) const {
    for (const auto& s : sheets)
      if (s.name == name) return s;
    throw Error("no such sheet: " + name);
  }

  bool has_sheet(const std::string& name) const {
    for (const auto& s : sheets)
      if (s.name == name) return true;
    return false;
  }
};

struct CellLookup {
  CellValue value;
  bool merge_filled = false;  // true when read through a merge off its anchor
};

// Merge-aware cell access: coordinates inside a merged region resolve to the
// region's top-left anchor value.
inline CellLookup cell_at(const Sheet& sheet, long row, long col) {
  if (row < 0 || col < 0 || row >= static_cast<long>(sheet.grid.n_rows()) ||
      col >= static_cast<long>(sheet.grid.n_cols()))
    throw OutOfBoundsError(row, col);
  for (const auto& m : sheet.merges) {
    if (m.contains(row, col)) {
      bool anchor = (row == m.top && col == m.left);
      return {sheet.grid.at(static_cast<std::size_t>(m.top), static_cast<std::size_t>(m.left)),
              !anchor};
    }
  }
  return {sheet.grid.at(static_cast<std::size_t>(row), static_cast<std::size_t>(col)), false};
}

}  // namespace square
