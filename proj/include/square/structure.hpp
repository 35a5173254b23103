#pragma once

#include <cstddef>
#include <set>
#include <string>

#include "square/cells.hpp"
#include "square/errors.hpp"
#include "square/text.hpp"

namespace square {

struct ComplexityConfig {
  double alpha = 0.6;
  double beta = 0.4;
  double rho = 0.12;  // merge-density threshold, valid range [0.10, 0.15]
  std::size_t max_header_scan_rows = 10;
};

enum class SheetClass { Flat, MultiHeader };

inline const char* to_string(SheetClass c) {
  return c == SheetClass::Flat ? "Flat" : "MultiHeader";
}

struct RowRange {
  std::size_t first = 0;
  std::size_t last = 0;  // inclusive

  std::size_t length() const { return last - first + 1; }
  bool operator==(const RowRange&) const = default;
};

struct SheetProfile {
  std::size_t header_depth = 0;       // H
  std::size_t header_merge_count = 0; // M, regions intersecting the header
  std::size_t header_span = 0;        // S_h, header cells after expanding merges
  double merge_density = 0.0;         // d = M / S_h
  double complexity = 0.0;            // alpha*H + beta*M
  SheetClass sheet_class = SheetClass::Flat;
  RowRange header_rows;
};

// A unit line mentions only units: every non-empty cell hits the unit lexicon
// and none is numeric. "USD (millions)" alone on a row is the canonical case.
inline bool is_unit_line(const Sheet& sheet, std::size_t row) {
  std::size_t non_empty = 0;
  for (std::size_t c = 0; c < sheet.grid.n_cols(); ++c) {
    const CellValue& v = sheet.grid.at(row, c);
    if (v.empty()) continue;
    ++non_empty;
    if (v.kind == CellKind::Number) return false;
    if (!text::contains_unit_token(v.text_form)) return false;
  }
  return non_empty > 0;
}

// A banner row carries a single section label anchored at column 0, the way
// balance sheets introduce "Assets" or "Liabilities" sections.
inline bool is_banner_row(const Sheet& sheet, std::size_t row) {
  if (sheet.grid.n_cols() == 0) return false;
  const CellValue& first = sheet.grid.at(row, 0);
  if (first.empty() || first.kind == CellKind::Number) return false;
  std::set<std::string> distinct;
  for (std::size_t c = 0; c < sheet.grid.n_cols(); ++c) {
    const CellValue& v = sheet.grid.at(row, c);
    if (v.empty()) continue;
    if (v.kind == CellKind::Number) return false;
    distinct.insert(v.text_form);
  }
  return distinct.size() == 1;
}

namespace detail {

// Column is numeric in the would-be body (rows below `row`): at least one
// non-empty cell there, and at least half of the non-empty ones are numbers.
inline bool column_numeric_below(const Sheet& sheet, std::size_t col, std::size_t row) {
  std::size_t non_empty = 0, numeric = 0;
  for (std::size_t r = row + 1; r < sheet.grid.n_rows(); ++r) {
    const CellValue& v = sheet.grid.at(r, col);
    if (v.empty()) continue;
    ++non_empty;
    if (v.numeric_form.has_value()) ++numeric;
  }
  return non_empty > 0 && numeric * 2 >= non_empty;
}

inline bool row_has_numeric_in_numeric_column(const Sheet& sheet, std::size_t row) {
  for (std::size_t c = 0; c < sheet.grid.n_cols(); ++c) {
    const CellValue& v = sheet.grid.at(row, c);
    if (v.numeric_form.has_value() && column_numeric_below(sheet, c, row)) return true;
  }
  return false;
}

inline bool merge_links_to_earlier_row(const Sheet& sheet, std::size_t row) {
  for (const auto& m : sheet.merges) {
    if (m.top < static_cast<long>(row) && m.bottom >= static_cast<long>(row)) return true;
  }
  return false;
}

}  // namespace detail

// Finds the contiguous header prefix. Row 0 is always header; each following
// row stays in the header while it (a) has no parseable number in a column
// that is numeric in the body, or (b) is tied by a merge to an earlier header
// row, or (c) is a unit line. Trailing banner rows are then released to the
// body: a lone section label directly above the data opens the first body
// section rather than deepening the header.
inline RowRange detect_header_region(const Sheet& sheet, const ComplexityConfig& config = {}) {
  if (sheet.empty()) throw EmptySheetError(sheet.name);
  std::size_t limit = std::min(sheet.grid.n_rows(), config.max_header_scan_rows);
  std::size_t last = 0;
  for (std::size_t r = 1; r < limit; ++r) {
    bool no_numbers = !detail::row_has_numeric_in_numeric_column(sheet, r);
    bool merge_linked = detail::merge_links_to_earlier_row(sheet, r);
    bool unit = is_unit_line(sheet, r);
    if (no_numbers || merge_linked || unit) last = r;
    else break;
  }
  while (last > 0 && is_banner_row(sheet, last) && !is_unit_line(sheet, last) &&
         !detail::merge_links_to_earlier_row(sheet, last)) {
    --last;
  }
  return {0, last};
}

// MultiHeader iff H >= 2 or d >= rho. The comparison at d == rho is inclusive.
inline SheetClass classify(std::size_t header_depth, double merge_density,
                           const ComplexityConfig& config = {}) {
  if (header_depth >= 2 || merge_density >= config.rho) return SheetClass::MultiHeader;
  return SheetClass::Flat;
}

inline SheetProfile compute_profile(const Sheet& sheet, const ComplexityConfig& config = {}) {
  if (sheet.empty()) throw EmptySheetError(sheet.name);
  SheetProfile p;
  p.header_rows = detect_header_region(sheet, config);
  p.header_depth = p.header_rows.length();
  for (const auto& m : sheet.merges) {
    if (m.intersects_rows(static_cast<long>(p.header_rows.first),
                          static_cast<long>(p.header_rows.last)))
      ++p.header_merge_count;
  }
  p.header_span = p.header_depth * sheet.grid.n_cols();
  p.merge_density = p.header_span > 0
                        ? static_cast<double>(p.header_merge_count) /
                              static_cast<double>(p.header_span)
                        : 0.0;
  p.complexity = config.alpha * static_cast<double>(p.header_depth) +
                 config.beta * static_cast<double>(p.header_merge_count);
  p.sheet_class = classify(p.header_depth, p.merge_density, config);
  return p;
}

}  // namespace square
