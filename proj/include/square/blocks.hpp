#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "square/cells.hpp"
#include "square/errors.hpp"
#include "square/structure.hpp"
#include "square/text.hpp"

namespace square {

// A header-bounded region of body rows, the unit of semantic retrieval.
struct Block {
  std::string block_id;  // "<sheet>#<4-digit ordinal>", stable and sortable
  std::string sheet_name;
  RowRange row_range;    // body rows covered, inclusive
  std::vector<std::string> header_path;        // outer to inner labels
  std::vector<text::YearToken> year_labels;
  std::optional<std::string> unit;
  std::vector<std::vector<std::string>> header_cells;  // attached header rendering
  std::vector<std::vector<std::string>> cells;         // body rows, display text
};

struct BlockDescription {
  std::string block_id;
  std::string text;  // exactly two sentences
};

struct SegmentConfig {
  std::size_t max_block_rows = 40;  // flat-sheet chunk size
};

namespace blocks_detail {

inline std::string make_block_id(const std::string& sheet, std::size_t ordinal) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "#%04zu", ordinal);
  return sheet + buf;
}

// Every non-empty cell is a year token ("2020", "FY2023") or an integral
// year-valued number.
inline bool is_year_row(const Sheet& sheet, std::size_t row) {
  std::size_t non_empty = 0;
  for (std::size_t c = 0; c < sheet.grid.n_cols(); ++c) {
    const CellValue& v = sheet.grid.at(row, c);
    if (v.empty()) continue;
    ++non_empty;
    if (v.kind == CellKind::Number) {
      double d = *v.numeric_form;
      if (d != static_cast<long>(d) || d < text::kYearMin || d > text::kYearMax) return false;
      continue;
    }
    auto years = text::extract_year_tokens(v.text_form);
    auto tokens = text::tokenize(v.text_form);
    if (years.empty() || years.size() != tokens.size()) return false;
  }
  return non_empty > 0;
}

inline std::vector<std::string> render_row(const Sheet& sheet, std::size_t row) {
  std::vector<std::string> out(sheet.grid.n_cols());
  for (std::size_t c = 0; c < sheet.grid.n_cols(); ++c)
    out[c] = cell_at(sheet, static_cast<long>(row), static_cast<long>(c)).value.text_form;
  return out;
}

inline std::optional<std::string> banner_label(const Sheet& sheet, std::size_t row) {
  if (!is_banner_row(sheet, row) || is_unit_line(sheet, row)) return std::nullopt;
  return sheet.grid.at(row, 0).text_form;
}

}  // namespace blocks_detail

// Splits body rows into blocks. Multi-Header sheets break where the outermost
// section label changes (banner rows); Flat sheets break every max_block_rows
// rows. A boundary that would split a merged region slides below it.
inline std::vector<Block> segment(const Sheet& sheet, const SheetProfile& profile,
                                  const SegmentConfig& config = {}) {
  if (sheet.empty()) throw EmptySheetError(sheet.name);
  std::size_t body_first = profile.header_rows.last + 1;
  if (body_first >= sheet.grid.n_rows()) return {};
  std::size_t body_last = sheet.grid.n_rows() - 1;

  std::vector<std::size_t> starts{body_first};
  if (profile.sheet_class == SheetClass::MultiHeader) {
    for (std::size_t r = body_first + 1; r <= body_last; ++r)
      if (blocks_detail::banner_label(sheet, r)) starts.push_back(r);
  } else {
    std::size_t step = std::max<std::size_t>(1, config.max_block_rows);
    for (std::size_t r = body_first + step; r <= body_last; r += step) starts.push_back(r);
  }

  // keep merged regions whole: a start inside a region slides past it
  for (std::size_t i = 1; i < starts.size(); ++i) {
    bool moved = true;
    while (moved) {
      moved = false;
      for (const auto& m : sheet.merges) {
        if (m.top < static_cast<long>(starts[i]) &&
            m.bottom >= static_cast<long>(starts[i])) {
          starts[i] = static_cast<std::size_t>(m.bottom + 1);
          moved = true;
        }
      }
    }
  }
  std::sort(starts.begin(), starts.end());
  starts.erase(std::unique(starts.begin(), starts.end()), starts.end());
  while (!starts.empty() && starts.back() > body_last) starts.pop_back();

  std::vector<std::vector<std::string>> header_rows;
  for (std::size_t r = profile.header_rows.first; r <= profile.header_rows.last; ++r)
    header_rows.push_back(blocks_detail::render_row(sheet, r));

  std::vector<Block> out;
  for (std::size_t i = 0; i < starts.size(); ++i) {
    Block b;
    b.block_id = blocks_detail::make_block_id(sheet.name, i);
    b.sheet_name = sheet.name;
    b.row_range.first = starts[i];
    b.row_range.last = (i + 1 < starts.size()) ? starts[i + 1] - 1 : body_last;
    b.header_cells = header_rows;
    for (std::size_t r = b.row_range.first; r <= b.row_range.last; ++r)
      b.cells.push_back(blocks_detail::render_row(sheet, r));
    out.push_back(std::move(b));
  }
  return out;
}

// Fills header_path, year_labels, and unit for a segmented block.
inline void extract_metadata(Block& block, const Sheet& sheet, const SheetProfile& profile) {
  block.header_path.clear();
  for (std::size_t r = profile.header_rows.first; r <= profile.header_rows.last; ++r) {
    if (is_unit_line(sheet, r) || blocks_detail::is_year_row(sheet, r)) continue;
    std::string label;
    for (std::size_t c = 0; c < sheet.grid.n_cols(); ++c) {
      const CellValue& v = sheet.grid.at(r, c);
      if (!v.empty() && v.kind != CellKind::Number) {
        label = v.text_form;
        break;
      }
    }
    if (label.empty()) continue;
    if (block.header_path.empty() || block.header_path.back() != label)
      block.header_path.push_back(label);
  }
  if (auto banner = blocks_detail::banner_label(sheet, block.row_range.first)) {
    if (block.header_path.empty() || block.header_path.back() != *banner)
      block.header_path.push_back(*banner);
  }
  if (block.header_path.empty() && profile.sheet_class == SheetClass::MultiHeader)
    block.header_path.push_back(sheet.name);

  // years: header region plus the block's own cells; dedupe by year with the
  // fiscal flag sticky across occurrences
  std::map<int, bool> years;
  auto absorb_cell = [&](const CellValue& v) {
    if (v.empty()) return;
    if (v.kind == CellKind::Number) {
      double d = *v.numeric_form;
      if (d == static_cast<long>(d) && d >= text::kYearMin && d <= text::kYearMax) {
        auto [it, inserted] = years.emplace(static_cast<int>(d), false);
        (void)it;
        (void)inserted;
      }
      return;
    }
    for (const auto& y : text::extract_year_tokens(v.text_form)) {
      auto [it, inserted] = years.emplace(y.year, y.fiscal);
      if (!inserted && y.fiscal) it->second = true;
    }
  };
  for (std::size_t r = profile.header_rows.first; r <= profile.header_rows.last; ++r)
    for (std::size_t c = 0; c < sheet.grid.n_cols(); ++c)
      absorb_cell(sheet.grid.at(r, c));
  for (std::size_t r = block.row_range.first; r <= block.row_range.last; ++r)
    for (std::size_t c = 0; c < sheet.grid.n_cols(); ++c)
      absorb_cell(sheet.grid.at(r, c));
  block.year_labels.clear();
  for (const auto& [year, fiscal] : years) block.year_labels.push_back({year, fiscal});

  block.unit.reset();
  for (std::size_t r = profile.header_rows.first;
       r <= profile.header_rows.last && !block.unit; ++r) {
    for (std::size_t c = 0; c < sheet.grid.n_cols(); ++c) {
      const CellValue& v = sheet.grid.at(r, c);
      if (v.empty() || v.kind == CellKind::Number) continue;
      if (text::contains_unit_token(v.text_form)) {
        block.unit = text::trim(v.text_form);
        break;
      }
    }
  }
}

// Deterministic two-sentence description; the template is total and always
// satisfies the description invariants.
inline BlockDescription render_description_template(const Block& block) {
  std::ostringstream s1, s2;
  if (!block.header_path.empty()) {
    s1 << "This block covers ";
    for (std::size_t i = 0; i < block.header_path.size(); ++i) {
      if (i) s1 << " > ";
      s1 << block.header_path[i];
    }
    s1 << ".";
  } else {
    s1 << "This block covers rows " << (block.row_range.first + 1) << "–"
       << (block.row_range.last + 1) << " of sheet " << block.sheet_name << ".";
  }
  if (!block.year_labels.empty()) {
    s2 << "It reports years ";
    for (std::size_t i = 0; i < block.year_labels.size(); ++i) {
      if (i) s2 << ", ";
      s2 << block.year_labels[i].year;
    }
    if (block.unit) s2 << " in " << *block.unit;
    s2 << ".";
  } else if (block.unit) {
    s2 << "It reports values in " << *block.unit << ".";
  } else {
    s2 << "No year or unit labels were detected.";
  }
  return {block.block_id, s1.str() + " " + s2.str()};
}

// Sentence-final punctuation runs followed by whitespace or end of text.
inline std::size_t sentence_count(const std::string& s) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '.' && s[i] != '!' && s[i] != '?') continue;
    std::size_t j = i;
    while (j + 1 < s.size() && (s[j + 1] == '.' || s[j + 1] == '!' || s[j + 1] == '?')) ++j;
    if (j + 1 == s.size() || std::isspace(static_cast<unsigned char>(s[j + 1]))) ++n;
    i = j;
  }
  return n;
}

// Checks the invariants any description (template or model) must satisfy.
inline bool description_valid(const std::string& desc, const Block& block) {
  if (sentence_count(desc) != 2) return false;
  for (const auto& label : block.header_path)
    if (desc.find(label) == std::string::npos) return false;
  for (const auto& y : block.year_labels)
    if (desc.find(std::to_string(y.year)) == std::string::npos) return false;
  return true;
}

inline std::string render_rows(const std::vector<std::vector<std::string>>& rows) {
  std::ostringstream out;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (r) out << '\n';
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      if (c) out << '\t';
      out << rows[r][c];
    }
  }
  return out.str();
}

// Header region attached on top of the block's own rows.
inline std::string render_block(const Block& block) {
  std::string header = render_rows(block.header_cells);
  std::string body = render_rows(block.cells);
  if (header.empty()) return body;
  if (body.empty()) return header;
  return header + "\n" + body;
}

}  // namespace square
