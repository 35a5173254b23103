#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "square/cells.hpp"
#include "square/errors.hpp"

namespace square::csv {

// RFC-4180 style field splitting with a configurable delimiter. Quoted fields
// may contain the delimiter, newlines, and doubled quotes.
inline std::vector<std::vector<std::string>> parse(const std::string& content,
                                                   char delimiter = ',') {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  std::size_t i = 0;
  auto end_field = [&]() {
    row.push_back(field);
    field.clear();
    field_started = false;
  };
  auto end_row = [&]() {
    end_field();
    rows.push_back(row);
    row.clear();
  };
  while (i < content.size()) {
    char c = content[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < content.size() && content[i + 1] == '"') {
          field.push_back('"');
          i += 2;
          continue;
        }
        quoted = false;
        ++i;
        continue;
      }
      field.push_back(c);
      ++i;
      continue;
    }
    if (c == '"' && !field_started && field.empty()) {
      quoted = true;
      field_started = true;
      ++i;
      continue;
    }
    if (c == delimiter) {
      end_field();
      ++i;
      continue;
    }
    if (c == '\r') {
      if (i + 1 < content.size() && content[i + 1] == '\n') ++i;
      end_row();
      ++i;
      continue;
    }
    if (c == '\n') {
      end_row();
      ++i;
      continue;
    }
    field.push_back(c);
    field_started = true;
    ++i;
  }
  if (!field.empty() || field_started || !row.empty()) end_row();
  return rows;
}

inline std::string escape_field(const std::string& s, char delimiter = ',') {
  bool needs_quotes = s.find(delimiter) != std::string::npos ||
                      s.find('"') != std::string::npos ||
                      s.find('\n') != std::string::npos ||
                      s.find('\r') != std::string::npos;
  if (!needs_quotes) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out.push_back('"');
  return out;
}

inline std::string write_grid(const CellGrid& grid, char delimiter = ',') {
  std::ostringstream out;
  for (std::size_t r = 0; r < grid.n_rows(); ++r) {
    for (std::size_t c = 0; c < grid.n_cols(); ++c) {
      if (c) out << delimiter;
      out << escape_field(grid.at(r, c).text_form, delimiter);
    }
    out << '\n';
  }
  return out.str();
}

inline Sheet sheet_from_rows(const std::vector<std::vector<std::string>>& raw,
                             const std::string& name) {
  std::size_t n_cols = 0;
  for (const auto& r : raw) n_cols = std::max(n_cols, r.size());
  CellGrid grid(raw.size(), n_cols);
  for (std::size_t r = 0; r < raw.size(); ++r)
    for (std::size_t c = 0; c < raw[r].size(); ++c)
      grid.set(r, c, CellValue::from_text(raw[r][c]));
  grid.trim_trailing_empty();
  Sheet sheet;
  sheet.name = name;
  sheet.grid = std::move(grid);
  return sheet;
}

inline Sheet load_sheet(const std::string& path, const std::string& sheet_name,
                        char delimiter = ',') {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileNotFoundError(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string content = buf.str();
  if (content.empty()) throw ParseError(path, "empty file");
  return sheet_from_rows(parse(content, delimiter), sheet_name);
}

}  // namespace square::csv
