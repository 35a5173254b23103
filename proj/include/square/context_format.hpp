#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "square/blocks.hpp"
#include "square/sql_executor.hpp"
#include "square/vector_index.hpp"

namespace square::ctxfmt {

// Context sections share one plain-text layout so provenance survives merging
// and the extraction backend can read the same structure the answer model sees:
//
//   [chunks]
//   block <id> | sheet <name> | rows <a>-<b>
//   <header lines, tab-joined>
//   ---
//   <body lines, tab-joined>
//
//   [sql]
//   sql: <validated query text>
//   columns: <tab-joined names>
//   row: <tab-joined display values>

inline std::string chunk_section(const std::vector<RetrievedBlock>& chunks) {
  std::ostringstream out;
  out << "[chunks]\n";
  for (std::size_t i = 0; i < chunks.size(); ++i) {
    const Block& b = chunks[i].block;
    if (i) out << "\n";
    out << "block " << b.block_id << " | sheet " << b.sheet_name << " | rows "
        << (b.row_range.first + 1) << "-" << (b.row_range.last + 1) << "\n";
    std::string header = render_rows(b.header_cells);
    if (!header.empty()) out << header << "\n";
    out << "---\n";
    std::string body = render_rows(b.cells);
    if (!body.empty()) out << body << "\n";
  }
  return out.str();
}

inline std::string sql_section(const std::string& sql_text, const ResultRows& rows) {
  std::ostringstream out;
  out << "[sql]\n";
  out << "sql: " << sql_text << "\n";
  out << "columns: ";
  for (std::size_t i = 0; i < rows.columns.size(); ++i) {
    if (i) out << '\t';
    out << rows.columns[i];
  }
  out << "\n";
  for (const auto& row : rows.rows) {
    out << "row: ";
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << '\t';
      out << row[i].display;
    }
    out << "\n";
  }
  return out.str();
}

inline std::string answer_prompt(const std::string& question, const std::string& context) {
  return "Question: " + question + "\nContext:\n" + context +
         "\nAnswer with the exact value(s) from the context.";
}

inline std::string summarize_prompt(const std::string& context, std::size_t token_budget) {
  return "Summarize the following context in at most " + std::to_string(token_budget) +
         " tokens. Keep every numeric value exactly as written.\n" + context;
}

inline std::string decide_prompt(const std::string& question, double complexity, bool flat) {
  std::ostringstream out;
  out << "Question: " << question << "\nSheet complexity score: " << complexity
      << "\nFlat sheet: " << (flat ? "yes" : "no")
      << "\nReply with exactly one word, chunk or sql, naming the better retrieval mode.";
  return out.str();
}

}  // namespace square::ctxfmt
