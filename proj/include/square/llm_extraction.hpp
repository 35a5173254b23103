#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "square/llm.hpp"
#include "square/text.hpp"

namespace square {

// Offline answer backend: extracts values straight from the rendered context
// instead of generating free text. Wrong retrieval yields wrong answers, which
// is exactly what evaluation runs need from a deterministic stand-in. For
// decide_mode, describe and generate_sql it returns an empty string so the
// pipeline falls back to its rule-based equivalents.
class ExtractionLlmClient : public LlmClient {
public:
private:
  struct ParsedBlock {
    std::vector<std::vector<std::string>> header_rows;
    std::vector<std::vector<std::string>> body_rows;
  };

  static std::vector<std::string> split_cells(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
      if (c == '\t') {
        out.push_back(cur);
        cur.clear();
      } else {
        cur.push_back(c);
      }
    }
    out.push_back(cur);
    return out;
  }

  static std::set<std::string> question_tokens(const std::string& question) {
    std::set<std::string> out;
    for (const auto& tok : text::tokenize(question)) {
      if (text::is_stopword(tok)) continue;
      out.insert(text::stem(tok));
    }
    return out;
  }

  static std::size_t overlap(const std::set<std::string>& q,
                             const std::vector<std::string>& cells) {
    std::size_t n = 0;
    for (const auto& cell : cells)
      for (const auto& tok : text::tokenize(cell))
        if (q.count(text::stem(tok))) ++n;
    return n;
  }

  ModelResponse do_complete(const ModelRequest& request) override {
    switch (request.purpose) {
      case Purpose::Answer: return {answer(request.prompt), 0, 0.0};
      case Purpose::Summarize: return {strip_summary_preamble(request.prompt), 0, 0.0};
      default: return {"", 0, 0.0};
    }
  }

  static std::string strip_summary_preamble(const std::string& prompt) {
    std::size_t nl = prompt.find('\n');
    return nl == std::string::npos ? prompt : prompt.substr(nl + 1);
  }

  static std::string answer(const std::string& prompt) {
    auto lines = text::split_lines(prompt);
    std::string question;
    if (!lines.empty() && lines[0].rfind("Question: ", 0) == 0)
      question = lines[0].substr(10);

    // SQL rows are authoritative when present
    std::vector<std::vector<std::string>> sql_rows;
    bool in_sql = false;
    for (const auto& line : lines) {
      if (line == "[sql]") {
        in_sql = true;
        continue;
      }
      if (line == "[chunks]") {
        in_sql = false;
        continue;
      }
      if (in_sql && line.rfind("row: ", 0) == 0) sql_rows.push_back(split_cells(line.substr(5)));
    }
    if (!sql_rows.empty()) {
      std::string out;
      for (std::size_t r = 0; r < sql_rows.size(); ++r) {
        if (r) out += ", ";
        for (std::size_t c = 0; c < sql_rows[r].size(); ++c) {
          if (c) out += " ";
          out += sql_rows[r][c];
        }
      }
      return out;
    }

    // otherwise pick the best body row across forwarded blocks
    std::vector<ParsedBlock> blocks = parse_blocks(lines);
    if (blocks.empty()) return "";
    auto q = question_tokens(question);
    auto q_years = text::extract_year_tokens(question);

    const ParsedBlock* best_block = nullptr;
    const std::vector<std::string>* best_row = nullptr;
    std::size_t best_score = 0;
    for (const auto& b : blocks) {
      for (const auto& row : b.body_rows) {
        std::size_t score = overlap(q, row);
        if (score > best_score) {
          best_score = score;
          best_row = &row;
          best_block = &b;
        }
      }
    }
    if (!best_row) return "";

    // column choice: a question year matching a header cell wins, otherwise
    // the header labels with the largest token overlap against the question
    std::optional<std::size_t> target_col;
    if (!q_years.empty() && !best_block->header_rows.empty()) {
      for (const auto& hr : best_block->header_rows) {
        for (std::size_t c = 0; c < hr.size() && !target_col; ++c) {
          for (const auto& y : text::extract_year_tokens(hr[c]))
            for (const auto& qy : q_years)
              if (y.year == qy.year) target_col = c;
        }
        if (target_col) break;
      }
    }
    if (!target_col) {
      std::size_t best_col_score = 0;
      for (std::size_t c = 0; !best_block->header_rows.empty() &&
                              c < best_block->header_rows.back().size();
           ++c) {
        std::vector<std::string> header_cells;
        for (const auto& hr : best_block->header_rows)
          if (c < hr.size()) header_cells.push_back(hr[c]);
        std::size_t score = overlap(q, header_cells);
        if (score > best_col_score) {
          best_col_score = score;
          target_col = c;
        }
      }
    }
    if (target_col && *target_col < best_row->size() &&
        !text::trim((*best_row)[*target_col]).empty())
      return text::trim((*best_row)[*target_col]);

    // fall back to the last numeric cell of the chosen row
    for (std::size_t c = best_row->size(); c > 0; --c) {
      const std::string& cell = (*best_row)[c - 1];
      if (text::parse_number(text::trim(cell))) return text::trim(cell);
    }
    return text::trim((*best_row)[0]);
  }

  static std::vector<ParsedBlock> parse_blocks(const std::vector<std::string>& lines) {
    std::vector<ParsedBlock> out;
    bool in_chunks = false;
    bool in_body = false;
    for (const auto& line : lines) {
      if (line == "[chunks]") {
        in_chunks = true;
        continue;
      }
      if (line == "[sql]") {
        in_chunks = false;
        continue;
      }
      if (!in_chunks) continue;
      if (line.rfind("block ", 0) == 0) {
        out.emplace_back();
        in_body = false;
        continue;
      }
      if (line == "---") {
        in_body = true;
        continue;
      }
      if (out.empty() || text::trim(line).empty()) continue;
      if (in_body) out.back().body_rows.push_back(split_cells(line));
      else out.back().header_rows.push_back(split_cells(line));
    }
    return out;
  }
};

}  // namespace square
