#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "square/blocks.hpp"
#include "square/embedding.hpp"
#include "square/errors.hpp"

namespace square {

struct RetrievedBlock {
  Block block;
  std::string description;
  double score = 0.0;
};

// Exact-scan cosine index over block descriptions. Corpora here are a few
// dozen blocks per sheet, so no ANN structure is warranted.
class VectorIndex {
public:
  VectorIndex() = default;
  explicit VectorIndex(std::shared_ptr<const Embedder> embedder)
      : embedder_(std::move(embedder)) {
    embedder_id_ = embedder_->id();
  }

  void add(Block block, BlockDescription description) {
    EmbeddingVector e = embedder_->embed(description.text);
    if (e.l2_norm() == 0.0)
      throw Error("degenerate all-zero embedding for block " + block.block_id);
    Entry entry;
    entry.block_id = block.block_id;
    entry.description = description.text;
    entry.embedding = std::move(e);
    blocks_[block.block_id] = std::move(block);
    entries_.push_back(std::move(entry));
  }

  std::size_t size() const { return entries_.size(); }
  const std::string& embedder_id() const { return embedder_id_; }

  bool has_block(const std::string& id) const { return blocks_.count(id) > 0; }

  RetrievedBlock lookup(const std::string& id, double score) const {
    auto it = blocks_.find(id);
    if (it == blocks_.end()) throw Error("unknown block id: " + id);
    for (const auto& e : entries_) {
      if (e.block_id == id) return {it->second, e.description, score};
    }
    throw Error("unknown block id: " + id);
  }

  // Top-k by cosine similarity, ties broken by ascending block_id.
  std::vector<RetrievedBlock> retrieve(const std::string& query, std::size_t k) const {
    if (k < 1) throw Error("retrieve: k must be >= 1");
    if (entries_.empty()) throw EmptyIndexError();
    EmbeddingVector q = embedder_->embed(query);
    struct Scored {
      double score;
      const Entry* entry;
    };
    std::vector<Scored> scored;
    scored.reserve(entries_.size());
    for (const auto& e : entries_) scored.push_back({cosine(q, e.embedding), &e});
    std::stable_sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
      if (a.score != b.score) return a.score > b.score;
      return a.entry->block_id < b.entry->block_id;
    });
    std::size_t take = std::min(k, scored.size());
    std::vector<RetrievedBlock> out;
    out.reserve(take);
    for (std::size_t i = 0; i < take; ++i) {
      out.push_back(
          {blocks_.at(scored[i].entry->block_id), scored[i].entry->description,
           scored[i].score});
    }
    return out;
  }

  // One JSON record per block; floats round-trip bit-exactly through the
  // shortest-representation serializer.
  void save_jsonl(const std::string& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write index file: " + path);
    for (const auto& e : entries_) {
      const Block& b = blocks_.at(e.block_id);
      nlohmann::ordered_json meta;
      meta["sheet_name"] = b.sheet_name;
      meta["row_range"] = {b.row_range.first, b.row_range.last};
      meta["header_path"] = b.header_path;
      nlohmann::ordered_json years = nlohmann::ordered_json::array();
      for (const auto& y : b.year_labels)
        years.push_back({{"year", y.year}, {"fiscal", y.fiscal}});
      meta["year_labels"] = years;
      if (b.unit) meta["unit"] = *b.unit;
      else meta["unit"] = nullptr;
      meta["header_cells"] = b.header_cells;
      meta["cells"] = b.cells;

      nlohmann::ordered_json rec;
      rec["block_id"] = e.block_id;
      rec["metadata"] = meta;
      rec["description"] = e.description;
      rec["embedding"] = e.embedding.values;
      rec["embedder_id"] = embedder_id_;
      out << rec.dump() << '\n';
    }
  }

  static VectorIndex load_jsonl(const std::string& path,
                                std::shared_ptr<const Embedder> embedder) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileNotFoundError(path);
    VectorIndex index;
    index.embedder_ = std::move(embedder);
    index.embedder_id_.clear();
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (text::trim(line).empty()) continue;
      nlohmann::json rec;
      try {
        rec = nlohmann::json::parse(line);
      } catch (const std::exception& e) {
        throw ParseError(path, std::string("bad index record: ") + e.what(),
                         static_cast<long>(line_no));
      }
      Entry entry;
      entry.block_id = rec.at("block_id").get<std::string>();
      entry.description = rec.at("description").get<std::string>();
      entry.embedding.values = rec.at("embedding").get<std::vector<double>>();
      std::string rec_embedder = rec.at("embedder_id").get<std::string>();
      if (index.embedder_id_.empty()) index.embedder_id_ = rec_embedder;
      if (rec_embedder != index.embedder_id_)
        throw ParseError(path, "mixed embedder ids in one index", static_cast<long>(line_no));

      const auto& meta = rec.at("metadata");
      Block b;
      b.block_id = entry.block_id;
      b.sheet_name = meta.at("sheet_name").get<std::string>();
      auto rr = meta.at("row_range");
      b.row_range.first = rr.at(0).get<std::size_t>();
      b.row_range.last = rr.at(1).get<std::size_t>();
      b.header_path = meta.at("header_path").get<std::vector<std::string>>();
      for (const auto& y : meta.at("year_labels"))
        b.year_labels.push_back({y.at("year").get<int>(), y.at("fiscal").get<bool>()});
      if (!meta.at("unit").is_null()) b.unit = meta.at("unit").get<std::string>();
      b.header_cells = meta.at("header_cells").get<std::vector<std::vector<std::string>>>();
      b.cells = meta.at("cells").get<std::vector<std::vector<std::string>>>();

      index.blocks_[entry.block_id] = std::move(b);
      index.entries_.push_back(std::move(entry));
    }
    if (index.embedder_ && !index.embedder_id_.empty() &&
        index.embedder_->id() != index.embedder_id_)
      throw Error("index was built with embedder \"" + index.embedder_id_ +
                  "\" but loaded with \"" + index.embedder_->id() + "\"");
    return index;
  }

  const std::map<std::string, Block>& blocks() const { return blocks_; }

private:
  struct Entry {
    std::string block_id;
    std::string description;
    EmbeddingVector embedding;
  };

  std::shared_ptr<const Embedder> embedder_;
  std::string embedder_id_;
  std::vector<Entry> entries_;
  std::map<std::string, Block> blocks_;
};

}  // namespace square
