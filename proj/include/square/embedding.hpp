#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "square/errors.hpp"
#include "square/text.hpp"

namespace square {

struct EmbeddingVector {
  std::vector<double> values;

  std::size_t dim() const { return values.size(); }

  double l2_norm() const {
    double s = 0.0;
    for (double v : values) s += v * v;
    return std::sqrt(s);
  }

  bool operator==(const EmbeddingVector&) const = default;
};

inline double cosine(const EmbeddingVector& a, const EmbeddingVector& b) {
  if (a.dim() != b.dim() || a.dim() == 0) throw Error("cosine: dimension mismatch");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    dot += a.values[i] * b.values[i];
    na += a.values[i] * a.values[i];
    nb += b.values[i] * b.values[i];
  }
  if (na == 0.0 || nb == 0.0) throw Error("cosine: zero vector");
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

class Embedder {
public:
  virtual ~Embedder() = default;
  virtual EmbeddingVector embed(const std::string& text) const = 0;
  virtual std::string id() const = 0;
};

// Seeded feature-hashing embedder: character trigrams of the lowercased,
// whitespace-collapsed text are hashed into a fixed-dimension signed bag,
// then L2-normalized. Identical texts map to identical vectors and token
// overlap correlates with cosine, which is all the offline test backend
// needs. Production embedding services plug in behind the same interface.
class HashingEmbedder : public Embedder {
public:
  explicit HashingEmbedder(std::size_t dim = 256, std::uint64_t seed = 0x5157a7e5u)
      : dim_(dim), seed_(seed) {}

  EmbeddingVector embed(const std::string& input) const override {
    if (text::trim(input).empty()) throw Error("embed: empty text");
    std::string s = text::collapse_whitespace(text::to_lower(input));
    EmbeddingVector v;
    v.values.assign(dim_, 0.0);
    const std::size_t n = 3;
    if (s.size() < n) {
      accumulate(v, s);
    } else {
      for (std::size_t i = 0; i + n <= s.size(); ++i) accumulate(v, s.substr(i, n));
    }
    double norm = v.l2_norm();
    if (norm > 0.0)
      for (double& x : v.values) x /= norm;
    return v;
  }

  std::string id() const override {
    return "hash-ngram3-d" + std::to_string(dim_) + "-s" + std::to_string(seed_);
  }

private:
  void accumulate(EmbeddingVector& v, const std::string& gram) const {
    std::uint64_t h = fnv1a(gram);
    std::size_t bucket = static_cast<std::size_t>(h % dim_);
    double sign = ((h >> 32) & 1) ? 1.0 : -1.0;
    v.values[bucket] += sign;
  }

  std::uint64_t fnv1a(const std::string& s) const {
    std::uint64_t h = 1469598103934665603ull ^ seed_;
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ull;
    }
    return h;
  }

  std::size_t dim_;
  std::uint64_t seed_;
};

}  // namespace square
