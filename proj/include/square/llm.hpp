#pragma once

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "square/errors.hpp"
#include "square/text.hpp"

namespace square {

enum class Purpose { DecideMode, Describe, GenerateSql, Summarize, Answer };

inline const char* to_string(Purpose p) {
  switch (p) {
    case Purpose::DecideMode: return "decide_mode";
    case Purpose::Describe: return "describe";
    case Purpose::GenerateSql: return "generate_sql";
    case Purpose::Summarize: return "summarize";
    case Purpose::Answer: return "answer";
  }
  return "answer";
}

inline std::optional<Purpose> purpose_from_string(const std::string& s) {
  if (s == "decide_mode") return Purpose::DecideMode;
  if (s == "describe") return Purpose::Describe;
  if (s == "generate_sql") return Purpose::GenerateSql;
  if (s == "summarize") return Purpose::Summarize;
  if (s == "answer") return Purpose::Answer;
  return std::nullopt;
}

struct ModelRequest {
  Purpose purpose = Purpose::Answer;
  std::string prompt;
  double temperature = 0.0;  // all calls run at temperature 0
  std::size_t max_tokens = 1024;
};

struct ModelResponse {
  std::string text;
  std::size_t token_count = 0;
  double latency_ms = 0.0;
};

// Per-query call counters, reset at query start by the owning pipeline.
struct InvocationBudget {
  int decide_mode = 0;
  int describe = 0;
  int generate_sql = 0;
  int summarize = 0;
  int answer = 0;

  void increment(Purpose p) {
    switch (p) {
      case Purpose::DecideMode: ++decide_mode; break;
      case Purpose::Describe: ++describe; break;
      case Purpose::GenerateSql: ++generate_sql; break;
      case Purpose::Summarize: ++summarize; break;
      case Purpose::Answer: ++answer; break;
    }
  }

  int total() const { return decide_mode + describe + generate_sql + summarize + answer; }
  void reset() { *this = InvocationBudget{}; }
};

// Uniform client for every model call. Each completion increments the
// caller-owned budget counter for its purpose and is logged verbatim.
class LlmClient {
public:
  struct LogEntry {
    Purpose purpose;
    std::string prompt;
    std::string response;
  };

  virtual ~LlmClient() = default;

  ModelResponse complete(const ModelRequest& request, InvocationBudget& budget) {
    budget.increment(request.purpose);
    ModelResponse response = do_complete(request);
    if (response.token_count == 0)
      response.token_count = text::estimate_tokens(response.text);
    {
      std::lock_guard<std::mutex> lock(log_mutex_);
      log_.push_back({request.purpose, request.prompt, response.text});
    }
    return response;
  }

  std::vector<LogEntry> log() const {
    std::lock_guard<std::mutex> lock(log_mutex_);
    return log_;
  }

private:
  virtual ModelResponse do_complete(const ModelRequest& request) = 0;

  mutable std::mutex log_mutex_;
  std::vector<LogEntry> log_;
};

// Scripted deterministic mock. Entries match on (purpose, prompt substring);
// a per-purpose default catches everything else. A request with neither is a
// test configuration error.
class MockLlmClient : public LlmClient {
public:
  struct ScriptEntry {
    Purpose purpose;
    std::string prompt_contains;
    std::string response;
  };

  void add(Purpose purpose, std::string prompt_contains, std::string response) {
    script_.push_back({purpose, std::move(prompt_contains), std::move(response)});
  }

  void set_default(Purpose purpose, std::string response) {
    defaults_[purpose] = std::move(response);
  }

  // Script file: JSON array of {purpose, prompt_contains, response}; an entry
  // with empty prompt_contains acts as the purpose default.
  static std::shared_ptr<MockLlmClient> from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FileNotFoundError(path);
    nlohmann::json doc;
    try {
      in >> doc;
    } catch (const std::exception& e) {
      throw ParseError(path, std::string("bad mock script: ") + e.what());
    }
    auto client = std::make_shared<MockLlmClient>();
    for (const auto& entry : doc) {
      auto purpose = purpose_from_string(entry.at("purpose").get<std::string>());
      if (!purpose) throw ParseError(path, "unknown purpose in mock script");
      std::string contains = entry.value("prompt_contains", "");
      std::string response = entry.at("response").get<std::string>();
      if (contains.empty()) client->set_default(*purpose, response);
      else client->add(*purpose, contains, response);
    }
    return client;
  }

private:
  ModelResponse do_complete(const ModelRequest& request) override {
    for (const auto& entry : script_) {
      if (entry.purpose == request.purpose &&
          request.prompt.find(entry.prompt_contains) != std::string::npos) {
        return {entry.response, 0, 0.0};
      }
    }
    auto it = defaults_.find(request.purpose);
    if (it != defaults_.end()) return {it->second, 0, 0.0};
    throw ScriptMissError(std::string(to_string(request.purpose)) + ": " +
                          request.prompt.substr(0, 80));
  }

  std::vector<ScriptEntry> script_;
  std::map<Purpose, std::string> defaults_;
};

}  // namespace square
