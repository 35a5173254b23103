#pragma once

#include <chrono>
#include <cstdlib>
#include <string>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "square/errors.hpp"
#include "square/llm.hpp"

namespace square {

struct HttpLlmConfig {
  std::string endpoint;  // e.g. http://localhost:8080/v1/chat/completions
  std::string model;
  std::string auth_token_env;  // environment variable holding the bearer token
  int timeout_seconds = 60;
};

// Chat-completion client. Transport failures and 5xx responses are retried
// once with a short backoff; model-content problems are the caller's
// refinement concern, not the gateway's.
class HttpLlmClient : public LlmClient {
public:
  explicit HttpLlmClient(HttpLlmConfig config) : config_(std::move(config)) {
    std::size_t scheme = config_.endpoint.find("://");
    if (scheme == std::string::npos)
      throw Error("endpoint must include a scheme: " + config_.endpoint);
    std::size_t path_start = config_.endpoint.find('/', scheme + 3);
    if (path_start == std::string::npos) {
      base_ = config_.endpoint;
      path_ = "/v1/chat/completions";
    } else {
      base_ = config_.endpoint.substr(0, path_start);
      path_ = config_.endpoint.substr(path_start);
    }
  }

private:
  ModelResponse do_complete(const ModelRequest& request) override {
    nlohmann::json body;
    body["model"] = config_.model;
    body["messages"] = nlohmann::json::array(
        {{{"role", "user"}, {"content", request.prompt}}});
    body["temperature"] = request.temperature;
    body["max_tokens"] = request.max_tokens;
    std::string payload = body.dump();

    std::string last_error;
    auto started = std::chrono::steady_clock::now();
    for (int attempt = 0; attempt < 2; ++attempt) {
      if (attempt > 0) std::this_thread::sleep_for(std::chrono::milliseconds(250));
      httplib::Client client(base_);
      client.set_connection_timeout(config_.timeout_seconds);
      client.set_read_timeout(config_.timeout_seconds);
      httplib::Headers headers;
      if (!config_.auth_token_env.empty()) {
        if (const char* token = std::getenv(config_.auth_token_env.c_str()))
          headers.emplace("Authorization", std::string("Bearer ") + token);
      }
      auto res = client.Post(path_, headers, payload, "application/json");
      if (!res) {
        last_error = "transport failure";
        continue;
      }
      if (res->status >= 500) {
        last_error = "HTTP " + std::to_string(res->status);
        continue;
      }
      if (res->status != 200)
        throw BackendUnavailableError("HTTP " + std::to_string(res->status) + " from " +
                                      base_);
      try {
        nlohmann::json doc = nlohmann::json::parse(res->body);
        ModelResponse out;
        out.text = doc.at("choices").at(0).at("message").at("content").get<std::string>();
        if (doc.contains("usage") && doc["usage"].contains("total_tokens"))
          out.token_count = doc["usage"]["total_tokens"].get<std::size_t>();
        out.latency_ms = std::chrono::duration<double, std::milli>(
                             std::chrono::steady_clock::now() - started)
                             .count();
        return out;
      } catch (const std::exception& e) {
        throw BackendUnavailableError(std::string("malformed completion response: ") +
                                      e.what());
      }
    }
    throw BackendUnavailableError(last_error + " after retry: " + base_);
  }

  HttpLlmConfig config_;
  std::string base_;
  std::string path_;
};

}  // namespace square
