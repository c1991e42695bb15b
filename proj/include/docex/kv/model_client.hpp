#pragma once

#include <chrono>
#include <functional>
#include <string>

#include "docex/net/http.hpp"

namespace docex::kv {

inline constexpr int kMaxRetriesLimit = 5;

struct ModelClientSpec {
  std::string endpoint_url;
  std::string model_name;
  std::string api_key_env_var;
  int max_retries = 3;
  std::chrono::milliseconds timeout{60'000};
  bool deterministic_decode = true;
};

/// Throws ConfigError for missing fields or max_retries outside [0, 5].
void validate(const ModelClientSpec& spec);

// Injection points for tests: the HTTP call and the backoff sleep.
struct ModelTransport {
  std::function<net::HttpResponse(const std::string& url, const std::string& body, const net::Headers& headers,
                                  std::chrono::milliseconds timeout)>
      post;
  std::function<void(std::chrono::milliseconds)> sleep;

  static ModelTransport real();
};

std::string build_chat_request(const ModelClientSpec& spec, const std::string& prompt);

/// First choice's message content. Throws JsonMalformed / MissingField.
std::string parse_chat_response(const std::string& body);

/// Retries 429 and 5xx with backoff 1 s, 2 s, 4 s, ... up to max_retries.
/// Errors: MissingCredential (checked before any request), HttpError,
/// Timeout, RetriesExhausted.
std::string call_model(const ModelClientSpec& spec, const std::string& prompt,
                       const ModelTransport& transport = ModelTransport::real());

}  // namespace docex::kv
