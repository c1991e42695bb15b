#include "docex/kv/model_client.hpp"

#include <cstdlib>
#include <thread>

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "docex/error.hpp"

namespace docex::kv {

namespace {

std::string excerpt(const std::string& s) { return s.size() <= 200 ? s : s.substr(0, 200) + "..."; }

bool transient(int status) { return status == 429 || (status >= 500 && status <= 599); }

}  // namespace

void validate(const ModelClientSpec& spec) {
  if (spec.endpoint_url.empty()) throw Error(ErrorCode::ConfigError, "model endpoint_url is empty");
  if (spec.model_name.empty()) throw Error(ErrorCode::ConfigError, "model model_name is empty");
  if (spec.api_key_env_var.empty()) throw Error(ErrorCode::ConfigError, "model api_key_env_var is empty");
  if (spec.max_retries < 0 || spec.max_retries > kMaxRetriesLimit) {
    throw Error(ErrorCode::ConfigError, "model max_retries must be in [0, 5]");
  }
}

ModelTransport ModelTransport::real() {
  return ModelTransport{
      [](const std::string& url, const std::string& body, const net::Headers& headers,
         std::chrono::milliseconds timeout) { return net::post_json(url, body, headers, timeout); },
      [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); }};
}

std::string build_chat_request(const ModelClientSpec& spec, const std::string& prompt) {
  nlohmann::json req{{"model", spec.model_name},
                     {"messages", nlohmann::json::array({{{"role", "user"}, {"content", prompt}}})}};
  if (spec.deterministic_decode) req["temperature"] = 0;
  return req.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

std::string parse_chat_response(const std::string& body) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(body);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::JsonMalformed, std::string("chat response: ") + e.what());
  }
  if (!j.is_object() || !j.contains("choices") || !j["choices"].is_array() || j["choices"].empty()) {
    throw Error(ErrorCode::MissingField, "choices[0]");
  }
  const auto& choice = j["choices"][0];
  if (!choice.is_object() || !choice.contains("message") || !choice["message"].is_object()) {
    throw Error(ErrorCode::MissingField, "choices[0].message");
  }
  const auto& content = choice["message"].value("content", nlohmann::json());
  if (!content.is_string()) throw Error(ErrorCode::MissingField, "choices[0].message.content");
  return content.get<std::string>();
}

std::string call_model(const ModelClientSpec& spec, const std::string& prompt, const ModelTransport& transport) {
  validate(spec);
  const char* key = std::getenv(spec.api_key_env_var.c_str());
  if (key == nullptr || *key == '\0') {
    throw Error(ErrorCode::MissingCredential, "environment variable " + spec.api_key_env_var + " is not set");
  }
  const net::Headers headers{{"Authorization", std::string("Bearer ") + key}};
  const std::string body = build_chat_request(spec, prompt);

  for (int attempt = 0;; ++attempt) {
    net::HttpResponse res;
    {
      net::LimiterSlot slot(net::RequestLimiter::shared());
      res = transport.post(spec.endpoint_url, body, headers, spec.timeout);
    }
    if (res.status == 200) return parse_chat_response(res.body);
    if (!transient(res.status)) {
      throw Error(ErrorCode::HttpError, "status " + std::to_string(res.status) + ": " + excerpt(res.body));
    }
    if (attempt >= spec.max_retries) {
      throw Error(ErrorCode::RetriesExhausted, std::to_string(attempt + 1) + " attempts, last status " +
                                                   std::to_string(res.status));
    }
    const auto delay = std::chrono::milliseconds(1000LL << attempt);
    spdlog::warn("model endpoint returned {}; retrying in {} ms", res.status, delay.count());
    transport.sleep(delay);
  }
}

}  // namespace docex::kv
