#pragma once

#include <chrono>
#include <condition_variable>
#include <mutex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace docex::net {

// Caps the number of in-flight HTTP requests. One shared instance is used by
// both the OCR HTTP adapter and the language-model client.
class RequestLimiter {
 public:
  explicit RequestLimiter(int capacity = 4) : capacity_(capacity) {}

  void acquire();
  void release();
  void set_capacity(int capacity);
  int in_flight() const;

  static RequestLimiter& shared();

 private:
  mutable std::mutex mu_;
  std::condition_variable cv_;
  int capacity_;
  int in_flight_ = 0;
};

class LimiterSlot {
 public:
  explicit LimiterSlot(RequestLimiter& limiter) : limiter_(limiter) { limiter_.acquire(); }
  ~LimiterSlot() { limiter_.release(); }
  LimiterSlot(const LimiterSlot&) = delete;
  LimiterSlot& operator=(const LimiterSlot&) = delete;

 private:
  RequestLimiter& limiter_;
};

struct Url {
  std::string origin;  // scheme://host[:port]
  std::string path;    // starts with '/'
};

/// Throws HttpError for anything that is not http:// or https://.
Url split_url(std::string_view url);

struct HttpResponse {
  int status = 0;
  std::string body;
};

using Headers = std::vector<std::pair<std::string, std::string>>;

// POST with a JSON body. Returns any HTTP status; throws Timeout when the
// deadline passes and HttpError (status 0) when no response arrives.
HttpResponse post_json(const std::string& url, const std::string& body, const Headers& headers,
                       std::chrono::milliseconds timeout);

std::string base64_encode(std::string_view bytes);

}  // namespace docex::net
