#include "docex/net/http.hpp"

#include <httplib.h>

#include "docex/error.hpp"

namespace docex::net {

void RequestLimiter::acquire() {
  std::unique_lock lock(mu_);
  cv_.wait(lock, [&] { return in_flight_ < capacity_; });
  ++in_flight_;
}

void RequestLimiter::release() {
  {
    std::lock_guard lock(mu_);
    --in_flight_;
  }
  cv_.notify_one();
}

void RequestLimiter::set_capacity(int capacity) {
  {
    std::lock_guard lock(mu_);
    capacity_ = capacity < 1 ? 1 : capacity;
  }
  cv_.notify_all();
}

int RequestLimiter::in_flight() const {
  std::lock_guard lock(mu_);
  return in_flight_;
}

RequestLimiter& RequestLimiter::shared() {
  static RequestLimiter limiter(4);
  return limiter;
}

Url split_url(std::string_view url) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string_view::npos) {
    throw Error(ErrorCode::HttpError, "endpoint URL lacks a scheme: " + std::string(url));
  }
  std::string_view scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") {
    throw Error(ErrorCode::HttpError, "unsupported URL scheme: " + std::string(scheme));
  }
  auto path_start = url.find('/', scheme_end + 3);
  Url out;
  if (path_start == std::string_view::npos) {
    out.origin = std::string(url);
    out.path = "/";
  } else {
    out.origin = std::string(url.substr(0, path_start));
    out.path = std::string(url.substr(path_start));
  }
  return out;
}

HttpResponse post_json(const std::string& url, const std::string& body, const Headers& headers,
                       std::chrono::milliseconds timeout) {
  Url parts = split_url(url);
  httplib::Client client(parts.origin);
  auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout);
  auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());

  httplib::Headers hdrs;
  for (const auto& [k, v] : headers) hdrs.emplace(k, v);

  auto start = std::chrono::steady_clock::now();
  auto res = client.Post(parts.path, hdrs, body, "application/json");
  if (!res) {
    auto err = res.error();
    auto elapsed = std::chrono::steady_clock::now() - start;
    if (err == httplib::Error::ConnectionTimeout ||
        (err == httplib::Error::Read && elapsed >= timeout)) {
      throw Error(ErrorCode::Timeout, "no response from " + url + " within " +
                                          std::to_string(timeout.count()) + " ms");
    }
    throw Error(ErrorCode::HttpError, "status 0: " + httplib::to_string(err) + " (" + url + ")");
  }
  return HttpResponse{res->status, res->body};
}

std::string base64_encode(std::string_view bytes) {
  static constexpr char kAlphabet[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  std::size_t i = 0;
  for (; i + 2 < bytes.size(); i += 3) {
    unsigned v = (static_cast<unsigned char>(bytes[i]) << 16) |
                 (static_cast<unsigned char>(bytes[i + 1]) << 8) | static_cast<unsigned char>(bytes[i + 2]);
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += kAlphabet[(v >> 6) & 63];
    out += kAlphabet[v & 63];
  }
  if (i < bytes.size()) {
    unsigned v = static_cast<unsigned char>(bytes[i]) << 16;
    if (i + 1 < bytes.size()) v |= static_cast<unsigned char>(bytes[i + 1]) << 8;
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += i + 1 < bytes.size() ? kAlphabet[(v >> 6) & 63] : '=';
    out += '=';
  }
  return out;
}

}  // namespace docex::net
