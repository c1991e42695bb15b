#include "docex/error.hpp"
#include "docex/ocr/engine.hpp"

namespace docex::ocr {

std::string_view to_string(EngineKind kind) noexcept {
  switch (kind) {
    case EngineKind::external_process: return "external_process";
    case EngineKind::http: return "http";
    case EngineKind::mock: return "mock";
  }
  return "mock";
}

EngineKind parse_engine_kind(std::string_view s) {
  if (s == "external_process") return EngineKind::external_process;
  if (s == "http") return EngineKind::http;
  if (s == "mock") return EngineKind::mock;
  throw Error(ErrorCode::InvalidEngineSpec, "unknown engine kind '" + std::string(s) + "'");
}

void validate(const EngineSpec& spec) {
  auto fail = [&](const std::string& what) {
    throw Error(ErrorCode::InvalidEngineSpec, "engine '" + spec.name + "': " + what);
  };
  if (spec.name.empty()) fail("name must not be empty");
  if (spec.timeout.count() <= 0) fail("timeout must be positive");
  switch (spec.kind) {
    case EngineKind::external_process:
      if (!spec.command_template || spec.command_template->empty()) fail("command_template is required");
      break;
    case EngineKind::http:
      if (!spec.endpoint_url || spec.endpoint_url->empty()) fail("endpoint_url is required");
      break;
    case EngineKind::mock:
      if (!spec.mock_char_error_rate) fail("mock_char_error_rate is required");
      if (!spec.mock_seed) fail("mock_seed is required");
      if (!(*spec.mock_char_error_rate >= 0.0 && *spec.mock_char_error_rate <= 1.0)) {
        fail("mock_char_error_rate must be in [0,1]");
      }
      break;
  }
}

}  // namespace docex::ocr
