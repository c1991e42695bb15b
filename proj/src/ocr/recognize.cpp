#include <algorithm>
#include <cstdlib>
#include <filesystem>

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "docex/error.hpp"
#include "docex/net/http.hpp"
#include "docex/net/subprocess.hpp"
#include "docex/ocr/engine.hpp"
#include "docex/preprocess/image_io.hpp"
#include "docex/preprocess/ops.hpp"
#include "docex/util/files.hpp"

namespace docex::ocr {

namespace {

std::string excerpt(std::string_view s, std::size_t n = 200) {
  if (s.size() <= n) return std::string(s);
  return std::string(s.substr(0, n)) + "...";
}

std::string encode_page(const PageImage& image) {
  if (const auto* raster = std::get_if<preprocess::RasterImage>(&image)) return preprocess::encode_png(*raster);
  return preprocess::encode_png(preprocess::to_raster(std::get<preprocess::BinaryImage>(image)));
}

std::pair<int, int> dimensions(const PageImage& image) {
  return std::visit([](const auto& img) { return std::pair{img.width(), img.height()}; }, image);
}

std::string replace_all(std::string s, std::string_view from, const std::string& to) {
  std::size_t pos = 0;
  while ((pos = s.find(from, pos)) != std::string::npos) {
    s.replace(pos, from.size(), to);
    pos += to.size();
  }
  return s;
}

std::vector<core::Word> run_external(const EngineSpec& spec, const PageImage& image) {
  net::TempDir dir;  // one per call; concurrent calls never share files
  const auto input = dir.path() / "page.png";
  const auto output = dir.path() / "out";
  util::write_file_atomic(input, encode_page(image));

  std::vector<std::string> argv = net::split_command(*spec.command_template);
  for (std::string& arg : argv) {
    arg = replace_all(arg, "{input}", input.string());
    arg = replace_all(arg, "{output}", output.string());
  }
  net::ProcessResult res = net::run_process(argv, spec.timeout, dir.path());
  if (res.exit_code != 0) {
    throw Error(ErrorCode::EngineLaunchFailed, "engine '" + spec.name + "' exited with code " +
                                                   std::to_string(res.exit_code) + ": " +
                                                   excerpt(res.stderr_text));
  }
  std::string raw;
  auto tsv = output;
  tsv += ".tsv";
  if (std::filesystem::exists(tsv)) raw = util::read_file(tsv);
  else if (std::filesystem::exists(output)) raw = util::read_file(output);
  else raw = res.stdout_text;
  try {
    return parse_engine_tsv(raw);
  } catch (const Error& e) {
    throw Error(ErrorCode::EngineOutputUnparseable, std::string(e.what()) + "; output: " + excerpt(raw));
  }
}

std::vector<core::Word> run_http(const EngineSpec& spec, const PageImage& image) {
  net::Headers headers;
  if (spec.credential_env_var) {
    const char* token = std::getenv(spec.credential_env_var->c_str());
    if (token == nullptr || *token == '\0') {
      throw Error(ErrorCode::MissingCredential, "environment variable " + *spec.credential_env_var + " is not set");
    }
    headers.emplace_back("Authorization", std::string("Bearer ") + token);
  }
  nlohmann::json req{{"image", {{"content", net::base64_encode(encode_page(image))}}}};
  net::HttpResponse res;
  {
    net::LimiterSlot slot(net::RequestLimiter::shared());
    res = net::post_json(*spec.endpoint_url, req.dump(), headers, spec.timeout);
  }
  if (res.status != 200) {
    throw Error(ErrorCode::HttpError, "status " + std::to_string(res.status) + ": " + excerpt(res.body));
  }
  try {
    return parse_http_ocr_json(res.body);
  } catch (const Error& e) {
    throw Error(ErrorCode::EngineOutputUnparseable, std::string(e.what()) + "; body: " + excerpt(res.body));
  }
}

// Engines may report confidences or boxes outside the valid ranges; they are
// clamped here so downstream invariants hold.
void sanitize(std::vector<core::Word>& words, const std::string& engine, int width, int height) {
  for (core::Word& w : words) {
    if (w.confidence < 0.0 || w.confidence > 1.0) {
      spdlog::warn("engine '{}': clamping confidence {} for word '{}'", engine, w.confidence, w.text);
      w.confidence = std::clamp(w.confidence, 0.0, 1.0);
    }
    core::BoundingBox b = w.bbox;
    b.x0 = std::clamp(b.x0, 0.0, static_cast<double>(width));
    b.x1 = std::clamp(b.x1, b.x0, static_cast<double>(width));
    b.y0 = std::clamp(b.y0, 0.0, static_cast<double>(height));
    b.y1 = std::clamp(b.y1, b.y0, static_cast<double>(height));
    b.unit = core::Unit::pixel;
    if (!(b == w.bbox)) {
      spdlog::warn("engine '{}': clamping box of word '{}' to the page", engine, w.text);
      w.bbox = b;
    }
  }
}

}  // namespace

RecognizedPage recognize(const EngineSpec& spec, const PageImage& image, const RecognizeContext& ctx) {
  validate(spec);
  auto [width, height] = dimensions(image);
  if (width <= 0 || height <= 0) throw Error(ErrorCode::ImageFormat, "cannot recognize an empty image");

  const auto start = std::chrono::steady_clock::now();
  RecognizedPage page;
  switch (spec.kind) {
    case EngineKind::mock:
      if (!ctx.ground_truth) {
        throw Error(ErrorCode::MissingGroundTruth, "mock engine '" + spec.name + "' needs ground-truth words");
      }
      page = mock_recognize(spec, *ctx.ground_truth, ctx.doc_key);
      break;
    case EngineKind::external_process:
      page.words = run_external(spec, image);
      break;
    case EngineKind::http:
      page.words = run_http(spec, image);
      break;
  }
  page.engine_name = spec.name;
  sanitize(page.words, spec.name, width, height);
  page.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - start)
                        .count();
  return page;
}

}  // namespace docex::ocr
