#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "docex/core/model.hpp"
#include "docex/eval/fields.hpp"
#include "docex/eval/metrics.hpp"
#include "docex/kv/extract.hpp"
#include "docex/kv/normalize.hpp"
#include "docex/kv/result.hpp"
#include "docex/kv/schema.hpp"
#include "docex/pdf/extract.hpp"
#include "docex/pdf/generator.hpp"
#include "docex/pipeline/commands.hpp"
#include "docex/preprocess/ops.hpp"

namespace py = pybind11;
using namespace docex;

namespace {

kv::SemanticType semantic_type(const std::string& s) { return kv::parse_semantic_type(s); }

kv::DateOrder date_order(const std::string& s) {
  if (s == "day_first") return kv::DateOrder::day_first;
  if (s == "month_first") return kv::DateOrder::month_first;
  throw Error(ErrorCode::ConfigError, "date_order must be day_first or month_first, got '" + s + "'");
}

// (exit code, console output) for the command wrappers
using CommandResult = std::pair<int, std::string>;

template <typename Args, typename F>
CommandResult run_command(F&& fn, const Args& args) {
  std::ostringstream out;
  int rc;
  {
    py::gil_scoped_release release;
    rc = fn(args, out);
  }
  return {rc, out.str()};
}

}  // namespace

PYBIND11_MODULE(docex, m) {
  m.doc() = "Document digitization and key-value extraction pipeline";
  m.attr("__version__") = DOCEX_VERSION;

  // DocexError(message) with a `code` attribute naming the ErrorCode
  PYBIND11_CONSTINIT static py::gil_safe_call_once_and_store<py::object> error_type;
  error_type.call_once_and_store_result(
      [&]() -> py::object { return py::exception<Error>(m, "DocexError", PyExc_RuntimeError); });
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      const py::object& type = error_type.get_stored();
      py::object exc = type(e.what());
      exc.attr("code") = std::string(to_string(e.code()));
      PyErr_SetObject(type.ptr(), exc.ptr());
    }
  });

  // core
  m.def("flatten_text", [](const std::string& doc_json) { return core::flatten_text(core::parse_document(doc_json)); },
        py::arg("doc_json"));
  m.def("canonicalize", [](const std::string& doc_json) {
    return core::serialize_document(core::parse_document(doc_json));
  });

  // preprocess
  m.def("otsu_threshold", [](const std::vector<std::uint64_t>& hist) {
    if (hist.size() != 256) throw Error(ErrorCode::DimensionMismatch, "histogram needs 256 bins");
    preprocess::Histogram h{};
    std::copy(hist.begin(), hist.end(), h.begin());
    return preprocess::otsu_threshold(h);
  });

  // pdf
  m.def(
      "generate_pdf",
      [](const std::vector<std::vector<std::string>>& pages, double font_size, bool flate) {
        return py::bytes(pdf::generate_pdf(pages, font_size,
                                           flate ? pdf::StreamVariant::flate : pdf::StreamVariant::uncompressed));
      },
      py::arg("pages"), py::arg("font_size") = 12.0, py::arg("flate") = false);
  m.def(
      "pdf_to_document",
      [](const py::bytes& data, const std::string& doc_id, const std::string& source_path) {
        return core::serialize_document(pdf::pdf_to_document(std::string(data), doc_id, source_path));
      },
      py::arg("data"), py::arg("doc_id") = "doc", py::arg("source_path") = "doc.pdf");

  // kv
  m.def(
      "normalize_field",
      [](const std::string& raw, const std::string& type, const std::string& order) {
        return kv::normalize_field(raw, semantic_type(type), date_order(order));
      },
      py::arg("raw"), py::arg("type"), py::arg("date_order") = "day_first");
  m.def("receipt_schema", [] { return kv::serialize_schema(kv::receipt_schema()); });
  m.def(
      "extract_kv",
      [](const std::string& schema_json, const std::string& doc_json) {
        const core::DocumentRecord doc = core::parse_document(doc_json);
        return kv::serialize_result(kv::extract_kv(kv::parse_schema(schema_json), doc), doc.doc_id);
      },
      py::arg("schema_json"), py::arg("doc_json"), "Rule-based extraction; returns the .kv.json text.");

  // eval
  m.def("levenshtein", [](const std::string& a, const std::string& b) { return eval::char_distance(a, b).distance; });
  m.def("cer", [](const std::string& ref, const std::string& hyp) { return eval::cer(ref, hyp); });
  m.def("wer", [](const std::string& ref, const std::string& hyp) { return eval::wer(ref, hyp); });
  m.def("word_accuracy", &eval::word_accuracy);
  m.def("score", [](std::size_t tp, std::size_t fp, std::size_t fn) {
    const eval::Scores s = eval::score({tp, fp, fn});
    py::dict d;
    d["precision"] = s.precision;
    d["recall"] = s.recall;
    d["f1"] = s.f1;
    d["support"] = s.support;
    return d;
  });

  // commands
  m.def(
      "gen_fixtures",
      [](const std::filesystem::path& out, std::int64_t seed, int count) {
        return run_command(pipeline::cmd_gen_fixtures, pipeline::GenFixturesArgs{out, seed, count});
      },
      py::arg("out"), py::arg("seed") = 42, py::arg("count") = 10);
  m.def(
      "extract",
      [](const std::filesystem::path& input, const std::filesystem::path& config, const std::filesystem::path& out,
         std::optional<std::string> engine, unsigned jobs) {
        return run_command(pipeline::cmd_extract,
                           pipeline::ExtractArgs{input, config, std::move(engine), std::nullopt, out, jobs});
      },
      py::arg("input"), py::arg("config"), py::arg("out"), py::arg("engine") = std::nullopt, py::arg("jobs") = 0);
  m.def(
      "evaluate",
      [](const std::filesystem::path& pred, const std::filesystem::path& gold, const std::filesystem::path& report,
         const std::string& format) {
        return run_command(pipeline::cmd_evaluate,
                           pipeline::EvaluateArgs{pred, gold, report, eval::parse_report_format(format)});
      },
      py::arg("pred"), py::arg("gold"), py::arg("report"), py::arg("format") = "csv");
  m.def(
      "compare",
      [](const std::filesystem::path& corpus, const std::vector<std::string>& engines,
         const std::filesystem::path& config, const std::filesystem::path& report, const std::string& format,
         unsigned jobs) {
        return run_command(pipeline::cmd_compare, pipeline::CompareArgs{corpus, engines, config, report,
                                                                        eval::parse_report_format(format), jobs});
      },
      py::arg("corpus"), py::arg("engines"), py::arg("config"), py::arg("report"), py::arg("format") = "csv",
      py::arg("jobs") = 0);
}
