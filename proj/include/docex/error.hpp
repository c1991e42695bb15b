#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace docex {

// Every failure surfaced by the library carries one of these codes. The
// names match the error vocabulary of the pipeline's public contract.
enum class ErrorCode {
  // core model
  MalformedJson,
  SchemaViolation,
  InvariantViolation,
  // preprocessing / images
  DimensionMismatch,
  EmptyHistogram,
  NoContent,
  AngleOutOfRange,
  ImageTooSmall,
  ImageFormat,
  // ocr backends
  InvalidEngineSpec,
  EngineLaunchFailed,
  EngineOutputUnparseable,
  HttpError,
  Timeout,
  TsvMalformed,
  JsonMalformed,
  MissingField,
  NotMockEngine,
  MissingGroundTruth,
  // pdf / docx
  NotAPdf,
  XrefBroken,
  UnsupportedFeature,
  FilterUnsupported,
  LexError,
  FontMissing,
  OperandError,
  UnsupportedCharacter,
  NotAZip,
  MissingDocumentPart,
  XmlMalformed,
  // key-value extraction
  EmptyDocument,
  MissingCredential,
  RetriesExhausted,
  NoJsonFound,
  RequiredFieldMissing,
  UnparseableValue,
  InvalidSchema,
  // eval
  SchemaMismatch,
  EmptyReference,
  // cli
  UnknownEngine,
  OutputNotWritable,
  ConfigError,
  Io,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace docex
