#include "docex/error.hpp"

namespace docex {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::MalformedJson: return "MalformedJson";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::EmptyHistogram: return "EmptyHistogram";
    case ErrorCode::NoContent: return "NoContent";
    case ErrorCode::AngleOutOfRange: return "AngleOutOfRange";
    case ErrorCode::ImageTooSmall: return "ImageTooSmall";
    case ErrorCode::ImageFormat: return "ImageFormat";
    case ErrorCode::InvalidEngineSpec: return "InvalidEngineSpec";
    case ErrorCode::EngineLaunchFailed: return "EngineLaunchFailed";
    case ErrorCode::EngineOutputUnparseable: return "EngineOutputUnparseable";
    case ErrorCode::HttpError: return "HttpError";
    case ErrorCode::Timeout: return "Timeout";
    case ErrorCode::TsvMalformed: return "TsvMalformed";
    case ErrorCode::JsonMalformed: return "JsonMalformed";
    case ErrorCode::MissingField: return "MissingField";
    case ErrorCode::NotMockEngine: return "NotMockEngine";
    case ErrorCode::MissingGroundTruth: return "MissingGroundTruth";
    case ErrorCode::NotAPdf: return "NotAPdf";
    case ErrorCode::XrefBroken: return "XrefBroken";
    case ErrorCode::UnsupportedFeature: return "UnsupportedFeature";
    case ErrorCode::FilterUnsupported: return "FilterUnsupported";
    case ErrorCode::LexError: return "LexError";
    case ErrorCode::FontMissing: return "FontMissing";
    case ErrorCode::OperandError: return "OperandError";
    case ErrorCode::UnsupportedCharacter: return "UnsupportedCharacter";
    case ErrorCode::NotAZip: return "NotAZip";
    case ErrorCode::MissingDocumentPart: return "MissingDocumentPart";
    case ErrorCode::XmlMalformed: return "XmlMalformed";
    case ErrorCode::EmptyDocument: return "EmptyDocument";
    case ErrorCode::MissingCredential: return "MissingCredential";
    case ErrorCode::RetriesExhausted: return "RetriesExhausted";
    case ErrorCode::NoJsonFound: return "NoJsonFound";
    case ErrorCode::RequiredFieldMissing: return "RequiredFieldMissing";
    case ErrorCode::UnparseableValue: return "UnparseableValue";
    case ErrorCode::InvalidSchema: return "InvalidSchema";
    case ErrorCode::SchemaMismatch: return "SchemaMismatch";
    case ErrorCode::EmptyReference: return "EmptyReference";
    case ErrorCode::UnknownEngine: return "UnknownEngine";
    case ErrorCode::OutputNotWritable: return "OutputNotWritable";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace docex
