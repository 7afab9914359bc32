#include "sasrate/error.hpp"

namespace sasrate {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidGroup: return "InvalidGroup";
        case ErrorKind::InvalidValue: return "InvalidValue";
        case ErrorKind::EmptyLexicon: return "EmptyLexicon";
        case ErrorKind::AdapterError: return "AdapterError";
        case ErrorKind::WorkerCrashed: return "WorkerCrashed";
        case ErrorKind::ProtocolViolation: return "ProtocolViolation";
        case ErrorKind::ScoreOutOfRange: return "ScoreOutOfRange";
        case ErrorKind::Timeout: return "Timeout";
        case ErrorKind::SampleTooSmall: return "SampleTooSmall";
        case ErrorKind::UnsupportedCI: return "UnsupportedCI";
        case ErrorKind::DegenerateClass: return "DegenerateClass";
        case ErrorKind::EmptyCondition: return "EmptyCondition";
        case ErrorKind::PositivityViolation: return "PositivityViolation";
        case ErrorKind::InvalidLevels: return "InvalidLevels";
        case ErrorKind::TranslatorUnavailable: return "TranslatorUnavailable";
        case ErrorKind::UnsupportedLanguage: return "UnsupportedLanguage";
        case ErrorKind::MismatchedReports: return "MismatchedReports";
        case ErrorKind::SchemaError: return "SchemaError";
        case ErrorKind::EncodingError: return "EncodingError";
        case ErrorKind::CoverageMismatch: return "CoverageMismatch";
        case ErrorKind::MixedMetric: return "MixedMetric";
        case ErrorKind::IoError: return "IoError";
    }
    return "Unknown";
}

bool is_external_failure(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::AdapterError:
        case ErrorKind::WorkerCrashed:
        case ErrorKind::ProtocolViolation:
        case ErrorKind::ScoreOutOfRange:
        case ErrorKind::Timeout:
        case ErrorKind::TranslatorUnavailable:
            return true;
        default:
            return false;
    }
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind), detail_(message) {}

} // namespace sasrate
