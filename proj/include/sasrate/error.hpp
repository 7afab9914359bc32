#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sasrate {

enum class ErrorKind {
    InvalidGroup,
    InvalidValue,
    EmptyLexicon,
    AdapterError,
    WorkerCrashed,
    ProtocolViolation,
    ScoreOutOfRange,
    Timeout,
    SampleTooSmall,
    UnsupportedCI,
    DegenerateClass,
    EmptyCondition,
    PositivityViolation,
    InvalidLevels,
    TranslatorUnavailable,
    UnsupportedLanguage,
    MismatchedReports,
    SchemaError,
    EncodingError,
    CoverageMismatch,
    MixedMetric,
    IoError,
};

std::string_view to_string(ErrorKind kind);

// Failures that come from an external scorer or translator rather than from
// the data being rated.
bool is_external_failure(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message);

    ErrorKind kind() const noexcept { return kind_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    ErrorKind kind_;
    std::string detail_;
};

} // namespace sasrate
