#pragma once

#include <stdexcept>
#include <string>

namespace notestd {

enum class ErrorKind {
    MissingColumn,
    EncodingError,
    EmptyCorpus,
    MalformedLine,
    DuplicateAccession,
    Unrepairable,
    CoercionFailed,
    UnknownAbbreviation,
    EmptyInput,
    SampleTooLarge,
    ResourceInvalid,
    ConfigError,
    IoError,
};

const char* error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace notestd
