#include "notestd/errors.hpp"

namespace notestd {

const char* error_kind_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::MissingColumn: return "MissingColumn";
        case ErrorKind::EncodingError: return "EncodingError";
        case ErrorKind::EmptyCorpus: return "EmptyCorpus";
        case ErrorKind::MalformedLine: return "MalformedLine";
        case ErrorKind::DuplicateAccession: return "DuplicateAccession";
        case ErrorKind::Unrepairable: return "Unrepairable";
        case ErrorKind::CoercionFailed: return "CoercionFailed";
        case ErrorKind::UnknownAbbreviation: return "UnknownAbbreviation";
        case ErrorKind::EmptyInput: return "EmptyInput";
        case ErrorKind::SampleTooLarge: return "SampleTooLarge";
        case ErrorKind::ResourceInvalid: return "ResourceInvalid";
        case ErrorKind::ConfigError: return "ConfigError";
        case ErrorKind::IoError: return "IoError";
    }
    return "Error";
}

} // namespace notestd
