#pragma once

#include <stdexcept>

namespace secpatch {

// Base class for every error the library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct IoError : Error { using Error::Error; };
struct SchemaError : Error { using Error::Error; };
struct ToolNotFound : Error { using Error::Error; };
struct SubprocessFailure : Error { using Error::Error; };
struct EmptyVocabulary : Error { using Error::Error; };
struct EmptyInput : Error { using Error::Error; };
struct SingleClassInput : Error { using Error::Error; };
struct SingleClassLabeledInput : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct IndexOutOfVocabulary : Error { using Error::Error; };
struct NonFiniteLoss : Error { using Error::Error; };
struct ConfigInvalid : Error { using Error::Error; };
struct TooFewExamples : Error { using Error::Error; };
struct EmptyMatrix : Error { using Error::Error; };
struct FormatError : Error { using Error::Error; };
struct ChecksumError : Error { using Error::Error; };
struct VersionError : Error { using Error::Error; };

}  // namespace secpatch
