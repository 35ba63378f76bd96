#ifndef AMCF_ERROR_HPP
#define AMCF_ERROR_HPP

#include <stdexcept>
#include <string>

namespace amcf {

enum class ErrorKind {
    InvalidInput,
    ShapeMismatch,
    SizeMismatch,
    ImaginaryResidueExceeded,
    ParameterConstraintViolation,
    NonpositiveRegularizer,
    GammaOutOfRange,
    MalformedGroundTruth,
    MissingFrames,
    FrameUnavailable,
};

inline const char* to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::SizeMismatch: return "SizeMismatch";
    case ErrorKind::ImaginaryResidueExceeded: return "ImaginaryResidueExceeded";
    case ErrorKind::ParameterConstraintViolation: return "ParameterConstraintViolation";
    case ErrorKind::NonpositiveRegularizer: return "NonpositiveRegularizer";
    case ErrorKind::GammaOutOfRange: return "GammaOutOfRange";
    case ErrorKind::MalformedGroundTruth: return "MalformedGroundTruth";
    case ErrorKind::MissingFrames: return "MissingFrames";
    case ErrorKind::FrameUnavailable: return "FrameUnavailable";
    }
    return "Unknown";
}

/// Single exception type for the library; callers branch on kind().
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

    /// Input-class errors map to CLI exit code 2, everything else to 3.
    bool is_input_error() const noexcept {
        switch (kind_) {
        case ErrorKind::InvalidInput:
        case ErrorKind::ParameterConstraintViolation:
        case ErrorKind::NonpositiveRegularizer:
        case ErrorKind::GammaOutOfRange:
        case ErrorKind::MalformedGroundTruth:
        case ErrorKind::MissingFrames:
            return true;
        default:
            return false;
        }
    }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

} // namespace amcf

#endif
