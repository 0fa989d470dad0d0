#pragma once

#include <stdexcept>
#include <string>

namespace cmf {

enum class ErrorKind {
    InvalidArgument,
    Range,
    AmbiguousRounding,
    NotFundamental,
    ExcludedField,
    ConditionViolated,
    PrecisionExhausted,
    RoundingFailed,
    SplitPrime,
    RatioViolation,
    NoRoot,
};

const char* to_string(ErrorKind kind);

// Every failure raised by the library carries a kind; the CLI maps kinds to exit codes.
class Error : public std::runtime_error
{
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind)
    {
    }

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Range: return "RangeError";
    case ErrorKind::AmbiguousRounding: return "AmbiguousRounding";
    case ErrorKind::NotFundamental: return "NotFundamental";
    case ErrorKind::ExcludedField: return "ExcludedField";
    case ErrorKind::ConditionViolated: return "ConditionViolated";
    case ErrorKind::PrecisionExhausted: return "PrecisionExhausted";
    case ErrorKind::RoundingFailed: return "RoundingFailed";
    case ErrorKind::SplitPrime: return "SplitPrime";
    case ErrorKind::RatioViolation: return "RatioViolation";
    case ErrorKind::NoRoot: return "NoRoot";
    }
    return "Unknown";
}

} // namespace cmf
