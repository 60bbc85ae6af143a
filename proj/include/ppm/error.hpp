#pragma once

#include <stdexcept>
#include <string>

namespace ppm {

enum class ErrorKind {
    Parse,
    InvalidArgument,
    NotPIntegral,
    NotNested,
    Singular,
    CapExceeded,
    NotUnipotent,
    BadDomain,
    PDividesK,
    PrecisionExhausted,
    UnknownCatalogEntry,
    NotTypeR,
    Inconclusive,
    NotASubgroup,
    UnsupportedCharacteristic,
    InvariantViolation,
};

const char* to_string(ErrorKind kind);

/// Base error for every failure the library reports. The kind drives CLI exit codes.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Thrown when a checked internal invariant fails; never expected in a correct build.
inline void ensure(bool condition, const std::string& what) {
    if (!condition) throw Error(ErrorKind::InvariantViolation, what);
}

}  // namespace ppm
