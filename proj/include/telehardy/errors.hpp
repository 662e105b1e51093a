#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace telehardy {

enum class ErrorKind {
    SlotCollision,
    SlotAbsent,
    DimensionMismatch,
    NotFinite,
    NotNormalized,
    NotHermitian,
    NotProjector,
    NotFactorized,
    ZeroProbabilityBranch,
    NonCommuting,
    EmptyBranch,
    MalformedTable,
    Rationalization,
    Parse,
};

std::string_view error_kind_name(ErrorKind kind);

// Every failure raised by the library carries a kind so callers (and the
// CLI exit-code mapping) can tell an impossible branch from a usage error.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace telehardy
