#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dieplan {

enum class ErrorCode {
    Io,
    Format,
    EmptyMesh,
    InvalidArgument,
    Schema,
    NotAdjacent,
    NoTool,
    UnsupportedCriteria,
    MissingArtifact,
    StaleArtifact,
    NotFound,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library; `code()` drives the CLI/HTTP error reports.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message) : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace dieplan
