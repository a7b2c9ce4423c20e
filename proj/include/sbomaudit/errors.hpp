#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sbomaudit {

enum class ErrorKind {
    malformed_coordinate,
    invalid_timestamp,
    invalid_argument,
    not_found,
    transient_failure,
    malformed_index,
    size_limit_exceeded,
    ambiguous_classification,
    malformed_sidecar,
    syntax_error,
    standard_mismatch,
    malformed_purl,
    dangling_edge,
    unknown_release,
    duplicate_record,
    inconsistent_input,
    io_error,
    stage_failure,
};

std::string_view to_string(ErrorKind kind);

/// Every failure surfaced by this library carries a machine-checkable kind
/// alongside the human-readable message.
class AuditError : public std::runtime_error {
public:
    AuditError(ErrorKind kind, const std::string& message);

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
    throw AuditError(kind, message);
}

}  // namespace sbomaudit
