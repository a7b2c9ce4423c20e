#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "sbomaudit/model.hpp"

namespace sbomaudit {

enum class VerificationStatus { ok, mismatch };

struct VerificationResult {
    ChecksumAlgo algo;
    std::string expected_hex;  // from the sidecar, lowercased
    std::string actual_hex;    // computed from the data
    VerificationStatus status;

    auto operator<=>(const VerificationResult&) const = default;
};

/// Lowercase hex digest of data under the given algorithm.
std::string compute_digest(std::span<const std::uint8_t> data, ChecksumAlgo algo);
std::string compute_digest(std::string_view data, ChecksumAlgo algo);

/// Extracts the digest from a registry sidecar file: first whitespace-delimited
/// token, lowercased. Tolerates a trailing "  filename" suffix and trailing
/// newline. Throws malformed_sidecar unless the token is hex of a known
/// digest length (32, 40, 64 or 128).
std::string parse_sidecar(std::string_view text);

/// Compares the sidecar digest against the data's computed digest. The sidecar
/// token must have the algo's canonical length; otherwise malformed_sidecar.
VerificationResult verify(std::span<const std::uint8_t> data, std::string_view sidecar_text,
                          ChecksumAlgo algo);
VerificationResult verify(std::string_view data, std::string_view sidecar_text, ChecksumAlgo algo);

}  // namespace sbomaudit
