#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "sbomaudit/errors.hpp"

namespace sbomaudit {

/// Fully qualified Maven release coordinate (GroupID:ArtifactID:Version).
struct Gav {
    std::string group;
    std::string artifact;
    std::string version;

    /// Canonical text form "group:artifact:version".
    std::string text() const;

    /// "group:artifact" — identity of the artifact across versions.
    std::string artifact_key() const;

    auto operator<=>(const Gav&) const = default;
};

/// Parses "group:artifact:version". Exactly two ':' separators, no empty
/// segment. Throws malformed_coordinate otherwise.
Gav parse_gav(std::string_view text);

/// A release node: coordinate plus publication timestamp.
struct ReleaseRecord {
    Gav gav;
    std::int64_t timestamp_ms = 0;  // milliseconds since Unix epoch
    int year = 0;                   // UTC calendar year of timestamp_ms

    auto operator<=>(const ReleaseRecord&) const = default;
};

ReleaseRecord make_release_record(Gav gav, std::int64_t timestamp_ms);

/// UTC calendar year of a positive epoch-millisecond timestamp.
int year_of(std::int64_t timestamp_ms);

/// Maven-layout directory URL of a release:
/// root + "/" + group with dots replaced by slashes + "/" + artifact +
/// "/" + version + "/". A trailing slash on root is tolerated.
std::string registry_directory_url(std::string_view root, const Gav& gav);

enum class SbomStandard { cyclonedx, spdx };
enum class Serialization { json, xml };
enum class ChecksumAlgo { md5, sha1, sha256, sha512 };

/// Maven dependency scope. Test-scoped absences get special treatment in
/// alignment; everything else is carried through unchanged.
enum class DependencyScope { compile, provided, runtime, test, system, import_scope, unspecified };

inline constexpr std::array<ChecksumAlgo, 4> all_checksum_algos{
    ChecksumAlgo::md5, ChecksumAlgo::sha1, ChecksumAlgo::sha256, ChecksumAlgo::sha512};

std::string_view to_string(SbomStandard standard);
std::string_view to_string(Serialization serialization);
std::string_view to_string(ChecksumAlgo algo);
std::string_view to_string(DependencyScope scope);

std::optional<SbomStandard> sbom_standard_from_string(std::string_view text);
std::optional<Serialization> serialization_from_string(std::string_view text);
std::optional<ChecksumAlgo> checksum_algo_from_string(std::string_view text);
std::optional<DependencyScope> dependency_scope_from_string(std::string_view text);

// Throwing variants for wire formats where an unknown name is an error.
SbomStandard parse_sbom_standard(std::string_view text);
Serialization parse_serialization(std::string_view text);
ChecksumAlgo parse_checksum_algo(std::string_view text);
DependencyScope parse_scope(std::string_view text);

/// Registry sidecar extension for an algorithm, without the dot ("md5", ...).
std::string_view sidecar_extension(ChecksumAlgo algo);

/// Canonical hex digest length: md5 32, sha1 40, sha256 64, sha512 128.
std::size_t digest_hex_length(ChecksumAlgo algo);

/// ASCII lowercase copy.
std::string to_lower(std::string_view text);

}  // namespace sbomaudit
