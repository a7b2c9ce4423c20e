#include "sbomaudit/model.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>

namespace sbomaudit {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::malformed_coordinate: return "malformed-coordinate";
        case ErrorKind::invalid_timestamp: return "invalid-timestamp";
        case ErrorKind::invalid_argument: return "invalid-argument";
        case ErrorKind::not_found: return "not-found";
        case ErrorKind::transient_failure: return "transient-failure";
        case ErrorKind::malformed_index: return "malformed-index";
        case ErrorKind::size_limit_exceeded: return "size-limit-exceeded";
        case ErrorKind::ambiguous_classification: return "ambiguous-classification";
        case ErrorKind::malformed_sidecar: return "malformed-sidecar";
        case ErrorKind::syntax_error: return "syntax-error";
        case ErrorKind::standard_mismatch: return "standard-mismatch";
        case ErrorKind::malformed_purl: return "malformed-purl";
        case ErrorKind::dangling_edge: return "dangling-edge";
        case ErrorKind::unknown_release: return "unknown-release";
        case ErrorKind::duplicate_record: return "duplicate-record";
        case ErrorKind::inconsistent_input: return "inconsistent-input";
        case ErrorKind::io_error: return "io-error";
        case ErrorKind::stage_failure: return "stage-failure";
    }
    return "unknown";
}

AuditError::AuditError(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

std::string Gav::text() const {
    return group + ":" + artifact + ":" + version;
}

std::string Gav::artifact_key() const {
    return group + ":" + artifact;
}

Gav parse_gav(std::string_view text) {
    auto first = text.find(':');
    auto second = first == std::string_view::npos ? std::string_view::npos : text.find(':', first + 1);
    auto third = second == std::string_view::npos ? std::string_view::npos : text.find(':', second + 1);
    if (first == std::string_view::npos || second == std::string_view::npos ||
        third != std::string_view::npos) {
        fail(ErrorKind::malformed_coordinate,
             "expected group:artifact:version, got \"" + std::string(text) + "\"");
    }
    Gav gav{std::string(text.substr(0, first)),
            std::string(text.substr(first + 1, second - first - 1)),
            std::string(text.substr(second + 1))};
    if (gav.group.empty() || gav.artifact.empty() || gav.version.empty()) {
        fail(ErrorKind::malformed_coordinate,
             "empty segment in \"" + std::string(text) + "\"");
    }
    return gav;
}

ReleaseRecord make_release_record(Gav gav, std::int64_t timestamp_ms) {
    return ReleaseRecord{std::move(gav), timestamp_ms, year_of(timestamp_ms)};
}

int year_of(std::int64_t timestamp_ms) {
    if (timestamp_ms <= 0) {
        fail(ErrorKind::invalid_timestamp,
             "timestamp must be positive, got " + std::to_string(timestamp_ms));
    }
    using namespace std::chrono;
    sys_time<milliseconds> tp{milliseconds{timestamp_ms}};
    year_month_day ymd{floor<days>(tp)};
    return static_cast<int>(ymd.year());
}

std::string registry_directory_url(std::string_view root, const Gav& gav) {
    std::string url(root);
    while (!url.empty() && url.back() == '/') url.pop_back();
    std::string group_path(gav.group);
    std::replace(group_path.begin(), group_path.end(), '.', '/');
    url += '/';
    url += group_path;
    url += '/';
    url += gav.artifact;
    url += '/';
    url += gav.version;
    url += '/';
    return url;
}

std::string_view to_string(SbomStandard standard) {
    return standard == SbomStandard::cyclonedx ? "cyclonedx" : "spdx";
}

std::string_view to_string(Serialization serialization) {
    return serialization == Serialization::json ? "json" : "xml";
}

std::string_view to_string(ChecksumAlgo algo) {
    switch (algo) {
        case ChecksumAlgo::md5: return "md5";
        case ChecksumAlgo::sha1: return "sha1";
        case ChecksumAlgo::sha256: return "sha256";
        case ChecksumAlgo::sha512: return "sha512";
    }
    return "md5";
}

std::string_view to_string(DependencyScope scope) {
    switch (scope) {
        case DependencyScope::compile: return "compile";
        case DependencyScope::provided: return "provided";
        case DependencyScope::runtime: return "runtime";
        case DependencyScope::test: return "test";
        case DependencyScope::system: return "system";
        case DependencyScope::import_scope: return "import";
        case DependencyScope::unspecified: return "unspecified";
    }
    return "unspecified";
}

std::optional<SbomStandard> sbom_standard_from_string(std::string_view text) {
    if (text == "cyclonedx") return SbomStandard::cyclonedx;
    if (text == "spdx") return SbomStandard::spdx;
    return std::nullopt;
}

std::optional<Serialization> serialization_from_string(std::string_view text) {
    if (text == "json") return Serialization::json;
    if (text == "xml") return Serialization::xml;
    return std::nullopt;
}

std::optional<ChecksumAlgo> checksum_algo_from_string(std::string_view text) {
    for (auto algo : all_checksum_algos) {
        if (text == to_string(algo)) return algo;
    }
    return std::nullopt;
}

std::optional<DependencyScope> dependency_scope_from_string(std::string_view text) {
    for (auto scope : {DependencyScope::compile, DependencyScope::provided, DependencyScope::runtime,
                       DependencyScope::test, DependencyScope::system, DependencyScope::import_scope,
                       DependencyScope::unspecified}) {
        if (text == to_string(scope)) return scope;
    }
    return std::nullopt;
}

SbomStandard parse_sbom_standard(std::string_view text) {
    if (auto standard = sbom_standard_from_string(text)) return *standard;
    fail(ErrorKind::invalid_argument, "unknown sbom standard '" + std::string(text) + "'");
}

Serialization parse_serialization(std::string_view text) {
    if (auto serialization = serialization_from_string(text)) return *serialization;
    fail(ErrorKind::invalid_argument, "unknown serialization '" + std::string(text) + "'");
}

ChecksumAlgo parse_checksum_algo(std::string_view text) {
    if (auto algo = checksum_algo_from_string(text)) return *algo;
    fail(ErrorKind::invalid_argument, "unknown checksum algorithm '" + std::string(text) + "'");
}

DependencyScope parse_scope(std::string_view text) {
    if (auto scope = dependency_scope_from_string(text)) return *scope;
    fail(ErrorKind::invalid_argument, "unknown dependency scope '" + std::string(text) + "'");
}

std::string_view sidecar_extension(ChecksumAlgo algo) {
    return to_string(algo);
}

std::size_t digest_hex_length(ChecksumAlgo algo) {
    switch (algo) {
        case ChecksumAlgo::md5: return 32;
        case ChecksumAlgo::sha1: return 40;
        case ChecksumAlgo::sha256: return 64;
        case ChecksumAlgo::sha512: return 128;
    }
    return 0;
}

std::string to_lower(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

}  // namespace sbomaudit
