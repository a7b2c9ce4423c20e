#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "sbomaudit/model.hpp"

namespace sbomaudit {

struct FileEntry {
    std::string name;
    bool is_directory = false;

    auto operator<=>(const FileEntry&) const = default;
};

/// One directory index page of a Maven-layout registry.
struct FileListing {
    std::string directory_url;
    std::vector<FileEntry> entries;  // document order, names unique
};

/// Politeness and robustness knobs for registry access.
struct FetchPolicy {
    int max_concurrency = 8;
    int max_retries = 3;
    std::chrono::milliseconds backoff_base{500};  // doubles per retry
    std::chrono::milliseconds per_request_timeout{30000};
    std::chrono::milliseconds min_request_interval{100};  // per host
    std::size_t max_body_bytes = 64ull * 1024 * 1024;

    void validate() const;  // throws invalid_argument
};

/// Parses a directory index body into file entries. Accepts HTML anchor
/// lists (Maven Central style) and a plain-text one-name-per-line format.
/// Throws malformed_index when the body is neither.
std::vector<FileEntry> parse_directory_index(std::string_view body);

/// HTTP client for Maven-layout registries. Shareable across threads; the
/// FetchPolicy limits (concurrency, per-host pacing, retries with exponential
/// backoff) are enforced internally.
class RegistryClient {
public:
    struct Stats {
        std::uint64_t requests = 0;
        std::uint64_t retries = 0;
        std::uint64_t not_found = 0;
        std::uint64_t failures = 0;
    };

    explicit RegistryClient(FetchPolicy policy = {});
    ~RegistryClient();

    RegistryClient(const RegistryClient&) = delete;
    RegistryClient& operator=(const RegistryClient&) = delete;

    /// Fetches and parses the directory index of registry_directory_url(root, gav).
    /// HTTP 404 means the release is absent and raises not_found.
    FileListing list_release_files(const std::string& root, const Gav& gav);

    /// Full body bytes of an absolute URL, bit-exact. Bodies larger than the
    /// policy cap raise size_limit_exceeded.
    std::vector<std::uint8_t> fetch_file(const std::string& url);

    const FetchPolicy& policy() const;
    Stats stats() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace sbomaudit
