#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "sbomaudit/model.hpp"

namespace sbomaudit {

/// SBOM facts attached to a release node. Deduplicated by url when woven.
struct SbomAddedValue {
    std::string url;
    SbomStandard standard = SbomStandard::cyclonedx;
    bool is_signed = false;
    std::vector<ChecksumAlgo> hash_algos;  // canonical order md5, sha1, sha256, sha512

    auto operator<=>(const SbomAddedValue&) const = default;
};

struct DependencyEdge {
    std::string from_release;    // "group:artifact:version"
    std::string to_artifact;     // "group:artifact"
    std::string target_version;
    DependencyScope scope = DependencyScope::compile;

    auto operator<=>(const DependencyEdge&) const = default;
};

/// In-memory dependency-graph snapshot: artifact nodes, release nodes with
/// timestamps, scoped dependency edges, and woven SBOM added values.
/// Queries are safe for concurrent readers; mutation needs exclusive access.
class GraphSnapshot {
public:
    void add_artifact(const std::string& artifact_id);
    void add_release(const ReleaseRecord& release);
    void add_dependency(DependencyEdge edge);  // unknown from-release raises dangling_edge

    bool has_release(const std::string& release_id) const;
    const ReleaseRecord* find_release(const std::string& release_id) const;

    /// Outgoing edges of a release, materialized as coordinates with scope.
    std::vector<std::pair<Gav, DependencyScope>> direct_dependencies(
        const std::string& release_id) const;

    /// Appends an added value to the release; an existing value with the
    /// same url is replaced, so weaving is idempotent by url.
    void weave_sbom(const std::string& release_id, SbomAddedValue value);

    const std::vector<SbomAddedValue>* added_values(const std::string& release_id) const;

    const std::set<std::string>& artifacts() const { return artifacts_; }
    const std::map<std::string, ReleaseRecord>& releases() const { return releases_; }
    const std::vector<DependencyEdge>& edges() const { return edges_; }
    const std::map<std::string, std::vector<SbomAddedValue>>& all_added_values() const {
        return added_values_;
    }

    std::size_t added_value_count() const;

    /// Structural equality; edge order is not significant.
    bool operator==(const GraphSnapshot& other) const;

private:
    std::set<std::string> artifacts_;
    std::map<std::string, ReleaseRecord> releases_;
    std::vector<DependencyEdge> edges_;
    std::map<std::string, std::vector<std::size_t>> out_edges_;
    std::map<std::string, std::vector<SbomAddedValue>> added_values_;
};

/// The Listing-1 string encoding of an added value:
/// {standard=cyclonedx, isSigned=true, isHashAvailable=md5, sha1}
std::string render_goblin_added_value(const SbomAddedValue& value);

/// Reads a line-delimited JSON snapshot. Line kinds: artifact, release,
/// dependency; releases may carry woven sbom values in either the structured
/// or the goblin-compat shape. Parse problems report the line number;
/// dependencies whose from-release is missing raise dangling_edge listing
/// every offending edge.
GraphSnapshot load_snapshot(const std::filesystem::path& path);

/// Writes the snapshot back out. With goblin_compat, each added value is
/// emitted as a one-entry url-to-rendered-string map matching the weaver's
/// shape; otherwise as structured objects. load_snapshot inverts both.
void export_snapshot(const GraphSnapshot& snapshot, const std::filesystem::path& path,
                     bool goblin_compat = false);

}  // namespace sbomaudit
