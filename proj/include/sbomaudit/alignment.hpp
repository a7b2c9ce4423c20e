#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "sbomaudit/model.hpp"

namespace sbomaudit {

enum class AlignmentStatus { match, version_mismatch, sbom_extra, graph_extra, mixed };

std::string to_string(AlignmentStatus status);
AlignmentStatus alignment_status_from_string(const std::string& text);

struct VersionMismatch {
    std::string artifact_key;  // "group:artifact"
    std::string sbom_version;
    std::string graph_version;

    auto operator<=>(const VersionMismatch&) const = default;
};

struct SbomOnlyDep {
    Gav gav;
    bool submodule_flag = false;

    auto operator<=>(const SbomOnlyDep&) const = default;
};

struct GraphOnlyDep {
    Gav gav;
    DependencyScope scope = DependencyScope::compile;

    auto operator<=>(const GraphOnlyDep&) const = default;
};

/// Outcome of comparing one release's SBOM-declared direct dependencies
/// against the graph-recorded ones. The five lists partition the union of
/// group:artifact keys from both sides.
struct AlignmentVerdict {
    Gav release;
    AlignmentStatus status = AlignmentStatus::match;
    std::vector<Gav> matched;
    std::vector<VersionMismatch> version_mismatches;
    std::vector<SbomOnlyDep> sbom_only;
    std::vector<GraphOnlyDep> graph_only;
    std::vector<Gav> ignored_test_deps;
    std::vector<std::string> warnings;

    /// The paper-style count comparison: both sides agree on how many
    /// direct dependencies exist once test-scoped absences are excused.
    bool count_match() const {
        return sbom_only.size() == graph_only.size();
    }
};

/// Keys on group:artifact, compares versions second. Graph-only test-scoped
/// dependencies are excused into ignored_test_deps. Duplicate keys within
/// one side keep the first occurrence and record a warning.
AlignmentVerdict align(const Gav& release, const std::vector<Gav>& sbom_deps,
                       const std::vector<std::pair<Gav, DependencyScope>>& graph_deps);

/// Marks sbom_only entries sharing the subject's group AND version as likely
/// submodules or parent POMs. Flags never change status or membership.
AlignmentVerdict flag_submodules(AlignmentVerdict verdict, const Gav& subject);

/// Wire form used by the verdicts file; from_json inverts to_json.
nlohmann::json verdict_to_json(const AlignmentVerdict& verdict);
AlignmentVerdict verdict_from_json(const nlohmann::json& record);

}  // namespace sbomaudit
