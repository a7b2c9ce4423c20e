#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "sbomaudit/model.hpp"

namespace sbomaudit {

/// One entry of a POM's top-level <dependencies> element. The version is
/// interpolated from the POM's own properties and project version; when a
/// placeholder survives (or no version is given at all), resolved is false
/// and the literal text is kept.
struct PomDependency {
    Gav gav;
    DependencyScope scope = DependencyScope::unspecified;
    bool optional_flag = false;
    bool resolved = false;

    auto operator<=>(const PomDependency&) const = default;
};

/// Parses the direct dependencies out of a single POM document, in document
/// order. dependencyManagement entries are not included and no parent-POM
/// chain is consulted. Throws syntax_error on malformed XML.
std::vector<PomDependency> parse_pom_dependencies(std::span<const std::uint8_t> pom_bytes);
std::vector<PomDependency> parse_pom_dependencies(std::string_view pom_text);

/// Resolved, non-import-scoped entries as (Gav, scope) pairs — the shape the
/// alignment takes when a POM stands in for the dependency graph.
std::vector<std::pair<Gav, DependencyScope>> direct_dependencies_from_pom(
    const std::vector<PomDependency>& dependencies);

}  // namespace sbomaudit
