#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "sbomaudit/model.hpp"

namespace sbomaudit {

/// A generation tool recorded in SBOM metadata. SPDX creationInfo entries
/// carry no version, so an absent version is distinct from an empty one.
struct ToolInfo {
    std::string name;
    std::optional<std::string> version;

    auto operator<=>(const ToolInfo&) const = default;
};

struct Component {
    std::string ref_id;  // bom-ref or SPDXID
    std::optional<std::string> group;
    std::string name;
    std::optional<std::string> version;
    std::optional<std::string> purl;
    std::map<std::string, std::string> hashes;  // normalized algo name -> hex
    std::vector<std::string> licenses;

    auto operator<=>(const Component&) const = default;
};

/// One entry of a document's dependency section: a component ref and the
/// refs it depends on. SPDX relationships are normalized into this shape.
struct DependencyEntry {
    std::string ref;
    std::vector<std::string> depends_on;

    auto operator<=>(const DependencyEntry&) const = default;
};

/// Unified view of a parsed CycloneDX or SPDX document.
struct SbomDocument {
    SbomStandard standard = SbomStandard::cyclonedx;
    std::string spec_version;
    Serialization serialization = Serialization::json;
    std::optional<std::int64_t> created_at_ms;
    std::vector<ToolInfo> tools;
    std::optional<std::string> root_ref;
    std::vector<Component> components;
    std::vector<DependencyEntry> dependency_entries;
    std::vector<Gav> direct_dependencies;
    std::vector<std::string> unresolved_dependency_refs;
    std::vector<std::string> warnings;

    bool operator==(const SbomDocument&) const = default;
};

/// Parses an SBOM byte sequence into the unified document model.
/// Raises syntax_error for invalid JSON/XML and standard_mismatch when the
/// document's declared format disagrees with `standard`. Unknown spec
/// versions are parsed best-effort with a warning.
SbomDocument parse_sbom(std::span<const std::uint8_t> data, SbomStandard standard,
                        Serialization serialization);
SbomDocument parse_sbom(std::string_view data, SbomStandard standard, Serialization serialization);

/// Resolves the root's dependency refs to coordinates. CycloneDX: the
/// dependency entry whose ref equals root_ref (falling back to the first
/// entry, with a warning, when the root has no entry); each dependsOn ref
/// maps through the components to a Gav via maven purl or explicit
/// group/name/version. Refs that cannot be fully resolved are returned in
/// the second list. SPDX documents go through the same mechanism after
/// their DESCRIBES/DEPENDS_ON relationships were normalized at parse time.
std::pair<std::vector<Gav>, std::vector<std::string>> extract_direct_dependencies(
    const SbomDocument& doc, std::vector<std::string>* warnings = nullptr);

/// Gav of a `pkg:maven/<group>/<artifact>@<version>` package URL, with
/// percent-decoding applied and qualifiers ignored. Non-maven purls yield
/// nullopt; maven purls missing the artifact or version raise malformed_purl.
std::optional<Gav> parse_maven_purl(std::string_view purl);

/// Inverse of parse_maven_purl for well-formed coordinates.
std::string render_maven_purl(const Gav& gav);

/// Wire form used by the parsed-documents file (one document per line).
nlohmann::json sbom_document_to_json(const SbomDocument& doc);
SbomDocument sbom_document_from_json(const nlohmann::json& j);

}  // namespace sbomaudit
