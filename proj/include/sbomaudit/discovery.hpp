#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sbomaudit/model.hpp"
#include "sbomaudit/registry_client.hpp"

namespace sbomaudit {

/// One SBOM file discovered in a release directory, with its checksum
/// sidecars and signature presence.
struct SbomArtifactRef {
    Gav release;
    std::string url;
    std::string filename;
    SbomStandard standard;
    Serialization serialization;
    std::set<ChecksumAlgo> checksums_available;
    bool is_signed = false;

    auto operator<=>(const SbomArtifactRef&) const = default;
};

/// Classifies a filename by the published naming convention: the lowercase
/// stem must contain "cyclonedx" or "spdx" and the extension must be .json
/// or .xml. Returns nullopt for anything else. A filename containing both
/// tokens raises ambiguous_classification.
std::optional<std::pair<SbomStandard, Serialization>> classify_filename(std::string_view filename);

/// Scans a release's file listing for SBOMs. For each positively classified
/// file, records which checksum sidecars (filename + ".md5" etc.) exist in
/// the same listing and whether a ".asc" signature is present. Ambiguous
/// filenames are skipped with a warning. Output is sorted by filename.
std::vector<SbomArtifactRef> discover_sboms(const FileListing& listing, const Gav& release,
                                            std::vector<std::string>* warnings = nullptr);

}  // namespace sbomaudit
