#include "sbomaudit/discovery.hpp"

#include <algorithm>
#include <unordered_set>

namespace sbomaudit {

std::optional<std::pair<SbomStandard, Serialization>> classify_filename(std::string_view filename) {
    std::string lower = to_lower(filename);
    auto dot = lower.rfind('.');
    if (dot == std::string::npos || dot == 0) return std::nullopt;

    std::string_view stem = std::string_view(lower).substr(0, dot);
    std::string_view ext = std::string_view(lower).substr(dot + 1);

    std::optional<Serialization> serialization = serialization_from_string(ext);
    if (!serialization) return std::nullopt;

    bool has_cyclonedx = stem.find("cyclonedx") != std::string_view::npos;
    bool has_spdx = stem.find("spdx") != std::string_view::npos;
    if (has_cyclonedx && has_spdx) {
        fail(ErrorKind::ambiguous_classification,
             "filename matches both standards: \"" + std::string(filename) + "\"");
    }
    if (!has_cyclonedx && !has_spdx) return std::nullopt;

    return std::make_pair(has_cyclonedx ? SbomStandard::cyclonedx : SbomStandard::spdx,
                          *serialization);
}

std::vector<SbomArtifactRef> discover_sboms(const FileListing& listing, const Gav& release,
                                            std::vector<std::string>* warnings) {
    std::unordered_set<std::string> names;
    for (const auto& entry : listing.entries) {
        if (!entry.is_directory) names.insert(entry.name);
    }

    std::vector<SbomArtifactRef> refs;
    for (const auto& entry : listing.entries) {
        if (entry.is_directory) continue;

        std::optional<std::pair<SbomStandard, Serialization>> cls;
        try {
            cls = classify_filename(entry.name);
        } catch (const AuditError& e) {
            if (warnings) warnings->push_back(e.what());
            continue;
        }
        if (!cls) continue;

        SbomArtifactRef ref;
        ref.release = release;
        ref.filename = entry.name;
        ref.url = listing.directory_url + entry.name;
        ref.standard = cls->first;
        ref.serialization = cls->second;
        for (auto algo : all_checksum_algos) {
            if (names.contains(entry.name + "." + std::string(sidecar_extension(algo)))) {
                ref.checksums_available.insert(algo);
            }
        }
        ref.is_signed = names.contains(entry.name + ".asc");
        refs.push_back(std::move(ref));
    }

    std::sort(refs.begin(), refs.end(),
              [](const SbomArtifactRef& a, const SbomArtifactRef& b) { return a.filename < b.filename; });
    return refs;
}

}  // namespace sbomaudit
