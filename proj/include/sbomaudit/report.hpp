#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "sbomaudit/alignment.hpp"
#include "sbomaudit/model.hpp"
#include "sbomaudit/sbom_parser.hpp"

namespace sbomaudit {

/// One release's scan outcome: present in the registry or absent (404).
struct ScanRecord {
    std::string release_id;
    std::int64_t timestamp_ms = 0;
    bool present = false;
};

/// One discovered SBOM file; field set mirrors the inventory file schema.
struct InventoryRecord {
    std::string release_id;
    std::string url;
    SbomStandard standard = SbomStandard::cyclonedx;
    Serialization serialization = Serialization::json;
    std::vector<ChecksumAlgo> checksums;
    bool is_signed = false;
};

struct ParsedDocRecord {
    std::string release_id;
    std::string url;
    SbomDocument doc;
};

/// Aggregate view over one audit run's stage outputs.
struct AuditReport {
    std::size_t releases_scanned = 0;
    std::size_t releases_with_sbom = 0;
    std::size_t sbom_files = 0;
    std::map<int, std::size_t> per_year;
    std::map<std::pair<SbomStandard, Serialization>, std::size_t> per_format;
    std::map<ChecksumAlgo, double> checksum_coverage;
    double signed_fraction = 0.0;
    std::map<std::pair<std::string, std::optional<std::string>>, std::size_t> tools;
    std::map<AlignmentStatus, std::size_t> alignment_summary;
    std::size_t releases_aligned = 0;
    std::size_t count_match = 0;
    std::size_t multi_standard_releases = 0;
};

/// Computes every aggregate from the stage outputs. Years come from the scan
/// records' timestamps; a parsed doc or inventory row naming a release absent
/// from the scan set raises inconsistent_input.
AuditReport build_report(const std::vector<ScanRecord>& scanned,
                         const std::vector<InventoryRecord>& inventory,
                         const std::vector<ParsedDocRecord>& parsed_docs,
                         const std::vector<AlignmentVerdict>& verdicts);

/// Pure JSON rendering; deliberately excludes any generation timestamp so
/// reruns compare byte-identical. The pipeline adds `generated_at` on top.
nlohmann::json report_to_json(const AuditReport& report);

/// Flat tables for plotting: per_year.csv, per_format.csv, tools.csv,
/// alignment.csv written into `directory`.
void write_report_csvs(const AuditReport& report, const std::filesystem::path& directory);

// Wire forms for the stage files.
nlohmann::json scan_record_to_json(const ScanRecord& record);
ScanRecord scan_record_from_json(const nlohmann::json& record);
nlohmann::json inventory_record_to_json(const InventoryRecord& record);
InventoryRecord inventory_record_from_json(const nlohmann::json& record);

}  // namespace sbomaudit
