#include "sbomaudit/report.hpp"

#include <fstream>
#include <set>

#include "sbomaudit/errors.hpp"

namespace sbomaudit {
namespace {

using nlohmann::json;

constexpr AlignmentStatus kAllStatuses[] = {
    AlignmentStatus::match, AlignmentStatus::version_mismatch, AlignmentStatus::sbom_extra,
    AlignmentStatus::graph_extra, AlignmentStatus::mixed};

std::string format_key(SbomStandard standard, Serialization serialization) {
    return std::string(to_string(standard)) + "-" + std::string(to_string(serialization));
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string escaped = "\"";
    for (char c : field) {
        if (c == '"') escaped += '"';
        escaped += c;
    }
    escaped += '"';
    return escaped;
}

std::ofstream open_csv(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        fail(ErrorKind::io_error, "cannot write " + path.string());
    }
    return out;
}

}  // namespace

AuditReport build_report(const std::vector<ScanRecord>& scanned,
                         const std::vector<InventoryRecord>& inventory,
                         const std::vector<ParsedDocRecord>& parsed_docs,
                         const std::vector<AlignmentVerdict>& verdicts) {
    AuditReport report;
    for (auto algo : all_checksum_algos) report.checksum_coverage[algo] = 0.0;
    for (auto status : kAllStatuses) report.alignment_summary[status] = 0;

    std::map<std::string, std::int64_t> scan_timestamps;
    for (const auto& record : scanned) {
        scan_timestamps.emplace(record.release_id, record.timestamp_ms);
    }
    report.releases_scanned = scanned.size();

    std::set<std::string> releases_with_sbom;
    std::map<std::string, std::set<SbomStandard>> standards_per_release;
    std::map<ChecksumAlgo, std::size_t> checksum_counts;
    std::size_t signed_count = 0;
    for (const auto& record : inventory) {
        auto timestamp = scan_timestamps.find(record.release_id);
        if (timestamp == scan_timestamps.end()) {
            fail(ErrorKind::inconsistent_input,
                 "inventory references release '" + record.release_id +
                     "' absent from the scan output");
        }
        releases_with_sbom.insert(record.release_id);
        standards_per_release[record.release_id].insert(record.standard);
        report.per_year[year_of(timestamp->second)] += 1;
        report.per_format[{record.standard, record.serialization}] += 1;
        for (auto algo : record.checksums) checksum_counts[algo] += 1;
        if (record.is_signed) ++signed_count;
    }
    report.releases_with_sbom = releases_with_sbom.size();
    report.sbom_files = inventory.size();
    if (report.sbom_files > 0) {
        auto files = static_cast<double>(report.sbom_files);
        for (auto algo : all_checksum_algos) {
            report.checksum_coverage[algo] =
                static_cast<double>(checksum_counts[algo]) / files;
        }
        report.signed_fraction = static_cast<double>(signed_count) / files;
    }
    for (const auto& [release, standards] : standards_per_release) {
        if (standards.size() > 1) ++report.multi_standard_releases;
    }

    for (const auto& record : parsed_docs) {
        if (!releases_with_sbom.contains(record.release_id)) {
            fail(ErrorKind::inconsistent_input,
                 "parsed document references release '" + record.release_id +
                     "' absent from the inventory");
        }
        for (const auto& tool : record.doc.tools) {
            report.tools[{tool.name, tool.version}] += 1;
        }
    }

    report.releases_aligned = verdicts.size();
    for (const auto& verdict : verdicts) {
        report.alignment_summary[verdict.status] += 1;
        if (verdict.count_match()) ++report.count_match;
    }
    return report;
}

nlohmann::json report_to_json(const AuditReport& report) {
    json totals{{"releases_scanned", report.releases_scanned},
                {"releases_with_sbom", report.releases_with_sbom},
                {"sbom_files", report.sbom_files}};
    json per_year = json::object();
    for (const auto& [year, count] : report.per_year) {
        per_year[std::to_string(year)] = count;
    }
    json per_format = json::object();
    for (const auto& [key, count] : report.per_format) {
        per_format[format_key(key.first, key.second)] = count;
    }
    json coverage = json::object();
    for (const auto& [algo, fraction] : report.checksum_coverage) {
        coverage[to_string(algo)] = fraction;
    }
    json tools = json::array();
    for (const auto& [key, count] : report.tools) {
        tools.push_back(json{{"name", key.first},
                             {"version", key.second ? json(*key.second) : json(nullptr)},
                             {"count", count}});
    }
    json alignment = json::object();
    for (const auto& [status, count] : report.alignment_summary) {
        alignment[to_string(status)] = count;
    }
    alignment["releases_aligned"] = report.releases_aligned;
    alignment["count_match"] = report.count_match;
    return json{{"totals", std::move(totals)},
                {"per_year", std::move(per_year)},
                {"per_format", std::move(per_format)},
                {"checksum_coverage", std::move(coverage)},
                {"signed_fraction", report.signed_fraction},
                {"tools", std::move(tools)},
                {"alignment", std::move(alignment)},
                {"multi_standard_releases", report.multi_standard_releases}};
}

void write_report_csvs(const AuditReport& report, const std::filesystem::path& directory) {
    {
        auto out = open_csv(directory / "per_year.csv");
        out << "year,sbom_count\n";
        for (const auto& [year, count] : report.per_year) {
            out << year << "," << count << "\n";
        }
    }
    {
        auto out = open_csv(directory / "per_format.csv");
        out << "standard,serialization,count\n";
        for (const auto& [key, count] : report.per_format) {
            out << to_string(key.first) << "," << to_string(key.second) << "," << count << "\n";
        }
    }
    {
        auto out = open_csv(directory / "tools.csv");
        out << "tool,version,count\n";
        for (const auto& [key, count] : report.tools) {
            out << csv_escape(key.first) << "," << csv_escape(key.second.value_or("")) << ","
                << count << "\n";
        }
    }
    {
        auto out = open_csv(directory / "alignment.csv");
        out << "status,count\n";
        for (const auto& [status, count] : report.alignment_summary) {
            out << to_string(status) << "," << count << "\n";
        }
        out << "count_match," << report.count_match << "\n";
    }
}

nlohmann::json scan_record_to_json(const ScanRecord& record) {
    return json{{"id", record.release_id},
                {"timestamp", record.timestamp_ms},
                {"status", record.present ? "present" : "absent"}};
}

ScanRecord scan_record_from_json(const nlohmann::json& record) {
    ScanRecord out;
    out.release_id = record.at("id").get<std::string>();
    out.timestamp_ms = record.at("timestamp").get<std::int64_t>();
    auto status = record.at("status").get<std::string>();
    if (status == "present") {
        out.present = true;
    } else if (status == "absent") {
        out.present = false;
    } else {
        fail(ErrorKind::inconsistent_input, "unknown scan status '" + status + "'");
    }
    return out;
}

nlohmann::json inventory_record_to_json(const InventoryRecord& record) {
    json checksums = json::array();
    for (auto algo : record.checksums) checksums.push_back(to_string(algo));
    return json{{"release", record.release_id},
                {"url", record.url},
                {"standard", to_string(record.standard)},
                {"serialization", to_string(record.serialization)},
                {"checksums", std::move(checksums)},
                {"signed", record.is_signed}};
}

InventoryRecord inventory_record_from_json(const nlohmann::json& record) {
    InventoryRecord out;
    out.release_id = record.at("release").get<std::string>();
    out.url = record.at("url").get<std::string>();
    out.standard = parse_sbom_standard(record.at("standard").get<std::string>());
    out.serialization = parse_serialization(record.at("serialization").get<std::string>());
    for (const auto& algo : record.at("checksums")) {
        out.checksums.push_back(parse_checksum_algo(algo.get<std::string>()));
    }
    out.is_signed = record.at("signed").get<bool>();
    return out;
}

}  // namespace sbomaudit
