#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include "sbomaudit/registry_client.hpp"
#include "sbomaudit/report.hpp"

namespace sbomaudit {

// Stage output file names inside the output directory.
inline constexpr const char* kSampledFile = "sampled.ndjson";
inline constexpr const char* kScannedFile = "scanned.ndjson";
inline constexpr const char* kInventoryFile = "inventory.ndjson";
inline constexpr const char* kFetchedFile = "fetched.ndjson";
inline constexpr const char* kVerificationFile = "verification.ndjson";
inline constexpr const char* kParsedFile = "parsed.ndjson";
inline constexpr const char* kParseErrorsFile = "parse_errors.ndjson";
inline constexpr const char* kWovenFile = "woven.ndjson";
inline constexpr const char* kVerdictsFile = "verdicts.ndjson";
inline constexpr const char* kReportFile = "report.json";
inline constexpr const char* kSbomDirectory = "sboms";

struct PipelineConfig {
    std::string registry_root = "https://repo1.maven.org/maven2";
    std::filesystem::path snapshot_path;
    std::filesystem::path out_dir;
    double rate = 0.10;
    std::uint64_t seed = 0;
    std::optional<std::size_t> limit;  // cap on scanned releases, for smoke runs
    bool goblin_compat = false;
    FetchPolicy fetch;
    std::ostream* log = nullptr;  // diagnostics sink; null silences them
};

/// Each stage reads the previous stages' files from out_dir and persists its
/// own, so any stage can be re-run alone. All are deterministic for fixed
/// inputs and config. Failures surface as stage_failure naming the stage.
void run_sample_stage(const PipelineConfig& config);
void run_scan_stage(const PipelineConfig& config);
void run_fetch_stage(const PipelineConfig& config);
void run_verify_stage(const PipelineConfig& config);
void run_parse_stage(const PipelineConfig& config);
void run_weave_stage(const PipelineConfig& config);
void run_align_stage(const PipelineConfig& config);
AuditReport run_report_stage(const PipelineConfig& config);

/// sample → scan → fetch → verify → parse → weave → align → report.
AuditReport run_pipeline(const PipelineConfig& config);

}  // namespace sbomaudit
