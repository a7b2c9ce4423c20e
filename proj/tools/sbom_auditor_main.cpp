#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "sbomaudit/errors.hpp"
#include "sbomaudit/pipeline.hpp"

namespace {

void print_summary(const sbomaudit::AuditReport& report) {
    std::cout << "releases_scanned=" << report.releases_scanned
              << " releases_with_sbom=" << report.releases_with_sbom
              << " sbom_files=" << report.sbom_files << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Batch SBOM auditor for Maven-layout registries"};
    app.require_subcommand(1);

    sbomaudit::PipelineConfig config;
    config.log = &std::cerr;
    std::int64_t timeout_ms = config.fetch.per_request_timeout.count();
    std::uint64_t limit = 0;

    app.add_option("--registry-root", config.registry_root, "Registry base URL")
        ->envname("SBOM_AUDITOR_REGISTRY_ROOT")
        ->capture_default_str();
    app.add_option("--out-dir", config.out_dir, "Directory for stage outputs");
    app.add_option("--graph", config.snapshot_path,
                   "Dependency-graph snapshot file (line-delimited JSON)");
    app.add_option("--concurrency", config.fetch.max_concurrency,
                   "Maximum requests in flight")
        ->capture_default_str();
    app.add_option("--retries", config.fetch.max_retries, "Retries per request")
        ->capture_default_str();
    app.add_option("--timeout-ms", timeout_ms, "Per-request timeout in milliseconds")
        ->capture_default_str();
    app.add_option("--seed", config.seed, "Sampling seed")->capture_default_str();
    app.add_option("--rate", config.rate, "Sampling rate in (0, 1]")->capture_default_str();
    app.add_option("--limit", limit, "Cap on scanned releases (0 = no cap)");
    app.add_flag("--goblin-compat", config.goblin_compat,
                 "Export woven added values in the compat string rendering");

    auto* sample = app.add_subcommand("sample", "Stratified sample of the snapshot's releases");
    auto* scan = app.add_subcommand("scan", "List release files and discover SBOMs");
    auto* fetch = app.add_subcommand("fetch", "Download discovered SBOMs and their sidecars");
    auto* verify = app.add_subcommand("verify", "Check downloaded files against sidecars");
    auto* parse = app.add_subcommand("parse", "Parse downloaded SBOM documents");
    auto* weave = app.add_subcommand("weave", "Attach SBOM added values to the snapshot");
    auto* align = app.add_subcommand("align", "Compare SBOM and graph direct dependencies");
    auto* report = app.add_subcommand("report", "Aggregate stage outputs into a report");
    auto* run = app.add_subcommand("run", "Run the full pipeline");
    // Let the global flags appear after the subcommand too.
    for (auto* subcommand : app.get_subcommands([](CLI::App*) { return true; })) {
        subcommand->fallthrough();
    }

    CLI11_PARSE(app, argc, argv);

    config.fetch.per_request_timeout = std::chrono::milliseconds(timeout_ms);
    if (limit > 0) config.limit = static_cast<std::size_t>(limit);

    try {
        if (config.out_dir.empty()) {
            sbomaudit::fail(sbomaudit::ErrorKind::invalid_argument, "--out-dir is required");
        }
        bool needs_graph = sample->parsed() || weave->parsed() || align->parsed() ||
                           run->parsed();
        if (needs_graph && config.snapshot_path.empty()) {
            sbomaudit::fail(sbomaudit::ErrorKind::invalid_argument,
                            "--graph is required for this command");
        }
        if (sample->parsed()) {
            sbomaudit::run_sample_stage(config);
        } else if (scan->parsed()) {
            sbomaudit::run_scan_stage(config);
        } else if (fetch->parsed()) {
            sbomaudit::run_fetch_stage(config);
        } else if (verify->parsed()) {
            sbomaudit::run_verify_stage(config);
        } else if (parse->parsed()) {
            sbomaudit::run_parse_stage(config);
        } else if (weave->parsed()) {
            sbomaudit::run_weave_stage(config);
        } else if (align->parsed()) {
            sbomaudit::run_align_stage(config);
        } else if (report->parsed()) {
            print_summary(sbomaudit::run_report_stage(config));
        } else if (run->parsed()) {
            print_summary(sbomaudit::run_pipeline(config));
        }
    } catch (const std::exception& ex) {
        std::cerr << "sbom-auditor: " << ex.what() << "\n";
        return 1;
    }
    return 0;
}
