#include <doctest.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mock_registry.hpp"
#include "sbomaudit/graph_store.hpp"
#include "sbomaudit/ndjson.hpp"
#include "sbomaudit/pipeline.hpp"
#include "temp_dir.hpp"

using namespace sbomaudit;
using namespace std::chrono_literals;
using nlohmann::json;

namespace {

const std::filesystem::path kFixtures{SBOMAUDIT_FIXTURE_DIR};
const std::filesystem::path kRegistryTree = kFixtures / "registry";
const std::filesystem::path kSnapshot = kFixtures / "snapshots" / "e2e_snapshot.ndjson";

PipelineConfig make_config(const testsupport::MockRegistry& server,
                           const std::filesystem::path& out_dir) {
    PipelineConfig config;
    config.registry_root = server.base_url();
    config.snapshot_path = kSnapshot;
    config.out_dir = out_dir;
    config.rate = 1.0;
    config.seed = 42;
    config.goblin_compat = true;
    config.fetch.max_concurrency = 4;
    config.fetch.max_retries = 1;
    config.fetch.backoff_base = 5ms;
    config.fetch.per_request_timeout = 5000ms;
    config.fetch.min_request_interval = 1ms;
    return config;
}

void check_expected_report(const AuditReport& report) {
    CHECK(report.releases_scanned == 5);
    CHECK(report.releases_with_sbom == 2);
    CHECK(report.sbom_files == 3);

    REQUIRE(report.per_year.size() == 2);
    CHECK(report.per_year.at(2022) == 2);  // alpha's json+xml pair
    CHECK(report.per_year.at(2023) == 1);  // beta's json

    REQUIRE(report.per_format.size() == 2);
    CHECK(report.per_format.at({SbomStandard::cyclonedx, Serialization::json}) == 2);
    CHECK(report.per_format.at({SbomStandard::cyclonedx, Serialization::xml}) == 1);

    CHECK(report.checksum_coverage.at(ChecksumAlgo::md5) == doctest::Approx(1.0));
    CHECK(report.checksum_coverage.at(ChecksumAlgo::sha1) == doctest::Approx(1.0 / 3.0));
    CHECK(report.checksum_coverage.at(ChecksumAlgo::sha256) == doctest::Approx(0.0));
    CHECK(report.checksum_coverage.at(ChecksumAlgo::sha512) == doctest::Approx(0.0));
    CHECK(report.signed_fraction == doctest::Approx(1.0 / 3.0));

    REQUIRE(report.tools.size() == 1);
    CHECK(report.tools.at({"cyclonedx-maven-plugin", std::optional<std::string>{"2.8.1"}}) == 3);

    CHECK(report.releases_aligned == 2);
    CHECK(report.alignment_summary.at(AlignmentStatus::match) == 2);
    CHECK(report.alignment_summary.at(AlignmentStatus::version_mismatch) == 0);
    CHECK(report.alignment_summary.at(AlignmentStatus::sbom_extra) == 0);
    CHECK(report.alignment_summary.at(AlignmentStatus::graph_extra) == 0);
    CHECK(report.alignment_summary.at(AlignmentStatus::mixed) == 0);
    CHECK(report.count_match == 2);
    CHECK(report.multi_standard_releases == 0);
}

}  // namespace

TEST_CASE("the full pipeline audits the mock registry end to end") {
    testsupport::MockRegistry server(kRegistryTree);
    server.start();
    testsupport::TempDir out;
    std::ostringstream log;
    auto config = make_config(server, out.path());
    config.log = &log;

    auto report = run_pipeline(config);
    check_expected_report(report);

    // Five releases, ordered by (year, id): 2022 then 2023.
    auto sampled = read_ndjson(out.path() / kSampledFile);
    REQUIRE(sampled.size() == 5);
    std::vector<std::string> sampled_ids;
    for (const auto& line : sampled) sampled_ids.push_back(line.at("id").get<std::string>());
    CHECK(sampled_ids == std::vector<std::string>{
                             "com.example:alpha:1.0", "org.other:epsilon:0.9",
                             "com.example:beta:2.0", "com.example:gamma:3.0",
                             "org.other:delta:1.1"});

    // Every sampled release exists in the registry tree.
    auto scanned = read_ndjson(out.path() / kScannedFile);
    REQUIRE(scanned.size() == 5);
    for (const auto& line : scanned) CHECK(line.at("status") == "present");

    // Three SBOM files: alpha ships a json+xml pair, beta a lone json.
    auto inventory = read_ndjson(out.path() / kInventoryFile);
    REQUIRE(inventory.size() == 3);
    CHECK(inventory[0].at("release") == "com.example:alpha:1.0");
    CHECK(inventory[0].at("url") ==
          server.base_url() + "/com/example/alpha/1.0/alpha-1.0-cyclonedx.json");
    CHECK(inventory[0].at("checksums") == json::array({"md5", "sha1"}));
    CHECK(inventory[0].at("signed") == true);
    CHECK(inventory[1].at("url") ==
          server.base_url() + "/com/example/alpha/1.0/alpha-1.0-cyclonedx.xml");
    CHECK(inventory[1].at("signed") == false);
    CHECK(inventory[2].at("release") == "com.example:beta:2.0");

    // Downloads landed under sboms/ in the Maven layout, sidecars included.
    auto local_json =
        out.path() / kSbomDirectory / "com/example/alpha/1.0/alpha-1.0-cyclonedx.json";
    CHECK(testsupport::read_file(local_json) ==
          testsupport::read_file(kRegistryTree / "com/example/alpha/1.0/alpha-1.0-cyclonedx.json"));
    CHECK(std::filesystem::exists(local_json.string() + ".md5"));
    CHECK(std::filesystem::exists(local_json.string() + ".sha1"));

    auto fetched = read_ndjson(out.path() / kFetchedFile);
    REQUIRE(fetched.size() == 3);
    CHECK(fetched[0].at("bytes").get<std::size_t>() > 0);
    CHECK(fetched[0].at("sidecars").contains("md5"));
    CHECK(fetched[0].at("sidecars").contains("sha1"));

    // All four sidecars verify clean: alpha json md5+sha1, alpha xml md5, beta md5.
    auto verification = read_ndjson(out.path() / kVerificationFile);
    REQUIRE(verification.size() == 4);
    for (const auto& line : verification) {
        CHECK(line.at("status") == "ok");
        CHECK(line.at("expected") == line.at("actual"));
    }

    auto parsed = read_ndjson(out.path() / kParsedFile);
    CHECK(parsed.size() == 3);
    CHECK(read_ndjson(out.path() / kParseErrorsFile).empty());

    // Alpha declares beta and matches the graph; its junit edge is test scope.
    auto verdicts = read_ndjson(out.path() / kVerdictsFile);
    REQUIRE(verdicts.size() == 2);
    CHECK(verdicts[0].at("release") == "com.example:alpha:1.0");
    CHECK(verdicts[0].at("status") == "match");
    CHECK(verdicts[0].at("matched") == json::array({"com.example:beta:2.0"}));
    CHECK(verdicts[0].at("ignored_test_deps") == json::array({"junit:junit:4.13.2"}));
    CHECK(verdicts[1].at("release") == "com.example:beta:2.0");
    CHECK(verdicts[1].at("status") == "match");

    // The woven snapshot is loadable and carries the compat added values.
    auto woven = load_snapshot(out.path() / kWovenFile);
    const auto* values = woven.added_values("com.example:alpha:1.0");
    REQUIRE(values != nullptr);
    REQUIRE(values->size() == 2);
    CHECK((*values)[0].standard == SbomStandard::cyclonedx);
    CHECK((*values)[0].is_signed);
    CHECK((*values)[0].hash_algos ==
          std::vector<ChecksumAlgo>{ChecksumAlgo::md5, ChecksumAlgo::sha1});
    auto woven_text = testsupport::read_file(out.path() / kWovenFile);
    CHECK(woven_text.find("{standard=cyclonedx, isSigned=true, isHashAvailable=md5, sha1}") !=
          std::string::npos);
    CHECK(woven_text.find("{standard=cyclonedx, isSigned=false, isHashAvailable=md5}") !=
          std::string::npos);

    // report.json mirrors the returned report plus a generation timestamp.
    auto report_doc = json::parse(testsupport::read_file(out.path() / kReportFile));
    CHECK(report_doc.contains("generated_at"));
    CHECK(report_doc.at("totals").at("releases_scanned") == 5);
    CHECK(report_doc.at("totals").at("releases_with_sbom") == 2);
    CHECK(report_doc.at("totals").at("sbom_files") == 3);
    CHECK(report_doc.at("per_format").at("cyclonedx-json") == 2);
    for (const char* table : {"per_year.csv", "per_format.csv", "tools.csv", "alignment.csv"}) {
        CHECK(std::filesystem::exists(out.path() / table));
    }

    CHECK(log.str().find("sample: 5 of 5 releases selected") != std::string::npos);
}

TEST_CASE("a rerun reproduces every stage file") {
    testsupport::MockRegistry server(kRegistryTree);
    server.start();
    testsupport::TempDir first_out;
    testsupport::TempDir second_out;

    auto first = run_pipeline(make_config(server, first_out.path()));
    auto second = run_pipeline(make_config(server, second_out.path()));
    CHECK(report_to_json(first) == report_to_json(second));

    for (const char* name : {kSampledFile, kScannedFile, kInventoryFile, kFetchedFile,
                             kVerificationFile, kParsedFile, kParseErrorsFile, kWovenFile,
                             kVerdictsFile, "per_year.csv", "per_format.csv", "tools.csv",
                             "alignment.csv"}) {
        CAPTURE(name);
        CHECK(testsupport::read_file(first_out.path() / name) ==
              testsupport::read_file(second_out.path() / name));
    }

    // report.json may differ only in when it was generated.
    auto first_doc = json::parse(testsupport::read_file(first_out.path() / kReportFile));
    auto second_doc = json::parse(testsupport::read_file(second_out.path() / kReportFile));
    first_doc.erase("generated_at");
    second_doc.erase("generated_at");
    CHECK(first_doc == second_doc);

    // Re-running the last stage alone over existing files changes nothing.
    auto before = testsupport::read_file(first_out.path() / "alignment.csv");
    auto replayed = run_report_stage(make_config(server, first_out.path()));
    CHECK(report_to_json(replayed) == report_to_json(first));
    CHECK(testsupport::read_file(first_out.path() / "alignment.csv") == before);
}

TEST_CASE("an unreachable registry fails the scan stage but keeps the sample") {
    testsupport::MockRegistry server(kRegistryTree);
    server.start();
    testsupport::TempDir out;
    auto config = make_config(server, out.path());
    config.registry_root = "http://127.0.0.1:9";  // nothing listens here
    config.fetch.max_retries = 0;

    try {
        run_pipeline(config);
        FAIL("expected stage_failure");
    } catch (const AuditError& err) {
        CHECK(err.kind() == ErrorKind::stage_failure);
        CHECK(std::string(err.what()).find("scan:") != std::string::npos);
    }
    CHECK(read_ndjson(out.path() / kSampledFile).size() == 5);
    CHECK_FALSE(std::filesystem::exists(out.path() / kScannedFile));
}

TEST_CASE("an SBOM that vanishes between scan and fetch fails the fetch stage") {
    testsupport::MockRegistry server(kRegistryTree);
    server.fail_first("/com/example/beta/2.0/beta-2.0-cyclonedx.json", 100, 404);
    server.start();
    testsupport::TempDir out;

    try {
        run_pipeline(make_config(server, out.path()));
        FAIL("expected stage_failure");
    } catch (const AuditError& err) {
        CHECK(err.kind() == ErrorKind::stage_failure);
        std::string what = err.what();
        CHECK(what.find("fetch:") != std::string::npos);
        CHECK(what.find("beta-2.0-cyclonedx.json") != std::string::npos);
    }
}

TEST_CASE("a vanished sidecar is only a warning") {
    testsupport::MockRegistry server(kRegistryTree);
    server.fail_first("/com/example/alpha/1.0/alpha-1.0-cyclonedx.json.sha1", 100, 404);
    server.start();
    testsupport::TempDir out;
    std::ostringstream log;
    auto config = make_config(server, out.path());
    config.log = &log;

    auto report = run_pipeline(config);
    check_expected_report(report);  // coverage reflects the listing, not the download
    CHECK(log.str().find("sidecar vanished") != std::string::npos);

    auto fetched = read_ndjson(out.path() / kFetchedFile);
    REQUIRE(fetched.size() == 3);
    CHECK(fetched[0].at("sidecars").contains("md5"));
    CHECK_FALSE(fetched[0].at("sidecars").contains("sha1"));
    // Only three checksum comparisons remain and they still pass.
    auto verification = read_ndjson(out.path() / kVerificationFile);
    REQUIRE(verification.size() == 3);
    for (const auto& line : verification) CHECK(line.at("status") == "ok");
}

TEST_CASE("the command line binary runs the pipeline") {
    testsupport::MockRegistry server(kRegistryTree);
    server.start();
    testsupport::TempDir out;

    auto stdout_path = out.path() / "stdout.txt";
    auto stderr_path = out.path() / "stderr.txt";
    std::string command = std::string(SBOMAUDIT_CLI_PATH) + " run" +
                          " --graph " + kSnapshot.string() +
                          " --registry-root " + server.base_url() +
                          " --out-dir " + (out.path() / "cli-run").string() +
                          " --rate 1.0 --seed 42 --concurrency 4 --retries 1" +
                          " --timeout-ms 5000 --goblin-compat" +
                          " > " + stdout_path.string() + " 2> " + stderr_path.string();
    int exit_code = std::system(command.c_str());
    CAPTURE(testsupport::read_file(stderr_path));
    REQUIRE(exit_code == 0);
    CHECK(testsupport::read_file(stdout_path) ==
          "releases_scanned=5 releases_with_sbom=2 sbom_files=3\n");
    CHECK(std::filesystem::exists(out.path() / "cli-run" / kReportFile));

    auto log_text = testsupport::read_file(stderr_path);
    CHECK(log_text.find("sample: 5 of 5 releases selected") != std::string::npos);
    CHECK(log_text.find("align: 2 release(s) aligned") != std::string::npos);
}
