#include "sbomaudit/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <ctime>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <thread>
#include <vector>

#include <json.hpp>

#include "sbomaudit/checksum.hpp"
#include "sbomaudit/discovery.hpp"
#include "sbomaudit/errors.hpp"
#include "sbomaudit/graph_store.hpp"
#include "sbomaudit/ndjson.hpp"
#include "sbomaudit/sampler.hpp"
#include "sbomaudit/sbom_parser.hpp"

namespace sbomaudit {
namespace {

using nlohmann::json;

template <typename Fn>
void wrap_stage(const char* stage, Fn&& body) {
    try {
        body();
    } catch (const AuditError& ex) {
        fail(ErrorKind::stage_failure, std::string(stage) + ": " + ex.what());
    } catch (const std::exception& ex) {
        fail(ErrorKind::stage_failure, std::string(stage) + ": " + ex.what());
    }
}

// Fans fn out over [0, count) on up to `workers` threads; the first worker
// exception is rethrown after all threads join.
template <typename Fn>
void parallel_for(std::size_t count, int workers, Fn&& fn) {
    if (count == 0) return;
    auto threads_wanted = std::min<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)),
                                                count);
    if (threads_wanted <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(threads_wanted);
    for (std::size_t t = 0; t < threads_wanted; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                auto index = next.fetch_add(1);
                if (index >= count) return;
                try {
                    fn(index);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    }
    for (auto& thread : pool) thread.join();
    if (first_error) std::rethrow_exception(first_error);
}

void ensure_out_dir(const PipelineConfig& config) {
    if (config.out_dir.empty()) {
        fail(ErrorKind::invalid_argument, "output directory not set");
    }
    std::filesystem::create_directories(config.out_dir);
}

void note(const PipelineConfig& config, const std::string& message) {
    if (config.log != nullptr) {
        *config.log << message << "\n";
    }
}

struct SampledRelease {
    std::string id;
    std::int64_t timestamp_ms = 0;
};

std::vector<SampledRelease> read_sampled(const PipelineConfig& config) {
    std::vector<SampledRelease> sampled;
    for_each_ndjson(config.out_dir / kSampledFile, [&](const json& record, std::size_t) {
        sampled.push_back({record.at("id").get<std::string>(),
                           record.at("timestamp").get<std::int64_t>()});
    });
    if (config.limit && sampled.size() > *config.limit) {
        sampled.resize(*config.limit);
    }
    return sampled;
}

std::filesystem::path local_sbom_path(const PipelineConfig& config, const Gav& gav,
                                      const std::string& filename) {
    auto group_path = gav.group;
    std::replace(group_path.begin(), group_path.end(), '.', '/');
    return config.out_dir / kSbomDirectory / group_path / gav.artifact / gav.version / filename;
}

std::string filename_of_url(const std::string& url) {
    auto slash = url.rfind('/');
    return slash == std::string::npos ? url : url.substr(slash + 1);
}

std::string utc_now_iso8601() {
    auto now = std::time(nullptr);
    std::tm parts{};
    gmtime_r(&now, &parts);
    char buffer[32];
    std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &parts);
    return buffer;
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        fail(ErrorKind::io_error, "cannot open " + path.string());
    }
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return bytes;
}

void write_file_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        fail(ErrorKind::io_error, "cannot write " + path.string());
    }
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        fail(ErrorKind::io_error, "failed writing " + path.string());
    }
}

}  // namespace

void run_sample_stage(const PipelineConfig& config) {
    wrap_stage("sample", [&] {
        ensure_out_dir(config);
        auto snapshot = load_snapshot(config.snapshot_path);
        std::vector<ReleaseRecord> releases;
        releases.reserve(snapshot.releases().size());
        for (const auto& [id, record] : snapshot.releases()) {
            releases.push_back(record);
        }
        auto sampled = stratified_sample(releases, config.rate, config.seed);
        std::vector<json> lines;
        lines.reserve(sampled.size());
        for (const auto& release : sampled) {
            lines.push_back(json{{"id", release.gav.text()},
                                 {"timestamp", release.timestamp_ms}});
        }
        write_ndjson(config.out_dir / kSampledFile, lines);
        note(config, "sample: " + std::to_string(sampled.size()) + " of " +
                         std::to_string(releases.size()) + " releases selected");
    });
}

void run_scan_stage(const PipelineConfig& config) {
    wrap_stage("scan", [&] {
        ensure_out_dir(config);
        auto sampled = read_sampled(config);
        RegistryClient client(config.fetch);

        struct ScanOutcome {
            bool present = false;
            std::vector<SbomArtifactRef> refs;
            std::vector<std::string> warnings;
        };
        std::vector<ScanOutcome> outcomes(sampled.size());
        parallel_for(sampled.size(), config.fetch.max_concurrency, [&](std::size_t index) {
            auto gav = parse_gav(sampled[index].id);
            auto& outcome = outcomes[index];
            try {
                auto listing = client.list_release_files(config.registry_root, gav);
                outcome.refs = discover_sboms(listing, gav, &outcome.warnings);
                outcome.present = true;
            } catch (const AuditError& ex) {
                if (ex.kind() != ErrorKind::not_found) throw;
                outcome.present = false;
            }
        });

        std::vector<json> scanned_lines;
        std::vector<json> inventory_lines;
        for (std::size_t i = 0; i < sampled.size(); ++i) {
            scanned_lines.push_back(json{{"id", sampled[i].id},
                                         {"timestamp", sampled[i].timestamp_ms},
                                         {"status", outcomes[i].present ? "present" : "absent"}});
            for (const auto& ref : outcomes[i].refs) {
                InventoryRecord record;
                record.release_id = sampled[i].id;
                record.url = ref.url;
                record.standard = ref.standard;
                record.serialization = ref.serialization;
                record.checksums.assign(ref.checksums_available.begin(),
                                        ref.checksums_available.end());
                record.is_signed = ref.is_signed;
                inventory_lines.push_back(inventory_record_to_json(record));
            }
            for (const auto& warning : outcomes[i].warnings) {
                note(config, "scan: " + sampled[i].id + ": " + warning);
            }
        }
        write_ndjson(config.out_dir / kScannedFile, scanned_lines);
        write_ndjson(config.out_dir / kInventoryFile, inventory_lines);
        note(config, "scan: " + std::to_string(inventory_lines.size()) + " sbom file(s) across " +
                         std::to_string(sampled.size()) + " release(s)");
    });
}

void run_fetch_stage(const PipelineConfig& config) {
    wrap_stage("fetch", [&] {
        ensure_out_dir(config);
        std::vector<InventoryRecord> inventory;
        for_each_ndjson(config.out_dir / kInventoryFile, [&](const json& record, std::size_t) {
            inventory.push_back(inventory_record_from_json(record));
        });
        RegistryClient client(config.fetch);

        struct FetchOutcome {
            std::filesystem::path path;
            std::size_t bytes = 0;
            std::map<ChecksumAlgo, std::filesystem::path> sidecars;
            std::vector<std::string> warnings;
        };
        std::vector<FetchOutcome> outcomes(inventory.size());
        parallel_for(inventory.size(), config.fetch.max_concurrency, [&](std::size_t index) {
            const auto& record = inventory[index];
            auto& outcome = outcomes[index];
            auto gav = parse_gav(record.release_id);
            auto filename = filename_of_url(record.url);
            auto body = client.fetch_file(record.url);
            outcome.path = local_sbom_path(config, gav, filename);
            outcome.bytes = body.size();
            write_file_bytes(outcome.path, body);
            for (auto algo : record.checksums) {
                auto sidecar_url = record.url + "." + std::string(sidecar_extension(algo));
                try {
                    auto sidecar = client.fetch_file(sidecar_url);
                    auto sidecar_path =
                        local_sbom_path(config, gav, filename + "." + std::string(sidecar_extension(algo)));
                    write_file_bytes(sidecar_path, sidecar);
                    outcome.sidecars[algo] = sidecar_path;
                } catch (const AuditError& ex) {
                    if (ex.kind() != ErrorKind::not_found) throw;
                    outcome.warnings.push_back("sidecar vanished: " + sidecar_url);
                }
            }
        });

        std::vector<json> lines;
        for (std::size_t i = 0; i < inventory.size(); ++i) {
            json sidecars = json::object();
            for (const auto& [algo, path] : outcomes[i].sidecars) {
                sidecars[to_string(algo)] =
                    std::filesystem::relative(path, config.out_dir).generic_string();
            }
            lines.push_back(json{
                {"release", inventory[i].release_id},
                {"url", inventory[i].url},
                {"standard", to_string(inventory[i].standard)},
                {"serialization", to_string(inventory[i].serialization)},
                {"path",
                 std::filesystem::relative(outcomes[i].path, config.out_dir).generic_string()},
                {"bytes", outcomes[i].bytes},
                {"sidecars", std::move(sidecars)}});
            for (const auto& warning : outcomes[i].warnings) {
                note(config, "fetch: " + inventory[i].release_id + ": " + warning);
            }
        }
        write_ndjson(config.out_dir / kFetchedFile, lines);
        note(config, "fetch: " + std::to_string(lines.size()) + " sbom file(s) downloaded");
    });
}

void run_verify_stage(const PipelineConfig& config) {
    wrap_stage("verify", [&] {
        ensure_out_dir(config);
        std::vector<json> results;
        for_each_ndjson(config.out_dir / kFetchedFile, [&](const json& record, std::size_t) {
            auto release = record.at("release").get<std::string>();
            auto url = record.at("url").get<std::string>();
            auto body = read_file_bytes(config.out_dir / record.at("path").get<std::string>());
            const auto& sidecars = record.at("sidecars");
            for (auto algo : all_checksum_algos) {
                auto key = to_string(algo);
                if (!sidecars.contains(key)) continue;
                auto sidecar_path = config.out_dir / sidecars.at(key).get<std::string>();
                auto sidecar_bytes = read_file_bytes(sidecar_path);
                std::string sidecar_text(sidecar_bytes.begin(), sidecar_bytes.end());
                json line{{"release", release}, {"url", url}, {"algo", key}};
                try {
                    auto result = verify(body, sidecar_text, algo);
                    line["expected"] = result.expected_hex;
                    line["actual"] = result.actual_hex;
                    line["status"] =
                        result.status == VerificationStatus::ok ? "ok" : "mismatch";
                } catch (const AuditError& ex) {
                    line["status"] = "malformed";
                    line["error"] = ex.what();
                }
                results.push_back(std::move(line));
            }
        });
        write_ndjson(config.out_dir / kVerificationFile, results);
        note(config, "verify: " + std::to_string(results.size()) + " checksum comparison(s)");
    });
}

void run_parse_stage(const PipelineConfig& config) {
    wrap_stage("parse", [&] {
        ensure_out_dir(config);
        std::vector<json> parsed_lines;
        std::vector<json> error_lines;
        for_each_ndjson(config.out_dir / kFetchedFile, [&](const json& record, std::size_t) {
            auto release = record.at("release").get<std::string>();
            auto url = record.at("url").get<std::string>();
            auto standard = parse_sbom_standard(record.at("standard").get<std::string>());
            auto serialization =
                parse_serialization(record.at("serialization").get<std::string>());
            auto body = read_file_bytes(config.out_dir / record.at("path").get<std::string>());
            try {
                auto doc = parse_sbom(body, standard, serialization);
                parsed_lines.push_back(json{{"release", release},
                                            {"url", url},
                                            {"doc", sbom_document_to_json(doc)}});
            } catch (const AuditError& ex) {
                error_lines.push_back(
                    json{{"release", release}, {"url", url}, {"error", ex.what()}});
            }
        });
        write_ndjson(config.out_dir / kParsedFile, parsed_lines);
        write_ndjson(config.out_dir / kParseErrorsFile, error_lines);
        note(config, "parse: " + std::to_string(parsed_lines.size()) + " parsed, " +
                         std::to_string(error_lines.size()) + " failed");
    });
}

void run_weave_stage(const PipelineConfig& config) {
    wrap_stage("weave", [&] {
        ensure_out_dir(config);
        auto snapshot = load_snapshot(config.snapshot_path);
        std::size_t woven = 0;
        for_each_ndjson(config.out_dir / kInventoryFile, [&](const json& line, std::size_t) {
            auto record = inventory_record_from_json(line);
            SbomAddedValue value;
            value.url = record.url;
            value.standard = record.standard;
            value.is_signed = record.is_signed;
            value.hash_algos = record.checksums;
            snapshot.weave_sbom(record.release_id, std::move(value));
            ++woven;
        });
        export_snapshot(snapshot, config.out_dir / kWovenFile, config.goblin_compat);
        note(config, "weave: " + std::to_string(woven) + " added value(s)");
    });
}

void run_align_stage(const PipelineConfig& config) {
    wrap_stage("align", [&] {
        ensure_out_dir(config);
        auto snapshot = load_snapshot(config.snapshot_path);

        struct ParsedDeps {
            std::string url;
            std::vector<Gav> deps;
        };
        std::map<std::string, std::vector<ParsedDeps>> docs_per_release;
        for_each_ndjson(config.out_dir / kParsedFile, [&](const json& record, std::size_t) {
            auto doc = sbom_document_from_json(record.at("doc"));
            docs_per_release[record.at("release").get<std::string>()].push_back(
                {record.at("url").get<std::string>(), doc.direct_dependencies});
        });

        std::vector<json> verdict_lines;
        for (auto& [release_id, docs] : docs_per_release) {
            auto gav = parse_gav(release_id);
            // A release often ships the same SBOM as json and xml; merge the
            // declared dependencies across documents, first URL winning.
            std::sort(docs.begin(), docs.end(),
                      [](const ParsedDeps& a, const ParsedDeps& b) { return a.url < b.url; });
            std::vector<Gav> sbom_deps;
            std::set<std::string> seen;
            for (const auto& doc : docs) {
                for (const auto& dep : doc.deps) {
                    if (seen.insert(dep.artifact_key()).second) {
                        sbom_deps.push_back(dep);
                    }
                }
            }
            auto graph_deps = snapshot.direct_dependencies(release_id);
            auto verdict = flag_submodules(align(gav, sbom_deps, graph_deps), gav);
            verdict_lines.push_back(verdict_to_json(verdict));
        }
        write_ndjson(config.out_dir / kVerdictsFile, verdict_lines);
        note(config, "align: " + std::to_string(verdict_lines.size()) + " release(s) aligned");
    });
}

AuditReport run_report_stage(const PipelineConfig& config) {
    AuditReport report;
    wrap_stage("report", [&] {
        ensure_out_dir(config);
        std::vector<ScanRecord> scanned;
        for_each_ndjson(config.out_dir / kScannedFile, [&](const json& record, std::size_t) {
            scanned.push_back(scan_record_from_json(record));
        });
        std::vector<InventoryRecord> inventory;
        for_each_ndjson(config.out_dir / kInventoryFile, [&](const json& record, std::size_t) {
            inventory.push_back(inventory_record_from_json(record));
        });
        std::vector<ParsedDocRecord> parsed;
        for_each_ndjson(config.out_dir / kParsedFile, [&](const json& record, std::size_t) {
            parsed.push_back({record.at("release").get<std::string>(),
                              record.at("url").get<std::string>(),
                              sbom_document_from_json(record.at("doc"))});
        });
        std::vector<AlignmentVerdict> verdicts;
        for_each_ndjson(config.out_dir / kVerdictsFile, [&](const json& record, std::size_t) {
            verdicts.push_back(verdict_from_json(record));
        });

        report = build_report(scanned, inventory, parsed, verdicts);
        auto document = report_to_json(report);
        document["generated_at"] = utc_now_iso8601();
        std::ofstream out(config.out_dir / kReportFile, std::ios::trunc);
        if (!out) {
            fail(ErrorKind::io_error,
                 "cannot write " + (config.out_dir / kReportFile).string());
        }
        out << document.dump(2) << "\n";
        write_report_csvs(report, config.out_dir);
        note(config, "report: " + std::to_string(report.sbom_files) + " sbom file(s) across " +
                         std::to_string(report.releases_scanned) + " scanned release(s)");
    });
    return report;
}

AuditReport run_pipeline(const PipelineConfig& config) {
    run_sample_stage(config);
    run_scan_stage(config);
    run_fetch_stage(config);
    run_verify_stage(config);
    run_parse_stage(config);
    run_weave_stage(config);
    run_align_stage(config);
    return run_report_stage(config);
}

}  // namespace sbomaudit
