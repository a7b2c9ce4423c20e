#include "sbomaudit/graph_store.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sbomaudit/errors.hpp"

namespace sbomaudit {
namespace {

using nlohmann::json;

std::pair<std::string, std::string> split_artifact_id(const std::string& id) {
    auto colon = id.find(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == id.size() ||
        id.find(':', colon + 1) != std::string::npos) {
        fail(ErrorKind::malformed_coordinate,
             "artifact id must be group:artifact, got '" + id + "'");
    }
    return {id.substr(0, colon), id.substr(colon + 1)};
}

json added_value_to_json(const SbomAddedValue& value) {
    json algos = json::array();
    for (auto algo : value.hash_algos) algos.push_back(to_string(algo));
    return json{{"url", value.url},
                {"standard", to_string(value.standard)},
                {"signed", value.is_signed},
                {"checksums", std::move(algos)}};
}

SbomAddedValue added_value_from_structured(const json& entry) {
    SbomAddedValue value;
    value.url = entry.at("url").get<std::string>();
    value.standard = parse_sbom_standard(entry.at("standard").get<std::string>());
    value.is_signed = entry.at("signed").get<bool>();
    for (const auto& algo : entry.at("checksums")) {
        value.hash_algos.push_back(parse_checksum_algo(algo.get<std::string>()));
    }
    return value;
}

// Inverts render_goblin_added_value; the hash list itself contains ", ",
// so split on the isHashAvailable marker rather than naively on commas.
SbomAddedValue added_value_from_rendered(const std::string& url, const std::string& rendered) {
    const std::string standard_key = "{standard=";
    const std::string signed_key = ", isSigned=";
    const std::string hash_key = ", isHashAvailable=";
    if (!rendered.starts_with(standard_key) || !rendered.ends_with("}")) {
        fail(ErrorKind::syntax_error, "malformed added-value rendering: " + rendered);
    }
    auto signed_pos = rendered.find(signed_key);
    auto hash_pos = rendered.find(hash_key);
    if (signed_pos == std::string::npos || hash_pos == std::string::npos ||
        hash_pos < signed_pos) {
        fail(ErrorKind::syntax_error, "malformed added-value rendering: " + rendered);
    }

    SbomAddedValue value;
    value.url = url;
    value.standard = parse_sbom_standard(
        rendered.substr(standard_key.size(), signed_pos - standard_key.size()));
    auto signed_text = rendered.substr(signed_pos + signed_key.size(),
                                       hash_pos - signed_pos - signed_key.size());
    if (signed_text == "true") {
        value.is_signed = true;
    } else if (signed_text == "false") {
        value.is_signed = false;
    } else {
        fail(ErrorKind::syntax_error, "malformed isSigned value: " + signed_text);
    }
    auto algos_text = rendered.substr(hash_pos + hash_key.size(),
                                      rendered.size() - 1 - hash_pos - hash_key.size());
    std::size_t start = 0;
    while (start < algos_text.size()) {
        auto comma = algos_text.find(", ", start);
        auto token = algos_text.substr(start, comma == std::string::npos ? std::string::npos
                                                                         : comma - start);
        value.hash_algos.push_back(parse_checksum_algo(token));
        if (comma == std::string::npos) break;
        start = comma + 2;
    }
    return value;
}

SbomAddedValue added_value_from_json(const json& entry) {
    if (entry.is_object() && entry.contains("url")) {
        return added_value_from_structured(entry);
    }
    // goblin-compat shape: one-entry map url -> rendered string
    if (entry.is_object() && entry.size() == 1 && entry.begin().value().is_string()) {
        return added_value_from_rendered(entry.begin().key(),
                                         entry.begin().value().get<std::string>());
    }
    fail(ErrorKind::syntax_error, "unrecognized sbom added-value shape");
}

}  // namespace

void GraphSnapshot::add_artifact(const std::string& artifact_id) {
    split_artifact_id(artifact_id);  // validates
    artifacts_.insert(artifact_id);
}

void GraphSnapshot::add_release(const ReleaseRecord& release) {
    auto id = release.gav.text();
    if (releases_.contains(id)) {
        fail(ErrorKind::duplicate_record, "duplicate release id '" + id + "'");
    }
    releases_.emplace(std::move(id), release);
}

void GraphSnapshot::add_dependency(DependencyEdge edge) {
    if (!releases_.contains(edge.from_release)) {
        fail(ErrorKind::dangling_edge,
             "dependency from unknown release '" + edge.from_release + "'");
    }
    split_artifact_id(edge.to_artifact);  // validates
    out_edges_[edge.from_release].push_back(edges_.size());
    edges_.push_back(std::move(edge));
}

bool GraphSnapshot::has_release(const std::string& release_id) const {
    return releases_.contains(release_id);
}

const ReleaseRecord* GraphSnapshot::find_release(const std::string& release_id) const {
    auto it = releases_.find(release_id);
    return it == releases_.end() ? nullptr : &it->second;
}

std::vector<std::pair<Gav, DependencyScope>> GraphSnapshot::direct_dependencies(
    const std::string& release_id) const {
    if (!releases_.contains(release_id)) {
        fail(ErrorKind::unknown_release, "no release '" + release_id + "' in snapshot");
    }
    std::vector<std::pair<Gav, DependencyScope>> result;
    auto it = out_edges_.find(release_id);
    if (it == out_edges_.end()) return result;
    result.reserve(it->second.size());
    for (auto index : it->second) {
        const auto& edge = edges_[index];
        auto [group, artifact] = split_artifact_id(edge.to_artifact);
        result.emplace_back(Gav{group, artifact, edge.target_version}, edge.scope);
    }
    return result;
}

void GraphSnapshot::weave_sbom(const std::string& release_id, SbomAddedValue value) {
    if (!releases_.contains(release_id)) {
        fail(ErrorKind::unknown_release, "no release '" + release_id + "' in snapshot");
    }
    auto& values = added_values_[release_id];
    for (auto& existing : values) {
        if (existing.url == value.url) {
            existing = std::move(value);
            return;
        }
    }
    values.push_back(std::move(value));
}

const std::vector<SbomAddedValue>* GraphSnapshot::added_values(
    const std::string& release_id) const {
    auto it = added_values_.find(release_id);
    return it == added_values_.end() ? nullptr : &it->second;
}

std::size_t GraphSnapshot::added_value_count() const {
    std::size_t total = 0;
    for (const auto& [id, values] : added_values_) total += values.size();
    return total;
}

bool GraphSnapshot::operator==(const GraphSnapshot& other) const {
    if (artifacts_ != other.artifacts_ || added_values_ != other.added_values_) return false;
    if (releases_.size() != other.releases_.size()) return false;
    for (const auto& [id, record] : releases_) {
        auto it = other.releases_.find(id);
        if (it == other.releases_.end() || it->second.gav != record.gav ||
            it->second.timestamp_ms != record.timestamp_ms) {
            return false;
        }
    }
    auto mine = edges_;
    auto theirs = other.edges_;
    std::sort(mine.begin(), mine.end());
    std::sort(theirs.begin(), theirs.end());
    return mine == theirs;
}

std::string render_goblin_added_value(const SbomAddedValue& value) {
    std::ostringstream out;
    out << "{standard=" << to_string(value.standard)
        << ", isSigned=" << (value.is_signed ? "true" : "false") << ", isHashAvailable=";
    bool first = true;
    for (auto algo : all_checksum_algos) {
        if (std::find(value.hash_algos.begin(), value.hash_algos.end(), algo) ==
            value.hash_algos.end()) {
            continue;
        }
        if (!first) out << ", ";
        out << to_string(algo);
        first = false;
    }
    out << "}";
    return out.str();
}

GraphSnapshot load_snapshot(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        fail(ErrorKind::io_error, "cannot open snapshot file " + path.string());
    }

    struct PendingEdge {
        std::size_t line_number;
        DependencyEdge edge;
    };
    GraphSnapshot snapshot;
    std::vector<PendingEdge> pending;  // releases may appear after their edges
    std::set<std::string> seen_artifacts;

    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.empty()) continue;
        auto context = [&](const std::string& message) {
            return path.filename().string() + ":" + std::to_string(line_number) + ": " + message;
        };
        json record;
        try {
            record = json::parse(line);
        } catch (const json::exception& ex) {
            fail(ErrorKind::syntax_error, context(ex.what()));
        }
        try {
            auto kind = record.at("kind").get<std::string>();
            if (kind == "artifact") {
                auto id = record.at("id").get<std::string>();
                if (!seen_artifacts.insert(id).second) {
                    fail(ErrorKind::duplicate_record, "duplicate artifact id '" + id + "'");
                }
                snapshot.add_artifact(id);
            } else if (kind == "release") {
                auto gav = parse_gav(record.at("id").get<std::string>());
                auto release =
                    make_release_record(gav, record.at("timestamp").get<std::int64_t>());
                snapshot.add_release(release);
                if (record.contains("sbom")) {
                    for (const auto& entry : record.at("sbom")) {
                        snapshot.weave_sbom(gav.text(), added_value_from_json(entry));
                    }
                }
            } else if (kind == "dependency") {
                DependencyEdge edge;
                edge.from_release = record.at("from").get<std::string>();
                edge.to_artifact = record.at("to_artifact").get<std::string>();
                edge.target_version = record.at("target_version").get<std::string>();
                edge.scope = record.contains("scope")
                                 ? parse_scope(record.at("scope").get<std::string>())
                                 : DependencyScope::compile;
                pending.push_back({line_number, std::move(edge)});
            } else {
                fail(ErrorKind::syntax_error, "unknown record kind '" + kind + "'");
            }
        } catch (const json::exception& ex) {
            fail(ErrorKind::syntax_error, context(ex.what()));
        } catch (const AuditError& ex) {
            if (ex.kind() == ErrorKind::duplicate_record) {
                fail(ErrorKind::duplicate_record, context(ex.what()));
            }
            fail(ErrorKind::syntax_error, context(ex.what()));
        }
    }

    std::vector<std::string> dangling;
    for (auto& entry : pending) {
        if (!snapshot.has_release(entry.edge.from_release)) {
            dangling.push_back("line " + std::to_string(entry.line_number) + ": " +
                               entry.edge.from_release + " -> " + entry.edge.to_artifact + "@" +
                               entry.edge.target_version);
            continue;
        }
        snapshot.add_dependency(std::move(entry.edge));
    }
    if (!dangling.empty()) {
        std::string message = "dependency edges reference unknown releases: ";
        for (std::size_t i = 0; i < dangling.size(); ++i) {
            if (i > 0) message += "; ";
            message += dangling[i];
        }
        fail(ErrorKind::dangling_edge, message);
    }
    return snapshot;
}

void export_snapshot(const GraphSnapshot& snapshot, const std::filesystem::path& path,
                     bool goblin_compat) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        fail(ErrorKind::io_error, "cannot write snapshot file " + path.string());
    }
    for (const auto& id : snapshot.artifacts()) {
        out << json{{"kind", "artifact"}, {"id", id}}.dump() << "\n";
    }
    for (const auto& [id, record] : snapshot.releases()) {
        json line{{"kind", "release"}, {"id", id}, {"timestamp", record.timestamp_ms}};
        if (const auto* values = snapshot.added_values(id); values && !values->empty()) {
            json sbom = json::array();
            for (const auto& value : *values) {
                if (goblin_compat) {
                    sbom.push_back(json{{value.url, render_goblin_added_value(value)}});
                } else {
                    sbom.push_back(added_value_to_json(value));
                }
            }
            line["sbom"] = std::move(sbom);
        }
        out << line.dump() << "\n";
    }
    auto edges = snapshot.edges();
    std::sort(edges.begin(), edges.end());
    for (const auto& edge : edges) {
        out << json{{"kind", "dependency"},
                    {"from", edge.from_release},
                    {"to_artifact", edge.to_artifact},
                    {"target_version", edge.target_version},
                    {"scope", to_string(edge.scope)}}
                   .dump()
            << "\n";
    }
    if (!out) {
        fail(ErrorKind::io_error, "failed writing snapshot file " + path.string());
    }
}

}  // namespace sbomaudit
