#include "sbomaudit/alignment.hpp"

#include <algorithm>
#include <map>
#include <utility>

#include "sbomaudit/errors.hpp"

namespace sbomaudit {
namespace {

AlignmentStatus derive_status(const AlignmentVerdict& verdict) {
    int kinds = 0;
    AlignmentStatus single = AlignmentStatus::match;
    if (!verdict.version_mismatches.empty()) {
        ++kinds;
        single = AlignmentStatus::version_mismatch;
    }
    if (!verdict.sbom_only.empty()) {
        ++kinds;
        single = AlignmentStatus::sbom_extra;
    }
    if (!verdict.graph_only.empty()) {
        ++kinds;
        single = AlignmentStatus::graph_extra;
    }
    if (kinds == 0) return AlignmentStatus::match;
    return kinds == 1 ? single : AlignmentStatus::mixed;
}

}  // namespace

std::string to_string(AlignmentStatus status) {
    switch (status) {
        case AlignmentStatus::match: return "match";
        case AlignmentStatus::version_mismatch: return "version_mismatch";
        case AlignmentStatus::sbom_extra: return "sbom_extra";
        case AlignmentStatus::graph_extra: return "graph_extra";
        case AlignmentStatus::mixed: return "mixed";
    }
    fail(ErrorKind::invalid_argument, "unhandled alignment status");
}

AlignmentStatus alignment_status_from_string(const std::string& text) {
    if (text == "match") return AlignmentStatus::match;
    if (text == "version_mismatch") return AlignmentStatus::version_mismatch;
    if (text == "sbom_extra") return AlignmentStatus::sbom_extra;
    if (text == "graph_extra") return AlignmentStatus::graph_extra;
    if (text == "mixed") return AlignmentStatus::mixed;
    fail(ErrorKind::invalid_argument, "unknown alignment status '" + text + "'");
}

AlignmentVerdict align(const Gav& release, const std::vector<Gav>& sbom_deps,
                       const std::vector<std::pair<Gav, DependencyScope>>& graph_deps) {
    AlignmentVerdict verdict;
    verdict.release = release;

    std::map<std::string, Gav> sbom_side;
    for (const auto& dep : sbom_deps) {
        auto [it, inserted] = sbom_side.emplace(dep.artifact_key(), dep);
        if (!inserted) {
            verdict.warnings.push_back("duplicate dependency key '" + dep.artifact_key() +
                                       "' on sbom side; first occurrence kept");
        }
    }
    std::map<std::string, std::pair<Gav, DependencyScope>> graph_side;
    for (const auto& dep : graph_deps) {
        auto [it, inserted] = graph_side.emplace(dep.first.artifact_key(), dep);
        if (!inserted) {
            verdict.warnings.push_back("duplicate dependency key '" + dep.first.artifact_key() +
                                       "' on graph side; first occurrence kept");
        }
    }

    for (const auto& [key, sbom_gav] : sbom_side) {
        auto graph_it = graph_side.find(key);
        if (graph_it == graph_side.end()) {
            verdict.sbom_only.push_back({sbom_gav, false});
        } else if (sbom_gav.version == graph_it->second.first.version) {
            verdict.matched.push_back(sbom_gav);
        } else {
            verdict.version_mismatches.push_back(
                {key, sbom_gav.version, graph_it->second.first.version});
        }
    }
    for (const auto& [key, dep] : graph_side) {
        if (sbom_side.contains(key)) continue;
        if (dep.second == DependencyScope::test) {
            verdict.ignored_test_deps.push_back(dep.first);
        } else {
            verdict.graph_only.push_back({dep.first, dep.second});
        }
    }

    std::sort(verdict.matched.begin(), verdict.matched.end());
    std::sort(verdict.version_mismatches.begin(), verdict.version_mismatches.end());
    std::sort(verdict.sbom_only.begin(), verdict.sbom_only.end());
    std::sort(verdict.graph_only.begin(), verdict.graph_only.end());
    std::sort(verdict.ignored_test_deps.begin(), verdict.ignored_test_deps.end());
    verdict.status = derive_status(verdict);
    return verdict;
}

AlignmentVerdict flag_submodules(AlignmentVerdict verdict, const Gav& subject) {
    for (auto& entry : verdict.sbom_only) {
        entry.submodule_flag =
            entry.gav.group == subject.group && entry.gav.version == subject.version;
    }
    return verdict;
}

nlohmann::json verdict_to_json(const AlignmentVerdict& verdict) {
    using nlohmann::json;
    json matched = json::array();
    for (const auto& gav : verdict.matched) matched.push_back(gav.text());
    json mismatches = json::array();
    for (const auto& vm : verdict.version_mismatches) {
        mismatches.push_back(json{{"artifact", vm.artifact_key},
                                  {"sbom_version", vm.sbom_version},
                                  {"graph_version", vm.graph_version}});
    }
    json sbom_only = json::array();
    for (const auto& dep : verdict.sbom_only) {
        sbom_only.push_back(json{{"gav", dep.gav.text()}, {"submodule", dep.submodule_flag}});
    }
    json graph_only = json::array();
    for (const auto& dep : verdict.graph_only) {
        graph_only.push_back(json{{"gav", dep.gav.text()}, {"scope", to_string(dep.scope)}});
    }
    json ignored = json::array();
    for (const auto& gav : verdict.ignored_test_deps) ignored.push_back(gav.text());
    return json{{"release", verdict.release.text()},
                {"status", to_string(verdict.status)},
                {"matched", std::move(matched)},
                {"version_mismatches", std::move(mismatches)},
                {"sbom_only", std::move(sbom_only)},
                {"graph_only", std::move(graph_only)},
                {"ignored_test_deps", std::move(ignored)},
                {"count_match", verdict.count_match()},
                {"warnings", verdict.warnings}};
}

AlignmentVerdict verdict_from_json(const nlohmann::json& record) {
    AlignmentVerdict verdict;
    verdict.release = parse_gav(record.at("release").get<std::string>());
    verdict.status = alignment_status_from_string(record.at("status").get<std::string>());
    for (const auto& entry : record.at("matched")) {
        verdict.matched.push_back(parse_gav(entry.get<std::string>()));
    }
    for (const auto& entry : record.at("version_mismatches")) {
        verdict.version_mismatches.push_back(
            {entry.at("artifact").get<std::string>(),
             entry.at("sbom_version").get<std::string>(),
             entry.at("graph_version").get<std::string>()});
    }
    for (const auto& entry : record.at("sbom_only")) {
        verdict.sbom_only.push_back({parse_gav(entry.at("gav").get<std::string>()),
                                     entry.at("submodule").get<bool>()});
    }
    for (const auto& entry : record.at("graph_only")) {
        verdict.graph_only.push_back({parse_gav(entry.at("gav").get<std::string>()),
                                      parse_scope(entry.at("scope").get<std::string>())});
    }
    for (const auto& entry : record.at("ignored_test_deps")) {
        verdict.ignored_test_deps.push_back(parse_gav(entry.get<std::string>()));
    }
    if (record.contains("warnings")) {
        verdict.warnings = record.at("warnings").get<std::vector<std::string>>();
    }
    return verdict;
}

}  // namespace sbomaudit
