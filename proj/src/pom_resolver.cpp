#include "sbomaudit/pom_resolver.hpp"

#include <map>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

namespace sbomaudit {

namespace {

using boost::property_tree::ptree;

std::string_view local_name(std::string_view key) {
    auto pos = key.rfind(':');
    return pos == std::string_view::npos ? key : key.substr(pos + 1);
}

const ptree* first_child(const ptree& pt, std::string_view name) {
    for (const auto& [key, child] : pt) {
        if (local_name(key) == name) return &child;
    }
    return nullptr;
}

std::string child_text(const ptree& pt, std::string_view name) {
    const ptree* c = first_child(pt, name);
    return c ? c->data() : std::string{};
}

bool has_placeholder(std::string_view text) {
    auto open = text.find("${");
    return open != std::string_view::npos && text.find('}', open) != std::string_view::npos;
}

// Substitutes ${...} occurrences from the property map; unknown properties
// stay in place so the caller can see what failed to resolve.
std::string interpolate(std::string text, const std::map<std::string, std::string>& properties) {
    for (int round = 0; round < 5 && has_placeholder(text); ++round) {
        std::string out;
        std::size_t pos = 0;
        bool replaced = false;
        while (pos < text.size()) {
            auto open = text.find("${", pos);
            if (open == std::string::npos) {
                out.append(text, pos, std::string::npos);
                break;
            }
            auto close = text.find('}', open);
            if (close == std::string::npos) {
                out.append(text, pos, std::string::npos);
                break;
            }
            out.append(text, pos, open - pos);
            std::string key = text.substr(open + 2, close - open - 2);
            auto it = properties.find(key);
            if (it != properties.end()) {
                out += it->second;
                replaced = true;
            } else {
                out.append(text, open, close - open + 1);
            }
            pos = close + 1;
        }
        if (!replaced) return out;
        text = std::move(out);
    }
    return text;
}

}  // namespace

std::vector<PomDependency> parse_pom_dependencies(std::span<const std::uint8_t> pom_bytes) {
    return parse_pom_dependencies(
        std::string_view(reinterpret_cast<const char*>(pom_bytes.data()), pom_bytes.size()));
}

std::vector<PomDependency> parse_pom_dependencies(std::string_view pom_text) {
    std::istringstream stream{std::string(pom_text)};
    ptree pt;
    try {
        boost::property_tree::read_xml(stream, pt,
                                       boost::property_tree::xml_parser::trim_whitespace);
    } catch (const boost::property_tree::xml_parser_error& e) {
        fail(ErrorKind::syntax_error, std::string("invalid pom xml: ") + e.what());
    }

    const ptree* project = first_child(pt, "project");
    if (project == nullptr) {
        fail(ErrorKind::syntax_error, "pom has no <project> root element");
    }

    std::map<std::string, std::string> properties;
    if (const ptree* props = first_child(*project, "properties")) {
        for (const auto& [key, value] : *props) {
            if (key != "<xmlattr>") properties[std::string(local_name(key))] = value.data();
        }
    }
    std::string project_version = child_text(*project, "version");
    if (project_version.empty()) {
        if (const ptree* parent = first_child(*project, "parent")) {
            project_version = child_text(*parent, "version");
        }
    }
    if (!project_version.empty()) {
        properties["project.version"] = project_version;
        properties["version"] = project_version;  // legacy ${version} form
    }
    std::string project_group = child_text(*project, "groupId");
    if (project_group.empty()) {
        if (const ptree* parent = first_child(*project, "parent")) {
            project_group = child_text(*parent, "groupId");
        }
    }
    if (!project_group.empty()) properties["project.groupId"] = project_group;

    std::vector<PomDependency> out;
    const ptree* dependencies = first_child(*project, "dependencies");
    if (dependencies == nullptr) return out;

    for (const auto& [key, dep] : *dependencies) {
        if (local_name(key) != "dependency") continue;
        PomDependency entry;
        entry.gav.group = interpolate(child_text(dep, "groupId"), properties);
        entry.gav.artifact = interpolate(child_text(dep, "artifactId"), properties);
        entry.gav.version = interpolate(child_text(dep, "version"), properties);
        entry.resolved = !entry.gav.version.empty() && !has_placeholder(entry.gav.version);
        std::string scope = child_text(dep, "scope");
        entry.scope = scope.empty() ? DependencyScope::unspecified
                                    : dependency_scope_from_string(scope).value_or(
                                          DependencyScope::unspecified);
        entry.optional_flag = child_text(dep, "optional") == "true";
        out.push_back(std::move(entry));
    }
    return out;
}

std::vector<std::pair<Gav, DependencyScope>> direct_dependencies_from_pom(
    const std::vector<PomDependency>& dependencies) {
    std::vector<std::pair<Gav, DependencyScope>> out;
    for (const auto& dep : dependencies) {
        if (!dep.resolved) continue;
        if (dep.scope == DependencyScope::import_scope) continue;
        out.emplace_back(dep.gav, dep.scope);
    }
    return out;
}

}  // namespace sbomaudit
