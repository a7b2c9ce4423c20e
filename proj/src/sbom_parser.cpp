#include "sbomaudit/sbom_parser.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <set>
#include <sstream>
#include <unordered_map>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

namespace sbomaudit {

namespace {

using boost::property_tree::ptree;

// ---------------------------------------------------------------------------
// shared helpers

std::string normalize_hash_algo(std::string_view raw) {
    std::string out;
    for (char c : raw) {
        if (c == '-' || c == '_' || c == ' ') continue;
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return out;
}

std::optional<std::int64_t> parse_iso8601_ms(std::string_view text) {
    std::string s(text);
    int y = 0, mo = 0, d = 0;
    int consumed = 0;
    if (std::sscanf(s.c_str(), "%4d-%2d-%2d%n", &y, &mo, &d, &consumed) != 3) return std::nullopt;

    std::int64_t ms_of_day = 0;
    long offset_min = 0;
    const char* p = s.c_str() + consumed;
    if (*p == 'T' || *p == 't' || *p == ' ') {
        ++p;
        int hh = 0, mm = 0;
        if (std::sscanf(p, "%2d:%2d%n", &hh, &mm, &consumed) != 2) return std::nullopt;
        p += consumed;
        double ss = 0;
        if (*p == ':') {
            ++p;
            char* end = nullptr;
            ss = std::strtod(p, &end);
            if (end == p) return std::nullopt;
            p = end;
        }
        ms_of_day = (static_cast<std::int64_t>(hh) * 3600 + mm * 60) * 1000 +
                    static_cast<std::int64_t>(std::llround(ss * 1000.0));
        if (*p == 'Z' || *p == 'z') {
            ++p;
        } else if (*p == '+' || *p == '-') {
            int sign = *p == '+' ? 1 : -1;
            ++p;
            int zh = 0, zm = 0;
            if (std::sscanf(p, "%2d%n", &zh, &consumed) != 1) return std::nullopt;
            p += consumed;
            if (*p == ':') ++p;
            if (std::isdigit(static_cast<unsigned char>(p[0]))) {
                if (std::sscanf(p, "%2d%n", &zm, &consumed) == 1) p += consumed;
            }
            offset_min = sign * (zh * 60L + zm);
        }
    }
    while (*p != '\0') {
        if (!std::isspace(static_cast<unsigned char>(*p))) return std::nullopt;
        ++p;
    }

    using namespace std::chrono;
    if (mo < 1 || mo > 12 || d < 1 || d > 31) return std::nullopt;
    year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) return std::nullopt;
    auto base = duration_cast<milliseconds>(sys_days{ymd}.time_since_epoch()).count();
    return base + ms_of_day - offset_min * 60000;
}

void set_created_at(SbomDocument& doc, const std::string& raw) {
    if (raw.empty()) return;
    auto parsed = parse_iso8601_ms(raw);
    if (parsed) {
        doc.created_at_ms = *parsed;
    } else {
        doc.warnings.push_back("unparseable creation timestamp: \"" + raw + "\"");
    }
}

// purl is the machine-oriented identity: when it parses as a maven
// coordinate and disagrees with the explicit fields, it wins.
void reconcile_purl(Component& component, std::vector<std::string>& warnings) {
    if (!component.purl) return;
    std::optional<Gav> from_purl;
    try {
        from_purl = parse_maven_purl(*component.purl);
    } catch (const AuditError&) {
        warnings.push_back("component \"" + component.name + "\" has malformed maven purl \"" +
                           *component.purl + "\"");
        return;
    }
    if (!from_purl) return;

    bool disagrees = (component.group && *component.group != from_purl->group) ||
                     (!component.name.empty() && component.name != from_purl->artifact) ||
                     (component.version && *component.version != from_purl->version);
    if (disagrees) {
        warnings.push_back("component \"" + component.name + "\" fields disagree with purl \"" +
                           *component.purl + "\"; purl wins");
    }
    component.group = from_purl->group;
    component.name = from_purl->artifact;
    component.version = from_purl->version;
}

void check_spec_version(SbomDocument& doc) {
    if (doc.standard == SbomStandard::cyclonedx) {
        static const std::set<std::string> known{"1.2", "1.3", "1.4", "1.5", "1.6"};
        if (!known.contains(doc.spec_version)) {
            doc.warnings.push_back("unsupported CycloneDX spec version \"" + doc.spec_version +
                                   "\"; parsed best-effort");
        }
    } else {
        if (doc.spec_version.rfind("SPDX-2.", 0) != 0) {
            doc.warnings.push_back("unsupported SPDX spec version \"" + doc.spec_version +
                                   "\"; parsed best-effort");
        }
    }
}

// ---------------------------------------------------------------------------
// CycloneDX JSON

Component component_from_cdx_json(const nlohmann::json& j, std::size_t index) {
    Component c;
    if (j.contains("bom-ref") && j["bom-ref"].is_string()) c.ref_id = j["bom-ref"];
    if (j.contains("group") && j["group"].is_string()) c.group = j["group"];
    if (j.contains("name") && j["name"].is_string()) c.name = j["name"];
    if (j.contains("version") && j["version"].is_string()) c.version = j["version"];
    if (j.contains("purl") && j["purl"].is_string()) c.purl = j["purl"];
    if (c.ref_id.empty()) c.ref_id = c.purl ? *c.purl : "component-" + std::to_string(index);
    if (j.contains("hashes") && j["hashes"].is_array()) {
        for (const auto& h : j["hashes"]) {
            if (h.contains("alg") && h.contains("content")) {
                c.hashes[normalize_hash_algo(h["alg"].get<std::string>())] =
                    to_lower(h["content"].get<std::string>());
            }
        }
    }
    if (j.contains("licenses") && j["licenses"].is_array()) {
        for (const auto& l : j["licenses"]) {
            if (l.contains("license") && l["license"].is_object()) {
                const auto& lic = l["license"];
                if (lic.contains("id")) c.licenses.push_back(lic["id"].get<std::string>());
                else if (lic.contains("name")) c.licenses.push_back(lic["name"].get<std::string>());
            } else if (l.contains("expression")) {
                c.licenses.push_back(l["expression"].get<std::string>());
            }
        }
    }
    return c;
}

void tools_from_cdx_json(const nlohmann::json& tools, SbomDocument& doc) {
    // 1.4-: array of tool objects; 1.5+: object with "components"/"services".
    auto add = [&doc](const nlohmann::json& t) {
        if (!t.contains("name") || !t["name"].is_string()) return;
        ToolInfo tool{t["name"].get<std::string>(), std::nullopt};
        if (tool.name.empty()) return;
        if (t.contains("version") && t["version"].is_string()) tool.version = t["version"];
        doc.tools.push_back(std::move(tool));
    };
    if (tools.is_array()) {
        for (const auto& t : tools) add(t);
    } else if (tools.is_object()) {
        for (const char* key : {"components", "services"}) {
            if (tools.contains(key) && tools[key].is_array()) {
                for (const auto& t : tools[key]) add(t);
            }
        }
    }
}

void parse_cyclonedx_json(const nlohmann::json& j, SbomDocument& doc) {
    if (!j.is_object() || !j.contains("bomFormat") || j["bomFormat"] != "CycloneDX") {
        fail(ErrorKind::standard_mismatch, "document does not declare bomFormat CycloneDX");
    }
    if (j.contains("specVersion") && j["specVersion"].is_string()) {
        doc.spec_version = j["specVersion"];
    }

    if (j.contains("metadata") && j["metadata"].is_object()) {
        const auto& metadata = j["metadata"];
        if (metadata.contains("timestamp") && metadata["timestamp"].is_string()) {
            set_created_at(doc, metadata["timestamp"]);
        }
        if (metadata.contains("tools")) tools_from_cdx_json(metadata["tools"], doc);
        if (metadata.contains("component") && metadata["component"].is_object()) {
            Component root = component_from_cdx_json(metadata["component"], 0);
            reconcile_purl(root, doc.warnings);
            doc.root_ref = root.ref_id;
            doc.components.push_back(std::move(root));
        }
    }

    if (j.contains("components") && j["components"].is_array()) {
        std::size_t index = doc.components.size();
        for (const auto& cj : j["components"]) {
            Component c = component_from_cdx_json(cj, index++);
            reconcile_purl(c, doc.warnings);
            doc.components.push_back(std::move(c));
        }
    }

    if (j.contains("dependencies") && j["dependencies"].is_array()) {
        for (const auto& dj : j["dependencies"]) {
            if (!dj.contains("ref") || !dj["ref"].is_string()) continue;
            DependencyEntry entry{dj["ref"].get<std::string>(), {}};
            if (dj.contains("dependsOn") && dj["dependsOn"].is_array()) {
                for (const auto& r : dj["dependsOn"]) {
                    if (r.is_string()) entry.depends_on.push_back(r.get<std::string>());
                }
            }
            doc.dependency_entries.push_back(std::move(entry));
        }
    }
}

// ---------------------------------------------------------------------------
// SPDX JSON

Component component_from_spdx_package(const nlohmann::json& p) {
    Component c;
    if (p.contains("SPDXID") && p["SPDXID"].is_string()) c.ref_id = p["SPDXID"];
    if (p.contains("name") && p["name"].is_string()) c.name = p["name"];
    if (p.contains("versionInfo") && p["versionInfo"].is_string()) c.version = p["versionInfo"];
    if (p.contains("externalRefs") && p["externalRefs"].is_array()) {
        for (const auto& ref : p["externalRefs"]) {
            if (ref.contains("referenceType") && ref["referenceType"] == "purl" &&
                ref.contains("referenceLocator") && ref["referenceLocator"].is_string()) {
                c.purl = ref["referenceLocator"];
                break;
            }
        }
    }
    if (p.contains("checksums") && p["checksums"].is_array()) {
        for (const auto& h : p["checksums"]) {
            if (h.contains("algorithm") && h.contains("checksumValue")) {
                c.hashes[normalize_hash_algo(h["algorithm"].get<std::string>())] =
                    to_lower(h["checksumValue"].get<std::string>());
            }
        }
    }
    for (const char* key : {"licenseConcluded", "licenseDeclared"}) {
        if (p.contains(key) && p[key].is_string()) {
            std::string lic = p[key];
            if (!lic.empty() && lic != "NOASSERTION" && lic != "NONE") {
                c.licenses.push_back(std::move(lic));
                break;
            }
        }
    }
    return c;
}

void spdx_tool_from_creator(const std::string& creator, SbomDocument& doc) {
    // creators look like "Tool: spdx-gradle-plugin" / "Organization: ...".
    constexpr std::string_view prefix = "Tool:";
    if (creator.rfind(prefix, 0) != 0) return;
    std::string name = creator.substr(prefix.size());
    auto first = name.find_first_not_of(' ');
    name = first == std::string::npos ? "" : name.substr(first);
    if (!name.empty()) doc.tools.push_back(ToolInfo{std::move(name), std::nullopt});
}

void normalize_spdx_relationships(SbomDocument& doc,
                                  const std::vector<std::string>& describes,
                                  const std::vector<std::array<std::string, 3>>& relationships) {
    std::string root;
    if (!describes.empty()) root = describes.front();
    std::unordered_map<std::string, std::size_t> entry_index;
    auto depends = [&](const std::string& from, const std::string& to) {
        auto [it, inserted] = entry_index.try_emplace(from, doc.dependency_entries.size());
        if (inserted) doc.dependency_entries.push_back(DependencyEntry{from, {}});
        doc.dependency_entries[it->second].depends_on.push_back(to);
    };
    for (const auto& [element, type, related] : relationships) {
        if (type == "DESCRIBES") {
            if (root.empty()) root = related;
        } else if (type == "DESCRIBED_BY") {
            if (root.empty()) root = element;
        } else if (type == "DEPENDS_ON") {
            depends(element, related);
        } else if (type == "DEPENDENCY_OF") {
            depends(related, element);
        }
    }
    if (!root.empty()) doc.root_ref = root;
}

void parse_spdx_json(const nlohmann::json& j, SbomDocument& doc) {
    if (!j.is_object() || !j.contains("spdxVersion") || !j["spdxVersion"].is_string()) {
        fail(ErrorKind::standard_mismatch, "document does not declare an spdxVersion");
    }
    doc.spec_version = j["spdxVersion"];

    if (j.contains("creationInfo") && j["creationInfo"].is_object()) {
        const auto& info = j["creationInfo"];
        if (info.contains("created") && info["created"].is_string()) {
            set_created_at(doc, info["created"]);
        }
        if (info.contains("creators") && info["creators"].is_array()) {
            for (const auto& c : info["creators"]) {
                if (c.is_string()) spdx_tool_from_creator(c.get<std::string>(), doc);
            }
        }
    }

    if (j.contains("packages") && j["packages"].is_array()) {
        for (const auto& p : j["packages"]) {
            Component c = component_from_spdx_package(p);
            reconcile_purl(c, doc.warnings);
            doc.components.push_back(std::move(c));
        }
    }

    std::vector<std::string> describes;
    if (j.contains("documentDescribes") && j["documentDescribes"].is_array()) {
        for (const auto& d : j["documentDescribes"]) {
            if (d.is_string()) describes.push_back(d.get<std::string>());
        }
    }
    std::vector<std::array<std::string, 3>> relationships;
    if (j.contains("relationships") && j["relationships"].is_array()) {
        for (const auto& r : j["relationships"]) {
            if (r.contains("spdxElementId") && r.contains("relationshipType") &&
                r.contains("relatedSpdxElement")) {
                relationships.push_back({r["spdxElementId"].get<std::string>(),
                                         r["relationshipType"].get<std::string>(),
                                         r["relatedSpdxElement"].get<std::string>()});
            }
        }
    }
    normalize_spdx_relationships(doc, describes, relationships);
}

// ---------------------------------------------------------------------------
// XML support (boost.property_tree; element names matched by local name so
// namespace prefixes do not matter)

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

std::vector<const ptree*> children_named(const ptree& pt, std::string_view name) {
    std::vector<const ptree*> out;
    for (const auto& [key, child] : pt) {
        if (local_name(key) == name) out.push_back(&child);
    }
    return out;
}

std::string attribute(const ptree& pt, std::string_view name) {
    if (auto attrs = pt.get_child_optional("<xmlattr>")) {
        for (const auto& [key, child] : *attrs) {
            if (local_name(key) == name) return child.data();
        }
    }
    return {};
}

std::optional<std::string> child_text(const ptree& pt, std::string_view name) {
    if (const ptree* c = first_child(pt, name)) return c->data();
    return std::nullopt;
}

ptree parse_xml(std::string_view text) {
    std::istringstream stream{std::string(text)};
    ptree pt;
    try {
        boost::property_tree::read_xml(stream, pt,
                                       boost::property_tree::xml_parser::trim_whitespace);
    } catch (const boost::property_tree::xml_parser_error& e) {
        fail(ErrorKind::syntax_error, std::string("invalid xml: ") + e.what());
    }
    return pt;
}

// ---------------------------------------------------------------------------
// CycloneDX XML

Component component_from_cdx_xml(const ptree& el, std::size_t index) {
    Component c;
    c.ref_id = attribute(el, "bom-ref");
    if (auto g = child_text(el, "group")) c.group = *g;
    if (auto n = child_text(el, "name")) c.name = *n;
    if (auto v = child_text(el, "version")) c.version = *v;
    if (auto p = child_text(el, "purl")) c.purl = *p;
    if (c.ref_id.empty()) c.ref_id = c.purl ? *c.purl : "component-" + std::to_string(index);
    if (const ptree* hashes = first_child(el, "hashes")) {
        for (const ptree* h : children_named(*hashes, "hash")) {
            std::string alg = attribute(*h, "alg");
            if (!alg.empty()) c.hashes[normalize_hash_algo(alg)] = to_lower(h->data());
        }
    }
    if (const ptree* licenses = first_child(el, "licenses")) {
        for (const auto& [key, lic] : *licenses) {
            if (local_name(key) == "license") {
                if (auto id = child_text(lic, "id")) c.licenses.push_back(*id);
                else if (auto n = child_text(lic, "name")) c.licenses.push_back(*n);
            } else if (local_name(key) == "expression") {
                c.licenses.push_back(lic.data());
            }
        }
    }
    return c;
}

void parse_cyclonedx_xml(const ptree& root, SbomDocument& doc) {
    const ptree* bom = first_child(root, "bom");
    if (bom == nullptr) {
        fail(ErrorKind::standard_mismatch, "root element is not a CycloneDX <bom>");
    }

    // spec version comes from the schema namespace
    if (auto attrs = bom->get_child_optional("<xmlattr>")) {
        for (const auto& [key, value] : *attrs) {
            constexpr std::string_view marker = "cyclonedx.org/schema/bom/";
            auto pos = value.data().find(marker);
            if (key.rfind("xmlns", 0) == 0 && pos != std::string::npos) {
                doc.spec_version = value.data().substr(pos + marker.size());
                break;
            }
        }
    }
    if (doc.spec_version.empty()) {
        doc.warnings.push_back("CycloneDX xml document carries no schema namespace");
    }

    if (const ptree* metadata = first_child(*bom, "metadata")) {
        if (auto ts = child_text(*metadata, "timestamp")) set_created_at(doc, *ts);
        if (const ptree* tools = first_child(*metadata, "tools")) {
            auto add_tool = [&doc](const ptree& tool) {
                auto name = child_text(tool, "name");
                if (!name || name->empty()) return;
                ToolInfo info{*name, std::nullopt};
                if (auto version = child_text(tool, "version")) info.version = *version;
                doc.tools.push_back(std::move(info));
            };
            for (const ptree* tool : children_named(*tools, "tool")) add_tool(*tool);
            // 1.5+ nests tools under <components><component>
            if (const ptree* comps = first_child(*tools, "components")) {
                for (const ptree* tool : children_named(*comps, "component")) add_tool(*tool);
            }
        }
        if (const ptree* root_component = first_child(*metadata, "component")) {
            Component c = component_from_cdx_xml(*root_component, 0);
            reconcile_purl(c, doc.warnings);
            doc.root_ref = c.ref_id;
            doc.components.push_back(std::move(c));
        }
    }

    if (const ptree* components = first_child(*bom, "components")) {
        std::size_t index = doc.components.size();
        for (const ptree* el : children_named(*components, "component")) {
            Component c = component_from_cdx_xml(*el, index++);
            reconcile_purl(c, doc.warnings);
            doc.components.push_back(std::move(c));
        }
    }

    if (const ptree* dependencies = first_child(*bom, "dependencies")) {
        for (const ptree* dep : children_named(*dependencies, "dependency")) {
            DependencyEntry entry{attribute(*dep, "ref"), {}};
            if (entry.ref.empty()) continue;
            for (const ptree* nested : children_named(*dep, "dependency")) {
                std::string ref = attribute(*nested, "ref");
                if (!ref.empty()) entry.depends_on.push_back(std::move(ref));
            }
            doc.dependency_entries.push_back(std::move(entry));
        }
    }
}

// ---------------------------------------------------------------------------
// SPDX XML (element names mirror the JSON keys; arrays become repeated
// elements)

Component component_from_spdx_xml(const ptree& el) {
    Component c;
    if (auto id = child_text(el, "SPDXID")) c.ref_id = *id;
    if (auto n = child_text(el, "name")) c.name = *n;
    if (auto v = child_text(el, "versionInfo")) c.version = *v;
    for (const ptree* ref : children_named(el, "externalRefs")) {
        auto type = child_text(*ref, "referenceType");
        auto locator = child_text(*ref, "referenceLocator");
        if (type && *type == "purl" && locator) {
            c.purl = *locator;
            break;
        }
    }
    for (const ptree* h : children_named(el, "checksums")) {
        auto algorithm = child_text(*h, "algorithm");
        auto value = child_text(*h, "checksumValue");
        if (algorithm && value) c.hashes[normalize_hash_algo(*algorithm)] = to_lower(*value);
    }
    for (std::string_view key : {"licenseConcluded", "licenseDeclared"}) {
        if (auto lic = child_text(el, key)) {
            if (!lic->empty() && *lic != "NOASSERTION" && *lic != "NONE") {
                c.licenses.push_back(*lic);
                break;
            }
        }
    }
    return c;
}

void parse_spdx_xml(const ptree& root, SbomDocument& doc) {
    const ptree* document = nullptr;
    for (const auto& [key, child] : root) {
        if (first_child(child, "spdxVersion") != nullptr) {
            document = &child;
            break;
        }
    }
    if (document == nullptr) {
        fail(ErrorKind::standard_mismatch, "xml document carries no spdxVersion element");
    }
    doc.spec_version = child_text(*document, "spdxVersion").value_or("");

    if (const ptree* info = first_child(*document, "creationInfo")) {
        if (auto created = child_text(*info, "created")) set_created_at(doc, *created);
        for (const ptree* creator : children_named(*info, "creators")) {
            spdx_tool_from_creator(creator->data(), doc);
        }
    }

    for (const ptree* p : children_named(*document, "packages")) {
        Component c = component_from_spdx_xml(*p);
        reconcile_purl(c, doc.warnings);
        doc.components.push_back(std::move(c));
    }

    std::vector<std::string> describes;
    for (const ptree* d : children_named(*document, "documentDescribes")) {
        describes.push_back(d->data());
    }
    std::vector<std::array<std::string, 3>> relationships;
    for (const ptree* r : children_named(*document, "relationships")) {
        auto element = child_text(*r, "spdxElementId");
        auto type = child_text(*r, "relationshipType");
        auto related = child_text(*r, "relatedSpdxElement");
        if (element && type && related) relationships.push_back({*element, *type, *related});
    }
    normalize_spdx_relationships(doc, describes, relationships);
}

}  // namespace

// ---------------------------------------------------------------------------

SbomDocument parse_sbom(std::span<const std::uint8_t> data, SbomStandard standard,
                        Serialization serialization) {
    return parse_sbom(
        std::string_view(reinterpret_cast<const char*>(data.data()), data.size()), standard,
        serialization);
}

SbomDocument parse_sbom(std::string_view data, SbomStandard standard, Serialization serialization) {
    SbomDocument doc;
    doc.standard = standard;
    doc.serialization = serialization;

    if (serialization == Serialization::json) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(data);
        } catch (const nlohmann::json::exception& e) {
            fail(ErrorKind::syntax_error, std::string("invalid json: ") + e.what());
        }
        if (standard == SbomStandard::cyclonedx) {
            parse_cyclonedx_json(j, doc);
        } else {
            parse_spdx_json(j, doc);
        }
    } else {
        ptree pt = parse_xml(data);
        if (standard == SbomStandard::cyclonedx) {
            parse_cyclonedx_xml(pt, doc);
        } else {
            parse_spdx_xml(pt, doc);
        }
    }

    check_spec_version(doc);
    if (standard == SbomStandard::spdx && !doc.dependency_entries.empty()) {
        doc.warnings.push_back("spdx dependency extraction is best-effort");
    }

    auto [deps, unresolved] = extract_direct_dependencies(doc, &doc.warnings);
    doc.direct_dependencies = std::move(deps);
    doc.unresolved_dependency_refs = std::move(unresolved);
    return doc;
}

std::pair<std::vector<Gav>, std::vector<std::string>> extract_direct_dependencies(
    const SbomDocument& doc, std::vector<std::string>* warnings) {
    std::vector<Gav> deps;
    std::vector<std::string> unresolved;
    if (doc.dependency_entries.empty()) return {deps, unresolved};

    const DependencyEntry* root = nullptr;
    if (doc.root_ref) {
        for (const auto& entry : doc.dependency_entries) {
            if (entry.ref == *doc.root_ref) {
                root = &entry;
                break;
            }
        }
    }
    if (root == nullptr) {
        if (warnings) {
            warnings->push_back(
                "missing-root: no dependency entry for the document root; "
                "falling back to the first entry");
        }
        root = &doc.dependency_entries.front();
    }

    std::unordered_map<std::string_view, const Component*> by_ref;
    for (const auto& c : doc.components) by_ref.emplace(c.ref_id, &c);

    std::set<Gav> seen;
    for (const auto& ref : root->depends_on) {
        auto it = by_ref.find(ref);
        if (it == by_ref.end()) {
            unresolved.push_back(ref);
            continue;
        }
        const Component& c = *it->second;
        std::optional<Gav> gav;
        if (c.purl) {
            try {
                gav = parse_maven_purl(*c.purl);
            } catch (const AuditError&) {
                gav = std::nullopt;
            }
        }
        if (!gav && c.group && !c.name.empty() && c.version) {
            gav = Gav{*c.group, c.name, *c.version};
        }
        if (!gav || gav->group.empty() || gav->artifact.empty() || gav->version.empty()) {
            unresolved.push_back(ref);
            continue;
        }
        if (seen.insert(*gav).second) deps.push_back(std::move(*gav));
    }
    return {deps, unresolved};
}

// ---------------------------------------------------------------------------
// maven purls

namespace {

std::string percent_decode(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '%' && i + 2 < text.size() && std::isxdigit(static_cast<unsigned char>(text[i + 1])) &&
            std::isxdigit(static_cast<unsigned char>(text[i + 2]))) {
            auto hex_value = [](char c) {
                if (c >= '0' && c <= '9') return c - '0';
                if (c >= 'a' && c <= 'f') return c - 'a' + 10;
                return c - 'A' + 10;
            };
            out.push_back(static_cast<char>(hex_value(text[i + 1]) * 16 + hex_value(text[i + 2])));
            i += 2;
        } else {
            out.push_back(text[i]);
        }
    }
    return out;
}

std::string percent_encode(std::string_view text) {
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (char c : text) {
        if (c == '/' || c == '@' || c == '?' || c == '#' || c == '%' || c == ':') {
            out.push_back('%');
            out.push_back(hex[static_cast<unsigned char>(c) >> 4]);
            out.push_back(hex[static_cast<unsigned char>(c) & 0x0f]);
        } else {
            out.push_back(c);
        }
    }
    return out;
}

}  // namespace

std::optional<Gav> parse_maven_purl(std::string_view purl) {
    constexpr std::string_view scheme = "pkg:";
    if (purl.rfind(scheme, 0) != 0) return std::nullopt;
    std::string_view rest = purl.substr(scheme.size());

    auto slash = rest.find('/');
    if (slash == std::string_view::npos) return std::nullopt;
    if (to_lower(rest.substr(0, slash)) != "maven") return std::nullopt;
    rest.remove_prefix(slash + 1);

    // qualifiers and subpath are not part of the coordinate
    if (auto q = rest.find_first_of("?#"); q != std::string_view::npos) rest = rest.substr(0, q);

    auto at = rest.rfind('@');
    if (at == std::string_view::npos) {
        fail(ErrorKind::malformed_purl, "maven purl has no version: \"" + std::string(purl) + "\"");
    }
    std::string_view coordinate = rest.substr(0, at);
    std::string version = percent_decode(rest.substr(at + 1));

    auto sep = coordinate.find('/');
    if (sep == std::string_view::npos || coordinate.find('/', sep + 1) != std::string_view::npos) {
        fail(ErrorKind::malformed_purl,
             "maven purl needs group/artifact: \"" + std::string(purl) + "\"");
    }
    std::string group = percent_decode(coordinate.substr(0, sep));
    std::string artifact = percent_decode(coordinate.substr(sep + 1));
    if (group.empty() || artifact.empty() || version.empty()) {
        fail(ErrorKind::malformed_purl, "maven purl has empty segment: \"" + std::string(purl) + "\"");
    }
    return Gav{std::move(group), std::move(artifact), std::move(version)};
}

std::string render_maven_purl(const Gav& gav) {
    return "pkg:maven/" + percent_encode(gav.group) + "/" + percent_encode(gav.artifact) + "@" +
           percent_encode(gav.version);
}

// ---------------------------------------------------------------------------
// wire form

nlohmann::json sbom_document_to_json(const SbomDocument& doc) {
    nlohmann::json j;
    j["standard"] = to_string(doc.standard);
    j["spec_version"] = doc.spec_version;
    j["serialization"] = to_string(doc.serialization);
    j["created_at"] = doc.created_at_ms ? nlohmann::json(*doc.created_at_ms) : nlohmann::json();
    j["tools"] = nlohmann::json::array();
    for (const auto& tool : doc.tools) {
        j["tools"].push_back({{"name", tool.name},
                              {"version", tool.version ? nlohmann::json(*tool.version) : nlohmann::json()}});
    }
    j["root_ref"] = doc.root_ref ? nlohmann::json(*doc.root_ref) : nlohmann::json();
    j["components"] = nlohmann::json::array();
    for (const auto& c : doc.components) {
        nlohmann::json cj;
        cj["ref_id"] = c.ref_id;
        cj["group"] = c.group ? nlohmann::json(*c.group) : nlohmann::json();
        cj["name"] = c.name;
        cj["version"] = c.version ? nlohmann::json(*c.version) : nlohmann::json();
        cj["purl"] = c.purl ? nlohmann::json(*c.purl) : nlohmann::json();
        cj["hashes"] = c.hashes;
        cj["licenses"] = c.licenses;
        j["components"].push_back(std::move(cj));
    }
    j["dependency_entries"] = nlohmann::json::array();
    for (const auto& entry : doc.dependency_entries) {
        j["dependency_entries"].push_back({{"ref", entry.ref}, {"depends_on", entry.depends_on}});
    }
    j["direct_dependencies"] = nlohmann::json::array();
    for (const auto& gav : doc.direct_dependencies) j["direct_dependencies"].push_back(gav.text());
    j["unresolved_dependency_refs"] = doc.unresolved_dependency_refs;
    j["warnings"] = doc.warnings;
    return j;
}

SbomDocument sbom_document_from_json(const nlohmann::json& j) {
    SbomDocument doc;
    doc.standard = sbom_standard_from_string(j.at("standard").get<std::string>())
                       .value_or(SbomStandard::cyclonedx);
    doc.spec_version = j.at("spec_version").get<std::string>();
    doc.serialization = serialization_from_string(j.at("serialization").get<std::string>())
                            .value_or(Serialization::json);
    if (!j.at("created_at").is_null()) doc.created_at_ms = j["created_at"].get<std::int64_t>();
    for (const auto& t : j.at("tools")) {
        ToolInfo tool{t.at("name").get<std::string>(), std::nullopt};
        if (!t.at("version").is_null()) tool.version = t["version"].get<std::string>();
        doc.tools.push_back(std::move(tool));
    }
    if (!j.at("root_ref").is_null()) doc.root_ref = j["root_ref"].get<std::string>();
    for (const auto& cj : j.at("components")) {
        Component c;
        c.ref_id = cj.at("ref_id").get<std::string>();
        if (!cj.at("group").is_null()) c.group = cj["group"].get<std::string>();
        c.name = cj.at("name").get<std::string>();
        if (!cj.at("version").is_null()) c.version = cj["version"].get<std::string>();
        if (!cj.at("purl").is_null()) c.purl = cj["purl"].get<std::string>();
        c.hashes = cj.at("hashes").get<std::map<std::string, std::string>>();
        c.licenses = cj.at("licenses").get<std::vector<std::string>>();
        doc.components.push_back(std::move(c));
    }
    for (const auto& ej : j.at("dependency_entries")) {
        doc.dependency_entries.push_back(DependencyEntry{
            ej.at("ref").get<std::string>(), ej.at("depends_on").get<std::vector<std::string>>()});
    }
    for (const auto& d : j.at("direct_dependencies")) {
        doc.direct_dependencies.push_back(parse_gav(d.get<std::string>()));
    }
    doc.unresolved_dependency_refs = j.at("unresolved_dependency_refs").get<std::vector<std::string>>();
    doc.warnings = j.at("warnings").get<std::vector<std::string>>();
    return doc;
}

}  // namespace sbomaudit
