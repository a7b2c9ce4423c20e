#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include <sbomaudit/sbom_parser.hpp>

#include "error_checks.hpp"

using namespace sbomaudit;

namespace {

std::string read_fixture(const std::string& name) {
    std::filesystem::path path = std::filesystem::path(SBOMAUDIT_FIXTURE_DIR) / "sboms" / name;
    std::ifstream in(path, std::ios::binary);
    REQUIRE_MESSAGE(in.good(), "missing fixture ", path.string());
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

SbomDocument parse_fixture(const std::string& name, SbomStandard standard, Serialization ser) {
    return parse_sbom(read_fixture(name), standard, ser);
}

}  // namespace

TEST_CASE("CycloneDX 1.5 json document parses to the expected model") {
    SbomDocument doc = parse_fixture("acme-widgets-3.1.4-cyclonedx.json",
                                     SbomStandard::cyclonedx, Serialization::json);

    CHECK(doc.standard == SbomStandard::cyclonedx);
    CHECK(doc.serialization == Serialization::json);
    CHECK(doc.spec_version == "1.5");
    REQUIRE(doc.created_at_ms.has_value());
    CHECK(*doc.created_at_ms == 1710498600000);  // 2024-03-15T10:30:00Z

    REQUIRE(doc.tools.size() == 1);
    CHECK(doc.tools[0].name == "cyclonedx-maven-plugin");
    CHECK(doc.tools[0].version == "2.7.11");

    REQUIRE(doc.root_ref.has_value());
    CHECK(*doc.root_ref == "pkg:maven/com.acme/acme-widgets@3.1.4");

    REQUIRE(doc.components.size() == 3);
    const Component& root = doc.components[0];
    CHECK(root.group == "com.acme");
    CHECK(root.name == "acme-widgets");
    CHECK(root.version == "3.1.4");
    CHECK(root.licenses == std::vector<std::string>{"Apache-2.0"});

    const Component& slf4j = doc.components[1];
    CHECK(slf4j.ref_id == "pkg:maven/org.slf4j/slf4j-api@2.0.13");
    CHECK(slf4j.group == "org.slf4j");
    CHECK(slf4j.name == "slf4j-api");
    CHECK(slf4j.version == "2.0.13");
    REQUIRE(slf4j.hashes.size() == 2);
    CHECK(slf4j.hashes.at("md5") == "3cd2b08ab9484b0c8b4e1b51a5d3e774");  // lowercased
    CHECK(slf4j.hashes.at("sha1") == "80229737f704b121a318bba5d5deacbcf395bc77");
    CHECK(slf4j.licenses == std::vector<std::string>{"MIT"});

    REQUIRE(doc.dependency_entries.size() == 2);
    CHECK(doc.dependency_entries[0].ref == *doc.root_ref);
    CHECK(doc.dependency_entries[0].depends_on.size() == 2);

    REQUIRE(doc.direct_dependencies.size() == 2);
    CHECK(doc.direct_dependencies[0] == Gav{"org.slf4j", "slf4j-api", "2.0.13"});
    CHECK(doc.direct_dependencies[1] == Gav{"com.acme", "acme-core", "3.1.4"});
    CHECK(doc.unresolved_dependency_refs.empty());
    CHECK(doc.warnings.empty());
}

TEST_CASE("CycloneDX json and xml siblings parse identically") {
    SbomDocument json_doc = parse_fixture("acme-widgets-3.1.4-cyclonedx.json",
                                          SbomStandard::cyclonedx, Serialization::json);
    SbomDocument xml_doc = parse_fixture("acme-widgets-3.1.4-cyclonedx.xml",
                                         SbomStandard::cyclonedx, Serialization::xml);
    CHECK(xml_doc.serialization == Serialization::xml);
    xml_doc.serialization = json_doc.serialization;
    CHECK(json_doc == xml_doc);
}

TEST_CASE("SPDX 2.3 json document parses to the expected model") {
    SbomDocument doc = parse_fixture("acme-reports-1.2.0.spdx.json", SbomStandard::spdx,
                                     Serialization::json);

    CHECK(doc.standard == SbomStandard::spdx);
    CHECK(doc.spec_version == "SPDX-2.3");
    REQUIRE(doc.created_at_ms.has_value());
    CHECK(*doc.created_at_ms == 1698912930000);  // 2023-11-02T08:15:30Z

    // SPDX creators carry no version; Organization entries are not tools.
    REQUIRE(doc.tools.size() == 1);
    CHECK(doc.tools[0].name == "spdx-maven-plugin");
    CHECK(!doc.tools[0].version.has_value());

    REQUIRE(doc.root_ref.has_value());
    CHECK(*doc.root_ref == "SPDXRef-Package-acme-reports");

    REQUIRE(doc.components.size() == 2);
    const Component& root = doc.components[0];
    CHECK(root.ref_id == "SPDXRef-Package-acme-reports");
    CHECK(root.group == "com.acme");  // reconciled from the purl
    CHECK(root.name == "acme-reports");
    CHECK(root.version == "1.2.0");
    CHECK(root.licenses == std::vector<std::string>{"Apache-2.0"});

    const Component& csv = doc.components[1];
    CHECK(csv.group == "org.apache.commons");
    CHECK(csv.name == "commons-csv");
    CHECK(csv.hashes.at("sha256") ==
          "d0af1c7a5a01784bfd35daf23047a2fa4e6bcb5f6fb1c58a72df1e86c0ac7dcb");

    REQUIRE(doc.dependency_entries.size() == 1);
    CHECK(doc.dependency_entries[0].ref == "SPDXRef-Package-acme-reports");
    CHECK(doc.dependency_entries[0].depends_on ==
          std::vector<std::string>{"SPDXRef-Package-commons-csv"});

    REQUIRE(doc.direct_dependencies.size() == 1);
    CHECK(doc.direct_dependencies[0] == Gav{"org.apache.commons", "commons-csv", "1.10.0"});
    CHECK(doc.warnings == std::vector<std::string>{"spdx dependency extraction is best-effort"});
}

TEST_CASE("SPDX json and xml siblings parse identically") {
    SbomDocument json_doc = parse_fixture("acme-reports-1.2.0.spdx.json", SbomStandard::spdx,
                                          Serialization::json);
    SbomDocument xml_doc = parse_fixture("acme-reports-1.2.0.spdx.xml", SbomStandard::spdx,
                                         Serialization::xml);
    CHECK(xml_doc.serialization == Serialization::xml);
    xml_doc.serialization = json_doc.serialization;
    CHECK(json_doc == xml_doc);
}

TEST_CASE("CycloneDX document without metadata.tools yields an empty tool list") {
    SbomDocument doc = parse_fixture("quiet-utils-0.9-cyclonedx.json", SbomStandard::cyclonedx,
                                     Serialization::json);
    CHECK(doc.tools.empty());
    CHECK(doc.spec_version == "1.4");
    CHECK(doc.created_at_ms == 1654041600000);  // 2022-06-01T00:00:00Z
    CHECK(doc.direct_dependencies.empty());
    CHECK(doc.warnings.empty());
}

TEST_CASE("CycloneDX 1.4 tool array and purl qualifiers are handled") {
    SbomDocument doc = parse_fixture("orc-examples-1.7.8-cyclonedx.json",
                                     SbomStandard::cyclonedx, Serialization::json);

    REQUIRE(doc.tools.size() == 1);
    CHECK(doc.tools[0] == ToolInfo{"cyclonedx-maven-plugin", "2.8.1"});
    CHECK(doc.created_at_ms == 1649964494000);  // 2022-04-14T19:28:14Z

    // ?type=jar qualifiers must not leak into coordinates.
    REQUIRE(doc.direct_dependencies.size() == 2);
    CHECK(doc.direct_dependencies[0] == Gav{"org.apache.hadoop", "hadoop-hdfs", "2.2.0"});
    CHECK(doc.direct_dependencies[1] == Gav{"org.apache.orc", "orc-core", "1.7.8"});
    CHECK(doc.unresolved_dependency_refs.empty());
    CHECK(doc.warnings.empty());
}

TEST_CASE("SPDX tool creators are versionless by construction") {
    SbomDocument doc = parse_fixture("legacy-data-4.0.spdx.json", SbomStandard::spdx,
                                     Serialization::json);
    CHECK(doc.spec_version == "SPDX-2.2");
    REQUIRE(doc.tools.size() == 1);
    CHECK(doc.tools[0].name == "spdx-sbt-plugin");
    CHECK(!doc.tools[0].version.has_value());
    CHECK(doc.created_at_ms == 1612325106000);  // 2021-02-03T04:05:06Z
    CHECK(doc.root_ref == "SPDXRef-Package-legacy-data");
    REQUIRE(doc.components.size() == 1);
    CHECK(!doc.components[0].group.has_value());
    CHECK(doc.components[0].version == "4.0");
    CHECK(doc.dependency_entries.empty());
    CHECK(doc.direct_dependencies.empty());
    CHECK(doc.warnings.empty());
}

TEST_CASE("dangling dependency refs are reported, resolvable ones still extracted") {
    SbomDocument doc = parse_fixture("broken-refs-1.0-cyclonedx.json", SbomStandard::cyclonedx,
                                     Serialization::json);
    CHECK(!doc.created_at_ms.has_value());
    REQUIRE(doc.direct_dependencies.size() == 1);
    CHECK(doc.direct_dependencies[0] == Gav{"org.yaml", "snakeyaml", "2.2"});
    CHECK(doc.unresolved_dependency_refs == std::vector<std::string>{"urn:missing-component"});
}

TEST_CASE("declared standard must match the document") {
    std::string cdx = read_fixture("acme-widgets-3.1.4-cyclonedx.json");
    std::string spdx = read_fixture("acme-reports-1.2.0.spdx.json");
    CHECK_AUDIT_THROWS(parse_sbom(cdx, SbomStandard::spdx, Serialization::json),
                       standard_mismatch);
    CHECK_AUDIT_THROWS(parse_sbom(spdx, SbomStandard::cyclonedx, Serialization::json),
                       standard_mismatch);

    std::string cdx_xml = read_fixture("acme-widgets-3.1.4-cyclonedx.xml");
    CHECK_AUDIT_THROWS(parse_sbom(cdx_xml, SbomStandard::spdx, Serialization::xml),
                       standard_mismatch);
    CHECK_AUDIT_THROWS(parse_sbom("<Document><name>x</name></Document>", SbomStandard::spdx,
                                  Serialization::xml),
                       standard_mismatch);
}

TEST_CASE("unreadable bytes raise syntax errors") {
    CHECK_AUDIT_THROWS(parse_sbom("{ not json", SbomStandard::cyclonedx, Serialization::json),
                       syntax_error);
    CHECK_AUDIT_THROWS(parse_sbom("<bom><unclosed>", SbomStandard::cyclonedx, Serialization::xml),
                       syntax_error);
}

TEST_CASE("unknown spec versions parse best-effort with a warning") {
    std::string cdx = R"({"bomFormat":"CycloneDX","specVersion":"9.9","version":1})";
    SbomDocument doc = parse_sbom(cdx, SbomStandard::cyclonedx, Serialization::json);
    REQUIRE(doc.warnings.size() == 1);
    CHECK(doc.warnings[0].find("unsupported CycloneDX spec version \"9.9\"") !=
          std::string::npos);

    std::string spdx = R"({"spdxVersion":"SPDX-3.0","SPDXID":"SPDXRef-DOCUMENT"})";
    doc = parse_sbom(spdx, SbomStandard::spdx, Serialization::json);
    REQUIRE(doc.warnings.size() == 1);
    CHECK(doc.warnings[0].find("unsupported SPDX spec version") != std::string::npos);
}

TEST_CASE("CycloneDX xml without a schema namespace is flagged") {
    std::string xml = R"(<bom version="1"><metadata/></bom>)";
    SbomDocument doc = parse_sbom(xml, SbomStandard::cyclonedx, Serialization::xml);
    CHECK(doc.spec_version.empty());
    REQUIRE(!doc.warnings.empty());
    CHECK(doc.warnings[0] == "CycloneDX xml document carries no schema namespace");
}

TEST_CASE("a root without its own dependency entry falls back to the first entry") {
    std::string cdx = R"({
      "bomFormat": "CycloneDX", "specVersion": "1.4", "version": 1,
      "metadata": {"component": {"bom-ref": "the-root", "name": "r", "group": "g", "version": "1"}},
      "components": [
        {"bom-ref": "dep-a", "group": "g", "name": "a", "version": "2"}
      ],
      "dependencies": [{"ref": "dep-a", "dependsOn": []}]
    })";
    SbomDocument doc = parse_sbom(cdx, SbomStandard::cyclonedx, Serialization::json);
    bool warned = false;
    for (const auto& w : doc.warnings) warned = warned || w.rfind("missing-root:", 0) == 0;
    CHECK(warned);
    CHECK(doc.direct_dependencies.empty());  // dep-a's entry has no dependsOn
}

TEST_CASE("purl disagreements are resolved in favor of the purl") {
    std::string cdx = R"({
      "bomFormat": "CycloneDX", "specVersion": "1.4", "version": 1,
      "metadata": {"component": {"bom-ref": "root", "group": "g", "name": "r", "version": "1"}},
      "components": [
        {"bom-ref": "c1", "group": "wrong.group", "name": "wrong-name", "version": "0.1",
         "purl": "pkg:maven/right.group/right-name@9.9"}
      ],
      "dependencies": [{"ref": "root", "dependsOn": ["c1"]}]
    })";
    SbomDocument doc = parse_sbom(cdx, SbomStandard::cyclonedx, Serialization::json);
    REQUIRE(doc.components.size() == 2);
    CHECK(doc.components[1].group == "right.group");
    CHECK(doc.components[1].name == "right-name");
    CHECK(doc.components[1].version == "9.9");
    bool warned = false;
    for (const auto& w : doc.warnings) {
        warned = warned || w.find("fields disagree with purl") != std::string::npos;
    }
    CHECK(warned);
    REQUIRE(doc.direct_dependencies.size() == 1);
    CHECK(doc.direct_dependencies[0] == Gav{"right.group", "right-name", "9.9"});
}

TEST_CASE("malformed component purls warn and leave the fields alone") {
    std::string cdx = R"({
      "bomFormat": "CycloneDX", "specVersion": "1.4", "version": 1,
      "components": [
        {"bom-ref": "c1", "group": "g", "name": "n", "version": "1",
         "purl": "pkg:maven/broken@1"}
      ]
    })";
    SbomDocument doc = parse_sbom(cdx, SbomStandard::cyclonedx, Serialization::json);
    REQUIRE(doc.components.size() == 1);
    CHECK(doc.components[0].group == "g");
    CHECK(doc.components[0].name == "n");
    bool warned = false;
    for (const auto& w : doc.warnings) {
        warned = warned || w.find("has malformed maven purl") != std::string::npos;
    }
    CHECK(warned);
}

TEST_CASE("maven purls parse, render, and round-trip") {
    auto gav = parse_maven_purl("pkg:maven/org.apache.orc/orc-examples@1.7.8?type=jar");
    REQUIRE(gav.has_value());
    CHECK(*gav == Gav{"org.apache.orc", "orc-examples", "1.7.8"});
    CHECK(render_maven_purl(*gav) == "pkg:maven/org.apache.orc/orc-examples@1.7.8");

    CHECK(parse_maven_purl("pkg:maven/a/b@1#sub/path") == Gav{"a", "b", "1"});
    CHECK(parse_maven_purl("pkg:maven/com.x%2Fy/n@1.0") == Gav{"com.x/y", "n", "1.0"});
    CHECK(!parse_maven_purl("pkg:npm/foo@1.0").has_value());
    CHECK(!parse_maven_purl("http://example.com").has_value());
    CHECK(!parse_maven_purl("pkg:").has_value());

    CHECK_AUDIT_THROWS(parse_maven_purl("pkg:maven/solo@1"), malformed_purl);
    CHECK_AUDIT_THROWS(parse_maven_purl("pkg:maven/g/a"), malformed_purl);
    CHECK_AUDIT_THROWS(parse_maven_purl("pkg:maven/g/a/extra@1"), malformed_purl);
    CHECK_AUDIT_THROWS(parse_maven_purl("pkg:maven/g/a@"), malformed_purl);

    // Round-trip over coordinates with characters that need escaping.
    std::mt19937 rng(7241);
    const std::string alphabet = "abcXYZ019.-_:@/?#%";
    auto random_segment = [&] {
        std::string s;
        std::size_t n = 1 + rng() % 8;
        for (std::size_t i = 0; i < n; ++i) s.push_back(alphabet[rng() % alphabet.size()]);
        return s;
    };
    for (int i = 0; i < 100; ++i) {
        Gav original{random_segment(), random_segment(), random_segment()};
        auto round = parse_maven_purl(render_maven_purl(original));
        REQUIRE(round.has_value());
        REQUIRE(*round == original);
    }
}

TEST_CASE("parsed documents survive the wire form") {
    struct Case {
        const char* file;
        SbomStandard standard;
        Serialization serialization;
    };
    const Case cases[] = {
        {"acme-widgets-3.1.4-cyclonedx.json", SbomStandard::cyclonedx, Serialization::json},
        {"acme-widgets-3.1.4-cyclonedx.xml", SbomStandard::cyclonedx, Serialization::xml},
        {"acme-reports-1.2.0.spdx.json", SbomStandard::spdx, Serialization::json},
        {"acme-reports-1.2.0.spdx.xml", SbomStandard::spdx, Serialization::xml},
        {"quiet-utils-0.9-cyclonedx.json", SbomStandard::cyclonedx, Serialization::json},
        {"orc-examples-1.7.8-cyclonedx.json", SbomStandard::cyclonedx, Serialization::json},
        {"legacy-data-4.0.spdx.json", SbomStandard::spdx, Serialization::json},
        {"broken-refs-1.0-cyclonedx.json", SbomStandard::cyclonedx, Serialization::json},
    };
    for (const auto& c : cases) {
        CAPTURE(c.file);
        SbomDocument doc = parse_fixture(c.file, c.standard, c.serialization);
        SbomDocument round = sbom_document_from_json(sbom_document_to_json(doc));
        REQUIRE(round == doc);
    }
}
