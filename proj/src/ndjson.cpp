#include "sbomaudit/ndjson.hpp"

#include <fstream>

#include "sbomaudit/errors.hpp"

namespace sbomaudit {

void for_each_ndjson(const std::filesystem::path& path,
                     const std::function<void(const nlohmann::json&, std::size_t)>& fn) {
    std::ifstream in(path);
    if (!in) {
        fail(ErrorKind::io_error, "cannot open " + path.string());
    }
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        nlohmann::json record;
        try {
            record = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& ex) {
            fail(ErrorKind::syntax_error,
                 path.filename().string() + ":" + std::to_string(line_number) + ": " + ex.what());
        }
        fn(record, line_number);
    }
}

std::vector<nlohmann::json> read_ndjson(const std::filesystem::path& path) {
    std::vector<nlohmann::json> records;
    for_each_ndjson(path, [&](const nlohmann::json& record, std::size_t) {
        records.push_back(record);
    });
    return records;
}

void write_ndjson(const std::filesystem::path& path,
                  const std::vector<nlohmann::json>& records) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        fail(ErrorKind::io_error, "cannot write " + path.string());
    }
    for (const auto& record : records) {
        out << record.dump() << "\n";
    }
    if (!out) {
        fail(ErrorKind::io_error, "failed writing " + path.string());
    }
}

}  // namespace sbomaudit
