#pragma once

#include <filesystem>
#include <functional>
#include <vector>

#include <json.hpp>

namespace sbomaudit {

/// Reads a line-delimited JSON file; blank lines are skipped. Parse problems
/// raise syntax_error naming the file and line number.
std::vector<nlohmann::json> read_ndjson(const std::filesystem::path& path);

/// Streaming variant of read_ndjson for large files.
void for_each_ndjson(const std::filesystem::path& path,
                     const std::function<void(const nlohmann::json&, std::size_t)>& fn);

/// Writes records one per line, overwriting the file.
void write_ndjson(const std::filesystem::path& path,
                  const std::vector<nlohmann::json>& records);

}  // namespace sbomaudit
