#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pdnet/extraction.hpp"
#include "pdnet/model.hpp"

namespace pdnet {

using json = nlohmann::json;

json to_json(const Section& s);
json to_json(const Paper& p);
json to_json(const DatasetDescription& d);
json to_json(const DatasetEntity& e);
json to_json(const Match& m);
json to_json(const ExtractionRun& r);

Paper paper_from_json(const json& j);
DatasetDescription description_from_json(const json& j);
DatasetEntity entity_from_json(const json& j);
Match match_from_json(const json& j);
ExtractionRun run_from_json(const json& j);

// JSONL: one compact JSON document per line. Writes go to a temp file that is
// renamed into place once complete.
void write_jsonl(const std::filesystem::path& path, const std::vector<json>& rows);
std::vector<json> read_jsonl(const std::filesystem::path& path);

// Whole-document variants with the same atomic-write discipline.
void write_json_file(const std::filesystem::path& path, const json& doc);
json read_json_file(const std::filesystem::path& path);

}  // namespace pdnet
