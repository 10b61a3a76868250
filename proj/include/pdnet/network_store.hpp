#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "pdnet/extraction.hpp"
#include "pdnet/jsonl.hpp"
#include "pdnet/model.hpp"

namespace pdnet {

struct NetworkStats {
    std::size_t papers_extracted = 0;
    std::size_t descriptions_extracted = 0;
    std::size_t entities_covered = 0;
    std::size_t descriptions_matched_existing = 0;
    std::size_t new_entities = 0;
    std::size_t descriptions_matched_new = 0;
    double avg_descriptions_per_paper = 0.0;
    double success_rate = 0.0;
};

struct ImportReport {
    std::vector<std::string> skipped_lines;     // "line N: reason"
    std::vector<std::string> dropped_entities;  // duplicate-key losers
};

// JSONL, one entity per line: {"name": str, "aliases": [str], "url": str|null,
// "urls": [str]?}. Keys are normalized here; an entity whose key collides with
// an earlier one is dropped and reported (first wins).
std::vector<DatasetEntity> import_entities(const std::filesystem::path& path,
                                           ImportReport* report = nullptr);

PaperDatasetNetwork build_network(const std::vector<Paper>& papers,
                                  const std::vector<DatasetDescription>& descriptions,
                                  const std::vector<Match>& matches,
                                  const std::vector<DatasetEntity>& entities);

NetworkStats compute_stats(const PaperDatasetNetwork& network,
                           const std::vector<ExtractionRun>& runs);

json to_json(const NetworkStats& s);
NetworkStats stats_from_json(const json& j);

enum class GraphFormat { graphml, dot };

void export_graph(const PaperDatasetNetwork& network, GraphFormat format,
                  const std::filesystem::path& path);

// Single-document snapshot: papers, entities, descriptions, edges, and
// optionally the stats computed at build time (served verbatim later).
void save_network(const PaperDatasetNetwork& network, const std::filesystem::path& path,
                  const NetworkStats* stats = nullptr);

struct NetworkSnapshot {
    PaperDatasetNetwork network;
    bool has_stats = false;
    NetworkStats stats;
};

NetworkSnapshot load_network(const std::filesystem::path& path);

}  // namespace pdnet
