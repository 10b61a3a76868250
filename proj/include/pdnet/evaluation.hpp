#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pdnet/ingestion.hpp"
#include "pdnet/jsonl.hpp"
#include "pdnet/model.hpp"
#include "pdnet/resolution.hpp"

namespace pdnet {

struct ExtractionGold {
    std::string paper_id;
    std::set<std::string> datasets;  // raw canonical names
};

struct ErGoldPair {
    std::string description_id;
    std::optional<std::string> entity_id;  // nullopt: no corresponding entity exists
};

// normalized alias key -> normalized canonical key
using AliasTable = std::map<std::string, std::string>;

struct ExtractionMetrics {
    std::size_t tp = 0, fp = 0, fn = 0;
    double precision = 0.0, recall = 0.0, f1 = 0.0;
    double emr = 0.0;
};

struct ErMetrics {
    std::size_t tp = 0, fp = 0, fn = 0;
    double precision = 0.0, recall = 0.0, f1 = 0.0;
};

// Micro-averaged set metrics over per-paper dataset-name sets; names on both
// sides go through normalize_name and then the alias table. Every gold paper
// must have a prediction entry (possibly empty).
ExtractionMetrics eval_extraction(
    const std::map<std::string, std::set<std::string>>& predictions,
    const std::vector<ExtractionGold>& gold, const AliasTable& aliases);

// Description-level pair metrics. Gold must cover every predicted
// description; a null gold entity makes any prediction for it a false
// positive.
ErMetrics eval_er(const std::vector<Match>& predicted, const std::vector<ErGoldPair>& gold);

// Scans each paper's full text for every known name, tolerating hyphen/space/
// camel-case segmentation variants, as word-bounded case-insensitive patterns.
std::map<std::string, std::set<std::string>> regex_baseline(
    const std::vector<Paper>& papers, const std::vector<std::string>& known_names);

struct BenchmarkConfig {
    std::filesystem::path corpus_dir;
    std::filesystem::path replay_dir;
    std::filesystem::path entities_path;
    std::filesystem::path extraction_gold_path;
    std::filesystem::path er_gold_path;
    std::filesystem::path alias_table_path;  // optional
    std::vector<Strategy> strategies = {Strategy::truncated_sections};
    ResolutionConfig resolution;
};

struct BenchmarkReport {
    json document;
    std::string table;  // human-readable rendering of the same numbers
};

std::vector<ExtractionGold> load_extraction_gold(const std::filesystem::path& path);
std::vector<ErGoldPair> load_er_gold(const std::filesystem::path& path);
AliasTable load_alias_table(const std::filesystem::path& path);

BenchmarkReport run_benchmark(const BenchmarkConfig& config);

}  // namespace pdnet
