#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "pdnet/model.hpp"

namespace pdnet {

enum class Strategy { truncated_sections, full_text, agentic };

const char* to_string(Strategy s);
Strategy strategy_from_string(const std::string& s);

struct PromptPayload {
    std::string paper_id;
    Strategy strategy = Strategy::truncated_sections;
    std::string text;
    std::size_t estimated_tokens = 0;
};

struct CorpusSkip {
    std::string path;
    std::string reason;
};

struct CorpusLoad {
    std::vector<Paper> papers;
    std::vector<CorpusSkip> skipped;
};

// Keywords matched as substrings against lowercased section headings.
extern const std::vector<std::string> kDefaultSectionKeywords;

// Scans `root` for *.paper.json files (lexicographic order). Files that fail
// to parse are collected in `skipped` rather than aborting the load.
CorpusLoad load_corpus(const std::filesystem::path& root);

std::vector<Section> select_sections(const Paper& paper,
                                     const std::vector<std::string>& keywords);

// ceil(word_count * 4/3); words are maximal runs of non-whitespace.
std::size_t estimate_tokens(const std::string& text);

// Longest prefix of `text` containing at most `max_words` whole words.
std::string truncate_words(const std::string& text, std::size_t max_words);

PromptPayload build_payload(const Paper& paper, Strategy strategy,
                            std::size_t budget = 1500,
                            const std::vector<std::string>& keywords = kDefaultSectionKeywords);

}  // namespace pdnet
