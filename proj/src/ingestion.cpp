#include "pdnet/ingestion.hpp"

#include <algorithm>
#include <cctype>

#include "pdnet/jsonl.hpp"

namespace pdnet {

const std::vector<std::string> kDefaultSectionKeywords = {
    "experiment", "dataset", "data", "evaluation", "benchmark", "setup"};

const char* to_string(Strategy s) {
    switch (s) {
        case Strategy::truncated_sections: return "truncated_sections";
        case Strategy::full_text: return "full_text";
        case Strategy::agentic: return "agentic";
    }
    throw InvariantViolation("bad Strategy");
}

Strategy strategy_from_string(const std::string& s) {
    if (s == "truncated_sections" || s == "truncated") return Strategy::truncated_sections;
    if (s == "full_text" || s == "full") return Strategy::full_text;
    if (s == "agentic") return Strategy::agentic;
    throw ParseFailed("unknown strategy: " + s);
}

CorpusLoad load_corpus(const std::filesystem::path& root) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(root)) throw CorpusNotFound("no such corpus directory: " + root.string());

    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(root)) {
        if (!entry.is_regular_file()) continue;
        if (entry.path().filename().string().ends_with(".paper.json"))
            files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());

    CorpusLoad result;
    for (const auto& path : files) {
        try {
            Paper p = paper_from_json(read_json_file(path));
            p.source_path = path.string();
            result.papers.push_back(std::move(p));
        } catch (const std::exception& e) {
            result.skipped.push_back({path.string(), e.what()});
        }
    }
    return result;
}

namespace {

std::string ascii_lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

}  // namespace

std::vector<Section> select_sections(const Paper& paper,
                                     const std::vector<std::string>& keywords) {
    std::vector<Section> out;
    for (const auto& sec : paper.sections) {
        std::string heading = ascii_lower(sec.heading);
        for (const auto& kw : keywords) {
            if (heading.find(kw) != std::string::npos) {
                out.push_back(sec);
                break;
            }
        }
    }
    return out;
}

std::size_t estimate_tokens(const std::string& text) {
    std::size_t words = 0;
    bool in_word = false;
    for (unsigned char c : text) {
        bool ws = std::isspace(c) != 0;
        if (!ws && !in_word) ++words;
        in_word = !ws;
    }
    return (words * 4 + 2) / 3;
}

std::string truncate_words(const std::string& text, std::size_t max_words) {
    std::size_t words = 0;
    bool in_word = false;
    std::size_t cut = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        bool ws = std::isspace(static_cast<unsigned char>(text[i])) != 0;
        if (!ws) {
            if (!in_word) {
                ++words;
                if (words > max_words) return text.substr(0, cut);
            }
            cut = i + 1;
        }
        in_word = !ws;
    }
    return text;
}

namespace {

std::string join_sections(const std::vector<Section>& sections) {
    std::string out;
    for (const auto& sec : sections) {
        if (!out.empty()) out += "\n\n";
        out += sec.heading;
        out += '\n';
        out += sec.body;
    }
    return out;
}

std::string title_abstract(const Paper& paper) {
    std::string out = paper.title;
    if (!out.empty() && !paper.abstract.empty()) out += "\n\n";
    out += paper.abstract;
    return out;
}

}  // namespace

PromptPayload build_payload(const Paper& paper, Strategy strategy, std::size_t budget,
                            const std::vector<std::string>& keywords) {
    PromptPayload payload;
    payload.paper_id = paper.paper_id;
    payload.strategy = strategy;

    std::string head = title_abstract(paper);
    switch (strategy) {
        case Strategy::truncated_sections: {
            // estimate_tokens(w words) <= budget  <=>  w <= 3*budget/4
            std::size_t max_words = budget * 3 / 4;
            std::string body = truncate_words(join_sections(select_sections(paper, keywords)),
                                              max_words);
            payload.text = head;
            if (!body.empty()) {
                if (!payload.text.empty()) payload.text += "\n\n";
                payload.text += body;
            }
            break;
        }
        case Strategy::full_text: {
            std::string body = join_sections(paper.sections);
            payload.text = head;
            if (!body.empty()) {
                if (!payload.text.empty()) payload.text += "\n\n";
                payload.text += body;
            }
            break;
        }
        case Strategy::agentic:
            payload.text = head;
            break;
    }
    payload.estimated_tokens = estimate_tokens(payload.text);
    return payload;
}

}  // namespace pdnet
