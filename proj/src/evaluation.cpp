#include "pdnet/evaluation.hpp"

#include <algorithm>
#include <cctype>
#include <regex>
#include <sstream>

#include "pdnet/extraction.hpp"
#include "pdnet/jsonl.hpp"
#include "pdnet/network_store.hpp"

namespace pdnet {

namespace {

double ratio(std::size_t num, std::size_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

double f1_of(double p, double r) { return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r); }

std::string canonicalize(const std::string& raw, const AliasTable& aliases) {
    std::string key = normalize_name(raw);
    auto it = aliases.find(key);
    return it == aliases.end() ? key : it->second;
}

std::set<std::string> canonical_set(const std::set<std::string>& raw, const AliasTable& aliases) {
    std::set<std::string> out;
    for (const auto& name : raw) {
        try {
            out.insert(canonicalize(name, aliases));
        } catch (const NormalizationEmpty&) {
        }
    }
    return out;
}

}  // namespace

ExtractionMetrics eval_extraction(
    const std::map<std::string, std::set<std::string>>& predictions,
    const std::vector<ExtractionGold>& gold, const AliasTable& aliases) {
    ExtractionMetrics m;
    std::size_t exact = 0;
    for (const auto& g : gold) {
        auto it = predictions.find(g.paper_id);
        if (it == predictions.end())
            throw EvalError("no prediction entry for gold paper " + g.paper_id);
        std::set<std::string> pred = canonical_set(it->second, aliases);
        std::set<std::string> want = canonical_set(g.datasets, aliases);
        for (const auto& name : pred) {
            if (want.count(name))
                ++m.tp;
            else
                ++m.fp;
        }
        for (const auto& name : want)
            if (!pred.count(name)) ++m.fn;
        if (pred == want) ++exact;
    }
    m.precision = ratio(m.tp, m.tp + m.fp);
    m.recall = ratio(m.tp, m.tp + m.fn);
    m.f1 = f1_of(m.precision, m.recall);
    m.emr = ratio(exact, gold.size());
    return m;
}

ErMetrics eval_er(const std::vector<Match>& predicted, const std::vector<ErGoldPair>& gold) {
    std::map<std::string, std::optional<std::string>> truth;
    for (const auto& g : gold) truth[g.description_id] = g.entity_id;

    std::set<std::string> seen;
    ErMetrics m;
    for (const auto& p : predicted) {
        if (!seen.insert(p.description_id).second)
            throw EvalError("duplicate prediction for description " + p.description_id);
        auto it = truth.find(p.description_id);
        if (it == truth.end())
            throw EvalError("gold does not cover predicted description " + p.description_id);
        if (it->second && *it->second == p.entity_id)
            ++m.tp;
        else
            ++m.fp;
    }
    for (const auto& g : gold) {
        if (!g.entity_id) continue;
        auto matched = std::any_of(predicted.begin(), predicted.end(), [&](const Match& p) {
            return p.description_id == g.description_id && p.entity_id == *g.entity_id;
        });
        if (!matched) ++m.fn;
    }
    m.precision = ratio(m.tp, m.tp + m.fp);
    m.recall = ratio(m.tp, m.tp + m.fn);
    m.f1 = f1_of(m.precision, m.recall);
    return m;
}

namespace {

// Splits a known name into segments at hyphens/underscores/spaces and at
// lower-to-upper camel-case boundaries, so "Mini-ImageNet" and "MiniImageNet"
// both become ["Mini", "Image", "Net"]. The match pattern then allows an
// optional [-_ ] at each seam, covering the usual spelling variants.
std::vector<std::string> name_segments(const std::string& name) {
    std::vector<std::string> segments;
    std::string current;
    for (std::size_t i = 0; i < name.size(); ++i) {
        char c = name[i];
        if (c == '-' || c == '_' || c == ' ') {
            if (!current.empty()) segments.push_back(std::move(current));
            current.clear();
            continue;
        }
        if (!current.empty() && std::isupper(static_cast<unsigned char>(c)) &&
            std::islower(static_cast<unsigned char>(name[i - 1]))) {
            segments.push_back(std::move(current));
            current.clear();
        }
        current.push_back(c);
    }
    if (!current.empty()) segments.push_back(std::move(current));
    return segments;
}

std::string regex_escape(const std::string& s) {
    static const std::string special = R"(\.^$|()[]{}*+?)";
    std::string out;
    for (char c : s) {
        if (special.find(c) != std::string::npos) out += '\\';
        out += c;
    }
    return out;
}

std::string paper_text(const Paper& p) {
    std::string text = p.title + "\n" + p.abstract;
    for (const auto& s : p.sections) {
        text += "\n";
        text += s.heading;
        text += "\n";
        text += s.body;
    }
    return text;
}

}  // namespace

std::map<std::string, std::set<std::string>> regex_baseline(
    const std::vector<Paper>& papers, const std::vector<std::string>& known_names) {
    if (known_names.empty()) throw EvalError("regex baseline needs a nonempty name list");

    std::vector<std::pair<std::string, std::regex>> patterns;
    for (const auto& name : known_names) {
        auto segments = name_segments(name);
        if (segments.empty()) continue;
        std::string pattern = "(^|[^A-Za-z0-9])";
        for (std::size_t i = 0; i < segments.size(); ++i) {
            if (i) pattern += "[-_ ]?";
            pattern += regex_escape(segments[i]);
        }
        pattern += "([^A-Za-z0-9]|$)";
        patterns.emplace_back(name, std::regex(pattern, std::regex::icase));
    }

    std::map<std::string, std::set<std::string>> hits;
    for (const auto& p : papers) {
        std::string text = paper_text(p);
        auto& found = hits[p.paper_id];
        for (const auto& [name, re] : patterns) {
            if (std::regex_search(text, re)) found.insert(name);
        }
    }
    return hits;
}

std::vector<ExtractionGold> load_extraction_gold(const std::filesystem::path& path) {
    std::vector<ExtractionGold> gold;
    for (const auto& row : read_jsonl(path)) {
        ExtractionGold g;
        g.paper_id = row.at("paper_id").get<std::string>();
        for (const auto& name : row.at("datasets")) g.datasets.insert(name.get<std::string>());
        gold.push_back(std::move(g));
    }
    return gold;
}

std::vector<ErGoldPair> load_er_gold(const std::filesystem::path& path) {
    std::vector<ErGoldPair> gold;
    for (const auto& row : read_jsonl(path)) {
        ErGoldPair g;
        g.description_id = row.at("description_id").get<std::string>();
        if (row.contains("entity_id") && !row.at("entity_id").is_null())
            g.entity_id = row.at("entity_id").get<std::string>();
        gold.push_back(std::move(g));
    }
    return gold;
}

AliasTable load_alias_table(const std::filesystem::path& path) {
    AliasTable table;
    for (const auto& row : read_jsonl(path)) {
        std::string canonical = normalize_name(row.at("canonical").get<std::string>());
        for (const auto& alias : row.at("aliases"))
            table[normalize_name(alias.get<std::string>())] = canonical;
    }
    return table;
}

namespace {

json to_json(const ExtractionMetrics& m) {
    return json{{"tp", m.tp},
                {"fp", m.fp},
                {"fn", m.fn},
                {"precision", m.precision},
                {"recall", m.recall},
                {"f1", m.f1},
                {"emr", m.emr}};
}

json to_json(const ErMetrics& m) {
    return json{{"tp", m.tp},       {"fp", m.fp},           {"fn", m.fn},
                {"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}};
}

}  // namespace

BenchmarkReport run_benchmark(const BenchmarkConfig& config) {
    CorpusLoad corpus = load_corpus(config.corpus_dir);
    std::vector<ExtractionGold> extraction_gold =
        load_extraction_gold(config.extraction_gold_path);
    std::vector<ErGoldPair> er_gold = load_er_gold(config.er_gold_path);
    AliasTable aliases;
    if (!config.alias_table_path.empty()) aliases = load_alias_table(config.alias_table_path);
    std::vector<DatasetEntity> entities = import_entities(config.entities_path);

    json doc;
    std::ostringstream table;
    table << "extraction (method: precision / recall / f1 / emr)\n";

    ReplayClient client(config.replay_dir);
    std::vector<DatasetDescription> descriptions;  // from the first strategy
    for (std::size_t si = 0; si < config.strategies.size(); ++si) {
        ExtractOptions options;
        options.strategy = config.strategies[si];
        auto results = extract_corpus(corpus.papers, client, options);
        std::map<std::string, std::set<std::string>> predictions;
        for (std::size_t i = 0; i < results.size(); ++i) {
            auto& bucket = predictions[corpus.papers[i].paper_id];
            for (const auto& d : results[i].descriptions)
                if (d.dataset_name) bucket.insert(*d.dataset_name);
            if (si == 0)
                for (const auto& d : results[i].descriptions) descriptions.push_back(d);
        }
        ExtractionMetrics m = eval_extraction(predictions, extraction_gold, aliases);
        std::string label = std::string("model_") + to_string(config.strategies[si]);
        doc["extraction"][label] = to_json(m);
        table << "  " << label << ": " << m.precision << " / " << m.recall << " / " << m.f1
              << " / " << m.emr << "\n";
    }

    {
        std::vector<std::string> known;
        for (const auto& e : entities) known.push_back(e.canonical_name);
        auto predictions = regex_baseline(corpus.papers, known);
        for (const auto& g : extraction_gold) predictions.try_emplace(g.paper_id);
        ExtractionMetrics m = eval_extraction(predictions, extraction_gold, aliases);
        doc["extraction"]["regex_baseline"] = to_json(m);
        table << "  regex_baseline: " << m.precision << " / " << m.recall << " / " << m.f1
              << " / " << m.emr << "\n";
    }

    table << "entity resolution (method: precision / recall / f1)\n";
    auto er_row = [&](const char* label, const std::vector<Match>& matches) {
        ErMetrics m = eval_er(matches, er_gold);
        doc["entity_resolution"][label] = to_json(m);
        table << "  " << label << ": " << m.precision << " / " << m.recall << " / " << m.f1
              << "\n";
    };
    er_row("name_matching", name_matching_baseline(descriptions, entities));
    er_row("graph_inference",
           graph_inference_baseline(descriptions, entities, config.resolution));
    ResolutionGraph graph = complete_and_refine(create_graph(descriptions, entities),
                                                config.resolution);
    er_row("graph_completion_inference", infer_matches(graph, descriptions));

    return {std::move(doc), table.str()};
}

}  // namespace pdnet
