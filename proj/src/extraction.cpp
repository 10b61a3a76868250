#include "pdnet/extraction.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <thread>

#include "pdnet/jsonl.hpp"

namespace pdnet {

namespace {

constexpr const char* kWireFields[] = {
    "arxiv id",
    "paper title",
    "dataset name",
    "dataset summary",
    "data type",
    "task",
    "location",
    "time",
    "scale",
    "dataset provider",
    "dataset url",
    "dataset publicly available",
    "other useful information about this dataset",
};

}  // namespace

std::string render_prompt(const PromptPayload& payload) {
    std::string out;
    out += "You are a computer science researcher reviewing an academic paper.\n\n";
    out += "Paper Information:\n";
    out += payload.text;
    out += "\n\n";
    out +=
        "Task Requirements:\n"
        "Identify every dataset that the paper uses, introduces, or evaluates on. "
        "Describe each dataset using only information contained in the paper text "
        "above. Do not invent values.\n\n";
    out += "Output Specification:\n";
    out +=
        "Output one JSON object per dataset and nothing else. Each object must "
        "contain exactly the following string-valued fields:\n";
    for (const char* field : kWireFields) {
        out += "  \"";
        out += field;
        out += "\"\n";
    }
    out +=
        "Use \"N/A\" for any field the paper does not specify. A paper may involve "
        "multiple datasets; generate a JSON format description for each dataset.\n";
    return out;
}

std::string render_summarize_prompt(const Section& section) {
    std::string out;
    out += "You are a computer science researcher skimming a paper.\n\n";
    out += "Summarize the main content of the following section in at most 50 words.\n\n";
    out += "Section:\n";
    out += section.heading;
    out += '\n';
    out += section.body;
    out += "\n\nSummary:";
    return out;
}

std::string render_select_prompt(const std::vector<std::string>& summaries) {
    std::string out;
    out += "You are a computer science researcher skimming a paper.\n\n";
    out +=
        "Below are numbered one-line summaries of the sections of a paper. Select "
        "every section likely to contain dataset-related information (datasets "
        "used, introduced, or evaluated). Respond with a JSON array of the "
        "selected section indices and nothing else.\n\n";
    for (std::size_t i = 0; i < summaries.size(); ++i) {
        out += std::to_string(i);
        out += ". ";
        out += summaries[i];
        out += '\n';
    }
    return out;
}

namespace {

bool is_value_line_start(char c) {
    return c == '{' || c == '}' || c == '"' || c == '[' || c == ']';
}

std::string excise_lines(const std::string& raw) {
    std::string out;
    std::size_t pos = 0;
    while (pos <= raw.size()) {
        std::size_t nl = raw.find('\n', pos);
        std::string_view line(raw.data() + pos,
                              (nl == std::string::npos ? raw.size() : nl) - pos);
        std::size_t first = line.find_first_not_of(" \t\r");
        if (first != std::string_view::npos && is_value_line_start(line[first])) {
            out.append(line);
            out += '\n';
        }
        if (nl == std::string::npos) break;
        pos = nl + 1;
    }
    if (!out.empty() && out.back() == '\n') out.pop_back();
    return out;
}

bool is_escape_char(char c) {
    return c == '"' || c == '\\' || c == '/' || c == 'b' || c == 'f' || c == 'n' ||
           c == 'r' || c == 't' || c == 'u';
}

void append_control_escape(std::string& out, unsigned char c) {
    switch (c) {
        case '\n': out += "\\n"; return;
        case '\t': out += "\\t"; return;
        case '\r': out += "\\r"; return;
        case '\b': out += "\\b"; return;
        case '\f': out += "\\f"; return;
        default: {
            char buf[8];
            std::snprintf(buf, sizeof buf, "\\u%04x", c);
            out += buf;
            return;
        }
    }
}

std::string fix_escapes(const std::string& raw) {
    std::string out;
    out.reserve(raw.size());
    bool in_string = false;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        char c = raw[i];
        if (!in_string) {
            if (c == '"') in_string = true;
            out += c;
            continue;
        }
        if (c == '"') {
            in_string = false;
            out += c;
            continue;
        }
        if (c == '\\') {
            char next = i + 1 < raw.size() ? raw[i + 1] : '\0';
            if (next == 'u') {
                bool hex4 = i + 5 < raw.size() &&
                            std::all_of(raw.begin() + i + 2, raw.begin() + i + 6,
                                        [](unsigned char h) { return std::isxdigit(h); });
                if (hex4) {
                    out.append(raw, i, 6);
                    i += 5;
                    continue;
                }
                out += "\\\\";
                continue;
            }
            if (is_escape_char(next)) {
                out += c;
                out += next;
                ++i;
                continue;
            }
            out += "\\\\";
            continue;
        }
        if (static_cast<unsigned char>(c) < 0x20) {
            append_control_escape(out, static_cast<unsigned char>(c));
            continue;
        }
        out += c;
    }
    return out;
}

std::string fix_commas(const std::string& raw) {
    // Trailing commas: drop any ',' whose next non-whitespace is '}' or ']'.
    std::string pass1;
    pass1.reserve(raw.size());
    bool in_string = false;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        char c = raw[i];
        if (in_string) {
            pass1 += c;
            if (c == '\\' && i + 1 < raw.size()) {
                pass1 += raw[++i];
            } else if (c == '"') {
                in_string = false;
            }
            continue;
        }
        if (c == '"') {
            in_string = true;
            pass1 += c;
            continue;
        }
        if (c == ',') {
            std::size_t j = i + 1;
            while (j < raw.size() &&
                   std::isspace(static_cast<unsigned char>(raw[j])))
                ++j;
            if (j < raw.size() && (raw[j] == '}' || raw[j] == ']')) continue;
        }
        pass1 += c;
    }

    // Missing commas: a line ending '"' or '}' followed by a line starting '"'
    // or '{' gets a comma appended.
    std::vector<std::string> lines;
    std::size_t pos = 0;
    while (pos <= pass1.size()) {
        std::size_t nl = pass1.find('\n', pos);
        lines.push_back(pass1.substr(pos, (nl == std::string::npos ? pass1.size() : nl) - pos));
        if (nl == std::string::npos) break;
        pos = nl + 1;
    }
    for (std::size_t i = 0; i + 1 < lines.size(); ++i) {
        std::size_t last = lines[i].find_last_not_of(" \t\r");
        if (last == std::string::npos) continue;
        char end = lines[i][last];
        if (end != '"' && end != '}') continue;
        std::size_t k = i + 1;
        std::size_t first = std::string::npos;
        while (k < lines.size() &&
               (first = lines[k].find_first_not_of(" \t\r")) == std::string::npos)
            ++k;
        if (k == lines.size() || first == std::string::npos) continue;
        char start = lines[k][first];
        if (start == '"' || start == '{') lines[i].insert(last + 1, 1, ',');
    }
    std::string out;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (i) out += '\n';
        out += lines[i];
    }
    return out;
}

}  // namespace

std::string repair_output(const std::string& raw) {
    if (json::accept(raw)) return raw;
    return fix_commas(fix_escapes(excise_lines(raw)));
}

namespace {

std::string trim_copy(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

// Values the model uses to say "no information" are treated as absent.
bool is_missing_marker(const std::string& s) {
    std::string t = trim_copy(s);
    for (char& c : t) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return t.empty() || t == "n/a" || t == "na" || t == "none" || t == "null" ||
           t == "unknown" || t == "not specified" || t == "not applicable" ||
           t == "unspecified";
}

std::optional<std::string> field_value(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return std::nullopt;
    std::string v = it->is_string() ? it->get<std::string>() : it->dump();
    if (is_missing_marker(v)) return std::nullopt;
    return v;
}

// Splits a concatenated stream of JSON objects on top-level brace balance,
// ignoring whitespace and commas between objects.
std::vector<std::string> split_objects(const std::string& text) {
    std::vector<std::string> chunks;
    int depth = 0;
    bool in_string = false;
    std::size_t start = std::string::npos;
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (in_string) {
            if (c == '\\') {
                ++i;
            } else if (c == '"') {
                in_string = false;
            }
            continue;
        }
        switch (c) {
            case '"': in_string = true; break;
            case '{':
                if (depth == 0) start = i;
                ++depth;
                break;
            case '}':
                if (depth > 0 && --depth == 0 && start != std::string::npos) {
                    chunks.push_back(text.substr(start, i - start + 1));
                    start = std::string::npos;
                }
                break;
            default:
                if (depth == 0 && c != ',' &&
                    !std::isspace(static_cast<unsigned char>(c)))
                    return {};
                break;
        }
    }
    if (depth != 0 || in_string) return {};
    return chunks;
}

DatasetDescription description_from_wire(const json& obj, const std::string& paper_id,
                                         std::size_t index) {
    DatasetDescription d;
    d.description_id = paper_id + "#d" + std::to_string(index);
    d.paper_id = paper_id;
    d.dataset_name = field_value(obj, "dataset name");
    d.paper_title = field_value(obj, "paper title");
    if (!d.paper_title) d.paper_title = field_value(obj, "title");
    d.dataset_summary = field_value(obj, "dataset summary");
    d.data_type = field_value(obj, "data type");
    d.task = field_value(obj, "task");
    d.location = field_value(obj, "location");
    d.time = field_value(obj, "time");
    d.scale = field_value(obj, "scale");
    d.dataset_provider = field_value(obj, "dataset provider");
    d.dataset_url = field_value(obj, "dataset url");
    if (!d.dataset_url) d.dataset_url = field_value(obj, "url");
    d.publicly_available = field_value(obj, "dataset publicly available");
    if (!d.publicly_available) d.publicly_available = field_value(obj, "publicly available");
    d.other_info = field_value(obj, "other useful information about this dataset");
    if (!d.other_info) d.other_info = field_value(obj, "other information");

    static const std::set<std::string> known = {
        "arxiv id", "paper title", "title", "dataset name", "dataset summary",
        "data type", "task", "location", "time", "scale", "dataset provider",
        "dataset url", "url", "dataset publicly available", "publicly available",
        "other useful information about this dataset", "other information"};
    std::string extras;
    for (const auto& [key, value] : obj.items()) {
        if (known.count(key)) continue;
        std::string v = value.is_string() ? value.get<std::string>() : value.dump();
        if (is_missing_marker(v)) continue;
        if (!extras.empty()) extras += "; ";
        extras += key + ": " + v;
    }
    if (!extras.empty()) {
        if (d.other_info)
            *d.other_info += "; " + extras;
        else
            d.other_info = extras;
    }
    return d;
}

}  // namespace

std::vector<DatasetDescription> parse_descriptions(const std::string& repaired,
                                                   const std::string& paper_id) {
    std::vector<json> objects;
    json doc = json::parse(repaired, nullptr, false);
    if (!doc.is_discarded()) {
        if (doc.is_object()) {
            objects.push_back(std::move(doc));
        } else if (doc.is_array()) {
            for (auto& el : doc)
                if (el.is_object()) objects.push_back(std::move(el));
        } else {
            throw ParseFailed("top-level JSON value is not an object or array");
        }
    } else {
        auto chunks = split_objects(repaired);
        if (chunks.empty()) throw ParseFailed("output is not parseable JSON");
        for (const auto& chunk : chunks) {
            json obj = json::parse(chunk, nullptr, false);
            if (obj.is_discarded() || !obj.is_object())
                throw ParseFailed("object in concatenated stream is not parseable");
            objects.push_back(std::move(obj));
        }
    }
    std::vector<DatasetDescription> out;
    out.reserve(objects.size());
    for (std::size_t i = 0; i < objects.size(); ++i)
        out.push_back(description_from_wire(objects[i], paper_id, i));
    return out;
}

namespace {

void finish_run(ExtractionRun& run, std::vector<DatasetDescription>& descriptions,
                const std::string& raw, const std::string& paper_id) {
    run.raw_output = raw;
    run.repaired_output = repair_output(raw);
    try {
        descriptions = parse_descriptions(run.repaired_output, paper_id);
        run.parse_ok = true;
        run.description_count = descriptions.size();
    } catch (const ParseFailed& e) {
        run.parse_ok = false;
        run.description_count = 0;
        run.error = e.what();
    }
}

ExtractionResult extract_agentic(const Paper& paper, CompletionClient& client,
                                 const ExtractOptions& options) {
    ExtractionResult result;
    ExtractionRun& run = result.run;
    run.paper_id = paper.paper_id;
    run.strategy = Strategy::agentic;

    std::vector<std::string> summaries;
    for (const auto& section : paper.sections) {
        std::string prompt = render_summarize_prompt(section);
        std::string output = client.complete(prompt);
        run.estimated_cost_tokens += estimate_tokens(prompt);
        run.agent_steps.push_back({"summarize", prompt, output});
        summaries.push_back(trim_copy(output));
    }

    std::vector<std::size_t> chosen;
    if (!summaries.empty()) {
        std::string prompt = render_select_prompt(summaries);
        std::string output = client.complete(prompt);
        run.estimated_cost_tokens += estimate_tokens(prompt);
        run.agent_steps.push_back({"select", prompt, output});
        json indices = json::parse(repair_output(output), nullptr, false);
        if (indices.is_array()) {
            for (const auto& idx : indices) {
                if (idx.is_number_unsigned() && idx.get<std::size_t>() < paper.sections.size())
                    chosen.push_back(idx.get<std::size_t>());
            }
            std::sort(chosen.begin(), chosen.end());
            chosen.erase(std::unique(chosen.begin(), chosen.end()), chosen.end());
        } else {
            run.error = "selector output was not a JSON array; no sections selected";
        }
    }

    Paper selected = paper;
    selected.sections.clear();
    for (std::size_t idx : chosen) selected.sections.push_back(paper.sections[idx]);
    PromptPayload payload = build_payload(selected, Strategy::full_text, options.budget,
                                          options.keywords);
    payload.strategy = Strategy::agentic;

    run.prompt_text = render_prompt(payload);
    std::string raw = client.complete(run.prompt_text);
    run.estimated_cost_tokens += estimate_tokens(run.prompt_text);
    finish_run(run, result.descriptions, raw, paper.paper_id);
    return result;
}

}  // namespace

ExtractionResult extract_paper(const Paper& paper, CompletionClient& client,
                               const ExtractOptions& options) {
    if (options.strategy == Strategy::agentic)
        return extract_agentic(paper, client, options);

    ExtractionResult result;
    ExtractionRun& run = result.run;
    run.paper_id = paper.paper_id;
    run.strategy = options.strategy;

    PromptPayload payload =
        build_payload(paper, options.strategy, options.budget, options.keywords);
    run.prompt_text = render_prompt(payload);
    run.estimated_cost_tokens = estimate_tokens(run.prompt_text);
    std::string raw = client.complete(run.prompt_text);
    finish_run(run, result.descriptions, raw, paper.paper_id);
    return result;
}

std::vector<ExtractionResult> extract_corpus(const std::vector<Paper>& papers,
                                             CompletionClient& client,
                                             const ExtractOptions& options) {
    std::vector<ExtractionResult> results(papers.size());
    std::atomic<std::size_t> next{0};
    std::size_t workers = std::max<std::size_t>(1, std::min(options.parallelism, papers.size()));

    auto work = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= papers.size()) return;
            try {
                results[i] = extract_paper(papers[i], client, options);
            } catch (const std::exception& e) {
                ExtractionRun run;
                run.paper_id = papers[i].paper_id;
                run.strategy = options.strategy;
                run.parse_ok = false;
                run.error = e.what();
                results[i] = ExtractionResult{std::move(run), {}};
            }
        }
    };

    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    return results;
}

}  // namespace pdnet
