#include "pdnet/jsonl.hpp"

#include <cstdio>
#include <fstream>

namespace pdnet {

namespace {

void set_optional(json& j, const char* key, const std::optional<std::string>& v) {
    if (v) j[key] = *v;
}

std::optional<std::string> get_optional(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    return it->get<std::string>();
}

}  // namespace

json to_json(const Section& s) {
    return json{{"heading", s.heading}, {"body", s.body}};
}

json to_json(const Paper& p) {
    json sections = json::array();
    for (const auto& s : p.sections) sections.push_back(to_json(s));
    return json{{"paper_id", p.paper_id},
                {"title", p.title},
                {"abstract", p.abstract},
                {"sections", sections},
                {"source_path", p.source_path}};
}

Paper paper_from_json(const json& j) {
    Paper p;
    p.paper_id = j.at("paper_id").get<std::string>();
    p.title = j.value("title", "");
    p.abstract = j.value("abstract", "");
    p.source_path = j.value("source_path", "");
    if (j.contains("sections")) {
        for (const auto& s : j.at("sections")) {
            p.sections.push_back(Section{s.at("heading").get<std::string>(),
                                         s.at("body").get<std::string>()});
        }
    }
    if (p.paper_id.empty()) throw ParseFailed("paper_id must be nonempty");
    return p;
}

json to_json(const DatasetDescription& d) {
    json j{{"description_id", d.description_id}, {"paper_id", d.paper_id}};
    set_optional(j, "dataset_name", d.dataset_name);
    set_optional(j, "paper_title", d.paper_title);
    set_optional(j, "dataset_summary", d.dataset_summary);
    set_optional(j, "data_type", d.data_type);
    set_optional(j, "task", d.task);
    set_optional(j, "location", d.location);
    set_optional(j, "time", d.time);
    set_optional(j, "scale", d.scale);
    set_optional(j, "dataset_provider", d.dataset_provider);
    set_optional(j, "dataset_url", d.dataset_url);
    set_optional(j, "publicly_available", d.publicly_available);
    set_optional(j, "other_info", d.other_info);
    return j;
}

DatasetDescription description_from_json(const json& j) {
    DatasetDescription d;
    d.description_id = j.at("description_id").get<std::string>();
    d.paper_id = j.at("paper_id").get<std::string>();
    d.dataset_name = get_optional(j, "dataset_name");
    d.paper_title = get_optional(j, "paper_title");
    d.dataset_summary = get_optional(j, "dataset_summary");
    d.data_type = get_optional(j, "data_type");
    d.task = get_optional(j, "task");
    d.location = get_optional(j, "location");
    d.time = get_optional(j, "time");
    d.scale = get_optional(j, "scale");
    d.dataset_provider = get_optional(j, "dataset_provider");
    d.dataset_url = get_optional(j, "dataset_url");
    d.publicly_available = get_optional(j, "publicly_available");
    d.other_info = get_optional(j, "other_info");
    return d;
}

json to_json(const DatasetEntity& e) {
    return json{{"entity_id", e.entity_id},
                {"canonical_name", e.canonical_name},
                {"name_keys", e.name_keys},
                {"url_keys", e.url_keys},
                {"origin", to_string(e.origin)},
                {"uncertain", e.uncertain},
                {"mention_count", e.mention_count}};
}

DatasetEntity entity_from_json(const json& j) {
    DatasetEntity e;
    e.entity_id = j.at("entity_id").get<std::string>();
    e.canonical_name = j.at("canonical_name").get<std::string>();
    for (const auto& k : j.at("name_keys")) e.name_keys.insert(k.get<std::string>());
    for (const auto& k : j.value("url_keys", json::array()))
        e.url_keys.insert(k.get<std::string>());
    e.origin = entity_origin_from_string(j.value("origin", "imported"));
    e.uncertain = j.value("uncertain", false);
    e.mention_count = j.value("mention_count", 0ULL);
    return e;
}

json to_json(const Match& m) {
    return json{{"description_id", m.description_id},
                {"entity_id", m.entity_id},
                {"via", json{{"kind", to_string(m.via.kind)}, {"key", m.via.key}}},
                {"method", to_string(m.method)}};
}

Match match_from_json(const json& j) {
    Match m;
    m.description_id = j.at("description_id").get<std::string>();
    m.entity_id = j.at("entity_id").get<std::string>();
    const auto& via = j.at("via");
    m.via.kind = attribute_kind_from_string(via.at("kind").get<std::string>());
    m.via.key = via.at("key").get<std::string>();
    m.method = match_method_from_string(j.at("method").get<std::string>());
    return m;
}

json to_json(const ExtractionRun& r) {
    json steps = json::array();
    for (const auto& s : r.agent_steps)
        steps.push_back(json{{"purpose", s.purpose}, {"prompt", s.prompt}, {"output", s.output}});
    return json{{"paper_id", r.paper_id},
                {"strategy", to_string(r.strategy)},
                {"prompt_text", r.prompt_text},
                {"raw_output", r.raw_output},
                {"repaired_output", r.repaired_output},
                {"parse_ok", r.parse_ok},
                {"description_count", r.description_count},
                {"estimated_cost_tokens", r.estimated_cost_tokens},
                {"error", r.error},
                {"agent_steps", steps}};
}

ExtractionRun run_from_json(const json& j) {
    ExtractionRun r;
    r.paper_id = j.at("paper_id").get<std::string>();
    r.strategy = strategy_from_string(j.value("strategy", "truncated_sections"));
    r.prompt_text = j.value("prompt_text", "");
    r.raw_output = j.value("raw_output", "");
    r.repaired_output = j.value("repaired_output", "");
    r.parse_ok = j.value("parse_ok", false);
    r.description_count = j.value("description_count", std::size_t{0});
    r.estimated_cost_tokens = j.value("estimated_cost_tokens", std::size_t{0});
    r.error = j.value("error", "");
    for (const auto& s : j.value("agent_steps", json::array()))
        r.agent_steps.push_back(AgentStep{s.value("purpose", ""), s.value("prompt", ""),
                                          s.value("output", "")});
    return r;
}

namespace {

void atomic_write(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ExportError("cannot open for writing: " + tmp.string());
        out << content;
        if (!out.good()) throw ExportError("write failed: " + tmp.string());
    }
    fs::rename(tmp, path);
}

}  // namespace

void write_jsonl(const std::filesystem::path& path, const std::vector<json>& rows) {
    std::string buf;
    for (const auto& row : rows) {
        buf += row.dump();
        buf += '\n';
    }
    atomic_write(path, buf);
}

std::vector<json> read_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseFailed("cannot open: " + path.string());
    std::vector<json> rows;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            rows.push_back(json::parse(line));
        } catch (const json::parse_error& e) {
            throw ParseFailed(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return rows;
}

void write_json_file(const std::filesystem::path& path, const json& doc) {
    atomic_write(path, doc.dump(2) + "\n");
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseFailed("cannot open: " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseFailed(path.string() + ": " + e.what());
    }
}

}  // namespace pdnet
