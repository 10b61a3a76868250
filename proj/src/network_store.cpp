#include "pdnet/network_store.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "pdnet/jsonl.hpp"

namespace pdnet {

std::vector<DatasetEntity> import_entities(const std::filesystem::path& path,
                                           ImportReport* report) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseFailed("cannot open entity snapshot: " + path.string());

    std::vector<DatasetEntity> entities;
    std::map<std::pair<AttributeKind, std::string>, std::string> claimed;  // key -> name
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto skip = [&](const std::string& reason) {
            if (report)
                report->skipped_lines.push_back("line " + std::to_string(lineno) + ": " + reason);
        };
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) {
            skip("not a JSON object");
            continue;
        }
        if (!j.contains("name") || !j.at("name").is_string()) {
            skip("missing name");
            continue;
        }

        DatasetEntity e;
        e.canonical_name = j.at("name").get<std::string>();
        e.origin = EntityOrigin::imported;
        try {
            e.name_keys.insert(normalize_name(e.canonical_name));
        } catch (const NormalizationEmpty&) {
            skip("name normalizes to nothing: \"" + e.canonical_name + "\"");
            continue;
        }
        for (const auto& alias : j.value("aliases", json::array())) {
            if (!alias.is_string()) continue;
            try {
                e.name_keys.insert(normalize_name(alias.get<std::string>()));
            } catch (const NormalizationEmpty&) {
            }
        }
        std::vector<std::string> raw_urls;
        if (j.contains("url") && j.at("url").is_string())
            raw_urls.push_back(j.at("url").get<std::string>());
        for (const auto& u : j.value("urls", json::array()))
            if (u.is_string()) raw_urls.push_back(u.get<std::string>());
        for (const auto& raw : raw_urls) {
            try {
                e.url_keys.insert(normalize_url(raw));
            } catch (const UrlParseError&) {
            }
        }

        bool conflict = false;
        for (const auto& k : e.name_keys)
            if (claimed.count({AttributeKind::name, k})) conflict = true;
        for (const auto& k : e.url_keys)
            if (claimed.count({AttributeKind::url, k})) conflict = true;
        if (conflict) {
            if (report) report->dropped_entities.push_back(e.canonical_name);
            continue;
        }
        for (const auto& k : e.name_keys) claimed[{AttributeKind::name, k}] = e.canonical_name;
        for (const auto& k : e.url_keys) claimed[{AttributeKind::url, k}] = e.canonical_name;

        e.entity_id = entity_id_from_keys(e.name_keys, e.url_keys);
        entities.push_back(std::move(e));
    }
    return entities;
}

PaperDatasetNetwork build_network(const std::vector<Paper>& papers,
                                  const std::vector<DatasetDescription>& descriptions,
                                  const std::vector<Match>& matches,
                                  const std::vector<DatasetEntity>& entities) {
    PaperDatasetNetwork network;
    for (const auto& p : papers) network.add_paper({p.paper_id, p.title});
    for (const auto& e : entities) network.add_entity(e);
    for (const auto& d : descriptions) network.add_description(d);

    std::map<std::string, std::string> desc_paper;
    for (const auto& d : descriptions) desc_paper[d.description_id] = d.paper_id;

    std::map<std::string, std::uint64_t> mentions;
    for (const auto& m : matches) {
        auto it = desc_paper.find(m.description_id);
        if (it == desc_paper.end())
            throw BuildError("match references unknown description: " + m.description_id);
        network.add_edge({it->second, m.entity_id, m.description_id});
        ++mentions[m.entity_id];
    }
    for (auto& [id, count] : mentions) {
        DatasetEntity e = network.entities().at(id);
        e.mention_count = count;
        network.add_entity(std::move(e));
    }
    return network;
}

NetworkStats compute_stats(const PaperDatasetNetwork& network,
                           const std::vector<ExtractionRun>& runs) {
    NetworkStats stats;
    for (const auto& run : runs) {
        if (run.parse_ok) ++stats.papers_extracted;
        stats.descriptions_extracted += run.description_count;
    }
    if (!runs.empty())
        stats.success_rate = static_cast<double>(stats.papers_extracted) / runs.size();
    if (stats.papers_extracted > 0)
        stats.avg_descriptions_per_paper =
            static_cast<double>(stats.descriptions_extracted) / stats.papers_extracted;

    std::set<std::string> covered_imported, covered_discovered;
    for (const auto& edge : network.edges()) {
        const auto& entity = network.entities().at(edge.entity_id);
        if (entity.origin == EntityOrigin::imported) {
            ++stats.descriptions_matched_existing;
            covered_imported.insert(edge.entity_id);
        } else {
            ++stats.descriptions_matched_new;
            covered_discovered.insert(edge.entity_id);
        }
    }
    stats.entities_covered = covered_imported.size();
    stats.new_entities = covered_discovered.size();
    return stats;
}

namespace {

std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string dot_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    out += '"';
    return out;
}

std::string render_graphml(const PaperDatasetNetwork& network) {
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
        << "  <key id=\"kind\" for=\"node\" attr.name=\"kind\" attr.type=\"string\"/>\n"
        << "  <key id=\"canonical_name\" for=\"node\" attr.name=\"canonical_name\""
           " attr.type=\"string\"/>\n"
        << "  <key id=\"origin\" for=\"node\" attr.name=\"origin\" attr.type=\"string\"/>\n"
        << "  <key id=\"uncertain\" for=\"node\" attr.name=\"uncertain\""
           " attr.type=\"boolean\"/>\n"
        << "  <graph id=\"G\" edgedefault=\"undirected\">\n";
    for (const auto& [id, meta] : network.papers()) {
        out << "    <node id=\"" << xml_escape(id) << "\">"
            << "<data key=\"kind\">paper</data></node>\n";
    }
    for (const auto& [id, entity] : network.entities()) {
        out << "    <node id=\"" << xml_escape(id) << "\">"
            << "<data key=\"kind\">dataset</data>"
            << "<data key=\"canonical_name\">" << xml_escape(entity.canonical_name) << "</data>"
            << "<data key=\"origin\">" << to_string(entity.origin) << "</data>"
            << "<data key=\"uncertain\">" << (entity.uncertain ? "true" : "false") << "</data>"
            << "</node>\n";
    }
    std::size_t eid = 0;
    for (const auto& edge : network.edges()) {
        out << "    <edge id=\"e" << eid++ << "\" source=\"" << xml_escape(edge.paper_id)
            << "\" target=\"" << xml_escape(edge.entity_id) << "\"/>\n";
    }
    out << "  </graph>\n</graphml>\n";
    return out.str();
}

std::string render_dot(const PaperDatasetNetwork& network) {
    std::ostringstream out;
    out << "graph pdnet {\n";
    for (const auto& [id, meta] : network.papers())
        out << "  " << dot_quote(id) << " [kind=paper];\n";
    for (const auto& [id, entity] : network.entities()) {
        out << "  " << dot_quote(id) << " [kind=dataset, canonical_name="
            << dot_quote(entity.canonical_name) << ", origin=" << to_string(entity.origin)
            << ", uncertain=" << (entity.uncertain ? "true" : "false") << "];\n";
    }
    for (const auto& edge : network.edges())
        out << "  " << dot_quote(edge.paper_id) << " -- " << dot_quote(edge.entity_id) << ";\n";
    out << "}\n";
    return out.str();
}

void write_text_atomic(const std::filesystem::path& path, const std::string& content) {
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

void export_graph(const PaperDatasetNetwork& network, GraphFormat format,
                  const std::filesystem::path& path) {
    write_text_atomic(path, format == GraphFormat::graphml ? render_graphml(network)
                                                           : render_dot(network));
}

json to_json(const NetworkStats& s) {
    return json{{"papers_extracted", s.papers_extracted},
                {"descriptions_extracted", s.descriptions_extracted},
                {"entities_covered", s.entities_covered},
                {"descriptions_matched_existing", s.descriptions_matched_existing},
                {"new_entities", s.new_entities},
                {"descriptions_matched_new", s.descriptions_matched_new},
                {"avg_descriptions_per_paper", s.avg_descriptions_per_paper},
                {"success_rate", s.success_rate}};
}

NetworkStats stats_from_json(const json& j) {
    NetworkStats s;
    s.papers_extracted = j.value("papers_extracted", std::size_t{0});
    s.descriptions_extracted = j.value("descriptions_extracted", std::size_t{0});
    s.entities_covered = j.value("entities_covered", std::size_t{0});
    s.descriptions_matched_existing = j.value("descriptions_matched_existing", std::size_t{0});
    s.new_entities = j.value("new_entities", std::size_t{0});
    s.descriptions_matched_new = j.value("descriptions_matched_new", std::size_t{0});
    s.avg_descriptions_per_paper = j.value("avg_descriptions_per_paper", 0.0);
    s.success_rate = j.value("success_rate", 0.0);
    return s;
}

void save_network(const PaperDatasetNetwork& network, const std::filesystem::path& path,
                  const NetworkStats* stats) {
    json doc;
    json papers = json::array();
    for (const auto& [id, meta] : network.papers())
        papers.push_back(json{{"paper_id", meta.paper_id}, {"title", meta.title}});
    json entities = json::array();
    for (const auto& [id, entity] : network.entities()) entities.push_back(to_json(entity));
    json descriptions = json::array();
    for (const auto& [id, d] : network.descriptions()) descriptions.push_back(to_json(d));
    json edges = json::array();
    for (const auto& edge : network.edges())
        edges.push_back(json{{"paper_id", edge.paper_id},
                             {"entity_id", edge.entity_id},
                             {"description_id", edge.description_id}});
    doc["papers"] = std::move(papers);
    doc["entities"] = std::move(entities);
    doc["descriptions"] = std::move(descriptions);
    doc["edges"] = std::move(edges);
    if (stats) doc["stats"] = to_json(*stats);
    write_json_file(path, doc);
}

NetworkSnapshot load_network(const std::filesystem::path& path) {
    json doc = read_json_file(path);
    NetworkSnapshot snapshot;
    for (const auto& p : doc.value("papers", json::array()))
        snapshot.network.add_paper({p.at("paper_id").get<std::string>(), p.value("title", "")});
    for (const auto& e : doc.value("entities", json::array()))
        snapshot.network.add_entity(entity_from_json(e));
    for (const auto& d : doc.value("descriptions", json::array()))
        snapshot.network.add_description(description_from_json(d));
    for (const auto& e : doc.value("edges", json::array()))
        snapshot.network.add_edge({e.at("paper_id").get<std::string>(),
                                   e.at("entity_id").get<std::string>(),
                                   e.at("description_id").get<std::string>()});
    if (doc.contains("stats")) {
        snapshot.has_stats = true;
        snapshot.stats = stats_from_json(doc.at("stats"));
    }
    return snapshot;
}

}  // namespace pdnet
