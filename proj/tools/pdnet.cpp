#include <CLI11.hpp>

#include <iostream>

#include "pdnet/discovery.hpp"
#include "pdnet/evaluation.hpp"
#include "pdnet/extraction.hpp"
#include "pdnet/ingestion.hpp"
#include "pdnet/jsonl.hpp"
#include "pdnet/network_store.hpp"
#include "pdnet/resolution.hpp"
#include "pdnet/service.hpp"

namespace {

using namespace pdnet;

std::vector<Paper> read_papers(const std::filesystem::path& path) {
    std::vector<Paper> papers;
    for (const auto& row : read_jsonl(path)) papers.push_back(paper_from_json(row));
    return papers;
}

std::vector<DatasetDescription> read_descriptions(const std::filesystem::path& path) {
    std::vector<DatasetDescription> out;
    for (const auto& row : read_jsonl(path)) out.push_back(description_from_json(row));
    return out;
}

std::vector<DatasetEntity> read_entities_jsonl(const std::filesystem::path& path) {
    std::vector<DatasetEntity> out;
    for (const auto& row : read_jsonl(path)) out.push_back(entity_from_json(row));
    return out;
}

std::vector<Match> read_matches(const std::filesystem::path& path) {
    std::vector<Match> out;
    for (const auto& row : read_jsonl(path)) out.push_back(match_from_json(row));
    return out;
}

std::vector<ExtractionRun> read_runs(const std::filesystem::path& path) {
    std::vector<ExtractionRun> out;
    for (const auto& row : read_jsonl(path)) out.push_back(run_from_json(row));
    return out;
}

ResolutionConfig load_resolution_config(const std::filesystem::path& path) {
    ResolutionConfig config;
    config.warehouse_hosts = kDefaultWarehouseHosts;
    if (path.empty()) return config;
    json doc = read_json_file(path);
    config.iteration_limit = doc.value("iteration_limit", config.iteration_limit);
    config.lambda = doc.value("lambda", config.lambda);
    if (doc.contains("warehouse_hosts")) {
        config.warehouse_hosts.clear();
        for (const auto& h : doc.at("warehouse_hosts"))
            config.warehouse_hosts.insert(h.get<std::string>());
    } else if (doc.contains("warehouse_hosts_file")) {
        config.warehouse_hosts =
            load_warehouse_hosts(doc.at("warehouse_hosts_file").get<std::string>());
    }
    return config;
}

// "field~value" is a contains clause, "field=value" an equals clause.
QueryClause parse_where(const std::string& expr) {
    auto tilde = expr.find('~');
    auto eq = expr.find('=');
    std::size_t pos = std::min(tilde, eq);
    if (pos == std::string::npos || pos == 0)
        throw QueryError("cannot parse clause \"" + expr + "\"; expected field~value or field=value");
    return {expr.substr(0, pos),
            expr[pos] == '~' ? Predicate::contains : Predicate::equals,
            expr.substr(pos + 1)};
}

int cmd_ingest(const std::string& corpus, const std::string& out) {
    CorpusLoad load = load_corpus(corpus);
    std::vector<json> rows;
    for (const auto& p : load.papers) rows.push_back(to_json(p));
    write_jsonl(out, rows);
    for (const auto& skip : load.skipped)
        std::cerr << "skipped " << skip.path << ": " << skip.reason << "\n";
    std::cout << load.papers.size() << " papers, " << load.skipped.size() << " skipped\n";
    return 0;
}

int cmd_extract(const std::string& papers_path, const std::string& backend,
                const std::string& strategy, const std::string& out,
                const std::string& runs_path, const std::string& replay_dir,
                std::size_t parallelism, std::size_t budget) {
    std::vector<Paper> papers = read_papers(papers_path);
    ExtractOptions options;
    options.strategy = strategy_from_string(strategy);
    options.parallelism = parallelism;
    options.budget = budget;

    std::unique_ptr<CompletionClient> client;
    if (backend == "replay") {
        if (replay_dir.empty()) throw ExtractionUnavailable("--replay-dir is required for replay");
        client = std::make_unique<ReplayClient>(replay_dir);
    } else if (backend == "remote") {
        client = RemoteClient::from_env();
    } else if (backend == "mock") {
        client = std::make_unique<MockClient>();
    } else {
        throw ExtractionUnavailable("unknown backend: " + backend);
    }

    auto results = extract_corpus(papers, *client, options);
    std::vector<json> descriptions, runs;
    std::size_t failures = 0;
    for (const auto& r : results) {
        runs.push_back(to_json(r.run));
        if (!r.run.parse_ok) ++failures;
        for (const auto& d : r.descriptions) descriptions.push_back(to_json(d));
    }
    write_jsonl(out, descriptions);
    if (!runs_path.empty()) write_jsonl(runs_path, runs);
    std::cout << descriptions.size() << " descriptions from " << papers.size() << " papers ("
              << failures << " failed)\n";
    return failures == papers.size() && !papers.empty() ? 1 : 0;
}

int cmd_resolve(const std::string& descriptions_path, const std::string& entities_path,
                const std::string& config_path, const std::string& matches_path,
                const std::string& new_entities_path, const std::string& report_path) {
    auto descriptions = read_descriptions(descriptions_path);
    ImportReport import_report;
    auto entities = import_entities(entities_path, &import_report);
    ResolutionConfig config = load_resolution_config(config_path);

    ResolutionGraph graph = complete_and_refine(create_graph(descriptions, entities), config);
    std::vector<Match> matches = infer_matches(graph, descriptions);

    std::set<std::string> matched;
    for (const auto& m : matches) matched.insert(m.description_id);
    std::vector<DatasetDescription> unmatched;
    for (const auto& d : descriptions)
        if (!matched.count(d.description_id)) unmatched.push_back(d);

    DiscoveryResult discovery = discover_new_entities(unmatched, graph, config);

    std::vector<json> match_rows;
    for (const auto& m : matches) match_rows.push_back(to_json(m));
    for (const auto& m : discovery.matches) match_rows.push_back(to_json(m));
    write_jsonl(matches_path, match_rows);

    std::vector<json> entity_rows;
    for (const auto& e : discovery.entities) entity_rows.push_back(to_json(e));
    write_jsonl(new_entities_path, entity_rows);

    if (!report_path.empty()) {
        json removed = json::array();
        for (const auto& r : graph.removed_i_nodes)
            removed.push_back(json{{"kind", to_string(r.attribute.kind)},
                                   {"key", r.attribute.key},
                                   {"reason", r.reason}});
        json conflicts = json::array();
        for (const auto& c : graph.import_conflicts)
            conflicts.push_back(json{{"kind", to_string(c.attribute.kind)},
                                     {"key", c.attribute.key},
                                     {"kept", c.kept_entity},
                                     {"dropped", c.dropped_entity}});
        json report{{"passes_run", graph.passes_run},
                    {"completion_edges_added", graph.completion_edges_added},
                    {"removed_i_nodes", removed},
                    {"import_conflicts", conflicts},
                    {"entities_imported", entities.size()},
                    {"import_skipped_lines", import_report.skipped_lines},
                    {"import_dropped_entities", import_report.dropped_entities},
                    {"descriptions", descriptions.size()},
                    {"matched_existing", matches.size()},
                    {"new_entities", discovery.entities.size()},
                    {"matched_new", discovery.matches.size()},
                    {"unmatched", unmatched.size() - discovery.matches.size()}};
        write_json_file(report_path, report);
    }
    std::cout << matches.size() << " matched to existing entities, " << discovery.entities.size()
              << " new entities (" << discovery.matches.size() << " descriptions), "
              << unmatched.size() - discovery.matches.size() << " unmatched\n";
    return 0;
}

int cmd_build(const std::string& papers_path, const std::string& descriptions_path,
              const std::string& matches_path, const std::string& entities_path,
              const std::string& new_entities_path, const std::string& runs_path,
              const std::string& out) {
    auto papers = read_papers(papers_path);
    auto descriptions = read_descriptions(descriptions_path);
    auto matches = read_matches(matches_path);
    auto entities = import_entities(entities_path);
    if (!new_entities_path.empty())
        for (auto& e : read_entities_jsonl(new_entities_path)) entities.push_back(std::move(e));

    PaperDatasetNetwork network = build_network(papers, descriptions, matches, entities);
    if (!runs_path.empty()) {
        NetworkStats stats = compute_stats(network, read_runs(runs_path));
        save_network(network, out, &stats);
    } else {
        save_network(network, out);
    }
    std::cout << "network: " << network.papers().size() << " papers, "
              << network.entities().size() << " entities, " << network.edges().size()
              << " edges -> " << out << "\n";
    return 0;
}

int cmd_stats(const std::string& network_path) {
    NetworkSnapshot snapshot = load_network(network_path);
    NetworkStats stats =
        snapshot.has_stats ? snapshot.stats : compute_stats(snapshot.network, {});
    std::cout << to_json(stats).dump(2) << "\n";
    return 0;
}

int cmd_export(const std::string& network_path, const std::string& format,
               const std::string& out) {
    NetworkSnapshot snapshot = load_network(network_path);
    GraphFormat f;
    if (format == "graphml")
        f = GraphFormat::graphml;
    else if (format == "dot")
        f = GraphFormat::dot;
    else
        throw ExportError("unknown format: " + format);
    export_graph(snapshot.network, f, out);
    return 0;
}

int cmd_query(const std::string& network_path, const std::vector<std::string>& wheres) {
    NetworkSnapshot snapshot = load_network(network_path);
    QueryFilter filter;
    for (const auto& w : wheres) filter.clauses.push_back(parse_where(w));
    json rows = json::array();
    for (const auto& d : query_datasets(snapshot.network, filter)) rows.push_back(to_json(d));
    std::cout << rows.dump(2) << "\n";
    return 0;
}

int cmd_similar(const std::string& network_path, const std::string& seed, std::size_t k,
                double c) {
    NetworkSnapshot snapshot = load_network(network_path);
    RwrParams params;
    params.top_k = k;
    params.restart_prob = c;
    json rows = json::array();
    for (const auto& s : similar_datasets(snapshot.network, seed, params)) {
        rows.push_back(json{{"entity_id", s.entity_id},
                            {"canonical_name",
                             snapshot.network.entities().at(s.entity_id).canonical_name},
                            {"score", s.score}});
    }
    std::cout << rows.dump(2) << "\n";
    return 0;
}

int cmd_serve(const std::string& network_path, const std::string& addr) {
    auto colon = addr.rfind(':');
    if (colon == std::string::npos) throw QueryError("--addr must be HOST:PORT");
    std::string host = addr.substr(0, colon);
    int port = std::stoi(addr.substr(colon + 1));
    DiscoveryService service(network_path);
    std::cerr << "serving " << network_path << " on " << host << ":" << port << "\n";
    if (!service.listen(host, port)) {
        std::cerr << "cannot bind " << addr << "\n";
        return 1;
    }
    return 0;
}

int cmd_eval(const std::string& task, const std::string& gold_path,
             const std::string& predictions_path, const std::string& matches_path,
             const std::string& alias_path) {
    if (task == "extraction") {
        auto gold = load_extraction_gold(gold_path);
        std::map<std::string, std::set<std::string>> predictions;
        for (const auto& row : read_jsonl(predictions_path)) {
            auto& bucket = predictions[row.at("paper_id").get<std::string>()];
            for (const auto& name : row.at("datasets")) bucket.insert(name.get<std::string>());
        }
        AliasTable aliases;
        if (!alias_path.empty()) aliases = load_alias_table(alias_path);
        ExtractionMetrics m = eval_extraction(predictions, gold, aliases);
        std::cout << json{{"precision", m.precision},
                          {"recall", m.recall},
                          {"f1", m.f1},
                          {"emr", m.emr}}
                         .dump(2)
                  << "\n";
        return 0;
    }
    if (task == "er") {
        auto gold = load_er_gold(gold_path);
        auto matches = read_matches(matches_path);
        ErMetrics m = eval_er(matches, gold);
        std::cout << json{{"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}}.dump(2)
                  << "\n";
        return 0;
    }
    throw EvalError("unknown eval task: " + task);
}

int cmd_bench(const std::string& config_path, const std::string& out) {
    json doc = read_json_file(config_path);
    BenchmarkConfig config;
    config.corpus_dir = doc.at("corpus_dir").get<std::string>();
    config.replay_dir = doc.at("replay_dir").get<std::string>();
    config.entities_path = doc.at("entities_path").get<std::string>();
    config.extraction_gold_path = doc.at("extraction_gold").get<std::string>();
    config.er_gold_path = doc.at("er_gold").get<std::string>();
    if (doc.contains("alias_table")) config.alias_table_path = doc.at("alias_table").get<std::string>();
    if (doc.contains("strategies")) {
        config.strategies.clear();
        for (const auto& s : doc.at("strategies"))
            config.strategies.push_back(strategy_from_string(s.get<std::string>()));
    }
    config.resolution.warehouse_hosts = kDefaultWarehouseHosts;
    if (doc.contains("resolution")) {
        const auto& r = doc.at("resolution");
        config.resolution.iteration_limit =
            r.value("iteration_limit", config.resolution.iteration_limit);
        config.resolution.lambda = r.value("lambda", config.resolution.lambda);
        if (r.contains("warehouse_hosts")) {
            config.resolution.warehouse_hosts.clear();
            for (const auto& h : r.at("warehouse_hosts"))
                config.resolution.warehouse_hosts.insert(h.get<std::string>());
        }
    }
    BenchmarkReport report = run_benchmark(config);
    if (!out.empty()) write_json_file(out, report.document);
    std::cout << report.table;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"paper-dataset network toolkit"};
    app.require_subcommand(1);

    std::string corpus, papers_path, out, backend = "replay", strategy = "truncated";
    std::string runs_path, replay_dir, descriptions_path, entities_path, config_path;
    std::string matches_path, new_entities_path, report_path, network_path, format;
    std::string seed, addr = "127.0.0.1:8080", task, gold_path, predictions_path, alias_path;
    std::vector<std::string> wheres;
    std::size_t parallelism = 4, budget = 1500, top_k = 5;
    double restart = 0.15;

    auto* ingest = app.add_subcommand("ingest", "load a corpus directory into papers.jsonl");
    ingest->add_option("--corpus", corpus)->required();
    ingest->add_option("--out", out)->required();

    auto* extract = app.add_subcommand("extract", "run dataset extraction over papers");
    extract->add_option("--papers", papers_path)->required();
    extract->add_option("--backend", backend)->check(CLI::IsMember({"replay", "remote", "mock"}));
    extract->add_option("--strategy", strategy);
    extract->add_option("--out", out)->required();
    extract->add_option("--runs", runs_path);
    extract->add_option("--replay-dir", replay_dir);
    extract->add_option("--parallelism", parallelism);
    extract->add_option("--budget", budget);

    auto* resolve = app.add_subcommand("resolve", "match descriptions to entities");
    resolve->add_option("--descriptions", descriptions_path)->required();
    resolve->add_option("--entities", entities_path)->required();
    resolve->add_option("--config", config_path);
    resolve->add_option("--matches", matches_path)->required();
    resolve->add_option("--new-entities", new_entities_path)->required();
    resolve->add_option("--report", report_path);

    auto* build = app.add_subcommand("build", "assemble the paper-dataset network");
    build->add_option("--papers", papers_path)->required();
    build->add_option("--descriptions", descriptions_path)->required();
    build->add_option("--matches", matches_path)->required();
    build->add_option("--entities", entities_path)->required();
    build->add_option("--new-entities", new_entities_path);
    build->add_option("--runs", runs_path);
    build->add_option("--out", out)->required();

    auto* stats = app.add_subcommand("stats", "print network statistics");
    stats->add_option("--network", network_path)->required();

    auto* exp = app.add_subcommand("export", "write graphml/dot");
    exp->add_option("--network", network_path)->required();
    exp->add_option("--format", format)->required()->check(CLI::IsMember({"graphml", "dot"}));
    exp->add_option("--out", out)->required();

    auto* query = app.add_subcommand("query", "table query over descriptions");
    query->add_option("--network", network_path)->required();
    query->add_option("--where", wheres, "field~value (contains) or field=value (equals)")
        ->required();

    auto* similar = app.add_subcommand("similar", "random-walk similar datasets");
    similar->add_option("--network", network_path)->required();
    similar->add_option("--seed", seed)->required();
    similar->add_option("--k", top_k);
    similar->add_option("--c", restart);

    auto* serve = app.add_subcommand("serve", "read-only HTTP API");
    serve->add_option("--network", network_path)->required();
    serve->add_option("--addr", addr);

    auto* eval = app.add_subcommand("eval", "extraction/er metrics against gold");
    eval->add_option("--task", task)->required()->check(CLI::IsMember({"extraction", "er"}));
    eval->add_option("--gold", gold_path)->required();
    eval->add_option("--predictions", predictions_path);
    eval->add_option("--matches", matches_path);
    eval->add_option("--alias", alias_path);

    auto* bench = app.add_subcommand("bench", "baseline comparison report");
    bench->add_option("--config", config_path)->required();
    bench->add_option("--out", out);

    CLI11_PARSE(app, argc, argv);

    try {
        if (ingest->parsed()) return cmd_ingest(corpus, out);
        if (extract->parsed())
            return cmd_extract(papers_path, backend, strategy, out, runs_path, replay_dir,
                               parallelism, budget);
        if (resolve->parsed())
            return cmd_resolve(descriptions_path, entities_path, config_path, matches_path,
                               new_entities_path, report_path);
        if (build->parsed())
            return cmd_build(papers_path, descriptions_path, matches_path, entities_path,
                             new_entities_path, runs_path, out);
        if (stats->parsed()) return cmd_stats(network_path);
        if (exp->parsed()) return cmd_export(network_path, format, out);
        if (query->parsed()) return cmd_query(network_path, wheres);
        if (similar->parsed()) return cmd_similar(network_path, seed, top_k, restart);
        if (serve->parsed()) return cmd_serve(network_path, addr);
        if (eval->parsed())
            return cmd_eval(task, gold_path, predictions_path, matches_path, alias_path);
        if (bench->parsed()) return cmd_bench(config_path, out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
