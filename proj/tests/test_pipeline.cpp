#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "pdnet/discovery.hpp"
#include "pdnet/evaluation.hpp"
#include "pdnet/extraction.hpp"
#include "pdnet/ingestion.hpp"
#include "pdnet/jsonl.hpp"
#include "pdnet/network_store.hpp"
#include "pdnet/resolution.hpp"
#include "support/paths.hpp"
#include "support/replay.hpp"

using namespace pdnet;

namespace {

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const std::string kCoco = "e8ad37939b041f4c0";
const std::string kCityscapes = "e14c6f693f8fe9621";
const std::string kMnist = "eff2d4be360fd0394";
const std::string kFashionMnist = "ef69df2fb69f07d6e";
const std::string kTlc = "ede821f4b5df0bb86";
const std::string kUrbanFlow = "eb5fa00c7c5692940";
const std::string kWebText = "eef653e9c77f2a0d4";

}  // namespace

TEST_CASE("replayed corpus run lands on the frozen network statistics") {
    CorpusLoad corpus = load_corpus(testsupport::fixture("corpus"));
    REQUIRE(corpus.papers.size() == 10);
    CHECK(corpus.skipped.empty());

    testsupport::TempDir tmp;
    auto replay_dir = tmp / "replay";
    testsupport::make_replay_dir(corpus.papers, testsupport::fixture("replay_responses"),
                                 replay_dir, {Strategy::truncated_sections});

    ReplayClient client(replay_dir);
    auto results = extract_corpus(corpus.papers, client, ExtractOptions{});
    REQUIRE(results.size() == 10);

    std::vector<ExtractionRun> runs;
    std::vector<DatasetDescription> descriptions;
    for (const auto& r : results) {
        runs.push_back(r.run);
        descriptions.insert(descriptions.end(), r.descriptions.begin(), r.descriptions.end());
    }
    CHECK(descriptions.size() == 20);
    for (const auto& run : runs) {
        if (run.paper_id == "2005.14165") {
            CHECK_FALSE(run.parse_ok);
            CHECK_FALSE(run.error.empty());
        } else {
            CHECK(run.parse_ok);
        }
    }

    ImportReport import_report;
    auto entities = import_entities(testsupport::fixture("entities.jsonl"), &import_report);
    REQUIRE(entities.size() == 10);
    CHECK(import_report.skipped_lines.empty());
    CHECK(import_report.dropped_entities.empty());

    ResolutionConfig config;
    config.warehouse_hosts = kDefaultWarehouseHosts;
    ResolutionGraph graph = complete_and_refine(create_graph(descriptions, entities), config);
    CHECK(graph.passes_run == 2);
    CHECK(graph.completion_edges_added == 1);
    CHECK(graph.removed_i_nodes.empty());
    CHECK(graph.import_conflicts.empty());

    auto matches = infer_matches(graph, descriptions);
    REQUIRE(matches.size() == 13);
    std::map<std::string, std::string> matched_entity;
    for (const auto& m : matches) matched_entity[m.description_id] = m.entity_id;
    CHECK(matched_entity.at("2108.04462#d0") == kTlc);
    CHECK(matched_entity.at("1405.0312#d0") == kCoco);

    // The benchmark name resolves only because the shared project URL completed
    // its name attribute during the passes.
    auto cityscapes = std::find_if(matches.begin(), matches.end(), [](const Match& m) {
        return m.description_id == "1604.01685#d0";
    });
    REQUIRE(cityscapes != matches.end());
    CHECK(cityscapes->entity_id == kCityscapes);
    CHECK(cityscapes->via.kind == AttributeKind::name);
    CHECK(cityscapes->via.key == "cityscapes pixellevel benchmark");
    CHECK(cityscapes->method == MatchMethod::graph_completion_inference);

    std::vector<DatasetDescription> unmatched;
    for (const auto& d : descriptions)
        if (!matched_entity.count(d.description_id)) unmatched.push_back(d);
    REQUIRE(unmatched.size() == 7);

    DiscoveryResult discovery = discover_new_entities(unmatched, graph, config);
    REQUIRE(discovery.entities.size() == 2);
    CHECK(discovery.entities[0].canonical_name == "UrbanFlow");
    CHECK(discovery.entities[0].entity_id == kUrbanFlow);
    CHECK_FALSE(discovery.entities[0].uncertain);
    CHECK(discovery.entities[0].mention_count == 3);
    CHECK(discovery.entities[1].canonical_name == "WebText");
    CHECK(discovery.entities[1].entity_id == kWebText);
    CHECK(discovery.entities[1].uncertain);
    CHECK(discovery.entities[1].mention_count == 2);

    std::vector<std::pair<std::string, std::string>> discovered_pairs;
    for (const auto& m : discovery.matches)
        discovered_pairs.emplace_back(m.description_id, m.entity_id);
    std::vector<std::pair<std::string, std::string>> want_pairs = {
        {"1707.01926#d2", kUrbanFlow}, {"1811.12808#d1", kUrbanFlow},
        {"2003.00001#d0", kUrbanFlow}, {"1910.10683#d1", kWebText},
        {"2003.00001#d1", kWebText}};
    CHECK(discovered_pairs == want_pairs);

    auto all_matches = matches;
    all_matches.insert(all_matches.end(), discovery.matches.begin(), discovery.matches.end());
    auto all_entities = entities;
    all_entities.insert(all_entities.end(), discovery.entities.begin(), discovery.entities.end());
    PaperDatasetNetwork network =
        build_network(corpus.papers, descriptions, all_matches, all_entities);
    CHECK(network.edges().size() == 18);
    CHECK(network.entities().at(kMnist).mention_count == 2);
    CHECK(network.entities().at(kUrbanFlow).mention_count == 3);

    NetworkStats stats = compute_stats(network, runs);
    CHECK(stats.papers_extracted == 9);
    CHECK(stats.descriptions_extracted == 20);
    CHECK(stats.entities_covered == 10);
    CHECK(stats.descriptions_matched_existing == 13);
    CHECK(stats.new_entities == 2);
    CHECK(stats.descriptions_matched_new == 5);
    CHECK(stats.avg_descriptions_per_paper == doctest::Approx(20.0 / 9.0).epsilon(1e-12));
    CHECK(stats.success_rate == doctest::Approx(0.9).epsilon(1e-12));

    auto stats_path = tmp / "stats.json";
    write_json_file(stats_path, to_json(stats));
    CHECK(slurp(stats_path) == slurp(testsupport::fixture("golden_stats.json")));

    SUBCASE("the assembled table answers the canonical lookup") {
        QueryFilter filter;
        filter.clauses.push_back({"location", Predicate::contains, "new york"});
        auto rows = query_datasets(network, filter);
        REQUIRE(rows.size() == 1);
        CHECK(rows[0].description_id == "2108.04462#d0");
        CHECK(rows[0].paper_id == "2108.04462");
    }

    SUBCASE("the network round-trips through its snapshot file") {
        auto net_path = tmp / "network.json";
        save_network(network, net_path, &stats);
        NetworkSnapshot snapshot = load_network(net_path);
        CHECK(snapshot.has_stats);
        CHECK(to_json(snapshot.stats) == to_json(stats));
        CHECK(snapshot.network.edges() == network.edges());
        CHECK(snapshot.network.entities().size() == network.entities().size());
    }

    SUBCASE("walk scores connect co-mentioned vision datasets") {
        auto similar = similar_datasets(network, kMnist);
        std::set<std::string> ids;
        for (const auto& s : similar) {
            CHECK(s.score > 0.0);
            ids.insert(s.entity_id);
        }
        CHECK(ids == std::set<std::string>{kCityscapes, kFashionMnist});
    }
}

TEST_CASE("benchmark report reproduces the hand-computed baseline table") {
    CorpusLoad corpus = load_corpus(testsupport::fixture("corpus"));
    testsupport::TempDir tmp;
    auto replay_dir = tmp / "replay";
    testsupport::make_replay_dir(corpus.papers, testsupport::fixture("replay_responses"),
                                 replay_dir,
                                 {Strategy::truncated_sections, Strategy::full_text});

    BenchmarkConfig config;
    config.corpus_dir = testsupport::fixture("corpus");
    config.replay_dir = replay_dir;
    config.entities_path = testsupport::fixture("entities.jsonl");
    config.extraction_gold_path = testsupport::fixture("extraction_gold.jsonl");
    config.er_gold_path = testsupport::fixture("er_gold.jsonl");
    config.alias_table_path = testsupport::fixture("alias_table.jsonl");
    config.strategies = {Strategy::truncated_sections, Strategy::full_text};
    config.resolution.warehouse_hosts = kDefaultWarehouseHosts;

    BenchmarkReport report = run_benchmark(config);
    const json& extraction = report.document.at("extraction");

    const json& model = extraction.at("model_truncated_sections");
    CHECK(model.at("tp") == 18);
    CHECK(model.at("fp") == 1);
    CHECK(model.at("fn") == 2);
    CHECK(model.at("precision").get<double>() == doctest::Approx(18.0 / 19.0).epsilon(1e-12));
    CHECK(model.at("recall").get<double>() == doctest::Approx(0.9).epsilon(1e-12));
    CHECK(model.at("f1").get<double>() == doctest::Approx(12.0 / 13.0).epsilon(1e-12));
    CHECK(model.at("emr").get<double>() == doctest::Approx(0.8).epsilon(1e-12));

    // Both prompt strategies replay the same recorded completions.
    CHECK(extraction.at("model_full_text") == model);

    const json& regex = extraction.at("regex_baseline");
    CHECK(regex.at("tp") == 13);
    CHECK(regex.at("fp") == 0);
    CHECK(regex.at("fn") == 7);
    CHECK(regex.at("precision").get<double>() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(regex.at("recall").get<double>() == doctest::Approx(0.65).epsilon(1e-12));
    CHECK(regex.at("f1").get<double>() == doctest::Approx(26.0 / 33.0).epsilon(1e-12));
    CHECK(regex.at("emr").get<double>() == doctest::Approx(0.5).epsilon(1e-12));

    const json& er = report.document.at("entity_resolution");
    const json& nm = er.at("name_matching");
    CHECK(nm.at("tp") == 11);
    CHECK(nm.at("fp") == 0);
    CHECK(nm.at("fn") == 2);
    CHECK(nm.at("precision").get<double>() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(nm.at("recall").get<double>() == doctest::Approx(11.0 / 13.0).epsilon(1e-12));
    CHECK(nm.at("f1").get<double>() == doctest::Approx(11.0 / 12.0).epsilon(1e-12));
    for (const char* method : {"graph_inference", "graph_completion_inference"}) {
        const json& row = er.at(method);
        CHECK(row.at("tp") == 13);
        CHECK(row.at("fp") == 0);
        CHECK(row.at("fn") == 0);
        CHECK(row.at("precision").get<double>() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(row.at("recall").get<double>() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(row.at("f1").get<double>() == doctest::Approx(1.0).epsilon(1e-12));
    }

    const std::string& table = report.table;
    CHECK(table.rfind("extraction (method: precision / recall / f1 / emr)", 0) == 0);
    auto pos_truncated = table.find("model_truncated_sections:");
    auto pos_full = table.find("model_full_text:");
    auto pos_regex = table.find("regex_baseline:");
    auto pos_er = table.find("entity resolution (method: precision / recall / f1)");
    auto pos_nm = table.find("name_matching:");
    auto pos_gi = table.find("graph_inference:");
    auto pos_gci = table.find("graph_completion_inference:");
    REQUIRE(pos_truncated != std::string::npos);
    REQUIRE(pos_gci != std::string::npos);
    CHECK(pos_truncated < pos_full);
    CHECK(pos_full < pos_regex);
    CHECK(pos_regex < pos_er);
    CHECK(pos_er < pos_nm);
    CHECK(pos_nm < pos_gi);
    CHECK(pos_gi < pos_gci);
}
