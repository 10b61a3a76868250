#include <doctest.h>

#include <set>
#include <string>
#include <vector>

#include "pdnet/resolution.hpp"

using namespace pdnet;

namespace {

DatasetDescription make_desc(std::string id, std::string paper,
                             std::optional<std::string> name = std::nullopt,
                             std::optional<std::string> url = std::nullopt) {
    DatasetDescription d;
    d.description_id = std::move(id);
    d.paper_id = std::move(paper);
    d.dataset_name = std::move(name);
    d.dataset_url = std::move(url);
    return d;
}

// Resolves with no imported entities, so every description stays unmatched
// and discovery sees the post-refinement graph.
std::pair<ResolutionGraph, std::vector<DatasetDescription>> refined_graph(
    std::vector<DatasetDescription> descs, const ResolutionConfig& config) {
    ResolutionGraph graph = complete_and_refine(create_graph(descs, {}), config);
    return {std::move(graph), std::move(descs)};
}

}  // namespace

TEST_CASE("clusters spanning enough papers become new entities") {
    ResolutionConfig config;
    config.warehouse_hosts = kDefaultWarehouseHosts;
    REQUIRE(config.lambda == 3);

    std::vector<DatasetDescription> descs = {
        make_desc("p1#d0", "p1", "UrbanFlow", "https://urbanflow.example.org/data"),
        make_desc("p2#d0", "p2", "UrbanFlow Beijing", "urbanflow.example.org/data"),
        make_desc("p3#d0", "p3", "UrbanFlow", "https://urbanflow.example.org/data/"),
    };
    auto [graph, unmatched] = refined_graph(descs, config);
    auto result = discover_new_entities(unmatched, graph, config);

    REQUIRE(result.entities.size() == 1);
    const DatasetEntity& e = result.entities[0];
    CHECK(e.origin == EntityOrigin::discovered);
    CHECK_FALSE(e.uncertain);
    CHECK(e.mention_count == 3);
    CHECK(e.canonical_name == "UrbanFlow");
    CHECK(e.name_keys == std::set<std::string>{"urbanflow", "urbanflow beijing"});
    CHECK(e.url_keys == std::set<std::string>{"urbanflow.example.org/data"});
    CHECK(e.entity_id == entity_id_from_keys(e.name_keys, e.url_keys));

    REQUIRE(result.matches.size() == 3);
    for (const auto& m : result.matches) {
        CHECK(m.entity_id == e.entity_id);
        CHECK(m.method == MatchMethod::graph_completion_inference);
        CHECK(m.via.kind == AttributeKind::name);
    }
    CHECK(result.matches[0].description_id == "p1#d0");
    CHECK(result.matches[1].description_id == "p2#d0");
    CHECK(result.matches[2].description_id == "p3#d0");
}

TEST_CASE("two-paper clusters are kept but flagged uncertain") {
    ResolutionConfig config;
    std::vector<DatasetDescription> descs = {
        make_desc("p1#d0", "p1", "WebText Clean", "https://data.example.com/webtext"),
        make_desc("p2#d0", "p2", "WebText Clean", "data.example.com/webtext"),
    };
    auto [graph, unmatched] = refined_graph(descs, config);
    auto result = discover_new_entities(unmatched, graph, config);

    REQUIRE(result.entities.size() == 1);
    CHECK(result.entities[0].uncertain);
    CHECK(result.entities[0].mention_count == 2);
    CHECK(result.matches.size() == 2);
}

TEST_CASE("single-paper clusters are dropped even with many mentions") {
    ResolutionConfig config;
    std::vector<DatasetDescription> descs = {
        make_desc("p1#d0", "p1", "Solo Set", "https://solo.example.org/v1"),
        make_desc("p1#d1", "p1", "Solo Set", "solo.example.org/v1"),
        make_desc("p1#d2", "p1", "Solo Set v2", "solo.example.org/v1"),
    };
    auto [graph, unmatched] = refined_graph(descs, config);
    auto result = discover_new_entities(unmatched, graph, config);
    CHECK(result.entities.empty());
    CHECK(result.matches.empty());
}

TEST_CASE("lambda controls the certainty threshold") {
    std::vector<DatasetDescription> descs = {
        make_desc("p1#d0", "p1", "Pair Set", "pair.example.org/d"),
        make_desc("p2#d0", "p2", "Pair Set", "pair.example.org/d"),
    };

    ResolutionConfig strict;
    strict.lambda = 2;
    auto [g1, u1] = refined_graph(descs, strict);
    auto certain = discover_new_entities(u1, g1, strict);
    REQUIRE(certain.entities.size() == 1);
    CHECK_FALSE(certain.entities[0].uncertain);

    ResolutionConfig loose;
    loose.lambda = 5;
    auto [g2, u2] = refined_graph(descs, loose);
    auto uncertain = discover_new_entities(u2, g2, loose);
    REQUIRE(uncertain.entities.size() == 1);
    CHECK(uncertain.entities[0].uncertain);
}

TEST_CASE("candidates need both a name and a surviving url") {
    ResolutionConfig config;
    config.warehouse_hosts = kDefaultWarehouseHosts;

    SUBCASE("name-only descriptions are not candidates") {
        std::vector<DatasetDescription> descs = {
            make_desc("p1#d0", "p1", "NoUrl Set"),
            make_desc("p2#d0", "p2", "NoUrl Set"),
            make_desc("p3#d0", "p3", "NoUrl Set"),
        };
        auto [graph, unmatched] = refined_graph(descs, config);
        CHECK(discover_new_entities(unmatched, graph, config).entities.empty());
    }

    SUBCASE("url-only descriptions are not candidates") {
        std::vector<DatasetDescription> descs = {
            make_desc("p1#d0", "p1", std::nullopt, "only.example.org/d"),
            make_desc("p2#d0", "p2", std::nullopt, "only.example.org/d"),
            make_desc("p3#d0", "p3", std::nullopt, "only.example.org/d"),
        };
        auto [graph, unmatched] = refined_graph(descs, config);
        CHECK(discover_new_entities(unmatched, graph, config).entities.empty());
    }

    SUBCASE("descriptions whose url was removed as generic are not candidates") {
        std::vector<DatasetDescription> descs = {
            make_desc("p1#d0", "p1", "Warehouse Only", "https://kaggle.com"),
            make_desc("p2#d0", "p2", "Warehouse Only", "kaggle.com"),
            make_desc("p3#d0", "p3", "Warehouse Only", "kaggle.com/"),
        };
        auto [graph, unmatched] = refined_graph(descs, config);
        REQUIRE_FALSE(graph.alive({AttributeKind::url, "kaggle.com"}));
        CHECK(discover_new_entities(unmatched, graph, config).entities.empty());
    }
}

TEST_CASE("a name key bridges clusters with different urls") {
    ResolutionConfig config;
    std::vector<DatasetDescription> descs = {
        make_desc("p1#d0", "p1", "Bridge Set", "a.example.org/one"),
        make_desc("p2#d0", "p2", "Bridge Set", "b.example.org/two"),
        make_desc("p3#d0", "p3", "bridge  set", "a.example.org/one"),
    };
    auto [graph, unmatched] = refined_graph(descs, config);
    auto result = discover_new_entities(unmatched, graph, config);

    REQUIRE(result.entities.size() == 1);
    CHECK(result.entities[0].mention_count == 3);
    CHECK(result.entities[0].url_keys ==
          std::set<std::string>{"a.example.org/one", "b.example.org/two"});
}

TEST_CASE("canonical name is the most frequent raw spelling") {
    ResolutionConfig config;
    SUBCASE("majority wins") {
        std::vector<DatasetDescription> descs = {
            make_desc("p1#d0", "p1", "Vote Set", "vote.example.org/d"),
            make_desc("p2#d0", "p2", "VOTE SET", "vote.example.org/d"),
            make_desc("p3#d0", "p3", "VOTE SET", "vote.example.org/d"),
        };
        auto [graph, unmatched] = refined_graph(descs, config);
        auto result = discover_new_entities(unmatched, graph, config);
        REQUIRE(result.entities.size() == 1);
        CHECK(result.entities[0].canonical_name == "VOTE SET");
    }
    SUBCASE("ties fall to the lexicographically smallest spelling") {
        std::vector<DatasetDescription> descs = {
            make_desc("p1#d0", "p1", "tie set", "tie.example.org/d"),
            make_desc("p2#d0", "p2", "Tie Set", "tie.example.org/d"),
        };
        auto [graph, unmatched] = refined_graph(descs, config);
        auto result = discover_new_entities(unmatched, graph, config);
        REQUIRE(result.entities.size() == 1);
        CHECK(result.entities[0].canonical_name == "Tie Set");
    }
}

TEST_CASE("separate clusters come out ordered by first description id") {
    ResolutionConfig config;
    config.lambda = 2;
    std::vector<DatasetDescription> descs = {
        make_desc("p1#d0", "p1", "Second Set", "second.example.org/d"),
        make_desc("p1#d1", "p1", "First Set", "first.example.org/d"),
        make_desc("p2#d0", "p2", "Second Set", "second.example.org/d"),
        make_desc("p2#d1", "p2", "First Set", "first.example.org/d"),
    };
    auto [graph, unmatched] = refined_graph(descs, config);
    auto result = discover_new_entities(unmatched, graph, config);

    REQUIRE(result.entities.size() == 2);
    CHECK(result.entities[0].canonical_name == "Second Set");
    CHECK(result.entities[1].canonical_name == "First Set");
    REQUIRE(result.matches.size() == 4);
    CHECK(result.matches[0].description_id == "p1#d0");
    CHECK(result.matches[1].description_id == "p2#d0");
    CHECK(result.matches[2].description_id == "p1#d1");
    CHECK(result.matches[3].description_id == "p2#d1");
}

TEST_CASE("discovered ids are stable under mention order") {
    ResolutionConfig config;
    std::vector<DatasetDescription> a = {
        make_desc("p1#d0", "p1", "Stable Set", "stable.example.org/d"),
        make_desc("p2#d0", "p2", "stable set", "stable.example.org/d"),
        make_desc("p3#d0", "p3", "Stable Set", "stable.example.org/d"),
    };
    std::vector<DatasetDescription> b = {a[2], a[0], a[1]};

    auto [ga, ua] = refined_graph(a, config);
    auto [gb, ub] = refined_graph(b, config);
    auto ra = discover_new_entities(ua, ga, config);
    auto rb = discover_new_entities(ub, gb, config);
    REQUIRE(ra.entities.size() == 1);
    REQUIRE(rb.entities.size() == 1);
    CHECK(ra.entities[0].entity_id == rb.entities[0].entity_id);
}
