#include <doctest.h>

#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "pdnet/discovery.hpp"
#include "pdnet/network_store.hpp"
#include "support/generators.hpp"
#include "support/linear_rwr.hpp"

using namespace pdnet;

namespace {

// Builds a network from (paper, entity) pairs; each pair becomes one
// description and one matched edge. Extra unmatched entities may follow.
PaperDatasetNetwork pair_network(const std::vector<std::pair<std::string, std::string>>& pairs,
                                 const std::vector<std::string>& lonely_entities = {}) {
    std::set<std::string> paper_ids, entity_ids;
    for (const auto& [p, e] : pairs) {
        paper_ids.insert(p);
        entity_ids.insert(e);
    }
    for (const auto& e : lonely_entities) entity_ids.insert(e);

    std::vector<Paper> papers;
    for (const auto& id : paper_ids) {
        Paper p;
        p.paper_id = id;
        papers.push_back(p);
    }
    std::vector<DatasetEntity> entities;
    for (const auto& id : entity_ids) {
        DatasetEntity e;
        e.entity_id = id;
        e.canonical_name = id;
        entities.push_back(e);
    }
    std::vector<DatasetDescription> descs;
    std::vector<Match> matches;
    std::map<std::string, int> counter;
    for (const auto& [p, e] : pairs) {
        DatasetDescription d;
        d.description_id = p + "#d" + std::to_string(counter[p]++);
        d.paper_id = p;
        descs.push_back(d);
        Match m;
        m.description_id = d.description_id;
        m.entity_id = e;
        matches.push_back(m);
    }
    return build_network(papers, descs, matches, entities);
}

}  // namespace

TEST_CASE("a two-dataset path has a closed-form score") {
    // e1 -- p1 -- e2 with restart 0.5 from e1: pi(p1) = 1/3, pi(e2) = 1/12.
    auto network = pair_network({{"p1", "e1"}, {"p1", "e2"}});
    RwrParams params;
    params.restart_prob = 0.5;

    auto scored = similar_datasets(network, "e1", params);
    REQUIRE(scored.size() == 1);
    CHECK(scored[0].entity_id == "e2");
    CHECK(std::fabs(scored[0].score - 1.0 / 12.0) <= 1e-9);

    auto exact = testsupport::solve_rwr_exact(network, "e1", 0.5);
    CHECK(exact.at("e:e1") == doctest::Approx(7.0 / 12.0).epsilon(1e-12));
    CHECK(exact.at("p:p1") == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(exact.at("e:e2") == doctest::Approx(1.0 / 12.0).epsilon(1e-12));
}

TEST_CASE("power iteration matches the exact solver on random networks") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        CAPTURE(seed);
        auto instance = testsupport::generate_rwr_instance(seed);

        auto exact = testsupport::solve_rwr_exact(instance.network, instance.seed_entity, 0.15);
        double mass = 0.0;
        for (const auto& [node, score] : exact) mass += score;
        REQUIRE(std::fabs(mass - 1.0) <= 1e-9);

        RwrParams params;
        params.top_k = instance.network.entities().size();
        auto scored = similar_datasets(instance.network, instance.seed_entity, params);

        std::set<std::string> returned;
        for (const auto& s : scored) {
            returned.insert(s.entity_id);
            REQUIRE(std::fabs(s.score - exact.at("e:" + s.entity_id)) <= 1e-8);
        }
        for (const auto& [id, entity] : instance.network.entities()) {
            if (id == instance.seed_entity || returned.count(id)) continue;
            REQUIRE(exact.at("e:" + id) <= 1e-8);
        }
    }
}

TEST_CASE("scores order the result and top_k truncates it") {
    // p1 touches e1..e3; p2 reinforces e2 through a second paper two hops out.
    auto network = pair_network(
        {{"p1", "e1"}, {"p1", "e2"}, {"p1", "e3"}, {"p2", "e2"}, {"p2", "e4"}});

    auto all = similar_datasets(network, "e1", {});
    REQUIRE(all.size() == 3);
    CHECK(all[0].entity_id == "e2");
    CHECK(all[0].score > all[1].score);
    CHECK(all[1].score > all[2].score);
    CHECK(all[1].entity_id == "e3");
    CHECK(all[2].entity_id == "e4");

    RwrParams one;
    one.top_k = 1;
    auto top = similar_datasets(network, "e1", one);
    REQUIRE(top.size() == 1);
    CHECK(top[0].entity_id == "e2");
    CHECK(top[0].score == doctest::Approx(all[0].score));
}

TEST_CASE("symmetric neighbours tie-break by entity id") {
    auto network = pair_network({{"p1", "seed"}, {"p1", "e_b"}, {"p1", "e_a"}});
    auto scored = similar_datasets(network, "seed", {});
    REQUIRE(scored.size() == 2);
    CHECK(scored[0].entity_id == "e_a");
    CHECK(scored[1].entity_id == "e_b");
    CHECK(scored[0].score == scored[1].score);
}

TEST_CASE("unreachable datasets are dropped rather than scored zero") {
    auto network = pair_network({{"p1", "e1"}, {"p1", "e2"}}, {"island"});
    RwrParams params;
    params.top_k = 100;
    auto scored = similar_datasets(network, "e1", params);
    REQUIRE(scored.size() == 1);
    CHECK(scored[0].entity_id == "e2");
}

TEST_CASE("a seed with no edges keeps all its mass") {
    auto network = pair_network({{"p1", "e1"}, {"p1", "e2"}}, {"island"});
    CHECK(similar_datasets(network, "island", {}).empty());

    auto exact = testsupport::solve_rwr_exact(network, "island", 0.15);
    CHECK(exact.at("e:island") == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("parallel edges through different descriptions collapse") {
    // Same topology, but the first network mentions e1 twice from p1.
    auto doubled = pair_network({{"p1", "e1"}, {"p1", "e1"}, {"p1", "e2"}, {"p2", "e2"},
                                 {"p2", "e3"}});
    auto single = pair_network({{"p1", "e1"}, {"p1", "e2"}, {"p2", "e2"}, {"p2", "e3"}});
    REQUIRE(doubled.edges().size() == 5);
    REQUIRE(single.edges().size() == 4);

    auto a = similar_datasets(doubled, "e1", {});
    auto b = similar_datasets(single, "e1", {});
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].entity_id == b[i].entity_id);
        CHECK(a[i].score == doctest::Approx(b[i].score).epsilon(1e-12));
    }
}

TEST_CASE("unknown seeds are rejected") {
    auto network = pair_network({{"p1", "e1"}});
    CHECK_THROWS_AS(similar_datasets(network, "ghost", {}), NotFound);
}
