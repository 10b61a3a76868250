#include "pdnet/resolution.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>

namespace pdnet {

const std::set<std::string> kDefaultWarehouseHosts = {"kaggle.com", "github.com",
                                                      "huggingface.co", "zenodo.org"};

std::set<std::string> load_warehouse_hosts(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseFailed("cannot open warehouse host list: " + path.string());
    std::set<std::string> hosts;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        auto e = line.find_last_not_of(" \t\r");
        hosts.insert(line.substr(b, e - b + 1));
    }
    return hosts;
}

void ResolutionGraph::remove_i_node(const IdentityAttribute& a, const std::string& reason) {
    if (!i_nodes.erase(a)) return;
    has_edges.erase(a);
    refers_edges.erase(a);
    removed_i_nodes.push_back({a, reason});
}

ResolutionGraph create_graph(const std::vector<DatasetDescription>& descriptions,
                             const std::vector<DatasetEntity>& entities) {
    ResolutionGraph g;

    for (const auto& entity : entities) {
        g.e_nodes.insert(entity.entity_id);
        auto claim = [&](AttributeKind kind, const std::string& key) {
            IdentityAttribute attr{kind, key};
            g.i_nodes.insert(attr);
            auto& owners = g.refers_edges[attr];
            if (!owners.empty() && !owners.count(entity.entity_id)) {
                g.import_conflicts.push_back({attr, *owners.begin(), entity.entity_id});
                return;
            }
            owners.insert(entity.entity_id);
        };
        for (const auto& key : entity.name_keys) claim(AttributeKind::name, key);
        for (const auto& key : entity.url_keys) claim(AttributeKind::url, key);
    }

    for (const auto& d : descriptions) {
        if (!g.d_nodes.insert(d.description_id).second)
            throw InvariantViolation("duplicate description_id: " + d.description_id);
        auto& attrs = g.desc_attrs[d.description_id];
        if (auto nk = name_key_of(d)) attrs.push_back({AttributeKind::name, *nk});
        if (auto uk = url_key_of(d)) attrs.push_back({AttributeKind::url, *uk});
        for (const auto& attr : attrs) {
            g.i_nodes.insert(attr);
            g.has_edges[attr].insert(d.description_id);
        }
    }
    return g;
}

void remove_generic_urls(ResolutionGraph& graph, const std::set<std::string>& warehouse_hosts) {
    std::vector<IdentityAttribute> doomed;
    for (const auto& attr : graph.i_nodes) {
        if (attr.kind == AttributeKind::url && is_generic_url(attr.key, warehouse_hosts))
            doomed.push_back(attr);
    }
    for (const auto& attr : doomed) graph.remove_i_node(attr, "generic");
}

ResolutionGraph complete_and_refine(ResolutionGraph graph, const ResolutionConfig& config) {
    remove_generic_urls(graph, config.warehouse_hosts);

    for (std::size_t pass = 0; pass < config.iteration_limit; ++pass) {
        // Additions are computed against the pass-start edges and applied in
        // one batch, making the result independent of iteration order.
        std::set<std::pair<IdentityAttribute, std::string>> additions;
        for (const auto& desc_id : graph.d_nodes) {
            auto attrs_it = graph.desc_attrs.find(desc_id);
            if (attrs_it == graph.desc_attrs.end()) continue;
            const auto& attrs = attrs_it->second;
            for (const auto& attr : attrs) {
                if (!graph.alive(attr)) continue;
                auto refs_it = graph.refers_edges.find(attr);
                if (refs_it == graph.refers_edges.end() || refs_it->second.size() != 1)
                    continue;
                const std::string& entity = *refs_it->second.begin();
                for (const auto& other : attrs) {
                    if (other == attr || !graph.alive(other)) continue;
                    const auto* existing = [&]() -> const std::set<std::string>* {
                        auto it = graph.refers_edges.find(other);
                        return it == graph.refers_edges.end() ? nullptr : &it->second;
                    }();
                    if (existing && existing->count(entity)) continue;
                    additions.insert({other, entity});
                }
            }
        }

        std::size_t added = 0;
        for (const auto& [attr, entity] : additions) {
            if (!graph.alive(attr)) continue;
            if (graph.refers_edges[attr].insert(entity).second) ++added;
        }
        graph.completion_edges_added += added;

        std::vector<IdentityAttribute> ambiguous;
        for (const auto& [attr, targets] : graph.refers_edges) {
            if (graph.alive(attr) && targets.size() > 1) ambiguous.push_back(attr);
        }
        for (const auto& attr : ambiguous) graph.remove_i_node(attr, "ambiguous");

        ++graph.passes_run;
        if (added == 0 && ambiguous.empty()) break;
    }
    return graph;
}

std::vector<Match> infer_matches(const ResolutionGraph& graph,
                                 const std::vector<DatasetDescription>& descriptions,
                                 MatchMethod method) {
    std::vector<Match> matches;
    for (const auto& d : descriptions) {
        auto attrs_it = graph.desc_attrs.find(d.description_id);
        if (attrs_it == graph.desc_attrs.end()) continue;
        for (const auto& attr : attrs_it->second) {
            if (!graph.alive(attr)) continue;
            auto refs_it = graph.refers_edges.find(attr);
            if (refs_it == graph.refers_edges.end() || refs_it->second.empty()) continue;
            if (refs_it->second.size() > 1)
                throw InvariantViolation("I-node (" + std::string(to_string(attr.kind)) + ", " +
                                         attr.key + ") survived refinement with " +
                                         std::to_string(refs_it->second.size()) +
                                         " refers_to edges");
            matches.push_back({d.description_id, *refs_it->second.begin(), attr, method});
            break;
        }
    }
    return matches;
}

std::vector<Match> name_matching_baseline(const std::vector<DatasetDescription>& descriptions,
                                          const std::vector<DatasetEntity>& entities) {
    std::map<std::string, std::string> canonical;  // name key -> entity_id, first wins
    for (const auto& entity : entities) {
        try {
            canonical.emplace(normalize_name(entity.canonical_name), entity.entity_id);
        } catch (const NormalizationEmpty&) {
        }
    }
    std::vector<Match> matches;
    for (const auto& d : descriptions) {
        auto nk = name_key_of(d);
        if (!nk) continue;
        auto it = canonical.find(*nk);
        if (it == canonical.end()) continue;
        matches.push_back({d.description_id, it->second,
                           IdentityAttribute{AttributeKind::name, *nk},
                           MatchMethod::name_matching});
    }
    return matches;
}

std::vector<Match> graph_inference_baseline(const std::vector<DatasetDescription>& descriptions,
                                            const std::vector<DatasetEntity>& entities,
                                            const ResolutionConfig& config) {
    ResolutionGraph graph = create_graph(descriptions, entities);
    remove_generic_urls(graph, config.warehouse_hosts);
    return infer_matches(graph, descriptions, MatchMethod::graph_inference);
}

namespace {

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), std::size_t{0});
    }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

}  // namespace

DiscoveryResult discover_new_entities(const std::vector<DatasetDescription>& unmatched,
                                      const ResolutionGraph& graph,
                                      const ResolutionConfig& config) {
    struct Candidate {
        const DatasetDescription* desc;
        std::string name_key;
        std::string url_key;
    };
    std::vector<Candidate> candidates;
    for (const auto& d : unmatched) {
        auto nk = name_key_of(d);
        auto uk = url_key_of(d);
        if (!nk || !uk) continue;
        if (!graph.alive({AttributeKind::url, *uk})) continue;
        candidates.push_back({&d, *nk, *uk});
    }

    UnionFind uf(candidates.size());
    std::map<std::string, std::size_t> first_seen;  // "n:"/"u:" prefixed key -> candidate
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        for (const std::string& key :
             {"n:" + candidates[i].name_key, "u:" + candidates[i].url_key}) {
            auto [it, inserted] = first_seen.emplace(key, i);
            if (!inserted) uf.unite(i, it->second);
        }
    }

    std::map<std::size_t, std::vector<std::size_t>> clusters;
    for (std::size_t i = 0; i < candidates.size(); ++i) clusters[uf.find(i)].push_back(i);

    // Deterministic output order: clusters by smallest member description_id.
    std::vector<std::vector<std::size_t>> ordered;
    for (auto& [root, members] : clusters) {
        std::sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) {
            return candidates[a].desc->description_id < candidates[b].desc->description_id;
        });
        ordered.push_back(members);
    }
    std::sort(ordered.begin(), ordered.end(),
              [&](const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
                  return candidates[a.front()].desc->description_id <
                         candidates[b.front()].desc->description_id;
              });

    DiscoveryResult result;
    for (const auto& members : ordered) {
        std::set<std::string> papers;
        for (std::size_t i : members) papers.insert(candidates[i].desc->paper_id);
        if (papers.size() < 2) continue;
        bool uncertain = papers.size() < config.lambda;

        DatasetEntity entity;
        entity.origin = EntityOrigin::discovered;
        entity.uncertain = uncertain;
        entity.mention_count = members.size();
        std::map<std::string, std::size_t> name_votes;
        for (std::size_t i : members) {
            entity.name_keys.insert(candidates[i].name_key);
            entity.url_keys.insert(candidates[i].url_key);
            ++name_votes[*candidates[i].desc->dataset_name];
        }
        std::size_t best = 0;
        for (const auto& [raw, votes] : name_votes) {
            if (votes > best) {
                best = votes;
                entity.canonical_name = raw;
            }
        }
        entity.entity_id = entity_id_from_keys(entity.name_keys, entity.url_keys);

        for (std::size_t i : members) {
            result.matches.push_back({candidates[i].desc->description_id, entity.entity_id,
                                      IdentityAttribute{AttributeKind::name, candidates[i].name_key},
                                      MatchMethod::graph_completion_inference});
        }
        result.entities.push_back(std::move(entity));
    }
    return result;
}

}  // namespace pdnet
