#pragma once

#include <filesystem>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "pdnet/model.hpp"

namespace pdnet {

struct ResolutionConfig {
    std::size_t iteration_limit = 3;
    std::size_t lambda = 3;
    std::set<std::string> warehouse_hosts;
};

// Pass this as iteration_limit to run completion to a fixpoint.
inline constexpr std::size_t kNoIterationLimit = std::numeric_limits<std::size_t>::max();

extern const std::set<std::string> kDefaultWarehouseHosts;

// One host per line; '#' starts a comment.
std::set<std::string> load_warehouse_hosts(const std::filesystem::path& path);

struct INodeRemoval {
    IdentityAttribute attribute;
    std::string reason;  // "generic" | "ambiguous"
};

struct ImportConflict {
    IdentityAttribute attribute;
    std::string kept_entity;
    std::string dropped_entity;
};

// Tripartite working graph: description nodes, entity nodes, and one
// identity-attribute node per unique (kind, key). Removed I-nodes are
// tombstoned and never come back.
struct ResolutionGraph {
    std::set<std::string> d_nodes;
    std::set<std::string> e_nodes;
    std::set<IdentityAttribute> i_nodes;
    // Per-description attributes in inference scan order (name before url).
    std::map<std::string, std::vector<IdentityAttribute>> desc_attrs;
    std::map<IdentityAttribute, std::set<std::string>> has_edges;     // I-node -> D-nodes
    std::map<IdentityAttribute, std::set<std::string>> refers_edges;  // I-node -> E-nodes
    std::vector<INodeRemoval> removed_i_nodes;
    std::vector<ImportConflict> import_conflicts;
    std::size_t passes_run = 0;
    std::size_t completion_edges_added = 0;

    bool alive(const IdentityAttribute& a) const { return i_nodes.count(a) > 0; }
    void remove_i_node(const IdentityAttribute& a, const std::string& reason);
};

// Entity identity keys must be pre-normalized. Duplicate keys across entities
// keep the first owner and are recorded in import_conflicts.
ResolutionGraph create_graph(const std::vector<DatasetDescription>& descriptions,
                             const std::vector<DatasetEntity>& entities);

// Removes warehouse-root URL I-nodes (reason "generic").
void remove_generic_urls(ResolutionGraph& graph, const std::set<std::string>& warehouse_hosts);

// Runs up to iteration_limit completion passes. Each pass propagates, from
// every description with a resolved attribute, that attribute's entity onto
// the description's other I-nodes; additions are computed against the
// pass-start state so results do not depend on scan order. After every pass,
// I-nodes referring to more than one entity are removed (reason "ambiguous").
// Stops early once a pass changes nothing.
ResolutionGraph complete_and_refine(ResolutionGraph graph, const ResolutionConfig& config);

// Scans each description's attributes name-first and matches through the
// first attribute whose I-node refers to an entity.
std::vector<Match> infer_matches(const ResolutionGraph& graph,
                                 const std::vector<DatasetDescription>& descriptions,
                                 MatchMethod method = MatchMethod::graph_completion_inference);

// Exact canonical-name equality only; no aliases, no URLs.
std::vector<Match> name_matching_baseline(const std::vector<DatasetDescription>& descriptions,
                                          const std::vector<DatasetEntity>& entities);

// Inference over the created graph without any completion passes; generic-URL
// removal still applies.
std::vector<Match> graph_inference_baseline(const std::vector<DatasetDescription>& descriptions,
                                            const std::vector<DatasetEntity>& entities,
                                            const ResolutionConfig& config);

struct DiscoveryResult {
    std::vector<DatasetEntity> entities;
    std::vector<Match> matches;
};

// Clusters unmatched descriptions that carry both a name and a URL whose URL
// I-node survived refinement; clusters spanning >= lambda distinct papers
// become entities, clusters spanning 2..lambda-1 papers become entities
// flagged uncertain, single-paper clusters are dropped.
DiscoveryResult discover_new_entities(const std::vector<DatasetDescription>& unmatched,
                                      const ResolutionGraph& graph,
                                      const ResolutionConfig& config);

}  // namespace pdnet
