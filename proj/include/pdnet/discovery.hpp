#pragma once

#include <string>
#include <vector>

#include "pdnet/model.hpp"

namespace pdnet {

enum class Predicate { contains, equals };

struct QueryClause {
    std::string field;  // DatasetDescription field name, e.g. "location"
    Predicate predicate = Predicate::contains;
    std::string value;
};

struct QueryFilter {
    std::vector<QueryClause> clauses;  // conjunction; must be nonempty
};

// Field names accepted in query clauses.
const std::vector<std::string>& query_fields();

// All descriptions satisfying every clause (case-insensitive), ordered by
// (paper_id, description_id). Unknown field -> QueryError.
std::vector<DatasetDescription> query_datasets(const PaperDatasetNetwork& network,
                                               const QueryFilter& filter);

struct RwrParams {
    double restart_prob = 0.15;
    double tolerance = 1e-10;
    std::size_t max_iters = 10000;
    std::size_t top_k = 5;
};

struct ScoredEntity {
    std::string entity_id;
    double score = 0.0;
};

// Random walk with restart over the undirected bipartite graph (parallel
// edges collapsed, dangling mass returned to the seed). Returns the top_k
// dataset nodes by score, seed excluded, zero scores dropped; ties broken by
// entity_id. Unknown seed -> NotFound.
std::vector<ScoredEntity> similar_datasets(const PaperDatasetNetwork& network,
                                           const std::string& seed_entity,
                                           const RwrParams& params = {});

}  // namespace pdnet
