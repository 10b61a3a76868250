#include "pdnet/discovery.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>

namespace pdnet {

namespace {

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

const std::optional<std::string>* optional_field(const DatasetDescription& d,
                                                 const std::string& field) {
    if (field == "dataset_name") return &d.dataset_name;
    if (field == "paper_title") return &d.paper_title;
    if (field == "dataset_summary") return &d.dataset_summary;
    if (field == "data_type") return &d.data_type;
    if (field == "task") return &d.task;
    if (field == "location") return &d.location;
    if (field == "time") return &d.time;
    if (field == "scale") return &d.scale;
    if (field == "dataset_provider") return &d.dataset_provider;
    if (field == "dataset_url") return &d.dataset_url;
    if (field == "publicly_available") return &d.publicly_available;
    if (field == "other_info") return &d.other_info;
    return nullptr;
}

}  // namespace

const std::vector<std::string>& query_fields() {
    static const std::vector<std::string> fields = {
        "description_id", "paper_id",      "dataset_name",    "paper_title",
        "dataset_summary", "data_type",    "task",            "location",
        "time",            "scale",        "dataset_provider", "dataset_url",
        "publicly_available", "other_info"};
    return fields;
}

std::vector<DatasetDescription> query_datasets(const PaperDatasetNetwork& network,
                                               const QueryFilter& filter) {
    if (filter.clauses.empty()) throw QueryError("query needs at least one clause");
    for (const auto& clause : filter.clauses) {
        if (!std::count(query_fields().begin(), query_fields().end(), clause.field)) {
            std::string fields;
            for (const auto& f : query_fields()) fields += (fields.empty() ? "" : ", ") + f;
            throw QueryError("unknown field \"" + clause.field + "\"; valid fields: " + fields);
        }
    }

    std::vector<DatasetDescription> out;
    for (const auto& [id, d] : network.descriptions()) {
        bool ok = true;
        for (const auto& clause : filter.clauses) {
            std::string value;
            if (clause.field == "description_id") {
                value = d.description_id;
            } else if (clause.field == "paper_id") {
                value = d.paper_id;
            } else {
                const auto* opt = optional_field(d, clause.field);
                if (!opt || !opt->has_value()) {
                    ok = false;
                    break;
                }
                value = **opt;
            }
            std::string lhs = lower(value), rhs = lower(clause.value);
            bool hit = clause.predicate == Predicate::contains
                           ? lhs.find(rhs) != std::string::npos
                           : lhs == rhs;
            if (!hit) {
                ok = false;
                break;
            }
        }
        if (ok) out.push_back(d);
    }
    std::sort(out.begin(), out.end(), [](const DatasetDescription& a, const DatasetDescription& b) {
        return std::tie(a.paper_id, a.description_id) < std::tie(b.paper_id, b.description_id);
    });
    return out;
}

std::vector<ScoredEntity> similar_datasets(const PaperDatasetNetwork& network,
                                           const std::string& seed_entity,
                                           const RwrParams& params) {
    if (!network.entities().count(seed_entity))
        throw NotFound("unknown entity: " + seed_entity);

    // Node ids: papers prefixed "p:", entities "e:", in sorted map order.
    std::map<std::string, std::size_t> index;
    std::vector<std::string> entity_ids;
    for (const auto& [id, meta] : network.papers()) index.emplace("p:" + id, index.size());
    for (const auto& [id, entity] : network.entities()) {
        index.emplace("e:" + id, index.size());
        entity_ids.push_back(id);
    }

    std::vector<std::vector<std::size_t>> adj(index.size());
    {
        std::set<std::pair<std::size_t, std::size_t>> seen;
        for (const auto& edge : network.edges()) {
            std::size_t p = index.at("p:" + edge.paper_id);
            std::size_t e = index.at("e:" + edge.entity_id);
            if (seen.insert({p, e}).second) {
                adj[p].push_back(e);
                adj[e].push_back(p);
            }
        }
    }

    const std::size_t n = index.size();
    const std::size_t seed = index.at("e:" + seed_entity);
    const double c = params.restart_prob;

    std::vector<double> p(n, 0.0), next(n);
    p[seed] = 1.0;
    for (std::size_t iter = 0; iter < params.max_iters; ++iter) {
        std::fill(next.begin(), next.end(), 0.0);
        double dangling = 0.0;
        for (std::size_t u = 0; u < n; ++u) {
            if (p[u] == 0.0) continue;
            if (adj[u].empty()) {
                dangling += p[u];
                continue;
            }
            double share = p[u] / static_cast<double>(adj[u].size());
            for (std::size_t v : adj[u]) next[v] += share;
        }
        for (double& x : next) x *= (1.0 - c);
        next[seed] += c + (1.0 - c) * dangling;

        double delta = 0.0;
        for (std::size_t v = 0; v < n; ++v) delta = std::max(delta, std::fabs(next[v] - p[v]));
        p.swap(next);
        if (delta <= params.tolerance) break;
    }

    std::vector<ScoredEntity> scored;
    for (const auto& id : entity_ids) {
        if (id == seed_entity) continue;
        double score = p[index.at("e:" + id)];
        if (score > 0.0) scored.push_back({id, score});
    }
    std::sort(scored.begin(), scored.end(), [](const ScoredEntity& a, const ScoredEntity& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.entity_id < b.entity_id;
    });
    if (scored.size() > params.top_k) scored.resize(params.top_k);
    return scored;
}

}  // namespace pdnet
