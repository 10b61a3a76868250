#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "pdnet/errors.hpp"

namespace pdnet {

struct Section {
    std::string heading;
    std::string body;

    bool operator==(const Section&) const = default;
};

struct Paper {
    std::string paper_id;
    std::string title;
    std::string abstract;
    std::vector<Section> sections;  // original order preserved
    std::string source_path;
};

// One semi-structured dataset description extracted from a paper.
// Field values are the raw extracted strings; normalized keys are always
// derived on demand and never written back.
struct DatasetDescription {
    std::string description_id;
    std::string paper_id;
    std::optional<std::string> dataset_name;
    std::optional<std::string> paper_title;
    std::optional<std::string> dataset_summary;
    std::optional<std::string> data_type;
    std::optional<std::string> task;
    std::optional<std::string> location;
    std::optional<std::string> time;
    std::optional<std::string> scale;
    std::optional<std::string> dataset_provider;
    std::optional<std::string> dataset_url;
    std::optional<std::string> publicly_available;
    std::optional<std::string> other_info;
};

enum class EntityOrigin { imported, discovered };

struct DatasetEntity {
    std::string entity_id;
    std::string canonical_name;
    std::set<std::string> name_keys;  // normalized; includes canonical + aliases
    std::set<std::string> url_keys;   // normalized
    EntityOrigin origin = EntityOrigin::imported;
    bool uncertain = false;           // imported entities are never uncertain
    std::uint64_t mention_count = 0;
};

enum class AttributeKind { name, url };

// One unique identity value; a single I-node exists per (kind, key) graph-wide.
struct IdentityAttribute {
    AttributeKind kind = AttributeKind::name;
    std::string key;

    auto operator<=>(const IdentityAttribute&) const = default;
};

enum class MatchMethod {
    name_matching,
    graph_inference,
    graph_completion_inference,
    regex_baseline,
};

struct Match {
    std::string description_id;
    std::string entity_id;
    IdentityAttribute via;
    MatchMethod method = MatchMethod::graph_completion_inference;
};

struct PaperMeta {
    std::string paper_id;
    std::string title;
};

struct NetworkEdge {
    std::string paper_id;
    std::string entity_id;
    std::string description_id;

    auto operator<=>(const NetworkEdge&) const = default;
};

// Bipartite paper-dataset network; one edge per matched description.
class PaperDatasetNetwork {
  public:
    void add_paper(PaperMeta meta);
    void add_entity(DatasetEntity entity);
    void add_description(DatasetDescription description);
    // Throws BuildError when an endpoint is missing or the description does
    // not belong to the edge's paper.
    void add_edge(NetworkEdge edge);

    const std::map<std::string, PaperMeta>& papers() const { return papers_; }
    const std::map<std::string, DatasetEntity>& entities() const { return entities_; }
    const std::map<std::string, DatasetDescription>& descriptions() const { return descriptions_; }
    const std::set<NetworkEdge>& edges() const { return edges_; }

  private:
    std::map<std::string, PaperMeta> papers_;
    std::map<std::string, DatasetEntity> entities_;
    std::map<std::string, DatasetDescription> descriptions_;
    std::set<NetworkEdge> edges_;
};

// Lowercases, applies Unicode NFC, collapses whitespace runs, removes hyphens
// and underscores, trims. Throws NormalizationEmpty when nothing is left.
std::string normalize_name(const std::string& raw);

// Strips scheme / leading "www." / trailing slashes / fragment, lowercases the
// host, keeps path case and the query string. Throws UrlParseError.
std::string normalize_url(const std::string& raw);

// A normalized URL is generic when it is a warehouse-host root page
// (no path segments); such URLs identify a hosting site, not a dataset.
bool is_generic_url(const std::string& key, const std::set<std::string>& warehouse_hosts);

// True when the description carries no usable identity attribute (its name
// normalizes to nothing and its URL does not parse).
bool is_unresolvable(const DatasetDescription& d);

// Normalized identity keys of a description; absent/invalid attributes are skipped.
std::optional<std::string> name_key_of(const DatasetDescription& d);
std::optional<std::string> url_key_of(const DatasetDescription& d);

// Stable content-addressed entity id: 64-bit FNV-1a over the sorted identity keys.
std::string entity_id_from_keys(const std::set<std::string>& name_keys,
                                const std::set<std::string>& url_keys);

std::uint64_t fnv1a64(const std::string& bytes);

const char* to_string(EntityOrigin o);
const char* to_string(AttributeKind k);
const char* to_string(MatchMethod m);
EntityOrigin entity_origin_from_string(const std::string& s);
AttributeKind attribute_kind_from_string(const std::string& s);
MatchMethod match_method_from_string(const std::string& s);

}  // namespace pdnet
