#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pdnet/model.hpp"

namespace testsupport {

struct ResolutionInstance {
    std::vector<pdnet::DatasetDescription> descriptions;
    std::vector<pdnet::DatasetEntity> entities;
};

// Small random instances drawing names and URLs from tight shared pools so
// key collisions, completion chains, ambiguity, and generic-URL removal all
// occur. Deterministic for a given seed.
ResolutionInstance generate_resolution_instance(std::uint64_t seed);

struct RwrInstance {
    pdnet::PaperDatasetNetwork network;
    std::string seed_entity;
};

// Random bipartite networks with occasional parallel edges (same pair through
// two descriptions), isolated entities, and isolated papers.
RwrInstance generate_rwr_instance(std::uint64_t seed);

}  // namespace testsupport
