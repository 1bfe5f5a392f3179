#pragma once

#include <array>
#include <cstdint>

#include "srouter/corpus.hpp"

namespace srouter {

// Synthetic problem generator with planted per-category indicator words over a
// shared filler vocabulary. Used by the simulation harness, the pipeline demo,
// and tests.
struct SyntheticConfig {
    std::array<int, kNumCategories> counts = {40, 40, 40, 40};
    uint64_t seed = 0;
    // probability that a problem carries its category's indicator words;
    // below 1.0 some problems are pure filler and only the class prior helps
    double indicator_prob = 1.0;
    bool with_answers = true;
    std::string id_prefix = "syn";
};

Corpus make_synthetic_corpus(const SyntheticConfig& cfg);

}  // namespace srouter
