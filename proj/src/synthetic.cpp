#include "srouter/synthetic.hpp"

#include <cmath>
#include <string_view>
#include <vector>

#include "srouter/rng.hpp"

namespace srouter {

namespace {

constexpr std::array<std::array<std::string_view, 3>, kNumCategories> kIndicators = {{
    {"polynomial", "$x^2$", "roots"},
    {"probability", "committee", "arrangements"},
    {"tangent", "rectangle", "circle"},
    {"integer", "remainder", "divisible"},
}};

// Short function words: below the default minimum token length, so with the
// default tokenization only the planted indicators enter the vocabulary and a
// problem without indicators featurizes to the all-zero vector.
constexpr std::array<std::string_view, 16> kFiller = {
    "a", "an", "of", "to", "in", "on", "is", "it",
    "we", "by", "as", "at", "or", "so", "be", "if",
};

}  // namespace

Corpus make_synthetic_corpus(const SyntheticConfig& cfg) {
    Corpus corpus;
    Rng rng(splitmix64(cfg.seed ^ 0x5e17f00dULL));
    int serial = 0;
    for (int ci = 0; ci < kNumCategories; ++ci) {
        const Category cat = static_cast<Category>(ci);
        for (int k = 0; k < cfg.counts[ci]; ++k) {
            Problem p;
            p.id = cfg.id_prefix + "-" + std::to_string(serial++);
            p.category = cat;
            p.source = "synthetic";
            std::string text;
            const int n_filler = 8 + static_cast<int>(rng.uniform_int(6));
            // plant indicators in an exact, evenly spread fraction of each
            // category so the filler-only share is not subject to sampling
            // noise (it gets amplified by balancing replication)
            const bool planted =
                static_cast<int>(std::floor((k + 1) * cfg.indicator_prob)) >
                static_cast<int>(std::floor(k * cfg.indicator_prob));
            const int indicator_slot = static_cast<int>(rng.uniform_int(n_filler));
            for (int w = 0; w < n_filler; ++w) {
                if (!text.empty()) text += ' ';
                text += kFiller[rng.uniform_int(kFiller.size())];
                if (planted && w == indicator_slot) {
                    text += ' ';
                    text += kIndicators[ci][rng.uniform_int(kIndicators[ci].size())];
                }
            }
            p.text = std::move(text);
            if (cfg.with_answers) p.answer = static_cast<int>(rng.uniform_int(1000));
            corpus.problems.push_back(std::move(p));
        }
    }
    return corpus;
}

}  // namespace srouter
