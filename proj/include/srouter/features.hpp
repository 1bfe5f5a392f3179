#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "srouter/corpus.hpp"

namespace srouter {

struct TokenizationConfig {
    int min_token_length = 3;
    int min_corpus_frequency = 5;
    bool case_folding = true;
};

// Whitespace-split tokens; bodies kept verbatim (LaTeX, punctuation, digits).
std::vector<std::string> tokenize(std::string_view text, const TokenizationConfig& config);

struct IndicatorVocabulary {
    std::vector<std::string> tokens;  // sorted, unique
    TokenizationConfig config;
    uint64_t fingerprint = 0;

    size_t size() const { return tokens.size(); }
};

struct FeatureVector {
    std::vector<uint8_t> bits;
    uint64_t vocabulary_fingerprint = 0;
};

class FeatureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

uint64_t vocabulary_fingerprint(const std::vector<std::string>& tokens,
                                const TokenizationConfig& config);

// Occurrence-counted token filter: keep tokens with length >= min_token_length
// appearing >= min_corpus_frequency times across all training texts.
IndicatorVocabulary build_vocabulary(const Corpus& train, const TokenizationConfig& config);

// bit i = 1 iff vocabulary token i occurs in tokenize(text) (presence, not count)
FeatureVector featurize(std::string_view text, const IndicatorVocabulary& vocab);

IndicatorVocabulary load_vocabulary(const std::string& path);
void save_vocabulary(const IndicatorVocabulary& vocab, const std::string& path);

}  // namespace srouter
