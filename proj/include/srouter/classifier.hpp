#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "srouter/corpus.hpp"
#include "srouter/features.hpp"

namespace srouter {

inline constexpr int kHiddenNodes = 10;

struct TrainingConfig {
    uint64_t seed = 0;
    int epochs = 200;
    double learning_rate = 0.05;
    double init_scale = 0.1;
};

struct CategoryDistribution {
    std::array<double, kNumCategories> p{};

    double operator[](Category c) const { return p[static_cast<int>(c)]; }
};

// Input layer (one node per indicator) -> 10 sigmoid hidden nodes -> 4 sigmoid
// output nodes, one per category. Outputs are independent sigmoids;
// normalization to a distribution happens only in predict_proba.
struct CategorizerModel {
    int vocab_size = 0;
    std::vector<double> w1;  // [kHiddenNodes x vocab_size], row-major
    std::array<double, kHiddenNodes> b1{};
    std::array<double, kHiddenNodes * kNumCategories> w2{};  // [4 x 10], row-major
    std::array<double, kNumCategories> b2{};
    uint64_t vocabulary_fingerprint = 0;

    // training metadata
    uint64_t seed = 0;
    int epochs = 0;
    double learning_rate = 0;
    double final_training_accuracy = 0;
};

class ClassifierError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

CategorizerModel init_model(int vocab_size, const TrainingConfig& cfg);

// SGD (batch 1, seeded shuffle each epoch) on per-output binary cross-entropy
// against the one-hot category target. Corpus must be fully labeled.
CategorizerModel train(CategorizerModel model, const Corpus& train_corpus,
                       const IndicatorVocabulary& vocab, const TrainingConfig& cfg);

CategoryDistribution predict_proba(const CategorizerModel& model, const FeatureVector& x);
Category predict_category(const CategorizerModel& model, const FeatureVector& x);

// Raw sigmoid outputs before normalization (used by training and tests).
std::array<double, kNumCategories> forward_raw(const CategorizerModel& model,
                                               const std::vector<uint8_t>& bits);

// Mean BCE loss and analytic gradient over one example; gradient layout is
// (w1, b1, w2, b2) flattened in that order. Exposed for the gradient check.
double loss_and_gradient(const CategorizerModel& model, const std::vector<uint8_t>& bits,
                         Category target, std::vector<double>* grad);
size_t parameter_count(const CategorizerModel& model);
std::vector<double> flatten_parameters(const CategorizerModel& model);
void unflatten_parameters(CategorizerModel& model, const std::vector<double>& params);

void save_model(const CategorizerModel& model, const std::string& path);
CategorizerModel load_model(const std::string& path);

}  // namespace srouter
