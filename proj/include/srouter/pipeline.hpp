#pragma once

#include <optional>
#include <string>

#include "srouter/backends.hpp"
#include "srouter/classifier.hpp"
#include "srouter/eval.hpp"
#include "srouter/features.hpp"
#include "srouter/orchestrator.hpp"

namespace srouter {

enum class ExitCode : int {
    Ok = 0,
    Failure = 1,
    ConfigError = 2,
    DataError = 3,
    BackendFailure = 4,
};

enum class BackendKind { Mock, Http };

struct PipelineConfig {
    std::string train_corpus_path;
    std::string test_corpus_path;
    std::string out_dir;

    TokenizationConfig tokenization;
    TrainingConfig training;
    int max_attempts = 5;
    int stop_frequency = 3;
    CategorizationMode mode = CategorizationMode::Model;
    uint64_t master_seed = 0;
    StrategyWeights weights = default_weights();

    BackendKind backend = BackendKind::Mock;
    MockSolverConfig mock = MockSolverConfig::uniform(0.3);
    LlmBackendConfig llm;
};

// build-vocab -> balance -> train -> solve -> eval, writing every artifact
// under out_dir: vocab.txt, balanced.jsonl, model.bin, transcript.txt,
// downstream.txt and (when the test set is labeled) categorization.txt.
// All paths are validated before anything is written.
ExitCode run_pipeline(const PipelineConfig& cfg, std::ostream& log);

}  // namespace srouter
