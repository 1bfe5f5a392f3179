#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "srouter/backends.hpp"
#include "srouter/classifier.hpp"
#include "srouter/corpus.hpp"
#include "srouter/routing.hpp"

namespace srouter {

enum class CategorizationMode { Model, GroundTruth, RandomStrategy };

struct OrchestratorConfig {
    int max_attempts = 5;
    int stop_frequency = 3;
    CategorizationMode mode = CategorizationMode::Model;
    uint64_t master_seed = 0;
};

struct AttemptRecord {
    int attempt_index = 0;  // 1-based
    Strategy strategy = Strategy::CT;
    std::string raw_text;
    std::optional<int> parsed_answer;
    int64_t latency_ms = 0;
};

struct SolveOutcome {
    std::string problem_id;
    std::optional<Category> category_used;
    std::vector<AttemptRecord> attempts;
    std::map<int, int> histogram;
    std::optional<int> final_answer;
    int final_frequency = 0;
};

struct VoteResult {
    std::optional<int> final_answer;
    int final_frequency = 0;
    int attempts_consumed = 0;

    bool operator==(const VoteResult&) const = default;
};

// Histogram over parsed answers with early stop at stop_frequency. The final
// answer is the most frequent one; ties go to the answer that reached its
// final count at the earliest attempt.
VoteResult aggregate_votes(const std::vector<std::optional<int>>& answers, int stop_frequency);

using Categorizer = std::function<Category(const Problem&)>;

Categorizer make_model_categorizer(const CategorizerModel& model,
                                   const IndicatorVocabulary& vocab);

// The per-problem solve loop: categorize once, then sample a strategy and call
// the backend each attempt until some answer hits stop_frequency or attempts
// run out. Backend failures consume an attempt and record an absent answer.
// The rng stream is derived from (master_seed, problem id).
SolveOutcome solve_problem(const Problem& p, const Categorizer* categorizer,
                           const StrategyWeights& weights, SolverBackend& backend,
                           const OrchestratorConfig& cfg);

std::vector<SolveOutcome> solve_corpus(const Corpus& corpus, const Categorizer* categorizer,
                                       const StrategyWeights& weights, SolverBackend& backend,
                                       const OrchestratorConfig& cfg);

class OrchestratorError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Transcript: one "attempt" line per attempt, one "summary" line per problem,
// tab-separated with control characters escaped inside ids.
std::string serialize_transcript(const std::vector<SolveOutcome>& outcomes);
void write_transcript(const std::vector<SolveOutcome>& outcomes, const std::string& path);
std::vector<SolveOutcome> load_transcript(const std::string& path);

}  // namespace srouter
