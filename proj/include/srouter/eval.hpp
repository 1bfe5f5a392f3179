#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "srouter/classifier.hpp"
#include "srouter/corpus.hpp"
#include "srouter/orchestrator.hpp"

namespace srouter {

enum class ReportStyle { Table, Csv };

struct CategorizationRow {
    std::string problem_id;
    CategoryDistribution proba;
    Category predicted = Category::Algebra;
    Category truth = Category::Algebra;
};

struct CategorizationReport {
    int n = 0;
    int n_correct = 0;
    double accuracy = 0;
    // confusion[true][predicted]
    std::array<std::array<int, kNumCategories>, kNumCategories> confusion{};
    // errors whose prediction is number theory (the bias diagnostic)
    int errors_predicted_number_theory = 0;
    std::vector<CategorizationRow> rows;
};

struct DownstreamReport {
    int n = 0;
    double solve_rate = 0;                  // final answer correct
    double nonzero_correct_freq_rate = 0;   // correct answer appeared at least once
    double avg_output_frequency = 0;        // mean final_frequency
    double avg_correct_output_frequency = 0;  // mean histogram count of the truth
};

class EvalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

CategorizationReport eval_categorization(const CategorizerModel& model,
                                         const IndicatorVocabulary& vocab, const Corpus& test);

DownstreamReport eval_downstream(const std::vector<SolveOutcome>& outcomes,
                                 const std::map<std::string, int>& truths);

std::map<std::string, int> answer_truths(const Corpus& corpus);

enum class Scenario { GroundTruth, Model, RandomStrategy };
std::string_view to_string(Scenario s);

struct SimulationConfig {
    MockSolverConfig mock;
    int trials = 200;
    uint64_t seed = 0;
    int max_attempts = 5;
    int stop_frequency = 3;
    StrategyWeights weights = default_weights();
    // Model scenario: use the trained model when supplied, otherwise a seeded
    // noisy-truth categorizer at model_accuracy (wrong guesses uniform over
    // the other three categories).
    const CategorizerModel* model = nullptr;
    const IndicatorVocabulary* vocab = nullptr;
    double model_accuracy = 0.84;
};

struct MetricStats {
    double mean = 0;
    double stddev = 0;  // sample stddev over trials
};

struct ScenarioStats {
    Scenario scenario = Scenario::GroundTruth;
    MetricStats solve_rate;
    MetricStats nonzero_correct_freq_rate;
    MetricStats avg_output_frequency;
    MetricStats avg_correct_output_frequency;
};

struct SimulationReport {
    int trials = 0;
    std::array<ScenarioStats, 3> scenarios{};  // GroundTruth, Model, RandomStrategy

    const ScenarioStats& of(Scenario s) const { return scenarios[static_cast<int>(s)]; }
};

// gap between two trial means in units of the pooled standard error
double gap_in_pooled_se(const MetricStats& a, const MetricStats& b, int trials);

// Runs the orchestrator against the mock solver for `trials` seeded
// repetitions of each scenario on the labeled test corpus.
SimulationReport run_simulation(const SimulationConfig& cfg, const Corpus& test);

std::string render_categorization_report(const CategorizationReport& report, ReportStyle style);
std::string render_downstream_report(const std::vector<SolveOutcome>& outcomes,
                                     const std::map<std::string, int>& truths,
                                     ReportStyle style);
std::string render_simulation_report(const SimulationReport& report);

}  // namespace srouter
