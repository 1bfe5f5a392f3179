#include "srouter/eval.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

namespace srouter {

CategorizationReport eval_categorization(const CategorizerModel& model,
                                         const IndicatorVocabulary& vocab, const Corpus& test) {
    CategorizationReport report;
    for (const auto& p : test.problems) {
        if (!p.category) throw EvalError("eval_categorization: unlabeled problem \"" + p.id + "\"");
        const FeatureVector fv = featurize(p.text, vocab);
        CategorizationRow row;
        row.problem_id = p.id;
        row.proba = predict_proba(model, fv);
        row.predicted = predict_category(model, fv);
        row.truth = *p.category;
        report.confusion[static_cast<int>(row.truth)][static_cast<int>(row.predicted)]++;
        if (row.predicted == row.truth) {
            report.n_correct++;
        } else if (row.predicted == Category::NumberTheory) {
            report.errors_predicted_number_theory++;
        }
        report.rows.push_back(std::move(row));
        report.n++;
    }
    report.accuracy = report.n ? static_cast<double>(report.n_correct) / report.n : 0.0;
    return report;
}

std::map<std::string, int> answer_truths(const Corpus& corpus) {
    std::map<std::string, int> truths;
    for (const auto& p : corpus.problems) {
        if (p.answer) truths[p.id] = *p.answer;
    }
    return truths;
}

DownstreamReport eval_downstream(const std::vector<SolveOutcome>& outcomes,
                                 const std::map<std::string, int>& truths) {
    DownstreamReport r;
    r.n = static_cast<int>(outcomes.size());
    if (r.n == 0) return r;
    for (const auto& o : outcomes) {
        auto it = truths.find(o.problem_id);
        if (it == truths.end()) {
            throw EvalError("eval_downstream: no truth for problem \"" + o.problem_id + "\"");
        }
        const int truth = it->second;
        const auto hist_it = o.histogram.find(truth);
        const int correct_freq = hist_it == o.histogram.end() ? 0 : hist_it->second;
        if (o.final_answer && *o.final_answer == truth) r.solve_rate += 1;
        if (correct_freq > 0) r.nonzero_correct_freq_rate += 1;
        r.avg_output_frequency += o.final_frequency;
        r.avg_correct_output_frequency += correct_freq;
    }
    r.solve_rate /= r.n;
    r.nonzero_correct_freq_rate /= r.n;
    r.avg_output_frequency /= r.n;
    r.avg_correct_output_frequency /= r.n;
    return r;
}

std::string_view to_string(Scenario s) {
    switch (s) {
        case Scenario::GroundTruth: return "ground-truth";
        case Scenario::Model: return "model";
        case Scenario::RandomStrategy: return "random";
    }
    return "";
}

namespace {

MetricStats stats_of(const std::vector<double>& xs) {
    MetricStats s;
    const double n = static_cast<double>(xs.size());
    for (double x : xs) s.mean += x;
    s.mean /= n;
    if (xs.size() > 1) {
        double ss = 0;
        for (double x : xs) ss += (x - s.mean) * (x - s.mean);
        s.stddev = std::sqrt(ss / (n - 1));
    }
    return s;
}

// noisy ground-truth categorizer for the Model scenario when no trained model
// is supplied; deterministic per (trial seed, problem id)
Categorizer make_noisy_categorizer(double accuracy, uint64_t trial_seed) {
    return [accuracy, trial_seed](const Problem& p) {
        if (!p.category) throw EvalError("simulation: unlabeled problem \"" + p.id + "\"");
        Rng rng(derive_seed(trial_seed ^ 0xa11ce5eedULL, p.id));
        if (rng.uniform() < accuracy) return *p.category;
        const int truth = static_cast<int>(*p.category);
        const int k = static_cast<int>(rng.uniform_int(kNumCategories - 1));
        return static_cast<Category>(k >= truth ? k + 1 : k);
    };
}

}  // namespace

double gap_in_pooled_se(const MetricStats& a, const MetricStats& b, int trials) {
    const double se = std::sqrt((a.stddev * a.stddev + b.stddev * b.stddev) / trials);
    if (se == 0) return a.mean == b.mean ? 0 : std::numeric_limits<double>::infinity();
    return (a.mean - b.mean) / se;
}

SimulationReport run_simulation(const SimulationConfig& cfg, const Corpus& test) {
    if (cfg.trials < 1) throw EvalError("run_simulation: trials must be >= 1");
    for (const auto& p : test.problems) {
        if (!p.category || !p.answer) {
            throw EvalError("run_simulation: problem \"" + p.id +
                            "\" needs both category and answer");
        }
    }
    const auto truths = answer_truths(test);

    SimulationReport report;
    report.trials = cfg.trials;
    for (int si = 0; si < 3; ++si) {
        const Scenario scenario = static_cast<Scenario>(si);
        std::vector<double> solve, nonzero, avg_freq, avg_correct;
        for (int t = 0; t < cfg.trials; ++t) {
            const uint64_t trial_seed =
                splitmix64(cfg.seed + 0x51ab1eULL * (static_cast<uint64_t>(t) * 3 + si));
            OrchestratorConfig orch;
            orch.max_attempts = cfg.max_attempts;
            orch.stop_frequency = cfg.stop_frequency;
            orch.master_seed = trial_seed;

            MockSolver backend(cfg.mock, test);
            Categorizer categorizer;
            const Categorizer* categorizer_ptr = nullptr;
            switch (scenario) {
                case Scenario::GroundTruth:
                    orch.mode = CategorizationMode::GroundTruth;
                    break;
                case Scenario::Model:
                    orch.mode = CategorizationMode::Model;
                    if (cfg.model && cfg.vocab) {
                        categorizer = make_model_categorizer(*cfg.model, *cfg.vocab);
                    } else {
                        categorizer = make_noisy_categorizer(cfg.model_accuracy, trial_seed);
                    }
                    categorizer_ptr = &categorizer;
                    break;
                case Scenario::RandomStrategy:
                    orch.mode = CategorizationMode::RandomStrategy;
                    break;
            }
            const auto outcomes =
                solve_corpus(test, categorizer_ptr, cfg.weights, backend, orch);
            const DownstreamReport r = eval_downstream(outcomes, truths);
            solve.push_back(r.solve_rate);
            nonzero.push_back(r.nonzero_correct_freq_rate);
            avg_freq.push_back(r.avg_output_frequency);
            avg_correct.push_back(r.avg_correct_output_frequency);
        }
        ScenarioStats& s = report.scenarios[si];
        s.scenario = scenario;
        s.solve_rate = stats_of(solve);
        s.nonzero_correct_freq_rate = stats_of(nonzero);
        s.avg_output_frequency = stats_of(avg_freq);
        s.avg_correct_output_frequency = stats_of(avg_correct);
    }
    return report;
}

namespace {

std::string fmt2(double v) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(2) << v;
    return os.str();
}

}  // namespace

std::string render_categorization_report(const CategorizationReport& report, ReportStyle style) {
    std::ostringstream os;
    const char sep = style == ReportStyle::Csv ? ',' : '\t';
    os << "Problem" << sep << "A" << sep << "C" << sep << "G" << sep << "N" << sep << "Answer"
       << sep << "Correct Answer\n";
    for (const auto& row : report.rows) {
        os << row.problem_id;
        for (int i = 0; i < kNumCategories; ++i) os << sep << fmt2(row.proba.p[i]);
        os << sep << category_letter(row.predicted) << sep << category_letter(row.truth) << "\n";
    }
    if (style == ReportStyle::Table) {
        os << "\naccuracy: " << report.n_correct << "/" << report.n << " = "
           << fmt2(report.accuracy) << "\n";
        os << "errors predicted as number theory: " << report.errors_predicted_number_theory
           << "\n";
        os << "confusion (rows = truth A/C/G/N, cols = predicted):\n";
        for (int t = 0; t < kNumCategories; ++t) {
            os << category_letter(static_cast<Category>(t));
            for (int p = 0; p < kNumCategories; ++p) os << "\t" << report.confusion[t][p];
            os << "\n";
        }
    }
    return os.str();
}

std::string render_downstream_report(const std::vector<SolveOutcome>& outcomes,
                                     const std::map<std::string, int>& truths,
                                     ReportStyle style) {
    std::ostringstream os;
    const char sep = style == ReportStyle::Csv ? ',' : '\t';
    os << "Problem" << sep << "Outputs" << sep << "Frequencies" << sep << "Correct Answer" << sep
       << "Correct Answer Frequencies" << sep << "Correct?\n";
    for (const auto& o : outcomes) {
        auto it = truths.find(o.problem_id);
        if (it == truths.end()) {
            throw EvalError("render: no truth for problem \"" + o.problem_id + "\"");
        }
        const int truth = it->second;
        const auto hist_it = o.histogram.find(truth);
        const int correct_freq = hist_it == o.histogram.end() ? 0 : hist_it->second;
        const bool correct = o.final_answer && *o.final_answer == truth;
        os << o.problem_id << sep;
        if (o.final_answer) os << *o.final_answer;
        else os << "-";
        os << sep << o.final_frequency << sep << truth << sep << correct_freq << sep
           << (correct ? "Yes" : "No") << "\n";
    }
    if (style == ReportStyle::Table) {
        const DownstreamReport r = eval_downstream(outcomes, truths);
        os << "\nsolve rate: " << fmt2(r.solve_rate)
           << "\nnonzero correct frequency rate: " << fmt2(r.nonzero_correct_freq_rate)
           << "\naverage output frequency: " << fmt2(r.avg_output_frequency)
           << "\naverage correct output frequency: " << fmt2(r.avg_correct_output_frequency)
           << "\n";
    }
    return os.str();
}

std::string render_simulation_report(const SimulationReport& report) {
    std::ostringstream os;
    os << "trials: " << report.trials << "\n";
    os << "scenario\tsolve_rate\tnonzero_correct_freq_rate\tavg_output_frequency\t"
          "avg_correct_output_frequency\n";
    auto cell = [](const MetricStats& m) {
        std::ostringstream c;
        c << std::fixed << std::setprecision(4) << m.mean << " +/- " << m.stddev;
        return c.str();
    };
    for (const auto& s : report.scenarios) {
        os << to_string(s.scenario) << "\t" << cell(s.solve_rate) << "\t"
           << cell(s.nonzero_correct_freq_rate) << "\t" << cell(s.avg_output_frequency) << "\t"
           << cell(s.avg_correct_output_frequency) << "\n";
    }
    const auto& gt = report.of(Scenario::GroundTruth);
    const auto& model = report.of(Scenario::Model);
    const auto& random = report.of(Scenario::RandomStrategy);
    os << std::fixed << std::setprecision(2);
    os << "solve_rate gap ground-truth vs model: "
       << gap_in_pooled_se(gt.solve_rate, model.solve_rate, report.trials) << " pooled SE\n";
    os << "solve_rate gap model vs random: "
       << gap_in_pooled_se(model.solve_rate, random.solve_rate, report.trials) << " pooled SE\n";
    if (random.avg_correct_output_frequency.mean > 0) {
        os << "avg_correct_output_frequency ratio ground-truth/random: "
           << gt.avg_correct_output_frequency.mean / random.avg_correct_output_frequency.mean
           << "\n";
    }
    return os.str();
}

}  // namespace srouter
