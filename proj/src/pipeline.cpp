#include "srouter/pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>

namespace srouter {

namespace fs = std::filesystem;

ExitCode run_pipeline(const PipelineConfig& cfg, std::ostream& log) {
    // validate config before writing anything
    if (cfg.out_dir.empty()) {
        log << "pipeline: config error: no output directory\n";
        return ExitCode::ConfigError;
    }
    for (const std::string* path : {&cfg.train_corpus_path, &cfg.test_corpus_path}) {
        if (path->empty() || !fs::exists(*path)) {
            log << "pipeline: config error: missing input file \"" << *path << "\"\n";
            return ExitCode::ConfigError;
        }
    }
    if (cfg.stop_frequency < 1 || cfg.stop_frequency > cfg.max_attempts) {
        log << "pipeline: config error: require 1 <= stop_frequency <= max_attempts\n";
        return ExitCode::ConfigError;
    }

    log << "pipeline: seed=" << cfg.master_seed << " epochs=" << cfg.training.epochs
        << " lr=" << cfg.training.learning_rate << " max_attempts=" << cfg.max_attempts
        << " stop_frequency=" << cfg.stop_frequency << " backend="
        << (cfg.backend == BackendKind::Mock ? "mock" : "http") << "\n";

    try {
        fs::create_directories(cfg.out_dir);
        const auto out = [&](const std::string& name) {
            return (fs::path(cfg.out_dir) / name).string();
        };

        const Corpus train_raw = load_corpus(cfg.train_corpus_path);
        const Corpus test = load_corpus(cfg.test_corpus_path);

        log << "pipeline: building vocabulary from " << train_raw.size() << " problems\n";
        const IndicatorVocabulary vocab = build_vocabulary(train_raw, cfg.tokenization);
        save_vocabulary(vocab, out("vocab.txt"));

        log << "pipeline: balancing training corpus\n";
        const Corpus balanced = balance_corpus(train_raw);
        save_corpus(balanced, out("balanced.jsonl"));

        log << "pipeline: training on " << balanced.size() << " problems, |vocab|="
            << vocab.size() << "\n";
        CategorizerModel model = init_model(static_cast<int>(vocab.size()), cfg.training);
        model = train(std::move(model), balanced, vocab, cfg.training);
        save_model(model, out("model.bin"));
        log << "pipeline: final training accuracy " << model.final_training_accuracy << "\n";

        OrchestratorConfig orch;
        orch.max_attempts = cfg.max_attempts;
        orch.stop_frequency = cfg.stop_frequency;
        orch.mode = cfg.mode;
        orch.master_seed = cfg.master_seed;

        std::vector<SolveOutcome> outcomes;
        const Categorizer categorizer = make_model_categorizer(model, vocab);
        const Categorizer* categorizer_ptr =
            cfg.mode == CategorizationMode::Model ? &categorizer : nullptr;
        try {
            if (cfg.backend == BackendKind::Mock) {
                MockSolver backend(cfg.mock, test);
                outcomes = solve_corpus(test, categorizer_ptr, cfg.weights, backend, orch);
            } else {
                HttpBackend backend(cfg.llm);
                outcomes = solve_corpus(test, categorizer_ptr, cfg.weights, backend, orch);
            }
        } catch (const BackendError& e) {
            log << "pipeline: backend failure: " << e.what() << "\n";
            return ExitCode::BackendFailure;
        }
        write_transcript(outcomes, out("transcript.txt"));

        const auto truths = answer_truths(test);
        if (!truths.empty()) {
            std::ofstream report(out("downstream.txt"), std::ios::binary | std::ios::trunc);
            report << render_downstream_report(outcomes, truths, ReportStyle::Table);
        }
        bool labeled = !test.problems.empty();
        for (const auto& p : test.problems) labeled = labeled && p.category.has_value();
        if (labeled) {
            const CategorizationReport cat_report = eval_categorization(model, vocab, test);
            std::ofstream report(out("categorization.txt"), std::ios::binary | std::ios::trunc);
            report << render_categorization_report(cat_report, ReportStyle::Table);
        }
        log << "pipeline: done, artifacts in " << cfg.out_dir << "\n";
        return ExitCode::Ok;
    } catch (const CorpusError& e) {
        log << "pipeline: data error: " << e.what() << "\n";
        return ExitCode::DataError;
    } catch (const FeatureError& e) {
        log << "pipeline: data error: " << e.what() << "\n";
        return ExitCode::DataError;
    } catch (const ClassifierError& e) {
        log << "pipeline: data error: " << e.what() << "\n";
        return ExitCode::DataError;
    } catch (const std::exception& e) {
        log << "pipeline: error: " << e.what() << "\n";
        return ExitCode::Failure;
    }
}

}  // namespace srouter
