// strategy-router: categorize competition math problems, route CT/PT solving
// strategies, and run the majority-vote solve loop against a mock or HTTP
// solver backend.

#include <cstdlib>
#include <iomanip>
#include <iostream>

#include <CLI11.hpp>

#include "srouter/backends.hpp"
#include "srouter/eval.hpp"
#include "srouter/pipeline.hpp"
#include "srouter/synthetic.hpp"

namespace {

using namespace srouter;

int as_int(ExitCode c) { return static_cast<int>(c); }

ReportStyle parse_style(const std::string& s) {
    return s == "csv" ? ReportStyle::Csv : ReportStyle::Table;
}

CategorizationMode parse_mode(const std::string& s) {
    if (s == "model") return CategorizationMode::Model;
    if (s == "truth") return CategorizationMode::GroundTruth;
    if (s == "random") return CategorizationMode::RandomStrategy;
    throw CLI::ValidationError("--mode", "expected model|truth|random");
}

struct SolveArgs {
    std::string corpus_path, model_path, vocab_path, weights_path, success_table_path;
    std::string mode = "model", backend = "mock", out_path, endpoint, model_name = "deepseek-math";
    uint64_t seed = 0;
    int max_attempts = 5, stop_frequency = 3;
    double mock_success = 0.3;
};

int cmd_solve_run(const SolveArgs& args) {
    const Corpus corpus = load_corpus(args.corpus_path);
    OrchestratorConfig orch;
    orch.max_attempts = args.max_attempts;
    orch.stop_frequency = args.stop_frequency;
    orch.mode = parse_mode(args.mode);
    orch.master_seed = args.seed;
    const StrategyWeights weights =
        args.weights_path.empty() ? default_weights() : load_weights(args.weights_path);

    CategorizerModel model;
    IndicatorVocabulary vocab;
    Categorizer categorizer;
    const Categorizer* categorizer_ptr = nullptr;
    if (orch.mode == CategorizationMode::Model) {
        if (args.model_path.empty() || args.vocab_path.empty()) {
            std::cerr << "solve run: --mode model requires --model and --vocab\n";
            return as_int(ExitCode::ConfigError);
        }
        model = load_model(args.model_path);
        vocab = load_vocabulary(args.vocab_path);
        categorizer = make_model_categorizer(model, vocab);
        categorizer_ptr = &categorizer;
    }

    std::cerr << "solve: mode=" << args.mode << " backend=" << args.backend
              << " seed=" << args.seed << " max_attempts=" << args.max_attempts
              << " stop_frequency=" << args.stop_frequency << "\n";

    std::vector<SolveOutcome> outcomes;
    if (args.backend == "mock") {
        MockSolverConfig mock = args.success_table_path.empty()
                                    ? MockSolverConfig::uniform(args.mock_success)
                                    : load_success_table(args.success_table_path);
        MockSolver backend(mock, corpus);
        outcomes = solve_corpus(corpus, categorizer_ptr, weights, backend, orch);
    } else {
        LlmBackendConfig llm;
        if (!args.endpoint.empty()) llm.endpoint = args.endpoint;
        llm.model = args.model_name;
        HttpBackend backend(llm);
        outcomes = solve_corpus(corpus, categorizer_ptr, weights, backend, orch);
    }

    const std::string transcript = serialize_transcript(outcomes);
    if (args.out_path.empty()) {
        std::cout << transcript;
    } else {
        write_transcript(outcomes, args.out_path);
    }
    const auto truths = answer_truths(corpus);
    if (!truths.empty()) {
        std::cout << render_downstream_report(outcomes, truths, ReportStyle::Table);
    }
    return as_int(ExitCode::Ok);
}

void print_predictions(const CategorizerModel& model, const IndicatorVocabulary& vocab,
                       const Corpus& corpus, ReportStyle style) {
    const char sep = style == ReportStyle::Csv ? ',' : '\t';
    std::cout << "Problem" << sep << "A" << sep << "C" << sep << "G" << sep << "N" << sep
              << "Answer" << sep << "Correct Answer\n";
    for (const auto& p : corpus.problems) {
        const FeatureVector fv = featurize(p.text, vocab);
        const CategoryDistribution dist = predict_proba(model, fv);
        const Category predicted = predict_category(model, fv);
        std::cout << p.id;
        for (double v : dist.p) {
            std::cout << sep << std::fixed << std::setprecision(2) << v;
        }
        std::cout << sep << category_letter(predicted) << sep
                  << (p.category ? std::string(1, category_letter(*p.category)) : "-") << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"category-routed CT/PT solving for competition math problems"};
    app.require_subcommand(1);

    // ---- corpus ----
    auto* corpus_cmd = app.add_subcommand("corpus", "corpus file tooling");
    corpus_cmd->require_subcommand(1);
    std::string c_path, c_base, c_extra, c_out;

    auto* c_validate = corpus_cmd->add_subcommand("validate", "parse and check a corpus file");
    c_validate->add_option("path", c_path, "corpus file")->required();

    auto* c_merge = corpus_cmd->add_subcommand("merge", "concatenate two corpora");
    c_merge->add_option("base", c_base, "base corpus")->required();
    c_merge->add_option("extra", c_extra, "corpus appended after base")->required();
    c_merge->add_option("-o,--output", c_out, "output path")->required();

    auto* c_balance =
        corpus_cmd->add_subcommand("balance", "duplicate minority categories to even counts");
    c_balance->add_option("input", c_path, "labeled corpus")->required();
    c_balance->add_option("-o,--output", c_out, "output path")->required();

    auto* c_stats = corpus_cmd->add_subcommand("stats", "print per-category counts");
    c_stats->add_option("path", c_path, "corpus file")->required();

    // ---- features ----
    auto* features_cmd = app.add_subcommand("features", "indicator vocabulary tooling");
    features_cmd->require_subcommand(1);
    std::string f_corpus, f_vocab, f_out;
    TokenizationConfig tok;
    bool no_fold = false;

    auto* f_build = features_cmd->add_subcommand("build-vocab",
                                                 "extract indicator tokens from a training corpus");
    f_build->add_option("train-corpus", f_corpus, "training corpus")->required();
    f_build->add_option("-o,--output", f_out, "vocabulary output path")->required();
    f_build->add_option("--min-length", tok.min_token_length, "minimum token length");
    f_build->add_option("--min-count", tok.min_corpus_frequency, "minimum corpus occurrences");
    f_build->add_flag("--no-case-fold", no_fold, "keep original letter case");

    auto* f_feat = features_cmd->add_subcommand("featurize", "emit 0/1 feature rows for a corpus");
    f_feat->add_option("vocab", f_vocab, "vocabulary file")->required();
    f_feat->add_option("corpus", f_corpus, "corpus file")->required();
    f_feat->add_option("-o,--output", f_out, "matrix output path (default stdout)");

    // ---- model ----
    auto* model_cmd = app.add_subcommand("model", "categorizer training and inference");
    model_cmd->require_subcommand(1);
    std::string m_corpus, m_vocab, m_model, m_out, m_style = "table";
    TrainingConfig train_cfg;

    auto* m_train = model_cmd->add_subcommand("train", "train the categorizer");
    m_train->add_option("balanced-corpus", m_corpus, "balanced labeled corpus")->required();
    m_train->add_option("vocab", m_vocab, "vocabulary file")->required();
    m_train->add_option("-o,--output", m_out, "model output path")->required();
    m_train->add_option("--seed", train_cfg.seed, "training seed");
    m_train->add_option("--epochs", train_cfg.epochs, "training epochs");
    m_train->add_option("--lr", train_cfg.learning_rate, "learning rate");
    m_train->add_option("--init-scale", train_cfg.init_scale, "uniform init half-width");

    auto* m_predict = model_cmd->add_subcommand("predict", "per-problem probabilities and argmax");
    m_predict->add_option("model", m_model, "model file")->required();
    m_predict->add_option("vocab", m_vocab, "vocabulary file")->required();
    m_predict->add_option("corpus", m_corpus, "corpus file")->required();
    m_predict->add_option("--style", m_style, "table|csv");

    // ---- solve ----
    auto* solve_cmd = app.add_subcommand("solve", "run the majority-vote solve loop");
    solve_cmd->require_subcommand(1);
    SolveArgs solve_args;
    auto* s_run = solve_cmd->add_subcommand("run", "solve every problem in a corpus");
    s_run->add_option("corpus", solve_args.corpus_path, "problems to solve")->required();
    s_run->add_option("--mode", solve_args.mode, "model|truth|random");
    s_run->add_option("--model", solve_args.model_path, "trained model (model mode)");
    s_run->add_option("--vocab", solve_args.vocab_path, "vocabulary (model mode)");
    s_run->add_option("--weights", solve_args.weights_path, "strategy weights override file");
    s_run->add_option("--seed", solve_args.seed, "master seed");
    s_run->add_option("--max-attempts", solve_args.max_attempts, "attempt budget per problem");
    s_run->add_option("--stop-frequency", solve_args.stop_frequency, "early-stop vote count");
    s_run->add_option("--backend", solve_args.backend, "mock|http");
    s_run->add_option("--success-table", solve_args.success_table_path,
                      "mock success probabilities file");
    s_run->add_option("--mock-success", solve_args.mock_success,
                      "uniform mock success probability");
    s_run->add_option("--endpoint", solve_args.endpoint, "http backend endpoint URL");
    s_run->add_option("--model-name", solve_args.model_name, "http backend model name");
    s_run->add_option("-o,--output", solve_args.out_path, "transcript path (default stdout)");

    // ---- eval ----
    auto* eval_cmd = app.add_subcommand("eval", "metrics, reports, and simulation");
    eval_cmd->require_subcommand(1);
    std::string e_model, e_vocab, e_corpus, e_transcript, e_truths, e_style = "table";
    std::string e_success_table;
    int e_trials = 200;
    uint64_t e_seed = 0;
    double e_model_accuracy = 0.84;

    auto* e_cat = eval_cmd->add_subcommand("categorize", "categorization accuracy report");
    e_cat->add_option("model", e_model, "model file")->required();
    e_cat->add_option("vocab", e_vocab, "vocabulary file")->required();
    e_cat->add_option("test-corpus", e_corpus, "labeled test corpus")->required();
    e_cat->add_option("--style", e_style, "table|csv");

    auto* e_down = eval_cmd->add_subcommand("downstream", "solve-loop metrics from a transcript");
    e_down->add_option("transcript", e_transcript, "solve transcript")->required();
    e_down->add_option("truths", e_truths, "corpus carrying true answers")->required();
    e_down->add_option("--style", e_style, "table|csv");

    auto* e_sim = eval_cmd->add_subcommand(
        "simulate", "compare ground-truth/model/random routing against the mock solver");
    e_sim->add_option("test-corpus", e_corpus, "corpus with categories and answers")->required();
    e_sim->add_option("--success-table", e_success_table, "mock success probabilities file")
        ->required();
    e_sim->add_option("--trials", e_trials, "repetitions per scenario");
    e_sim->add_option("--seed", e_seed, "simulation seed");
    e_sim->add_option("--model-accuracy", e_model_accuracy,
                      "accuracy of the simulated model categorizer");

    // ---- backend ----
    auto* backend_cmd = app.add_subcommand("backend", "HTTP solver backend tools");
    backend_cmd->require_subcommand(1);
    LlmBackendConfig llm_cfg;
    std::string b_problem_file, b_strategy = "ct";
    auto* b_ping = backend_cmd->add_subcommand("ping", "check that the endpoint answers");
    b_ping->add_option("--endpoint", llm_cfg.endpoint, "endpoint URL")->required();
    auto* b_solve = backend_cmd->add_subcommand("solve-one", "one solve attempt for one problem");
    b_solve->add_option("problem-file", b_problem_file, "one-record corpus file")->required();
    b_solve->add_option("--strategy", b_strategy, "ct|pt");
    b_solve->add_option("--endpoint", llm_cfg.endpoint, "endpoint URL")->required();
    b_solve->add_option("--model-name", llm_cfg.model, "model name sent to the endpoint");
    b_solve->add_option("--timeout", llm_cfg.timeout_seconds, "per-call timeout in seconds");
    b_solve->add_option("--retries", llm_cfg.max_retries, "max retries on transport errors");

    // ---- pipeline ----
    auto* pipeline_cmd = app.add_subcommand("pipeline", "end-to-end reproducible runs");
    pipeline_cmd->require_subcommand(1);
    PipelineConfig pipe;
    std::string p_mode = "model", p_backend = "mock", p_success_table;
    auto* p_run = pipeline_cmd->add_subcommand(
        "run", "build-vocab, balance, train, solve, and eval in one run");
    p_run->add_option("--train", pipe.train_corpus_path, "training corpus")->required();
    p_run->add_option("--test", pipe.test_corpus_path, "test corpus")->required();
    p_run->add_option("-o,--output", pipe.out_dir, "artifact output directory")->required();
    p_run->add_option("--seed", pipe.master_seed, "master seed (also seeds training)");
    p_run->add_option("--epochs", pipe.training.epochs, "training epochs");
    p_run->add_option("--lr", pipe.training.learning_rate, "learning rate");
    p_run->add_option("--max-attempts", pipe.max_attempts, "attempt budget per problem");
    p_run->add_option("--stop-frequency", pipe.stop_frequency, "early-stop vote count");
    p_run->add_option("--mode", p_mode, "model|truth|random");
    p_run->add_option("--backend", p_backend, "mock|http");
    p_run->add_option("--success-table", p_success_table, "mock success probabilities file");
    p_run->add_option("--endpoint", pipe.llm.endpoint, "http backend endpoint URL");

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_validate->parsed()) {
            const Corpus c = load_corpus(c_path);
            std::cout << "ok: " << c.size() << " problems\n";
        } else if (c_merge->parsed()) {
            save_corpus(merge_corpora(load_corpus(c_base), load_corpus(c_extra)), c_out);
        } else if (c_balance->parsed()) {
            save_corpus(balance_corpus(load_corpus(c_path)), c_out);
        } else if (c_stats->parsed()) {
            const CategoryCounts counts = load_corpus(c_path).counts();
            for (Category cat : kAllCategories) {
                std::cout << to_string(cat) << ": " << counts[cat] << "\n";
            }
            std::cout << "total labeled: " << counts.total() << "\n";
        } else if (f_build->parsed()) {
            tok.case_folding = !no_fold;
            const IndicatorVocabulary vocab = build_vocabulary(load_corpus(f_corpus), tok);
            save_vocabulary(vocab, f_out);
            std::cout << vocab.size() << " indicators\n";
        } else if (f_feat->parsed()) {
            const IndicatorVocabulary vocab = load_vocabulary(f_vocab);
            const Corpus corpus = load_corpus(f_corpus);
            std::ostringstream rows;
            for (const auto& p : corpus.problems) {
                const FeatureVector fv = featurize(p.text, vocab);
                for (uint8_t b : fv.bits) rows << (b ? '1' : '0');
                rows << "\n";
            }
            if (f_out.empty()) {
                std::cout << rows.str();
            } else {
                std::ofstream out(f_out, std::ios::binary | std::ios::trunc);
                out << rows.str();
            }
        } else if (m_train->parsed()) {
            const Corpus corpus = load_corpus(m_corpus);
            const IndicatorVocabulary vocab = load_vocabulary(m_vocab);
            CategorizerModel model = init_model(static_cast<int>(vocab.size()), train_cfg);
            model = train(std::move(model), corpus, vocab, train_cfg);
            save_model(model, m_out);
            std::cout << "training accuracy: " << model.final_training_accuracy << "\n";
        } else if (m_predict->parsed()) {
            print_predictions(load_model(m_model), load_vocabulary(m_vocab),
                              load_corpus(m_corpus), parse_style(m_style));
        } else if (s_run->parsed()) {
            return cmd_solve_run(solve_args);
        } else if (e_cat->parsed()) {
            const CategorizationReport report = eval_categorization(
                load_model(e_model), load_vocabulary(e_vocab), load_corpus(e_corpus));
            std::cout << render_categorization_report(report, parse_style(e_style));
        } else if (e_down->parsed()) {
            const auto outcomes = load_transcript(e_transcript);
            const auto truths = answer_truths(load_corpus(e_truths));
            std::cout << render_downstream_report(outcomes, truths, parse_style(e_style));
        } else if (e_sim->parsed()) {
            SimulationConfig sim;
            sim.mock = load_success_table(e_success_table);
            sim.trials = e_trials;
            sim.seed = e_seed;
            sim.model_accuracy = e_model_accuracy;
            std::cout << render_simulation_report(run_simulation(sim, load_corpus(e_corpus)));
        } else if (b_ping->parsed()) {
            if (!backend_ping(llm_cfg)) {
                std::cerr << "no answer from " << llm_cfg.endpoint << "\n";
                return as_int(ExitCode::BackendFailure);
            }
            std::cout << "ok\n";
        } else if (b_solve->parsed()) {
            const Corpus corpus = load_corpus(b_problem_file);
            if (corpus.size() != 1) {
                std::cerr << "solve-one expects a one-record corpus file\n";
                return as_int(ExitCode::ConfigError);
            }
            auto strat = strategy_from_string(b_strategy);
            if (!strat) {
                std::cerr << "unknown strategy \"" << b_strategy << "\"\n";
                return as_int(ExitCode::ConfigError);
            }
            const SolveResponse resp = llm_solve({corpus.problems[0], *strat, 1}, llm_cfg);
            std::cout << resp.raw_text << "\n";
            if (resp.parsed_answer) std::cout << "parsed answer: " << *resp.parsed_answer << "\n";
            else std::cout << "parsed answer: none\n";
        } else if (p_run->parsed()) {
            pipe.mode = parse_mode(p_mode);
            pipe.backend = p_backend == "http" ? BackendKind::Http : BackendKind::Mock;
            pipe.training.seed = pipe.master_seed;
            if (!p_success_table.empty()) pipe.mock = load_success_table(p_success_table);
            return as_int(run_pipeline(pipe, std::cerr));
        }
    } catch (const BackendError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return as_int(ExitCode::BackendFailure);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return as_int(ExitCode::DataError);
    }
    return as_int(ExitCode::Ok);
}
