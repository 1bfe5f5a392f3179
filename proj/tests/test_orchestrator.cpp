#include <algorithm>
#include <doctest.h>
#include <map>

#include "srouter/orchestrator.hpp"

using namespace srouter;

namespace {

// Independent brute-force reference for the vote-aggregation rules.
VoteResult brute_force_votes(const std::vector<std::optional<int>>& answers,
                             int stop_frequency) {
    // find how many attempts actually run
    int consumed = 0;
    {
        std::map<int, int> counts;
        for (const auto& a : answers) {
            consumed++;
            if (a && ++counts[*a] >= stop_frequency) break;
        }
    }
    // recount over the consumed prefix and replay to find, for each answer,
    // the attempt where it hit its final count
    std::map<int, int> counts;
    for (int i = 0; i < consumed; ++i) {
        if (answers[i]) counts[*answers[i]]++;
    }
    VoteResult res;
    res.attempts_consumed = consumed;
    int best_count = 0, best_time = 1 << 30;
    for (const auto& [answer, total] : counts) {
        int seen = 0, when = 0;
        for (int i = 0; i < consumed; ++i) {
            if (answers[i] && *answers[i] == answer && ++seen == total) when = i + 1;
        }
        if (total > best_count || (total == best_count && when < best_time)) {
            best_count = total;
            best_time = when;
            res.final_answer = answer;
        }
    }
    res.final_frequency = best_count;
    return res;
}

// scripted backend returning a fixed per-attempt answer sequence
class ScriptedBackend : public SolverBackend {
public:
    explicit ScriptedBackend(std::vector<std::optional<int>> script)
        : script_(std::move(script)) {}
    SolveResponse solve(const SolveRequest& req, Rng&) override {
        const size_t i = static_cast<size_t>(req.attempt_index - 1);
        SolveResponse resp;
        if (i < script_.size() && script_[i]) {
            resp.parsed_answer = script_[i];
            resp.raw_text = "\\boxed{" + std::to_string(*script_[i]) + "}";
        } else {
            resp.raw_text = "no idea";
        }
        return resp;
    }

private:
    std::vector<std::optional<int>> script_;
};

class FailingBackend : public SolverBackend {
public:
    SolveResponse solve(const SolveRequest&, Rng&) override {
        throw BackendError(BackendErrorKind::Transport, "down");
    }
};

Problem labeled_problem(const std::string& id = "p1") {
    Problem p;
    p.id = id;
    p.text = "a problem";
    p.category = Category::Geometry;
    p.answer = 139;
    return p;
}

OrchestratorConfig truth_mode_cfg() {
    OrchestratorConfig cfg;
    cfg.mode = CategorizationMode::GroundTruth;
    cfg.master_seed = 1;
    return cfg;
}

}  // namespace

TEST_CASE("aggregate_votes basics") {
    CHECK(aggregate_votes({7, 7, 7, 7, 7}, 3) == VoteResult{7, 3, 3});
    CHECK(aggregate_votes({1, 2, 3, 4, 5}, 3) == VoteResult{1, 1, 5});
    CHECK(aggregate_votes({139, 139, 139}, 3) == VoteResult{139, 3, 3});
    CHECK(aggregate_votes({12, 72, 12, 72, std::nullopt}, 3) == VoteResult{12, 2, 5});
    CHECK(aggregate_votes({}, 3) == VoteResult{std::nullopt, 0, 0});
    CHECK(aggregate_votes({std::nullopt, std::nullopt}, 3) == VoteResult{std::nullopt, 0, 2});
}

TEST_CASE("aggregate_votes matches brute force on every short sequence") {
    // alphabet {absent, 0, 1, 2}, all lengths up to 5
    const std::array<std::optional<int>, 4> alphabet = {std::nullopt, 0, 1, 2};
    int checked = 0;
    for (int len = 0; len <= 5; ++len) {
        int total = 1;
        for (int i = 0; i < len; ++i) total *= 4;
        for (int code = 0; code < total; ++code) {
            std::vector<std::optional<int>> seq;
            int c = code;
            for (int i = 0; i < len; ++i) {
                seq.push_back(alphabet[c % 4]);
                c /= 4;
            }
            for (int stop = 1; stop <= 5; ++stop) {
                CHECK(aggregate_votes(seq, stop) == brute_force_votes(seq, stop));
            }
            checked++;
        }
    }
    CHECK(checked == 1365);
}

TEST_CASE("solve stops early once the stop frequency is reached") {
    ScriptedBackend backend({139, 139, 139, 139, 139});
    const auto outcome = solve_problem(labeled_problem(), nullptr, default_weights(), backend,
                                       truth_mode_cfg());
    CHECK(outcome.attempts.size() == 3);
    CHECK(outcome.final_answer == 139);
    CHECK(outcome.final_frequency == 3);
    CHECK(outcome.category_used == Category::Geometry);
}

TEST_CASE("tie-break favors the answer that reached its count first") {
    ScriptedBackend backend({12, 72, 12, 72, std::nullopt});
    const auto outcome = solve_problem(labeled_problem(), nullptr, default_weights(), backend,
                                       truth_mode_cfg());
    CHECK(outcome.attempts.size() == 5);
    CHECK(outcome.final_answer == 12);
    CHECK(outcome.final_frequency == 2);
    CHECK(outcome.histogram == std::map<int, int>{{12, 2}, {72, 2}});
}

TEST_CASE("all attempts unparseable leaves the final answer absent") {
    ScriptedBackend backend({std::nullopt, std::nullopt, std::nullopt, std::nullopt,
                             std::nullopt});
    const auto outcome = solve_problem(labeled_problem(), nullptr, default_weights(), backend,
                                       truth_mode_cfg());
    CHECK(outcome.attempts.size() == 5);
    CHECK(!outcome.final_answer);
    CHECK(outcome.final_frequency == 0);
}

TEST_CASE("backend failures consume attempts and keep the loop going") {
    FailingBackend backend;
    const auto outcome = solve_problem(labeled_problem(), nullptr, default_weights(), backend,
                                       truth_mode_cfg());
    CHECK(outcome.attempts.size() == 5);
    CHECK(!outcome.final_answer);
    for (const auto& a : outcome.attempts) {
        CHECK(!a.parsed_answer);
        CHECK(a.raw_text.find("down") != std::string::npos);
    }
}

TEST_CASE("ground-truth mode requires a labeled problem") {
    Problem p = labeled_problem();
    p.category.reset();
    ScriptedBackend backend({1});
    CHECK_THROWS_AS(
        solve_problem(p, nullptr, default_weights(), backend, truth_mode_cfg()),
        OrchestratorError);
}

TEST_CASE("random mode assigns no category") {
    ScriptedBackend backend({5, 5, 5});
    OrchestratorConfig cfg = truth_mode_cfg();
    cfg.mode = CategorizationMode::RandomStrategy;
    const auto outcome = solve_problem(labeled_problem(), nullptr, default_weights(), backend,
                                       cfg);
    CHECK(!outcome.category_used);
    CHECK(outcome.final_answer == 5);
}

TEST_CASE("per-problem rng streams make runs order-independent") {
    Corpus corpus;
    corpus.problems = {labeled_problem("a"), labeled_problem("b"), labeled_problem("c")};
    for (auto& p : corpus.problems) p.answer = 139;

    MockSolver backend(MockSolverConfig::uniform(0.5), corpus);
    const auto forward =
        solve_corpus(corpus, nullptr, default_weights(), backend, truth_mode_cfg());

    Corpus reversed = corpus;
    std::reverse(reversed.problems.begin(), reversed.problems.end());
    MockSolver backend2(MockSolverConfig::uniform(0.5), reversed);
    const auto backward =
        solve_corpus(reversed, nullptr, default_weights(), backend2, truth_mode_cfg());

    for (const auto& out : forward) {
        const auto match = std::find_if(backward.begin(), backward.end(), [&](const auto& o) {
            return o.problem_id == out.problem_id;
        });
        REQUIRE(match != backward.end());
        CHECK(match->final_answer == out.final_answer);
        CHECK(match->histogram == out.histogram);
    }
}

TEST_CASE("identical seeds replay identical transcripts") {
    Corpus corpus;
    corpus.problems = {labeled_problem("a"), labeled_problem("b")};
    auto run = [&] {
        MockSolver backend(MockSolverConfig::uniform(0.4), corpus);
        return serialize_transcript(
            solve_corpus(corpus, nullptr, default_weights(), backend, truth_mode_cfg()));
    };
    CHECK(run() == run());
}

TEST_CASE("always-correct backend stops at the stop frequency with the truth") {
    Corpus corpus;
    corpus.problems = {labeled_problem("a")};
    MockSolver backend(MockSolverConfig::uniform(1.0), corpus);
    const auto outcomes =
        solve_corpus(corpus, nullptr, default_weights(), backend, truth_mode_cfg());
    CHECK(outcomes[0].final_answer == 139);
    CHECK(outcomes[0].attempts.size() == 3);
}

TEST_CASE("transcript round-trips through its file format") {
    Corpus corpus;
    corpus.problems = {labeled_problem("p one"), labeled_problem("p\ttwo")};
    MockSolver backend(MockSolverConfig::uniform(0.5), corpus);
    const auto outcomes =
        solve_corpus(corpus, nullptr, default_weights(), backend, truth_mode_cfg());
    const std::string path = "/tmp/srouter_transcript_test.txt";
    write_transcript(outcomes, path);
    const auto back = load_transcript(path);
    REQUIRE(back.size() == outcomes.size());
    for (size_t i = 0; i < outcomes.size(); ++i) {
        CHECK(back[i].problem_id == outcomes[i].problem_id);
        CHECK(back[i].final_answer == outcomes[i].final_answer);
        CHECK(back[i].final_frequency == outcomes[i].final_frequency);
        CHECK(back[i].histogram == outcomes[i].histogram);
        CHECK(back[i].attempts.size() == outcomes[i].attempts.size());
    }
}

TEST_CASE("config validation") {
    ScriptedBackend backend({1});
    OrchestratorConfig cfg = truth_mode_cfg();
    cfg.stop_frequency = 6;
    CHECK_THROWS_AS(
        solve_problem(labeled_problem(), nullptr, default_weights(), backend, cfg),
        OrchestratorError);
    cfg.stop_frequency = 3;
    cfg.mode = CategorizationMode::Model;
    CHECK_THROWS_AS(
        solve_problem(labeled_problem(), nullptr, default_weights(), backend, cfg),
        OrchestratorError);
}
