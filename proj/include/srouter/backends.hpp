#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "srouter/corpus.hpp"
#include "srouter/rng.hpp"
#include "srouter/routing.hpp"

namespace srouter {

struct SolveRequest {
    Problem problem;
    Strategy strategy = Strategy::CT;
    int attempt_index = 1;
};

struct SolveResponse {
    std::string raw_text;
    std::optional<int> parsed_answer;
    int64_t latency_ms = 0;
};

enum class BackendErrorKind { Transport, HttpStatus, EmptyCompletion };

class BackendError : public std::runtime_error {
public:
    BackendError(BackendErrorKind kind, const std::string& msg)
        : std::runtime_error(msg), kind_(kind) {}
    BackendErrorKind kind() const { return kind_; }

private:
    BackendErrorKind kind_;
};

// CT asks for a step-by-step derivation, PT for a sympy-style program; both
// embed the problem text verbatim and demand a boxed integer in [0, 999].
std::string build_solve_prompt(const SolveRequest& req);

// Integer inside the last \boxed{...}, else the last standalone integer token.
// Out-of-range values are rejected, never wrapped.
std::optional<int> parse_answer(const std::string& raw);

class SolverBackend {
public:
    virtual ~SolverBackend() = default;
    // rng is the caller-owned per-problem stream; backends that do not need
    // randomness ignore it.
    virtual SolveResponse solve(const SolveRequest& req, Rng& rng) = 0;
};

struct MockSolverConfig {
    // success probability per (category, strategy)
    std::array<std::array<double, 2>, kNumCategories> success_prob{};
    uint64_t seed = 0;

    double& prob(Category c, Strategy s) {
        return success_prob[static_cast<int>(c)][s == Strategy::CT ? 0 : 1];
    }
    double prob(Category c, Strategy s) const {
        return success_prob[static_cast<int>(c)][s == Strategy::CT ? 0 : 1];
    }
    static MockSolverConfig uniform(double p);
};

// Lines "category strategy probability", one per (category, strategy) pair.
MockSolverConfig load_success_table(const std::string& path);

// Emits the true answer with the configured probability, otherwise a uniform
// wrong integer from [0,999] minus the truth. Output is always parseable.
SolveResponse mock_solve(const SolveRequest& req, Category truth_category, int truth_answer,
                         const MockSolverConfig& cfg, Rng& rng);

// SolverBackend adapter over mock_solve; truths are looked up by problem id.
class MockSolver : public SolverBackend {
public:
    MockSolver(MockSolverConfig cfg, std::map<std::string, std::pair<Category, int>> truths)
        : cfg_(cfg), truths_(std::move(truths)) {}
    // Convenience: pull (category, answer) truths out of a labeled corpus.
    MockSolver(MockSolverConfig cfg, const Corpus& corpus);

    SolveResponse solve(const SolveRequest& req, Rng& rng) override;

private:
    MockSolverConfig cfg_;
    std::map<std::string, std::pair<Category, int>> truths_;
};

struct LlmBackendConfig {
    std::string endpoint;  // e.g. "http://localhost:8080/v1/chat/completions"
    std::string model = "deepseek-math";
    double timeout_seconds = 60.0;
    int max_retries = 2;
    double temperature = 0.7;
    // dotted path into the response JSON; numeric components index arrays
    std::string completion_field = "choices.0.message.content";
    std::string api_key_env = "STRATEGY_ROUTER_API_KEY";
    int backoff_base_ms = 250;  // doubled per retry
};

// Single chat-style completion per attempt; retries transport errors and 5xx
// with exponential backoff. Throws BackendError when all attempts fail.
SolveResponse llm_solve(const SolveRequest& req, const LlmBackendConfig& cfg);

class HttpBackend : public SolverBackend {
public:
    explicit HttpBackend(LlmBackendConfig cfg) : cfg_(std::move(cfg)) {}
    SolveResponse solve(const SolveRequest& req, Rng&) override { return llm_solve(req, cfg_); }

private:
    LlmBackendConfig cfg_;
};

// GET the endpoint host; true when the server answers at all.
bool backend_ping(const LlmBackendConfig& cfg);

// Few-shot categorization prompt: instruction header, demo Problem/Category
// pairs, a bridging paragraph parameterized by the two counts, then queries.
std::string build_icl_prompt(const std::vector<std::pair<Problem, Category>>& demos,
                             const std::vector<Problem>& queries);

// First n_queries "Category:" lines; unrecognized or missing labels -> absent.
std::vector<std::optional<Category>> parse_icl_response(const std::string& raw, int n_queries);

}  // namespace srouter
