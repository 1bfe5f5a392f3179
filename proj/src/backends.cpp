#include "srouter/backends.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace srouter {

std::string build_solve_prompt(const SolveRequest& req) {
    std::string prompt;
    if (req.strategy == Strategy::CT) {
        prompt =
            "Solve the following competition math problem. Work through a detailed "
            "step by step solution, reasoning carefully at every step.\n\n";
    } else {
        prompt =
            "Solve the following competition math problem by writing a program. "
            "Write a Python program using the sympy library that computes the answer, "
            "then run it mentally and report the single integer it prints.\n\n";
    }
    prompt += "Problem: " + req.problem.text + "\n\n";
    prompt +=
        "The answer is an integer between 0 and 999. Give the final answer as "
        "\\boxed{answer}.";
    return prompt;
}

namespace {

std::optional<int> parse_int_in_range(std::string_view s) {
    size_t i = 0;
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) i++;
    size_t j = s.size();
    while (j > i && std::isspace(static_cast<unsigned char>(s[j - 1]))) j--;
    if (i == j) return std::nullopt;
    long value = 0;
    size_t k = i;
    for (; k < j; ++k) {
        if (!std::isdigit(static_cast<unsigned char>(s[k]))) return std::nullopt;
        value = value * 10 + (s[k] - '0');
        if (value > 999999) break;  // guard against absurd lengths
    }
    if (k != j) return std::nullopt;
    if (value > 999) return std::nullopt;  // rejection, never wrapping
    return static_cast<int>(value);
}

// last whitespace-delimited token that is all digits after stripping
// punctuation off both ends
std::optional<int> last_integer_token(const std::string& raw) {
    std::optional<std::string> last;
    std::istringstream in(raw);
    std::string tok;
    while (in >> tok) {
        size_t b = 0, e = tok.size();
        while (b < e && !std::isalnum(static_cast<unsigned char>(tok[b]))) b++;
        while (e > b && !std::isalnum(static_cast<unsigned char>(tok[e - 1]))) e--;
        if (b == e) continue;
        bool all_digits = true;
        for (size_t i = b; i < e; ++i) {
            if (!std::isdigit(static_cast<unsigned char>(tok[i]))) {
                all_digits = false;
                break;
            }
        }
        if (all_digits) last = tok.substr(b, e - b);
    }
    if (!last) return std::nullopt;
    return parse_int_in_range(*last);
}

}  // namespace

std::optional<int> parse_answer(const std::string& raw) {
    static constexpr std::string_view kMarker = "\\boxed{";
    const size_t pos = raw.rfind(kMarker);
    if (pos != std::string::npos) {
        const size_t start = pos + kMarker.size();
        int depth = 1;
        size_t end = start;
        while (end < raw.size() && depth > 0) {
            if (raw[end] == '{') depth++;
            else if (raw[end] == '}') depth--;
            if (depth > 0) end++;
        }
        if (depth == 0) {
            auto v = parse_int_in_range(std::string_view(raw).substr(start, end - start));
            if (v) return v;
        }
    }
    return last_integer_token(raw);
}

MockSolverConfig MockSolverConfig::uniform(double p) {
    MockSolverConfig cfg;
    for (auto& row : cfg.success_prob) row = {p, p};
    return cfg;
}

MockSolverConfig load_success_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CorpusError("cannot open success table: " + path);
    MockSolverConfig cfg;
    std::array<std::array<bool, 2>, kNumCategories> seen{};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        lineno++;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fail = [&](const std::string& msg) -> CorpusError {
            std::ostringstream os;
            os << path << ":" << lineno << ": " << msg;
            return CorpusError(os.str());
        };
        const size_t last = line.find_last_of(" \t");
        if (last == std::string::npos) throw fail("expected \"category strategy probability\"");
        const size_t prev = line.find_last_of(" \t", last - 1);
        if (prev == std::string::npos) throw fail("expected \"category strategy probability\"");
        auto cat = category_from_string(line.substr(0, prev));
        if (!cat) throw fail("unknown category");
        auto strat = strategy_from_string(line.substr(prev + 1, last - prev - 1));
        if (!strat) throw fail("unknown strategy (expected ct or pt)");
        double p;
        try {
            p = std::stod(line.substr(last + 1));
        } catch (const std::exception&) {
            throw fail("malformed probability");
        }
        if (p < 0 || p > 1) throw fail("probability outside [0, 1]");
        cfg.prob(*cat, *strat) = p;
        seen[static_cast<int>(*cat)][*strat == Strategy::CT ? 0 : 1] = true;
    }
    for (Category c : kAllCategories) {
        for (int s = 0; s < 2; ++s) {
            if (!seen[static_cast<int>(c)][s]) {
                throw CorpusError(path + ": missing entry for \"" + std::string(to_string(c)) +
                                  " " + (s == 0 ? "ct" : "pt") + "\"");
            }
        }
    }
    return cfg;
}

SolveResponse mock_solve(const SolveRequest& req, Category truth_category, int truth_answer,
                         const MockSolverConfig& cfg, Rng& rng) {
    if (truth_answer < 0 || truth_answer > 999) {
        throw std::invalid_argument("mock_solve: truth answer outside [0, 999]");
    }
    const double p = cfg.prob(truth_category, req.strategy);
    int answer;
    if (rng.uniform() < p) {
        answer = truth_answer;
    } else {
        // uniform over [0,999] \ {truth}
        const int k = static_cast<int>(rng.uniform_int(999));
        answer = k >= truth_answer ? k + 1 : k;
    }
    SolveResponse resp;
    resp.raw_text = "The answer is \\boxed{" + std::to_string(answer) + "}.";
    resp.parsed_answer = answer;
    resp.latency_ms = 0;
    return resp;
}

MockSolver::MockSolver(MockSolverConfig cfg, const Corpus& corpus) : cfg_(cfg) {
    for (const auto& p : corpus.problems) {
        if (p.category && p.answer) {
            truths_[p.id] = {*p.category, *p.answer};
        }
    }
}

SolveResponse MockSolver::solve(const SolveRequest& req, Rng& rng) {
    auto it = truths_.find(req.problem.id);
    if (it == truths_.end()) {
        throw std::invalid_argument("mock solver: no truth for problem \"" + req.problem.id +
                                    "\"");
    }
    return mock_solve(req, it->second.first, it->second.second, cfg_, rng);
}

std::string build_icl_prompt(const std::vector<std::pair<Problem, Category>>& demos,
                             const std::vector<Problem>& queries) {
    if (demos.empty()) throw std::invalid_argument("build_icl_prompt: demos must be non-empty");
    if (queries.empty()) throw std::invalid_argument("build_icl_prompt: queries must be non-empty");
    std::string prompt =
        "I am going to give you the task of categorizing mathematics competition problems "
        "into four categories. The four categories are \"algebra\", \"combinatorics\", "
        "\"geometry\", and \"number theory\". I will give you several example problems drawn "
        "from recent mathematics competitions, along with their categories. Based on this, I "
        "would like you to categorize new problems.\n\n";
    for (const auto& [problem, cat] : demos) {
        prompt += "Problem: " + problem.text + "\n";
        prompt += "Category: " + std::string(to_string(cat)) + "\n\n";
    }
    prompt += "The above " + std::to_string(demos.size()) +
              " problems have been categorized into four categories: \"algebra\", "
              "\"geometry\", \"combinatorics\", and \"number theory\". Based on the above, "
              "please categorize each of the following " +
              std::to_string(queries.size()) +
              " problems into either \"algebra\", \"geometry\", \"combinatorics\", or "
              "\"number theory\". Your answer should be formatted like the above.\n\n";
    for (const auto& q : queries) {
        prompt += "Problem: " + q.text + "\n\n";
    }
    return prompt;
}

std::vector<std::optional<Category>> parse_icl_response(const std::string& raw, int n_queries) {
    if (n_queries < 1) throw std::invalid_argument("parse_icl_response: n_queries must be >= 1");
    std::vector<std::optional<Category>> out;
    std::istringstream in(raw);
    std::string line;
    while (static_cast<int>(out.size()) < n_queries && std::getline(in, line)) {
        // trim, then match "category:" prefix case-insensitively
        size_t b = 0, e = line.size();
        while (b < e && std::isspace(static_cast<unsigned char>(line[b]))) b++;
        while (e > b && std::isspace(static_cast<unsigned char>(line[e - 1]))) e--;
        std::string lowered = line.substr(b, e - b);
        std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        static constexpr std::string_view kPrefix = "category:";
        if (lowered.rfind(kPrefix, 0) != 0) continue;
        std::string label = lowered.substr(kPrefix.size());
        const size_t lb = label.find_first_not_of(" \t");
        if (lb == std::string::npos) {
            out.push_back(std::nullopt);
            continue;
        }
        const size_t le = label.find_last_not_of(" \t");
        out.push_back(category_from_string(label.substr(lb, le - lb + 1)));
    }
    out.resize(n_queries, std::nullopt);
    return out;
}

}  // namespace srouter
