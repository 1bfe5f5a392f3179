#include "srouter/orchestrator.hpp"

#include <fstream>
#include <sstream>

namespace srouter {

VoteResult aggregate_votes(const std::vector<std::optional<int>>& answers, int stop_frequency) {
    if (stop_frequency < 1) throw OrchestratorError("stop_frequency must be >= 1");
    std::map<int, int> counts;
    std::map<int, int> reached_at;  // attempt index of the last increment
    VoteResult res;
    for (size_t i = 0; i < answers.size(); ++i) {
        res.attempts_consumed = static_cast<int>(i) + 1;
        if (answers[i]) {
            const int a = *answers[i];
            counts[a]++;
            reached_at[a] = res.attempts_consumed;
            if (counts[a] >= stop_frequency) break;
        }
    }
    int best_count = 0;
    int best_reached = 0;
    for (const auto& [answer, count] : counts) {
        if (count > best_count ||
            (count == best_count && reached_at.at(answer) < best_reached)) {
            best_count = count;
            best_reached = reached_at.at(answer);
            res.final_answer = answer;
        }
    }
    res.final_frequency = best_count;
    return res;
}

Categorizer make_model_categorizer(const CategorizerModel& model,
                                   const IndicatorVocabulary& vocab) {
    return [&model, &vocab](const Problem& p) {
        return predict_category(model, featurize(p.text, vocab));
    };
}

SolveOutcome solve_problem(const Problem& p, const Categorizer* categorizer,
                           const StrategyWeights& weights, SolverBackend& backend,
                           const OrchestratorConfig& cfg) {
    if (cfg.stop_frequency < 1 || cfg.stop_frequency > cfg.max_attempts) {
        throw OrchestratorError("require 1 <= stop_frequency <= max_attempts");
    }
    SolveOutcome out;
    out.problem_id = p.id;

    switch (cfg.mode) {
        case CategorizationMode::Model:
            if (!categorizer) throw OrchestratorError("Model mode requires a categorizer");
            out.category_used = (*categorizer)(p);
            break;
        case CategorizationMode::GroundTruth:
            if (!p.category) {
                throw OrchestratorError("GroundTruth mode: problem \"" + p.id +
                                        "\" has no category");
            }
            out.category_used = p.category;
            break;
        case CategorizationMode::RandomStrategy:
            break;  // no category; fair coin per attempt
    }

    Rng rng(derive_seed(cfg.master_seed, p.id));
    for (int attempt = 1; attempt <= cfg.max_attempts; ++attempt) {
        AttemptRecord rec;
        rec.attempt_index = attempt;
        rec.strategy = out.category_used
                           ? sample_strategy(*out.category_used, weights, rng)
                           : sample_strategy_uniform(rng);
        SolveRequest req{p, rec.strategy, attempt};
        try {
            SolveResponse resp = backend.solve(req, rng);
            rec.raw_text = resp.raw_text;
            rec.parsed_answer = resp.parsed_answer;
            rec.latency_ms = resp.latency_ms;
        } catch (const std::exception& e) {
            rec.raw_text = std::string("<error: ") + e.what() + ">";
        }
        out.attempts.push_back(rec);
        if (rec.parsed_answer) {
            const int c = ++out.histogram[*rec.parsed_answer];
            if (c >= cfg.stop_frequency) break;
        }
    }

    std::vector<std::optional<int>> answers;
    answers.reserve(out.attempts.size());
    for (const auto& a : out.attempts) answers.push_back(a.parsed_answer);
    const VoteResult vote = aggregate_votes(answers, cfg.stop_frequency);
    out.final_answer = vote.final_answer;
    out.final_frequency = vote.final_frequency;
    return out;
}

std::vector<SolveOutcome> solve_corpus(const Corpus& corpus, const Categorizer* categorizer,
                                       const StrategyWeights& weights, SolverBackend& backend,
                                       const OrchestratorConfig& cfg) {
    std::vector<SolveOutcome> out;
    out.reserve(corpus.size());
    for (const auto& p : corpus.problems) {
        out.push_back(solve_problem(p, categorizer, weights, backend, cfg));
    }
    return out;
}

namespace {

std::string escape_field(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '\\': out += "\\\\"; break;
            case '\t': out += "\\t"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            default: out += c;
        }
    }
    return out;
}

std::string unescape_field(const std::string& s) {
    std::string out;
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '\\' || i + 1 == s.size()) {
            out += s[i];
            continue;
        }
        i++;
        switch (s[i]) {
            case '\\': out += '\\'; break;
            case 't': out += '\t'; break;
            case 'n': out += '\n'; break;
            case 'r': out += '\r'; break;
            default: out += s[i];
        }
    }
    return out;
}

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> fields;
    size_t pos = 0;
    while (true) {
        const size_t tab = line.find('\t', pos);
        fields.push_back(line.substr(pos, tab == std::string::npos ? std::string::npos
                                                                   : tab - pos));
        if (tab == std::string::npos) break;
        pos = tab + 1;
    }
    return fields;
}

}  // namespace

std::string serialize_transcript(const std::vector<SolveOutcome>& outcomes) {
    std::ostringstream os;
    for (const auto& o : outcomes) {
        const std::string cat =
            o.category_used ? std::string(to_string(*o.category_used)) : "-";
        for (const auto& a : o.attempts) {
            os << "attempt\t" << escape_field(o.problem_id) << "\t" << a.attempt_index << "\t"
               << cat << "\t" << to_string(a.strategy) << "\t";
            if (a.parsed_answer) os << *a.parsed_answer;
            else os << "-";
            os << "\t" << a.latency_ms << "\n";
        }
        os << "summary\t" << escape_field(o.problem_id) << "\t" << cat << "\t";
        if (o.final_answer) os << *o.final_answer;
        else os << "-";
        os << "\t" << o.final_frequency << "\t";
        if (o.histogram.empty()) {
            os << "-";
        } else {
            bool first = true;
            for (const auto& [answer, count] : o.histogram) {
                if (!first) os << ",";
                os << answer << ":" << count;
                first = false;
            }
        }
        os << "\n";
    }
    return os.str();
}

void write_transcript(const std::vector<SolveOutcome>& outcomes, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw OrchestratorError("cannot open transcript for writing: " + path);
    out << serialize_transcript(outcomes);
    if (!out) throw OrchestratorError("write failed: " + path);
}

std::vector<SolveOutcome> load_transcript(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw OrchestratorError("cannot open transcript: " + path);
    std::vector<SolveOutcome> outcomes;
    SolveOutcome cur;
    bool open = false;
    std::string line;
    int lineno = 0;
    auto fail = [&](const std::string& msg) -> OrchestratorError {
        std::ostringstream os;
        os << path << ":" << lineno << ": " << msg;
        return OrchestratorError(os.str());
    };
    while (std::getline(in, line)) {
        lineno++;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_tabs(line);
        if (fields[0] == "attempt") {
            if (fields.size() != 7) throw fail("attempt line needs 7 fields");
            const std::string id = unescape_field(fields[1]);
            if (!open || cur.problem_id != id) {
                if (open) outcomes.push_back(std::move(cur));
                cur = SolveOutcome{};
                cur.problem_id = id;
                open = true;
            }
            AttemptRecord rec;
            rec.attempt_index = std::stoi(fields[2]);
            if (fields[3] != "-") cur.category_used = category_from_string(fields[3]);
            auto strat = strategy_from_string(fields[4]);
            if (!strat) throw fail("unknown strategy \"" + fields[4] + "\"");
            rec.strategy = *strat;
            if (fields[5] != "-") rec.parsed_answer = std::stoi(fields[5]);
            rec.latency_ms = std::stoll(fields[6]);
            cur.attempts.push_back(rec);
        } else if (fields[0] == "summary") {
            if (fields.size() != 6) throw fail("summary line needs 6 fields");
            const std::string id = unescape_field(fields[1]);
            if (!open || cur.problem_id != id) {
                if (open) outcomes.push_back(std::move(cur));
                cur = SolveOutcome{};
                cur.problem_id = id;
                open = true;
            }
            if (fields[2] != "-") cur.category_used = category_from_string(fields[2]);
            if (fields[3] != "-") cur.final_answer = std::stoi(fields[3]);
            cur.final_frequency = std::stoi(fields[4]);
            if (fields[5] != "-") {
                std::istringstream hs(fields[5]);
                std::string item;
                while (std::getline(hs, item, ',')) {
                    const size_t colon = item.find(':');
                    if (colon == std::string::npos) throw fail("malformed histogram");
                    cur.histogram[std::stoi(item.substr(0, colon))] =
                        std::stoi(item.substr(colon + 1));
                }
            }
            outcomes.push_back(std::move(cur));
            cur = SolveOutcome{};
            open = false;
        } else {
            throw fail("unknown record type \"" + fields[0] + "\"");
        }
    }
    if (open) outcomes.push_back(std::move(cur));
    return outcomes;
}

}  // namespace srouter
