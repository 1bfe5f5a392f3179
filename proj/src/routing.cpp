#include "srouter/routing.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace srouter {

std::string_view to_string(Strategy s) {
    return s == Strategy::CT ? "ct" : "pt";
}

std::optional<Strategy> strategy_from_string(std::string_view s) {
    if (s == "ct") return Strategy::CT;
    if (s == "pt") return Strategy::PT;
    return std::nullopt;
}

StrategyWeights default_weights() {
    StrategyWeights w;
    w.p_ct[static_cast<int>(Category::Algebra)] = 0.50;
    w.p_ct[static_cast<int>(Category::Combinatorics)] = 0.35;
    w.p_ct[static_cast<int>(Category::Geometry)] = 0.90;
    w.p_ct[static_cast<int>(Category::NumberTheory)] = 0.50;
    return w;
}

Strategy sample_strategy(Category cat, const StrategyWeights& w, Rng& rng) {
    return rng.uniform() < w.ct(cat) ? Strategy::CT : Strategy::PT;
}

Strategy sample_strategy_uniform(Rng& rng) {
    return rng.uniform() < 0.5 ? Strategy::CT : Strategy::PT;
}

StrategyWeights load_weights(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw RoutingError("cannot open weights file: " + path);
    StrategyWeights w;
    std::array<bool, kNumCategories> seen{};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        lineno++;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fail = [&](const std::string& msg) -> RoutingError {
            std::ostringstream os;
            os << path << ":" << lineno << ": " << msg;
            return RoutingError(os.str());
        };
        // category name may contain a space; the last two fields are numbers
        const size_t last = line.find_last_of(" \t");
        if (last == std::string::npos) throw fail("expected \"category p_ct p_pt\"");
        const size_t prev = line.find_last_of(" \t", last - 1);
        if (prev == std::string::npos) throw fail("expected \"category p_ct p_pt\"");
        const std::string name = line.substr(0, prev);
        double p_ct, p_pt;
        try {
            p_ct = std::stod(line.substr(prev + 1, last - prev - 1));
            p_pt = std::stod(line.substr(last + 1));
        } catch (const std::exception&) {
            throw fail("malformed probability");
        }
        auto cat = category_from_string(name);
        if (!cat) throw fail("unknown category \"" + name + "\"");
        if (seen[static_cast<int>(*cat)]) throw fail("duplicate category \"" + name + "\"");
        if (p_ct < 0 || p_pt < 0 || std::abs(p_ct + p_pt - 1.0) > 1e-9) {
            throw fail("probabilities must be nonnegative and sum to 1");
        }
        w.p_ct[static_cast<int>(*cat)] = p_ct;
        seen[static_cast<int>(*cat)] = true;
    }
    for (Category c : kAllCategories) {
        if (!seen[static_cast<int>(c)]) {
            throw RoutingError(path + ": missing category \"" + std::string(to_string(c)) + "\"");
        }
    }
    return w;
}

void save_weights(const StrategyWeights& w, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw RoutingError("cannot open output file: " + path);
    for (Category c : kAllCategories) {
        out << to_string(c) << " " << w.ct(c) << " " << w.pt(c) << "\n";
    }
    if (!out) throw RoutingError("write failed: " + path);
}

}  // namespace srouter
