#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "srouter/corpus.hpp"
#include "srouter/rng.hpp"

namespace srouter {

enum class Strategy { CT, PT };

std::string_view to_string(Strategy s);
std::optional<Strategy> strategy_from_string(std::string_view s);

// Per-category probability of choosing CT; p_pt = 1 - p_ct.
struct StrategyWeights {
    std::array<double, kNumCategories> p_ct{};

    double ct(Category c) const { return p_ct[static_cast<int>(c)]; }
    double pt(Category c) const { return 1.0 - ct(c); }
};

// Algebra 50/50, Combinatorics 35/65, Geometry 90/10, NumberTheory 50/50.
StrategyWeights default_weights();

// One rng draw per call: CT iff the draw lands below p_ct(cat).
Strategy sample_strategy(Category cat, const StrategyWeights& w, Rng& rng);

// Fair-coin draw used when no category is available.
Strategy sample_strategy_uniform(Rng& rng);

class RoutingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Override file: four lines "category p_ct p_pt" (category names quoted as in
// corpus serialization; "number theory" keeps its space).
StrategyWeights load_weights(const std::string& path);
void save_weights(const StrategyWeights& w, const std::string& path);

}  // namespace srouter
