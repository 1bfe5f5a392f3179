#include <cmath>
#include <doctest.h>
#include <fstream>

#include "srouter/routing.hpp"

using namespace srouter;

TEST_CASE("default weights match the tuned distribution") {
    const StrategyWeights w = default_weights();
    CHECK(w.ct(Category::Algebra) == 0.50);
    CHECK(w.pt(Category::Algebra) == 0.50);
    CHECK(w.ct(Category::NumberTheory) == 0.50);
    CHECK(w.ct(Category::Geometry) == 0.90);
    CHECK(w.pt(Category::Geometry) == doctest::Approx(0.10));
    CHECK(w.ct(Category::Combinatorics) == 0.35);
    CHECK(w.pt(Category::Combinatorics) == doctest::Approx(0.65));
}

TEST_CASE("degenerate weights always pick the same strategy") {
    StrategyWeights w;
    w.p_ct = {1.0, 1.0, 1.0, 1.0};
    Rng rng(1);
    for (int i = 0; i < 100; ++i) {
        CHECK(sample_strategy(Category::Algebra, w, rng) == Strategy::CT);
    }
    w.p_ct = {0.0, 0.0, 0.0, 0.0};
    for (int i = 0; i < 100; ++i) {
        CHECK(sample_strategy(Category::Geometry, w, rng) == Strategy::PT);
    }
}

TEST_CASE("empirical CT frequency converges to the weights") {
    const StrategyWeights w = default_weights();
    const int n = 100000;
    for (Category cat : kAllCategories) {
        Rng rng(42 + static_cast<uint64_t>(cat));
        int ct = 0;
        for (int i = 0; i < n; ++i) {
            if (sample_strategy(cat, w, rng) == Strategy::CT) ct++;
        }
        const double freq = static_cast<double>(ct) / n;
        const double p = w.ct(cat);
        CHECK(std::abs(freq - p) <= 4.0 * std::sqrt(p * (1 - p) / n));
    }
}

TEST_CASE("same seed replays the identical strategy sequence") {
    const StrategyWeights w = default_weights();
    std::vector<Strategy> a, b;
    for (auto* out : {&a, &b}) {
        Rng rng(777);
        for (int i = 0; i < 50; ++i) {
            out->push_back(sample_strategy(Category::Combinatorics, w, rng));
        }
    }
    CHECK(a == b);
}

TEST_CASE("sample consumes exactly one draw") {
    const StrategyWeights w = default_weights();
    Rng a(5), b(5);
    (void)sample_strategy(Category::Geometry, w, a);
    (void)b.uniform();
    CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("weights file round-trip and validation") {
    StrategyWeights w = default_weights();
    w.p_ct[static_cast<int>(Category::Geometry)] = 0.8;
    const std::string path = "/tmp/srouter_weights_test.txt";
    save_weights(w, path);
    const StrategyWeights back = load_weights(path);
    for (Category c : kAllCategories) {
        CHECK(back.ct(c) == doctest::Approx(w.ct(c)));
    }

    {
        std::ofstream f(path, std::ios::trunc);
        f << "algebra 0.5 0.5\n";  // missing the other three categories
    }
    CHECK_THROWS_AS(load_weights(path), RoutingError);

    {
        std::ofstream f(path, std::ios::trunc);
        f << "algebra 0.6 0.6\ncombinatorics 0.35 0.65\ngeometry 0.9 0.1\n"
             "number theory 0.5 0.5\n";
    }
    CHECK_THROWS_AS(load_weights(path), RoutingError);  // 0.6 + 0.6 != 1
}
