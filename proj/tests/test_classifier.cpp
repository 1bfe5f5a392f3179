#include <cmath>
#include <doctest.h>
#include <fstream>

#include "srouter/classifier.hpp"
#include "srouter/rng.hpp"
#include "srouter/synthetic.hpp"

using namespace srouter;

namespace {

FeatureVector zero_input(const CategorizerModel& m) {
    FeatureVector fv;
    fv.bits.assign(m.vocab_size, 0);
    fv.vocabulary_fingerprint = m.vocabulary_fingerprint;
    return fv;
}

bool models_equal(const CategorizerModel& a, const CategorizerModel& b) {
    return a.vocab_size == b.vocab_size && a.w1 == b.w1 && a.b1 == b.b1 && a.w2 == b.w2 &&
           a.b2 == b.b2 && a.vocabulary_fingerprint == b.vocabulary_fingerprint;
}

struct TrainedSetup {
    IndicatorVocabulary vocab;
    CategorizerModel model;
    Corpus corpus;
};

TrainedSetup train_on_synthetic(const std::array<int, 4>& counts, uint64_t seed,
                                double indicator_prob = 1.0, int epochs = 200) {
    SyntheticConfig gen;
    gen.counts = counts;
    gen.seed = seed;
    gen.indicator_prob = indicator_prob;
    TrainedSetup s;
    s.corpus = make_synthetic_corpus(gen);
    s.vocab = build_vocabulary(s.corpus, {3, 1, true});
    TrainingConfig cfg;
    cfg.seed = seed;
    cfg.epochs = epochs;
    s.model = train(init_model(static_cast<int>(s.vocab.size()), cfg), s.corpus, s.vocab, cfg);
    return s;
}

double accuracy_on(const CategorizerModel& model, const IndicatorVocabulary& vocab,
                   const Corpus& corpus) {
    int correct = 0;
    for (const auto& p : corpus.problems) {
        if (predict_category(model, featurize(p.text, vocab)) == *p.category) correct++;
    }
    return static_cast<double>(correct) / corpus.size();
}

}  // namespace

TEST_CASE("init_model is seed-deterministic") {
    TrainingConfig cfg;
    cfg.seed = 17;
    const auto a = init_model(12, cfg);
    const auto b = init_model(12, cfg);
    CHECK(models_equal(a, b));
    cfg.seed = 18;
    const auto c = init_model(12, cfg);
    CHECK(a.w1 != c.w1);
    CHECK_THROWS_AS(init_model(0, cfg), ClassifierError);
}

TEST_CASE("zero-scale init predicts uniform") {
    TrainingConfig cfg;
    cfg.init_scale = 0;
    const auto m = init_model(6, cfg);
    const auto dist = predict_proba(m, zero_input(m));
    for (double p : dist.p) CHECK(p == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("predict_proba normalizes and stays in (0,1)") {
    TrainingConfig cfg;
    cfg.seed = 4;
    const auto m = init_model(9, cfg);
    FeatureVector fv = zero_input(m);
    fv.bits[3] = 1;
    const auto dist = predict_proba(m, fv);
    double sum = 0;
    for (double p : dist.p) {
        CHECK(p > 0);
        CHECK(p < 1);
        sum += p;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("hand-crafted single-indicator model drives geometry") {
    TrainingConfig cfg;
    cfg.init_scale = 0;
    auto m = init_model(1, cfg);
    // indicator 0 excites every hidden node; hidden nodes excite Geometry
    // only, and all other outputs are strongly suppressed
    for (int h = 0; h < kHiddenNodes; ++h) m.w1[h] = 8.0;
    m.b1.fill(-4.0);
    for (int o = 0; o < kNumCategories; ++o) m.b2[o] = -8.0;
    for (int h = 0; h < kHiddenNodes; ++h) {
        m.w2[static_cast<int>(Category::Geometry) * kHiddenNodes + h] = 2.0;
    }
    FeatureVector on = zero_input(m);
    on.bits[0] = 1;
    CHECK(predict_proba(m, on)[Category::Geometry] > 0.9);
    CHECK(predict_category(m, on) == Category::Geometry);
}

TEST_CASE("argmax tie-break goes to the lowest category index") {
    TrainingConfig cfg;
    cfg.init_scale = 0;
    const auto m = init_model(3, cfg);
    CHECK(predict_category(m, zero_input(m)) == Category::Algebra);
}

TEST_CASE("fingerprint mismatch is rejected") {
    TrainingConfig cfg;
    auto m = init_model(4, cfg);
    m.vocabulary_fingerprint = 0x1234;
    FeatureVector fv;
    fv.bits.assign(4, 0);
    fv.vocabulary_fingerprint = 0x9999;
    CHECK_THROWS_AS(predict_proba(m, fv), ClassifierError);
}

TEST_CASE("analytic gradient matches central finite differences") {
    Rng rng(123);
    for (int trial = 0; trial < 20; ++trial) {
        const int vocab_size = 1 + static_cast<int>(rng.uniform_int(20));
        TrainingConfig cfg;
        cfg.seed = rng.next_u64();
        cfg.init_scale = 0.5;
        CategorizerModel m = init_model(vocab_size, cfg);
        std::vector<uint8_t> bits(vocab_size);
        for (auto& b : bits) b = rng.uniform() < 0.5 ? 1 : 0;
        const Category target = static_cast<Category>(rng.uniform_int(4));

        std::vector<double> grad;
        loss_and_gradient(m, bits, target, &grad);
        auto params = flatten_parameters(m);
        const double h = 1e-5;
        for (int probe = 0; probe < 5; ++probe) {
            const size_t k = rng.uniform_int(params.size());
            const double saved = params[k];
            params[k] = saved + h;
            unflatten_parameters(m, params);
            const double up = loss_and_gradient(m, bits, target, nullptr);
            params[k] = saved - h;
            unflatten_parameters(m, params);
            const double down = loss_and_gradient(m, bits, target, nullptr);
            params[k] = saved;
            unflatten_parameters(m, params);
            const double numeric = (up - down) / (2 * h);
            const double denom = std::max({std::abs(numeric), std::abs(grad[k]), 1e-8});
            CHECK(std::abs(numeric - grad[k]) / denom < 1e-4);
        }
    }
}

TEST_CASE("training on a separable corpus reaches full accuracy") {
    const auto s = train_on_synthetic({40, 40, 40, 40}, 21);
    CHECK(s.model.final_training_accuracy >= 0.99);
}

TEST_CASE("training loss decreases on the separable corpus") {
    SyntheticConfig gen;
    gen.counts = {40, 40, 40, 40};
    gen.seed = 31;
    const Corpus corpus = make_synthetic_corpus(gen);
    const auto vocab = build_vocabulary(corpus, {});
    TrainingConfig cfg;
    cfg.seed = 31;
    const auto initial = init_model(static_cast<int>(vocab.size()), cfg);
    const auto trained = train(initial, corpus, vocab, cfg);

    auto total_loss = [&](CategorizerModel m) {
        m.vocabulary_fingerprint = vocab.fingerprint;
        double loss = 0;
        for (const auto& p : corpus.problems) {
            loss += loss_and_gradient(m, featurize(p.text, vocab).bits, *p.category, nullptr);
        }
        return loss;
    };
    CHECK(total_loss(trained) < total_loss(initial));
}

TEST_CASE("training rejects bad configs and unlabeled data") {
    SyntheticConfig gen;
    gen.counts = {2, 2, 2, 2};
    Corpus corpus = make_synthetic_corpus(gen);
    const auto vocab = build_vocabulary(corpus, {1, 1, true});
    TrainingConfig cfg;
    const auto m = init_model(static_cast<int>(vocab.size()), cfg);

    TrainingConfig zero_epochs = cfg;
    zero_epochs.epochs = 0;
    CHECK_THROWS_AS(train(m, corpus, vocab, zero_epochs), ClassifierError);

    corpus.problems[0].category.reset();
    CHECK_THROWS_AS(train(m, corpus, vocab, cfg), ClassifierError);
}

TEST_CASE("training is bit-deterministic") {
    const auto a = train_on_synthetic({10, 10, 10, 10}, 5);
    const auto b = train_on_synthetic({10, 10, 10, 10}, 5);
    CHECK(models_equal(a.model, b.model));
}

TEST_CASE("unbalanced training biases the empty input toward algebra") {
    const auto s = train_on_synthetic({237, 44, 40, 91}, 9, 0.75, 400);
    const auto dist = predict_proba(s.model, featurize("", s.vocab));
    CHECK(dist[Category::Algebra] >= 0.55);
}

TEST_CASE("model save/load round-trips bitwise") {
    const auto s = train_on_synthetic({5, 5, 5, 5}, 2);
    const std::string path = "/tmp/srouter_model_test.bin";
    save_model(s.model, path);
    const auto back = load_model(path);
    CHECK(models_equal(s.model, back));
    CHECK(back.final_training_accuracy == s.model.final_training_accuracy);
    CHECK(back.epochs == s.model.epochs);
}

TEST_CASE("truncated and corrupted model files are rejected") {
    const auto s = train_on_synthetic({3, 3, 3, 3}, 2);
    const std::string path = "/tmp/srouter_model_corrupt.bin";
    save_model(s.model, path);

    std::ifstream in(path, std::ios::binary);
    std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        out.write(buf.data(), static_cast<std::streamsize>(buf.size() / 2));
    }
    CHECK_THROWS_AS(load_model(path), ClassifierError);

    buf[buf.size() / 2] ^= 0x40;
    {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    }
    CHECK_THROWS_AS(load_model(path), ClassifierError);
}

TEST_CASE("a loaded model refuses features from another vocabulary") {
    const auto s = train_on_synthetic({3, 3, 3, 3}, 2);
    const std::string path = "/tmp/srouter_model_fp.bin";
    save_model(s.model, path);
    const auto back = load_model(path);

    IndicatorVocabulary other;
    other.tokens = {"zzz"};
    other.fingerprint = vocabulary_fingerprint(other.tokens, other.config);
    FeatureVector fv = featurize("zzz", other);
    CHECK_THROWS_AS(predict_proba(back, fv), ClassifierError);
}

TEST_CASE("held-out accuracy on fresh separable data") {
    const auto s = train_on_synthetic({40, 40, 40, 40}, 77);
    SyntheticConfig heldout;
    heldout.counts = {20, 20, 20, 20};
    heldout.seed = 1234;
    heldout.id_prefix = "held";
    CHECK(accuracy_on(s.model, s.vocab, make_synthetic_corpus(heldout)) >= 0.95);
}
