#include "srouter/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <sstream>

#include "srouter/rng.hpp"

namespace srouter {

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

constexpr double kLogEps = 1e-12;

struct Activations {
    std::array<double, kHiddenNodes> hidden{};
    std::array<double, kNumCategories> output{};
};

Activations forward(const CategorizerModel& m, const std::vector<uint8_t>& bits) {
    Activations act;
    for (int h = 0; h < kHiddenNodes; ++h) {
        double z = m.b1[h];
        const double* row = m.w1.data() + static_cast<size_t>(h) * m.vocab_size;
        for (int v = 0; v < m.vocab_size; ++v) {
            if (bits[v]) z += row[v];
        }
        act.hidden[h] = sigmoid(z);
    }
    for (int o = 0; o < kNumCategories; ++o) {
        double z = m.b2[o];
        for (int h = 0; h < kHiddenNodes; ++h) {
            z += m.w2[o * kHiddenNodes + h] * act.hidden[h];
        }
        act.output[o] = sigmoid(z);
    }
    return act;
}

void check_fingerprint(const CategorizerModel& m, uint64_t fp) {
    if (m.vocabulary_fingerprint != fp) {
        std::ostringstream os;
        os << "vocabulary fingerprint mismatch: model has " << std::hex
           << m.vocabulary_fingerprint << ", input has " << fp;
        throw ClassifierError(os.str());
    }
}

}  // namespace

std::array<double, kNumCategories> forward_raw(const CategorizerModel& m,
                                               const std::vector<uint8_t>& bits) {
    if (static_cast<int>(bits.size()) != m.vocab_size) {
        throw ClassifierError("feature vector length does not match model input size");
    }
    return forward(m, bits).output;
}

CategorizerModel init_model(int vocab_size, const TrainingConfig& cfg) {
    if (vocab_size < 1) throw ClassifierError("init_model: vocab_size must be >= 1");
    CategorizerModel m;
    m.vocab_size = vocab_size;
    m.seed = cfg.seed;
    m.w1.resize(static_cast<size_t>(kHiddenNodes) * vocab_size);
    Rng rng(splitmix64(cfg.seed));
    for (auto& w : m.w1) w = rng.uniform(-cfg.init_scale, cfg.init_scale);
    for (auto& w : m.w2) w = rng.uniform(-cfg.init_scale, cfg.init_scale);
    m.b1.fill(0.0);
    m.b2.fill(0.0);
    return m;
}

double loss_and_gradient(const CategorizerModel& m, const std::vector<uint8_t>& bits,
                         Category target, std::vector<double>* grad) {
    const Activations act = forward(m, bits);
    double loss = 0;
    std::array<double, kNumCategories> delta_out{};  // dL/dz2
    for (int o = 0; o < kNumCategories; ++o) {
        const double y = (o == static_cast<int>(target)) ? 1.0 : 0.0;
        const double p = std::clamp(act.output[o], kLogEps, 1.0 - kLogEps);
        loss -= y * std::log(p) + (1.0 - y) * std::log(1.0 - p);
        delta_out[o] = act.output[o] - y;
    }
    if (grad) {
        grad->assign(parameter_count(m), 0.0);
        const size_t off_b1 = static_cast<size_t>(kHiddenNodes) * m.vocab_size;
        const size_t off_w2 = off_b1 + kHiddenNodes;
        const size_t off_b2 = off_w2 + m.w2.size();
        std::array<double, kHiddenNodes> delta_hidden{};
        for (int h = 0; h < kHiddenNodes; ++h) {
            double d = 0;
            for (int o = 0; o < kNumCategories; ++o) {
                d += m.w2[o * kHiddenNodes + h] * delta_out[o];
            }
            delta_hidden[h] = d * act.hidden[h] * (1.0 - act.hidden[h]);
        }
        for (int o = 0; o < kNumCategories; ++o) {
            for (int h = 0; h < kHiddenNodes; ++h) {
                (*grad)[off_w2 + o * kHiddenNodes + h] = delta_out[o] * act.hidden[h];
            }
            (*grad)[off_b2 + o] = delta_out[o];
        }
        for (int h = 0; h < kHiddenNodes; ++h) {
            double* row = grad->data() + static_cast<size_t>(h) * m.vocab_size;
            for (int v = 0; v < m.vocab_size; ++v) {
                if (bits[v]) row[v] = delta_hidden[h];
            }
            (*grad)[off_b1 + h] = delta_hidden[h];
        }
    }
    return loss;
}

size_t parameter_count(const CategorizerModel& m) {
    return m.w1.size() + m.b1.size() + m.w2.size() + m.b2.size();
}

std::vector<double> flatten_parameters(const CategorizerModel& m) {
    std::vector<double> out;
    out.reserve(parameter_count(m));
    out.insert(out.end(), m.w1.begin(), m.w1.end());
    out.insert(out.end(), m.b1.begin(), m.b1.end());
    out.insert(out.end(), m.w2.begin(), m.w2.end());
    out.insert(out.end(), m.b2.begin(), m.b2.end());
    return out;
}

void unflatten_parameters(CategorizerModel& m, const std::vector<double>& params) {
    if (params.size() != parameter_count(m)) {
        throw ClassifierError("unflatten_parameters: size mismatch");
    }
    auto it = params.begin();
    std::copy(it, it + m.w1.size(), m.w1.begin());
    it += m.w1.size();
    std::copy(it, it + m.b1.size(), m.b1.begin());
    it += m.b1.size();
    std::copy(it, it + m.w2.size(), m.w2.begin());
    it += m.w2.size();
    std::copy(it, it + m.b2.size(), m.b2.begin());
}

CategorizerModel train(CategorizerModel model, const Corpus& train_corpus,
                       const IndicatorVocabulary& vocab, const TrainingConfig& cfg) {
    if (cfg.epochs < 1) throw ClassifierError("train: epochs must be >= 1");
    if (cfg.learning_rate <= 0) throw ClassifierError("train: learning_rate must be > 0");
    if (model.vocab_size != static_cast<int>(vocab.size())) {
        throw ClassifierError("train: model input size does not match vocabulary");
    }
    model.vocabulary_fingerprint = vocab.fingerprint;

    const size_t n = train_corpus.problems.size();
    if (n == 0) throw ClassifierError("train: empty corpus");
    std::vector<std::vector<uint8_t>> features(n);
    std::vector<Category> labels(n);
    for (size_t i = 0; i < n; ++i) {
        const Problem& p = train_corpus.problems[i];
        if (!p.category) throw ClassifierError("train: unlabeled problem \"" + p.id + "\"");
        features[i] = featurize(p.text, vocab).bits;
        labels[i] = *p.category;
    }

    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> grad;
    Rng shuffle_rng(splitmix64(cfg.seed + 0x9e3779b97f4a7c15ULL));

    const size_t off_b1 = static_cast<size_t>(kHiddenNodes) * model.vocab_size;
    const size_t off_w2 = off_b1 + kHiddenNodes;
    const size_t off_b2 = off_w2 + model.w2.size();

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        // Fisher-Yates with our deterministic rng
        for (size_t i = n - 1; i > 0; --i) {
            const size_t j = shuffle_rng.uniform_int(i + 1);
            std::swap(order[i], order[j]);
        }
        for (size_t idx : order) {
            const double loss = loss_and_gradient(model, features[idx], labels[idx], &grad);
            if (!std::isfinite(loss)) {
                throw ClassifierError("train: non-finite loss at epoch " +
                                      std::to_string(epoch + 1));
            }
            const double lr = cfg.learning_rate;
            for (size_t k = 0; k < model.w1.size(); ++k) model.w1[k] -= lr * grad[k];
            for (int h = 0; h < kHiddenNodes; ++h) model.b1[h] -= lr * grad[off_b1 + h];
            for (size_t k = 0; k < model.w2.size(); ++k) model.w2[k] -= lr * grad[off_w2 + k];
            for (int o = 0; o < kNumCategories; ++o) model.b2[o] -= lr * grad[off_b2 + o];
        }
    }

    size_t correct = 0;
    for (size_t i = 0; i < n; ++i) {
        const auto out = forward(model, features[i]).output;
        const int argmax =
            static_cast<int>(std::max_element(out.begin(), out.end()) - out.begin());
        if (argmax == static_cast<int>(labels[i])) correct++;
    }
    model.epochs = cfg.epochs;
    model.learning_rate = cfg.learning_rate;
    model.seed = cfg.seed;
    model.final_training_accuracy = static_cast<double>(correct) / static_cast<double>(n);
    return model;
}

CategoryDistribution predict_proba(const CategorizerModel& m, const FeatureVector& x) {
    check_fingerprint(m, x.vocabulary_fingerprint);
    const auto out = forward_raw(m, x.bits);
    double sum = 0;
    for (double o : out) sum += o;
    CategoryDistribution dist;
    for (int i = 0; i < kNumCategories; ++i) dist.p[i] = out[i] / sum;
    return dist;
}

Category predict_category(const CategorizerModel& m, const FeatureVector& x) {
    const auto dist = predict_proba(m, x);
    int best = 0;
    for (int i = 1; i < kNumCategories; ++i) {
        if (dist.p[i] > dist.p[best]) best = i;  // ties keep the lowest index
    }
    return static_cast<Category>(best);
}

namespace {

constexpr char kMagic[4] = {'C', 'A', 'T', '1'};
constexpr uint32_t kFormatVersion = 1;

void put_bytes(std::string& buf, const void* data, size_t len) {
    buf.append(static_cast<const char*>(data), len);
}

template <typename T>
void put(std::string& buf, T v) {
    static_assert(std::is_trivially_copyable_v<T>);
    put_bytes(buf, &v, sizeof(v));
}

template <typename T>
T take(const std::string& buf, size_t& pos) {
    if (pos + sizeof(T) > buf.size()) throw ClassifierError("model file truncated");
    T v;
    std::memcpy(&v, buf.data() + pos, sizeof(T));
    pos += sizeof(T);
    return v;
}

}  // namespace

void save_model(const CategorizerModel& m, const std::string& path) {
    std::string buf;
    put_bytes(buf, kMagic, 4);
    put(buf, kFormatVersion);
    put(buf, m.vocabulary_fingerprint);
    put(buf, static_cast<uint32_t>(m.vocab_size));
    put(buf, static_cast<uint32_t>(kHiddenNodes));
    put(buf, static_cast<uint32_t>(kNumCategories));
    put(buf, m.seed);
    put(buf, static_cast<uint32_t>(m.epochs));
    put(buf, m.learning_rate);
    put(buf, m.final_training_accuracy);
    for (double w : m.w1) put(buf, w);
    for (double w : m.b1) put(buf, w);
    for (double w : m.w2) put(buf, w);
    for (double w : m.b2) put(buf, w);
    put(buf, fnv1a(buf));

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ClassifierError("cannot open output file: " + path);
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw ClassifierError("write failed: " + path);
}

CategorizerModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ClassifierError("cannot open model file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    const std::string buf = ss.str();
    if (buf.size() < 4 + sizeof(uint32_t) + sizeof(uint64_t)) {
        throw ClassifierError("model file truncated: " + path);
    }
    if (std::memcmp(buf.data(), kMagic, 4) != 0) {
        throw ClassifierError("bad magic bytes (not a model file): " + path);
    }
    const uint64_t stored_sum = [&] {
        uint64_t v;
        std::memcpy(&v, buf.data() + buf.size() - sizeof(uint64_t), sizeof(uint64_t));
        return v;
    }();
    if (fnv1a(std::string_view(buf.data(), buf.size() - sizeof(uint64_t))) != stored_sum) {
        throw ClassifierError("model file corrupt (checksum mismatch): " + path);
    }

    size_t pos = 4;
    const uint32_t version = take<uint32_t>(buf, pos);
    if (version != kFormatVersion) {
        throw ClassifierError("unsupported model format version " + std::to_string(version));
    }
    CategorizerModel m;
    m.vocabulary_fingerprint = take<uint64_t>(buf, pos);
    m.vocab_size = static_cast<int>(take<uint32_t>(buf, pos));
    const uint32_t hidden = take<uint32_t>(buf, pos);
    const uint32_t outputs = take<uint32_t>(buf, pos);
    if (hidden != kHiddenNodes || outputs != kNumCategories) {
        throw ClassifierError("unexpected model dimensions in " + path);
    }
    m.seed = take<uint64_t>(buf, pos);
    m.epochs = static_cast<int>(take<uint32_t>(buf, pos));
    m.learning_rate = take<double>(buf, pos);
    m.final_training_accuracy = take<double>(buf, pos);
    m.w1.resize(static_cast<size_t>(kHiddenNodes) * m.vocab_size);
    for (auto& w : m.w1) w = take<double>(buf, pos);
    for (auto& w : m.b1) w = take<double>(buf, pos);
    for (auto& w : m.w2) w = take<double>(buf, pos);
    for (auto& w : m.b2) w = take<double>(buf, pos);
    if (pos + sizeof(uint64_t) != buf.size()) {
        throw ClassifierError("trailing bytes in model file: " + path);
    }
    return m;
}

}  // namespace srouter
