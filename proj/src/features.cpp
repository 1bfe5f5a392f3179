#include "srouter/features.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "srouter/rng.hpp"

namespace srouter {

namespace {

bool is_space_byte(unsigned char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

void fold(std::string& s) {
    for (char& c : s) {
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
}

std::string escape_token(const std::string& t) {
    std::string out;
    for (unsigned char c : t) {
        if (c == '\\') {
            out += "\\\\";
        } else if (c < 0x20) {
            char buf[5];
            std::snprintf(buf, sizeof(buf), "\\x%02x", c);
            out += buf;
        } else {
            out += static_cast<char>(c);
        }
    }
    return out;
}

std::string unescape_token(const std::string& t, const std::string& where) {
    std::string out;
    for (size_t i = 0; i < t.size(); ++i) {
        if (t[i] != '\\') {
            out += t[i];
            continue;
        }
        if (i + 1 < t.size() && t[i + 1] == '\\') {
            out += '\\';
            i++;
        } else if (i + 3 < t.size() && t[i + 1] == 'x') {
            out += static_cast<char>(std::stoi(t.substr(i + 2, 2), nullptr, 16));
            i += 3;
        } else {
            throw FeatureError("bad escape in vocabulary file: " + where);
        }
    }
    return out;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text, const TokenizationConfig& config) {
    std::vector<std::string> tokens;
    std::string cur;
    size_t i = 0;
    auto flush = [&] {
        if (!cur.empty()) {
            if (config.case_folding) fold(cur);
            tokens.push_back(std::move(cur));
            cur.clear();
        }
    };
    while (i < text.size()) {
        const unsigned char c = static_cast<unsigned char>(text[i]);
        if (is_space_byte(c)) {
            flush();
            i++;
        } else if (c == 0xC2 && i + 1 < text.size() &&
                   static_cast<unsigned char>(text[i + 1]) == 0xA0) {
            // U+00A0 no-break space
            flush();
            i += 2;
        } else {
            cur += static_cast<char>(c);
            i++;
        }
    }
    flush();
    return tokens;
}

uint64_t vocabulary_fingerprint(const std::vector<std::string>& tokens,
                                const TokenizationConfig& config) {
    std::string header = std::to_string(config.min_token_length) + "|" +
                         std::to_string(config.min_corpus_frequency) + "|" +
                         (config.case_folding ? "1" : "0");
    uint64_t h = fnv1a(header);
    for (const auto& t : tokens) {
        h = fnv1a("\x1f", h);
        h = fnv1a(t, h);
    }
    return h;
}

IndicatorVocabulary build_vocabulary(const Corpus& train, const TokenizationConfig& config) {
    if (train.problems.empty()) throw FeatureError("build_vocabulary: empty corpus");
    std::unordered_map<std::string, int> freq;
    for (const auto& p : train.problems) {
        for (auto& t : tokenize(p.text, config)) {
            freq[std::move(t)]++;
        }
    }
    IndicatorVocabulary vocab;
    vocab.config = config;
    for (const auto& [tok, n] : freq) {
        if (static_cast<int>(tok.size()) >= config.min_token_length &&
            n >= config.min_corpus_frequency) {
            vocab.tokens.push_back(tok);
        }
    }
    std::sort(vocab.tokens.begin(), vocab.tokens.end());
    vocab.fingerprint = vocabulary_fingerprint(vocab.tokens, config);
    return vocab;
}

FeatureVector featurize(std::string_view text, const IndicatorVocabulary& vocab) {
    std::unordered_set<std::string> present;
    for (auto& t : tokenize(text, vocab.config)) {
        present.insert(std::move(t));
    }
    FeatureVector fv;
    fv.vocabulary_fingerprint = vocab.fingerprint;
    fv.bits.resize(vocab.tokens.size());
    for (size_t i = 0; i < vocab.tokens.size(); ++i) {
        fv.bits[i] = present.count(vocab.tokens[i]) ? 1 : 0;
    }
    return fv;
}

void save_vocabulary(const IndicatorVocabulary& vocab, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FeatureError("cannot open output file: " + path);
    out << "min_length=" << vocab.config.min_token_length
        << " min_count=" << vocab.config.min_corpus_frequency
        << " case_folding=" << (vocab.config.case_folding ? 1 : 0) << " fingerprint=" << std::hex
        << vocab.fingerprint << std::dec << "\n";
    for (const auto& t : vocab.tokens) out << escape_token(t) << "\n";
    if (!out) throw FeatureError("write failed: " + path);
}

IndicatorVocabulary load_vocabulary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FeatureError("cannot open vocabulary file: " + path);
    std::string header;
    if (!std::getline(in, header)) throw FeatureError("empty vocabulary file: " + path);
    IndicatorVocabulary vocab;
    uint64_t stated_fp = 0;
    {
        std::istringstream hs(header);
        std::string kv;
        int fields = 0;
        while (hs >> kv) {
            auto eq = kv.find('=');
            if (eq == std::string::npos) throw FeatureError("bad vocabulary header: " + path);
            const std::string key = kv.substr(0, eq);
            const std::string val = kv.substr(eq + 1);
            if (key == "min_length") {
                vocab.config.min_token_length = std::stoi(val);
            } else if (key == "min_count") {
                vocab.config.min_corpus_frequency = std::stoi(val);
            } else if (key == "case_folding") {
                vocab.config.case_folding = val != "0";
            } else if (key == "fingerprint") {
                stated_fp = std::stoull(val, nullptr, 16);
            } else {
                throw FeatureError("unknown vocabulary header field \"" + key + "\": " + path);
            }
            fields++;
        }
        if (fields != 4) throw FeatureError("bad vocabulary header: " + path);
    }
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        vocab.tokens.push_back(unescape_token(line, path));
    }
    vocab.fingerprint = vocabulary_fingerprint(vocab.tokens, vocab.config);
    if (vocab.fingerprint != stated_fp) {
        throw FeatureError("vocabulary fingerprint mismatch (file corrupt?): " + path);
    }
    return vocab;
}

}  // namespace srouter
