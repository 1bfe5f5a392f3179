#include "srouter/corpus.hpp"

#include <fstream>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

namespace srouter {

using nlohmann::json;

std::string_view to_string(Category c) {
    switch (c) {
        case Category::Algebra: return "algebra";
        case Category::Combinatorics: return "combinatorics";
        case Category::Geometry: return "geometry";
        case Category::NumberTheory: return "number theory";
    }
    return "";
}

std::optional<Category> category_from_string(std::string_view s) {
    if (s == "algebra") return Category::Algebra;
    if (s == "combinatorics") return Category::Combinatorics;
    if (s == "geometry") return Category::Geometry;
    if (s == "number theory") return Category::NumberTheory;
    return std::nullopt;
}

char category_letter(Category c) {
    switch (c) {
        case Category::Algebra: return 'A';
        case Category::Combinatorics: return 'C';
        case Category::Geometry: return 'G';
        case Category::NumberTheory: return 'N';
    }
    return '?';
}

CategoryCounts Corpus::counts() const {
    CategoryCounts cc;
    for (const auto& p : problems) {
        if (p.category) cc[*p.category]++;
    }
    return cc;
}

namespace {

Problem parse_record(const json& j, size_t line, const std::string& origin) {
    auto fail = [&](const std::string& msg) -> CorpusError {
        std::ostringstream os;
        os << origin << ":" << line << ": " << msg;
        return CorpusError(os.str());
    };
    if (!j.is_object()) throw fail("record is not an object");
    Problem p;
    if (!j.contains("id") || !j["id"].is_string()) throw fail("missing string field 'id'");
    p.id = j["id"].get<std::string>();
    if (!j.contains("text") || !j["text"].is_string()) throw fail("missing string field 'text'");
    p.text = j["text"].get<std::string>();
    if (j.contains("category") && !j["category"].is_null()) {
        if (!j["category"].is_string()) throw fail("field 'category' must be a string");
        auto cat = category_from_string(j["category"].get<std::string>());
        if (!cat) throw fail("unknown category \"" + j["category"].get<std::string>() + "\"");
        p.category = cat;
    }
    if (j.contains("answer") && !j["answer"].is_null()) {
        if (!j["answer"].is_number_integer()) throw fail("field 'answer' must be an integer");
        const int a = j["answer"].get<int>();
        if (a < 0 || a > 999) throw fail("answer " + std::to_string(a) + " outside [0, 999]");
        p.answer = a;
    }
    if (j.contains("source") && !j["source"].is_null()) {
        if (!j["source"].is_string()) throw fail("field 'source' must be a string");
        p.source = j["source"].get<std::string>();
    }
    return p;
}

}  // namespace

Corpus parse_corpus(std::string_view data, const std::string& origin) {
    Corpus c;
    std::unordered_set<std::string> seen;
    size_t line = 0;
    size_t pos = 0;
    while (pos <= data.size()) {
        size_t nl = data.find('\n', pos);
        std::string_view raw = (nl == std::string_view::npos)
                                   ? data.substr(pos)
                                   : data.substr(pos, nl - pos);
        pos = (nl == std::string_view::npos) ? data.size() + 1 : nl + 1;
        line++;
        // tolerate CRLF and blank lines
        if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
        bool blank = true;
        for (char ch : raw) {
            if (ch != ' ' && ch != '\t') { blank = false; break; }
        }
        if (blank) continue;

        json j = json::parse(raw, nullptr, false);
        if (j.is_discarded()) {
            std::ostringstream os;
            os << origin << ":" << line << ": malformed record (invalid JSON)";
            throw CorpusError(os.str());
        }
        Problem p = parse_record(j, line, origin);
        if (!seen.insert(p.id).second) {
            std::ostringstream os;
            os << origin << ":" << line << ": duplicate id \"" << p.id << "\"";
            throw CorpusError(os.str());
        }
        c.problems.push_back(std::move(p));
    }
    return c;
}

Corpus load_corpus(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CorpusError("cannot open corpus file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_corpus(buf.str(), path);
}

std::string serialize_corpus(const Corpus& c) {
    std::string out;
    for (const auto& p : c.problems) {
        json j;
        j["id"] = p.id;
        j["text"] = p.text;
        if (p.category) j["category"] = std::string(to_string(*p.category));
        if (p.answer) j["answer"] = *p.answer;
        if (!p.source.empty()) j["source"] = p.source;
        out += j.dump();
        out += '\n';
    }
    return out;
}

void save_corpus(const Corpus& c, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw CorpusError("cannot open output file: " + path);
    out << serialize_corpus(c);
    if (!out) throw CorpusError("write failed: " + path);
}

Corpus merge_corpora(const Corpus& base, const Corpus& extra) {
    std::unordered_set<std::string> seen;
    for (const auto& p : base.problems) seen.insert(p.id);
    Corpus out = base;
    out.problems.reserve(base.size() + extra.size());
    for (const auto& p : extra.problems) {
        if (!seen.insert(p.id).second) {
            throw CorpusError("merge: id collision on \"" + p.id + "\"");
        }
        out.problems.push_back(p);
    }
    return out;
}

int replication_factor(int max_count, int count) {
    // round half up of max_count/count
    return (2 * max_count + count) / (2 * count);
}

Corpus balance_corpus(const Corpus& c) {
    CategoryCounts counts;
    for (const auto& p : c.problems) {
        if (!p.category) throw CorpusError("balance: unlabeled problem \"" + p.id + "\"");
        counts[*p.category]++;
    }
    int max_count = 0;
    for (Category cat : kAllCategories) {
        if (counts[cat] == 0) {
            throw CorpusError(std::string("balance: empty category \"") +
                              std::string(to_string(cat)) + "\"");
        }
        max_count = std::max(max_count, counts[cat]);
    }
    Corpus out;
    for (const auto& p : c.problems) {
        const int r = replication_factor(max_count, counts[*p.category]);
        out.problems.push_back(p);
        for (int k = 2; k <= r; ++k) {
            Problem copy = p;
            copy.id += "#" + std::to_string(k);
            out.problems.push_back(std::move(copy));
        }
    }
    return out;
}

}  // namespace srouter
