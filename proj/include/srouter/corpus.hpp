#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace srouter {

enum class Category { Algebra = 0, Combinatorics = 1, Geometry = 2, NumberTheory = 3 };

inline constexpr int kNumCategories = 4;
inline constexpr std::array<Category, 4> kAllCategories = {
    Category::Algebra, Category::Combinatorics, Category::Geometry, Category::NumberTheory};

std::string_view to_string(Category c);
std::optional<Category> category_from_string(std::string_view s);

// Single-letter column label used in report tables (A/C/G/N).
char category_letter(Category c);

struct Problem {
    std::string id;
    std::string text;
    std::optional<Category> category;
    std::optional<int> answer;  // AIME-style, [0, 999]
    std::string source;
};

struct CategoryCounts {
    std::array<int, kNumCategories> n{};

    int& operator[](Category c) { return n[static_cast<int>(c)]; }
    int operator[](Category c) const { return n[static_cast<int>(c)]; }
    int total() const { return n[0] + n[1] + n[2] + n[3]; }
    bool operator==(const CategoryCounts&) const = default;
};

struct Corpus {
    std::vector<Problem> problems;

    // Tally over labeled problems only.
    CategoryCounts counts() const;
    size_t size() const { return problems.size(); }
};

class CorpusError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Line-delimited JSON records: {id, text, category?, answer?, source?}.
Corpus load_corpus(const std::string& path);
void save_corpus(const Corpus& c, const std::string& path);

// Parse from an already-loaded string (line numbers reported from 1).
Corpus parse_corpus(std::string_view data, const std::string& origin = "<memory>");
std::string serialize_corpus(const Corpus& c);

// Concatenation, base then extra; throws CorpusError on id collision.
Corpus merge_corpora(const Corpus& base, const Corpus& extra);

// Duplicate minority-category problems so counts come out roughly equal:
// each problem of a category with count n gets round(M/n) copies, M = max
// count. Replicas are adjacent to the original, extra copies get "#k" id
// suffixes. Requires a fully labeled corpus with every category present.
Corpus balance_corpus(const Corpus& c);

// round-half-up of M/n, the per-category replication factor
int replication_factor(int max_count, int count);

}  // namespace srouter
