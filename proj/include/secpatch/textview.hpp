#pragma once

#include <map>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace secpatch {

struct SparseEntry {
    int index;
    double value;

    friend bool operator==(const SparseEntry&, const SparseEntry&) = default;
};

// Sorted by strictly increasing index; all values > 0.
struct SparseVector {
    std::vector<SparseEntry> entries;

    double l1_norm() const;

    friend bool operator==(const SparseVector&, const SparseVector&) = default;
};

// Lowercases, splits on every non-alphanumeric byte, drops tokens shorter
// than 2 characters and pure-digit tokens.
std::vector<std::string> tokenize(std::string_view message);

// Order-preserving filter; stoplist entries must be lowercase.
std::vector<std::string> remove_stopwords(const std::vector<std::string>& tokens,
                                          const std::unordered_set<std::string>& stoplist);

// Lightweight suffix stripper. Repeatedly applies the highest-priority
// matching rule until none fires:
//   "sses" -> "ss"; "ies" -> "i"; trailing "s" (not "ss") dropped;
//   trailing "ing" dropped when the remaining stem has length >= 3 and a
//   vowel; trailing "ed" under the same condition.
// The result is a fixpoint, so stem is idempotent on its own output.
std::string stem(const std::string& token);

// Terms are stored stemmed and lowercase; indices are a bijection onto
// 0..size()-1 in lexicographic term order.
struct Vocabulary {
    std::map<std::string, int> term_to_index;
    std::map<std::string, long> document_frequency;

    int size() const { return static_cast<int>(term_to_index.size()); }

    friend bool operator==(const Vocabulary&, const Vocabulary&) = default;
};

// Keeps terms with document frequency >= min_df; if more than max_terms
// survive, keeps the max_terms highest-df terms with ties broken
// lexicographically ascending. Throws EmptyVocabulary when nothing
// survives.
Vocabulary fit_vocabulary(const std::vector<std::vector<std::string>>& documents,
                          long min_df, long max_terms);

// Term counts for in-vocabulary tokens; out-of-vocabulary tokens are
// ignored.
SparseVector vectorize(const std::vector<std::string>& tokens, const Vocabulary& vocab);

// Built-in English stop list (lowercase).
const std::unordered_set<std::string>& default_stopwords();

// One lowercase word per line; blank lines and `#` comments allowed.
std::unordered_set<std::string> load_stopwords(const std::string& path);

// The full message pipeline: tokenize, drop stop words, stem.
std::vector<std::string> prepare_message(std::string_view message,
                                         const std::unordered_set<std::string>& stoplist);

}  // namespace secpatch
