#include "secpatch/textview.hpp"

#include <algorithm>
#include <fstream>

#include "secpatch/errors.hpp"

namespace secpatch {

namespace {

bool is_ascii_alnum(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

char ascii_lower(char c) {
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

bool all_digits(std::string_view token) {
    return std::all_of(token.begin(), token.end(),
                       [](char c) { return c >= '0' && c <= '9'; });
}

bool has_vowel(std::string_view s) {
    return s.find_first_of("aeiou") != std::string_view::npos;
}

bool ends_with(std::string_view s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

}  // namespace

double SparseVector::l1_norm() const {
    double total = 0.0;
    for (const SparseEntry& entry : entries)
        total += entry.value;
    return total;
}

std::vector<std::string> tokenize(std::string_view message) {
    std::vector<std::string> tokens;
    std::string run;
    auto flush = [&] {
        if (run.size() >= 2 && !all_digits(run))
            tokens.push_back(run);
        run.clear();
    };
    for (char c : message) {
        if (is_ascii_alnum(c))
            run += ascii_lower(c);
        else
            flush();
    }
    flush();
    return tokens;
}

std::vector<std::string> remove_stopwords(const std::vector<std::string>& tokens,
                                          const std::unordered_set<std::string>& stoplist) {
    std::vector<std::string> kept;
    kept.reserve(tokens.size());
    for (const std::string& token : tokens)
        if (!stoplist.contains(token))
            kept.push_back(token);
    return kept;
}

namespace {

// One priority-ordered pass; stem() iterates it to a fixpoint so stacked
// suffixes ("fixings") cannot leave a strippable remainder behind.
std::string_view stem_pass(std::string_view t) {
    if (ends_with(t, "sses"))
        return t.substr(0, t.size() - 2);
    if (ends_with(t, "ies"))
        return t.substr(0, t.size() - 2);
    if (ends_with(t, "s") && !ends_with(t, "ss"))
        return t.substr(0, t.size() - 1);
    if (ends_with(t, "ing")) {
        std::string_view rest = t.substr(0, t.size() - 3);
        if (rest.size() >= 3 && has_vowel(rest))
            return rest;
    }
    if (ends_with(t, "ed")) {
        std::string_view rest = t.substr(0, t.size() - 2);
        if (rest.size() >= 3 && has_vowel(rest))
            return rest;
    }
    return t;
}

}  // namespace

std::string stem(const std::string& token) {
    std::string_view t = token;
    // Every firing rule strictly shrinks the token, so this terminates.
    for (std::string_view next = stem_pass(t); next.size() < t.size(); next = stem_pass(t))
        t = next;
    return std::string(t);
}

Vocabulary fit_vocabulary(const std::vector<std::vector<std::string>>& documents,
                          long min_df, long max_terms) {
    if (min_df < 1 || max_terms < 1)
        throw ConfigInvalid("fit_vocabulary requires min_df >= 1 and max_terms >= 1");

    std::map<std::string, long> df;
    for (const std::vector<std::string>& doc : documents) {
        std::unordered_set<std::string_view> seen;
        for (const std::string& term : doc)
            if (seen.insert(term).second)
                ++df[term];
    }

    std::vector<std::pair<std::string, long>> survivors;
    for (const auto& [term, count] : df)
        if (count >= min_df)
            survivors.emplace_back(term, count);
    if (survivors.empty())
        throw EmptyVocabulary("no term reaches document frequency " + std::to_string(min_df));

    if (static_cast<long>(survivors.size()) > max_terms) {
        std::sort(survivors.begin(), survivors.end(), [](const auto& a, const auto& b) {
            if (a.second != b.second)
                return a.second > b.second;
            return a.first < b.first;
        });
        survivors.resize(static_cast<std::size_t>(max_terms));
    }

    Vocabulary vocab;
    for (const auto& [term, count] : survivors)
        vocab.document_frequency[term] = count;
    int index = 0;
    for (const auto& [term, count] : vocab.document_frequency)
        vocab.term_to_index[term] = index++;
    return vocab;
}

SparseVector vectorize(const std::vector<std::string>& tokens, const Vocabulary& vocab) {
    std::map<int, double> counts;
    for (const std::string& token : tokens) {
        auto it = vocab.term_to_index.find(token);
        if (it != vocab.term_to_index.end())
            counts[it->second] += 1.0;
    }
    SparseVector vec;
    vec.entries.reserve(counts.size());
    for (const auto& [index, value] : counts)
        vec.entries.push_back({index, value});
    return vec;
}

std::unordered_set<std::string> load_stopwords(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open stop list " + path);
    std::unordered_set<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        std::size_t hash = line.find('#');
        if (hash != std::string::npos)
            line.resize(hash);
        std::size_t begin = line.find_first_not_of(" \t");
        if (begin == std::string::npos)
            continue;
        std::size_t end = line.find_last_not_of(" \t");
        std::string word = line.substr(begin, end - begin + 1);
        std::transform(word.begin(), word.end(), word.begin(), ascii_lower);
        words.insert(std::move(word));
    }
    return words;
}

std::vector<std::string> prepare_message(std::string_view message,
                                         const std::unordered_set<std::string>& stoplist) {
    std::vector<std::string> tokens = remove_stopwords(tokenize(message), stoplist);
    for (std::string& token : tokens)
        token = stem(token);
    return tokens;
}

}  // namespace secpatch
