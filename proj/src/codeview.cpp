#include "secpatch/codeview.hpp"

#include <algorithm>
#include <unordered_map>

#include "secpatch/errors.hpp"

namespace secpatch {

namespace {

constexpr const char* kStructuralNames[] = {
    "files_changed", "hunks_total",  "lines_added",       "lines_removed", "net_lines",
    "churn",         "max_hunk_size", "touches_test_path", "binary_files",
};
constexpr int kStructuralCount = 9;

constexpr const char* kDefaultTokens[] = {
    "memcpy", "strcpy", "strncpy", "strcat", "sprintf", "malloc", "calloc",
    "realloc", "free",  "kfree",   "sizeof", "strlen",  "lock",   "unlock",
    "mutex",  "overflow", "bounds", "length", "size",   "null",
};

bool is_word_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

bool path_touches_tests(std::string_view path) {
    std::size_t start = 0;
    while (start <= path.size()) {
        std::size_t slash = path.find('/', start);
        std::string_view segment = (slash == std::string_view::npos)
                                       ? path.substr(start)
                                       : path.substr(start, slash - start);
        if (segment == "test" || segment == "tests")
            return true;
        if (slash == std::string_view::npos)
            break;
        start = slash + 1;
    }
    return false;
}

// Counts whole-word occurrences of schema tokens in one line, adding them
// into `slots` at `base + 2*token_index + offset`.
void count_tokens(std::string_view line,
                  const std::unordered_map<std::string_view, int>& token_index,
                  Eigen::VectorXd& features, int base, int offset) {
    std::size_t i = 0;
    while (i < line.size()) {
        if (!is_word_char(line[i])) {
            ++i;
            continue;
        }
        std::size_t begin = i;
        while (i < line.size() && is_word_char(line[i]))
            ++i;
        auto it = token_index.find(line.substr(begin, i - begin));
        if (it != token_index.end())
            features[base + 2 * it->second + offset] += 1.0;
    }
}

}  // namespace

FeatureSchema make_schema(const std::vector<std::string>& sensitive_tokens) {
    FeatureSchema schema;
    schema.names.assign(std::begin(kStructuralNames), std::end(kStructuralNames));
    schema.sensitive_tokens = sensitive_tokens;
    for (const std::string& token : sensitive_tokens) {
        schema.names.push_back(token + "_added");
        schema.names.push_back(token + "_removed");
    }
    return schema;
}

FeatureSchema default_schema() {
    return make_schema({std::begin(kDefaultTokens), std::end(kDefaultTokens)});
}

Eigen::VectorXd extract_code_features(const std::vector<FileDiff>& diffs,
                                      const FeatureSchema& schema) {
    Eigen::VectorXd features = Eigen::VectorXd::Zero(schema.feature_count());

    std::unordered_map<std::string_view, int> token_index;
    for (std::size_t t = 0; t < schema.sensitive_tokens.size(); ++t)
        token_index.emplace(schema.sensitive_tokens[t], static_cast<int>(t));

    long files = 0, hunks = 0, added = 0, removed = 0, max_hunk = 0, binaries = 0;
    bool touches_tests = false;

    for (const FileDiff& file : diffs) {
        ++files;
        if (file.is_binary)
            ++binaries;
        if (path_touches_tests(file.path_new))
            touches_tests = true;
        for (const Hunk& hunk : file.hunks) {
            ++hunks;
            max_hunk = std::max(max_hunk, static_cast<long>(hunk.lines.size()));
            for (const HunkLine& line : hunk.lines) {
                if (line.kind == LineKind::Added) {
                    ++added;
                    count_tokens(line.text, token_index, features, kStructuralCount, 0);
                } else if (line.kind == LineKind::Removed) {
                    ++removed;
                    count_tokens(line.text, token_index, features, kStructuralCount, 1);
                }
            }
        }
    }

    features[0] = static_cast<double>(files);
    features[1] = static_cast<double>(hunks);
    features[2] = static_cast<double>(added);
    features[3] = static_cast<double>(removed);
    features[4] = static_cast<double>(added - removed);
    features[5] = static_cast<double>(added + removed);
    features[6] = static_cast<double>(max_hunk);
    features[7] = touches_tests ? 1.0 : 0.0;
    features[8] = static_cast<double>(binaries);
    return features;
}

Scaler fit_scaler(const std::vector<Eigen::VectorXd>& rows) {
    if (rows.empty())
        throw EmptyInput("fit_scaler requires at least one row");
    const Eigen::Index dim = rows.front().size();
    for (const Eigen::VectorXd& row : rows)
        if (row.size() != dim)
            throw DimensionMismatch("fit_scaler rows have differing lengths");

    Eigen::VectorXd mean = Eigen::VectorXd::Zero(dim);
    for (const Eigen::VectorXd& row : rows)
        mean += row;
    mean /= static_cast<double>(rows.size());

    Eigen::VectorXd variance = Eigen::VectorXd::Zero(dim);
    for (const Eigen::VectorXd& row : rows)
        variance += (row - mean).cwiseAbs2();
    variance /= static_cast<double>(rows.size());

    Scaler scaler;
    scaler.mean = std::move(mean);
    scaler.std_dev = variance.cwiseSqrt();
    for (Eigen::Index i = 0; i < dim; ++i)
        if (scaler.std_dev[i] == 0.0)
            scaler.std_dev[i] = 1.0;
    return scaler;
}

Eigen::VectorXd apply_scaler(const Eigen::VectorXd& x, const Scaler& scaler) {
    if (x.size() != scaler.mean.size())
        throw DimensionMismatch("apply_scaler: vector length " + std::to_string(x.size()) +
                                " does not match scaler length " +
                                std::to_string(scaler.mean.size()));
    return (x - scaler.mean).cwiseQuotient(scaler.std_dev);
}

}  // namespace secpatch
