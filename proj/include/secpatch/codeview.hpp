#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "secpatch/commit.hpp"

namespace secpatch {

// Declares the code-view feature space: 9 structural features followed by
// added/removed whole-word counters for each sensitive token. Whole-word
// boundaries are at non-[A-Za-z0-9_] characters.
struct FeatureSchema {
    int version = 1;
    std::vector<std::string> names;
    std::vector<std::string> sensitive_tokens;

    int feature_count() const { return static_cast<int>(names.size()); }

    friend bool operator==(const FeatureSchema&, const FeatureSchema&) = default;
};

// Structural features plus <token>_added / <token>_removed counters.
FeatureSchema make_schema(const std::vector<std::string>& sensitive_tokens);

// The built-in token list targets memory-safety and bounds-related APIs;
// 9 + 2*20 = 49 features.
FeatureSchema default_schema();

// Fills the schema in declared order: files_changed, hunks_total,
// lines_added, lines_removed, net_lines, churn, max_hunk_size (largest hunk
// by total line count), touches_test_path (any path_new segment equal to
// "test" or "tests"), binary_files, then per-token added/removed counts.
Eigen::VectorXd extract_code_features(const std::vector<FileDiff>& diffs,
                                      const FeatureSchema& schema);

// Per-feature mean and population standard deviation; a fitted std of 0 is
// stored as 1 so constant features scale to 0.
struct Scaler {
    Eigen::VectorXd mean;
    Eigen::VectorXd std_dev;

    friend bool operator==(const Scaler& a, const Scaler& b) {
        return a.mean.size() == b.mean.size() && (a.mean.array() == b.mean.array()).all() &&
               a.std_dev.size() == b.std_dev.size() &&
               (a.std_dev.array() == b.std_dev.array()).all();
    }
};

Scaler fit_scaler(const std::vector<Eigen::VectorXd>& rows);

// (x - mean) / std, elementwise.
Eigen::VectorXd apply_scaler(const Eigen::VectorXd& x, const Scaler& scaler);

}  // namespace secpatch
