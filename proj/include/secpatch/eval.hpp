#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "secpatch/cotrain.hpp"

namespace secpatch {

struct ConfusionMatrix {
    long tp = 0;
    long fp = 0;
    long fn = 0;
    long tn = 0;

    long total() const { return tp + fp + fn + tn; }
    ConfusionMatrix& operator+=(const ConfusionMatrix& other) {
        tp += other.tp;
        fp += other.fp;
        fn += other.fn;
        tn += other.tn;
        return *this;
    }
    friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

struct Metrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double accuracy = 0.0;
};

// precision = tp/(tp+fp), recall = tp/(tp+fn), f1 their harmonic mean,
// accuracy = (tp+tn)/total; every 0/0 resolves to 0. Throws EmptyMatrix
// when the matrix holds no examples at all.
Metrics metrics(const ConfusionMatrix& cm);

// Stratified k-fold splits over example labels: indices of each class are
// shuffled with the seeded generator and dealt round-robin across folds, so
// per-fold class counts stay within one example of the global proportions.
// Returns (train indices, test indices) per fold; the test sets partition
// the index range. Throws TooFewExamples unless folds >= 2 and every class
// has at least `folds` members.
std::vector<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>>
stratified_kfold(const std::vector<int>& labels, int folds, std::uint64_t seed);

struct FoldResult {
    int fold;  // 0-based
    ConfusionMatrix confusion;
    Metrics metrics;
};

// Per-fold results for one system plus micro-aggregated metrics computed
// on the elementwise sum of the fold confusion matrices.
struct EvalReport {
    std::string system;
    std::vector<FoldResult> per_fold;
    ConfusionMatrix aggregate_confusion;
    Metrics aggregate;
};

// Cross-validated comparison of the four systems: (a) text-only learner,
// (b) code-only learner, (c) combined views without co-training, (d) full
// co-training with the unlabeled pool. f1_delta holds the paired per-fold
// F1 difference (d minus c).
struct ComparisonReport {
    EvalReport text_only;
    EvalReport code_only;
    EvalReport combined;
    EvalReport cotrained;
    std::vector<double> f1_delta;
    int folds = 0;
    std::uint64_t seed = 0;
    CoTrainConfig config;
};

// Runs stratified k-fold cross-validation over the labeled examples,
// training all four systems on each fold's training split and scoring them
// on its test split. The unlabeled pool is shared across folds and only
// consumed by system (d); when it is empty, (d) degenerates to (c). The
// `seed` drives the fold assignment; co-training uses config.seed.
ComparisonReport run_experiment(const std::vector<TwoViewExample>& labeled,
                                const std::vector<TwoViewExample>& unlabeled, int vocab_size,
                                const CoTrainConfig& config, const LearnerOptions& learners,
                                int folds, std::uint64_t seed);

// The full report as one JSON document.
std::string to_json(const ComparisonReport& report);

// Compact fixed-width table of aggregate metrics per system plus the
// per-fold F1 deltas, for terminal output.
std::string to_table(const ComparisonReport& report);

}  // namespace secpatch
