#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include <Eigen/Dense>

#include "secpatch/learners.hpp"
#include "secpatch/textview.hpp"

namespace secpatch {

enum class Provenance { Human, PseudoTextView, PseudoCodeView };

const char* provenance_name(Provenance p);

// One commit under both views. Both views are always present; label is
// absent for unlabeled examples.
struct TwoViewExample {
    std::string id;
    SparseVector text_vec;
    Eigen::VectorXd code_vec;  // scaled
    std::optional<int> label;
    Provenance provenance = Provenance::Human;
};

// Loop hyperparameters. pool_size 0 means "score the entire unlabeled set".
struct CoTrainConfig {
    int iterations = 30;         // k
    int pool_size = 75;          // u
    int add_positive = 1;        // p, per learner per iteration
    int add_negative = 3;        // n, per learner per iteration
    double min_confidence = 0.6; // tau, in [0.5, 1]
    std::uint64_t seed = 0;

    friend bool operator==(const CoTrainConfig&, const CoTrainConfig&) = default;
};

// Labeled examples with provenance. Ids stay unique and human labels are
// never overwritten.
class LabeledPool {
public:
    LabeledPool() = default;
    explicit LabeledPool(std::vector<TwoViewExample> humans);

    void add_pseudo(TwoViewExample example, int label, Provenance provenance);
    bool contains(const std::string& id) const { return ids_.contains(id); }
    std::size_t size() const { return examples_.size(); }
    const std::vector<TwoViewExample>& examples() const { return examples_; }

private:
    std::vector<TwoViewExample> examples_;
    std::unordered_set<std::string> ids_;
};

struct IterationRecord {
    int iter;  // 1-based
    long labeled_size;
    long text_added_pos = 0;
    long text_added_neg = 0;
    long code_added_pos = 0;
    long code_added_neg = 0;
    long conflicts = 0;
    long pool_refill = 0;
};

struct TrainLog {
    std::vector<IterationRecord> iterations;
};

// One JSON object per iteration.
std::string to_jsonl(const TrainLog& log);

struct LearnerOptions {
    double nb_alpha = 1.0;
    LrOptions lr;
};

struct CoTrainResult {
    NaiveBayesModel text_model;
    LogisticModel code_model;
    TrainLog log;
    std::vector<TwoViewExample> final_pool;
};

// The co-training loop. Draws a working pool of pool_size unlabeled
// examples with the seeded generator; each iteration trains one learner per
// view on the labeled pool, lets each select up to add_positive confident
// positives and add_negative confident negatives (confidence = max(p, 1-p),
// at least min_confidence, ties broken by id ascending), moves the
// selections into the labeled pool with pseudo-labels, and refills the
// working pool. When both learners pick the same example with conflicting
// labels the higher confidence wins; an exact tie discards the example back
// to the unlabeled remainder. Stops early when neither learner selects
// anything or the unlabeled pool is exhausted; final models are retrained
// on the final labeled pool.
CoTrainResult cotrain(const LabeledPool& labeled, const std::vector<TwoViewExample>& unlabeled,
                      int vocab_size, const CoTrainConfig& config, const LearnerOptions& learners);

struct Prediction {
    double probability;
    int label;
};

// Mean of the two view probabilities; label is 1 iff probability >=
// threshold (a tie at the threshold resolves to 1, favoring recall).
Prediction predict_combined(const NaiveBayesModel& text_model, const LogisticModel& code_model,
                            const TwoViewExample& x, double threshold);

// Uniform sample of pool_size examples without replacement (see rng.hpp for
// the generator contract). pool_size larger than the input returns
// everything.
std::pair<std::vector<TwoViewExample>, std::vector<TwoViewExample>>
sample_pool(const std::vector<TwoViewExample>& unlabeled, std::size_t pool_size,
            std::uint64_t seed);

}  // namespace secpatch
