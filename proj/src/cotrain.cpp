#include "secpatch/cotrain.hpp"

#include <algorithm>
#include <map>

#include <json.hpp>

#include "secpatch/errors.hpp"
#include "secpatch/rng.hpp"

namespace secpatch {

const char* provenance_name(Provenance p) {
    switch (p) {
    case Provenance::Human: return "human";
    case Provenance::PseudoTextView: return "pseudo_text_view";
    case Provenance::PseudoCodeView: return "pseudo_code_view";
    }
    return "unknown";
}

LabeledPool::LabeledPool(std::vector<TwoViewExample> humans) {
    for (TwoViewExample& example : humans) {
        if (!example.label)
            throw ConfigInvalid("labeled pool example \"" + example.id + "\" has no label");
        if (!ids_.insert(example.id).second)
            throw ConfigInvalid("duplicate id \"" + example.id + "\" in labeled pool");
        example.provenance = Provenance::Human;
        examples_.push_back(std::move(example));
    }
}

void LabeledPool::add_pseudo(TwoViewExample example, int label, Provenance provenance) {
    if (provenance == Provenance::Human)
        throw ConfigInvalid("pseudo-labeled examples cannot carry human provenance");
    if (!ids_.insert(example.id).second)
        throw ConfigInvalid("pseudo-label for \"" + example.id +
                            "\" would duplicate an existing pool id");
    example.label = label;
    example.provenance = provenance;
    examples_.push_back(std::move(example));
}

std::string to_jsonl(const TrainLog& log) {
    std::string out;
    for (const IterationRecord& rec : log.iterations) {
        nlohmann::json line;
        line["iter"] = rec.iter;
        line["labeled_size"] = rec.labeled_size;
        line["text_added_pos"] = rec.text_added_pos;
        line["text_added_neg"] = rec.text_added_neg;
        line["code_added_pos"] = rec.code_added_pos;
        line["code_added_neg"] = rec.code_added_neg;
        line["conflicts"] = rec.conflicts;
        line["pool_refill"] = rec.pool_refill;
        out += line.dump();
        out += '\n';
    }
    return out;
}

std::pair<std::vector<TwoViewExample>, std::vector<TwoViewExample>>
sample_pool(const std::vector<TwoViewExample>& unlabeled, std::size_t pool_size,
            std::uint64_t seed) {
    Lcg64 rng(seed);
    return sample_without_replacement(unlabeled, pool_size, rng);
}

namespace {

struct TrainedPair {
    NaiveBayesModel text;
    LogisticModel code;
};

TrainedPair train_both(const std::vector<TwoViewExample>& pool, int vocab_size,
                       const LearnerOptions& learners) {
    std::vector<SparseVector> text_xs;
    std::vector<int> text_ys;
    text_xs.reserve(pool.size());
    text_ys.reserve(pool.size());
    Eigen::MatrixXd code_X(static_cast<Eigen::Index>(pool.size()),
                           pool.empty() ? 0 : pool.front().code_vec.size());
    Eigen::VectorXd code_y(static_cast<Eigen::Index>(pool.size()));
    for (std::size_t i = 0; i < pool.size(); ++i) {
        text_xs.push_back(pool[i].text_vec);
        text_ys.push_back(*pool[i].label);
        code_X.row(static_cast<Eigen::Index>(i)) = pool[i].code_vec.transpose();
        code_y[static_cast<Eigen::Index>(i)] = static_cast<double>(*pool[i].label);
    }
    TrainedPair models;
    models.text = nb_train(text_xs, text_ys, vocab_size, learners.nb_alpha);
    models.code = lr_train(code_X, code_y, learners.lr);
    return models;
}

enum class View { Text, Code };

struct Selection {
    std::size_t pool_index;
    int label;
    double confidence;
    View by;
};

// Scores the working pool with one learner and picks its most confident
// candidates: up to `quota.first` positives and `quota.second` negatives
// with confidence >= tau, ties broken by commit id ascending.
std::vector<Selection> select_for_view(View view, const TrainedPair& models,
                                       const std::vector<TwoViewExample>& working, double tau,
                                       std::pair<long, long> quota) {
    std::vector<Selection> positives, negatives;
    for (std::size_t i = 0; i < working.size(); ++i) {
        const double p = view == View::Text
                             ? nb_predict_proba(models.text, working[i].text_vec)
                             : lr_predict_proba(models.code, working[i].code_vec);
        const int label = p >= 0.5 ? 1 : 0;
        const double confidence = std::max(p, 1.0 - p);
        if (confidence < tau)
            continue;
        (label == 1 ? positives : negatives).push_back({i, label, confidence, view});
    }
    auto most_confident_first = [&working](const Selection& a, const Selection& b) {
        if (a.confidence != b.confidence)
            return a.confidence > b.confidence;
        return working[a.pool_index].id < working[b.pool_index].id;
    };
    std::sort(positives.begin(), positives.end(), most_confident_first);
    std::sort(negatives.begin(), negatives.end(), most_confident_first);
    if (static_cast<long>(positives.size()) > quota.first)
        positives.resize(static_cast<std::size_t>(quota.first));
    if (static_cast<long>(negatives.size()) > quota.second)
        negatives.resize(static_cast<std::size_t>(quota.second));
    positives.insert(positives.end(), negatives.begin(), negatives.end());
    return positives;
}

void validate(const LabeledPool& labeled, const std::vector<TwoViewExample>& unlabeled,
              const CoTrainConfig& config) {
    if (config.iterations < 1)
        throw ConfigInvalid("cotrain: iterations must be >= 1");
    if (config.add_positive < 0 || config.add_negative < 0 ||
        config.add_positive + config.add_negative < 1)
        throw ConfigInvalid("cotrain: additions per learner must satisfy p + n >= 1");
    if (config.pool_size < 0)
        throw ConfigInvalid("cotrain: pool size must be >= 0");
    if (config.pool_size != 0 &&
        config.pool_size < config.add_positive + config.add_negative)
        throw ConfigInvalid("cotrain: pool size must be >= p + n");
    if (config.min_confidence < 0.5 || config.min_confidence > 1.0)
        throw ConfigInvalid("cotrain: min confidence must be in [0.5, 1]");
    if (unlabeled.empty())
        throw ConfigInvalid("cotrain: unlabeled pool is empty");
    if (labeled.examples().empty())
        throw ConfigInvalid("cotrain: labeled pool is empty");

    bool has_pos = false, has_neg = false;
    for (const TwoViewExample& example : labeled.examples())
        (*example.label == 1 ? has_pos : has_neg) = true;
    if (!has_pos || !has_neg)
        throw SingleClassLabeledInput("cotrain: labeled pool must contain both classes");

    const Eigen::Index code_dim = labeled.examples().front().code_vec.size();
    for (const TwoViewExample& example : labeled.examples())
        if (example.code_vec.size() != code_dim)
            throw DimensionMismatch("cotrain: labeled example \"" + example.id +
                                    "\" has a code vector of unexpected length");

    std::unordered_set<std::string> ids;
    for (const TwoViewExample& example : unlabeled) {
        if (example.label)
            throw ConfigInvalid("cotrain: unlabeled example \"" + example.id +
                                "\" carries a label");
        if (example.code_vec.size() != code_dim)
            throw DimensionMismatch("cotrain: unlabeled example \"" + example.id +
                                    "\" has a code vector of unexpected length");
        if (!ids.insert(example.id).second || labeled.contains(example.id))
            throw ConfigInvalid("cotrain: duplicate id \"" + example.id + "\" across pools");
    }
}

}  // namespace

CoTrainResult cotrain(const LabeledPool& labeled, const std::vector<TwoViewExample>& unlabeled,
                      int vocab_size, const CoTrainConfig& config,
                      const LearnerOptions& learners) {
    validate(labeled, unlabeled, config);

    const std::size_t pool_size =
        config.pool_size == 0 ? unlabeled.size() : static_cast<std::size_t>(config.pool_size);

    LabeledPool pool = labeled;
    Lcg64 rng(config.seed);
    auto [working, remainder] = sample_without_replacement(unlabeled, pool_size, rng);

    CoTrainResult result;
    for (int iter = 1; iter <= config.iterations; ++iter) {
        IterationRecord record;
        record.iter = iter;

        TrainedPair models = train_both(pool.examples(), vocab_size, learners);

        const std::pair<long, long> quota{config.add_positive, config.add_negative};
        std::vector<Selection> text_sel =
            select_for_view(View::Text, models, working, config.min_confidence, quota);
        std::vector<Selection> code_sel =
            select_for_view(View::Code, models, working, config.min_confidence, quota);

        // Merge the two selection lists; keyed by pool index so additions
        // happen in a deterministic order.
        std::map<std::size_t, Selection> chosen;
        std::vector<std::size_t> discarded;
        for (const Selection& sel : text_sel)
            chosen.emplace(sel.pool_index, sel);
        for (const Selection& sel : code_sel) {
            auto [it, inserted] = chosen.try_emplace(sel.pool_index, sel);
            if (inserted)
                continue;
            Selection& other = it->second;
            if (other.label != sel.label) {
                ++record.conflicts;
                if (sel.confidence > other.confidence) {
                    other = sel;
                } else if (sel.confidence == other.confidence) {
                    discarded.push_back(sel.pool_index);
                }
            } else if (sel.confidence > other.confidence) {
                other = sel;  // agreement: the more confident learner signs it
            }
        }
        for (std::size_t index : discarded)
            chosen.erase(index);

        const bool selected_anything = !text_sel.empty() || !code_sel.empty();

        std::vector<bool> leaving(working.size(), false);
        for (const auto& [index, sel] : chosen) {
            leaving[index] = true;
            const Provenance prov = sel.by == View::Text ? Provenance::PseudoTextView
                                                         : Provenance::PseudoCodeView;
            pool.add_pseudo(working[index], sel.label, prov);
            if (sel.by == View::Text)
                ++(sel.label == 1 ? record.text_added_pos : record.text_added_neg);
            else
                ++(sel.label == 1 ? record.code_added_pos : record.code_added_neg);
        }
        for (std::size_t index : discarded) {
            leaving[index] = true;
            remainder.push_back(working[index]);  // back to unlabeled
        }

        std::vector<TwoViewExample> still_working;
        still_working.reserve(working.size());
        for (std::size_t i = 0; i < working.size(); ++i)
            if (!leaving[i])
                still_working.push_back(std::move(working[i]));
        working = std::move(still_working);

        if (working.size() < pool_size && !remainder.empty()) {
            auto [drawn, rest] =
                sample_without_replacement(std::move(remainder), pool_size - working.size(), rng);
            record.pool_refill = static_cast<long>(drawn.size());
            for (TwoViewExample& example : drawn)
                working.push_back(std::move(example));
            remainder = std::move(rest);
        }

        record.labeled_size = static_cast<long>(pool.size());
        result.log.iterations.push_back(record);

        if (!selected_anything || working.empty())
            break;
    }

    TrainedPair final_models = train_both(pool.examples(), vocab_size, learners);
    result.text_model = std::move(final_models.text);
    result.code_model = std::move(final_models.code);
    result.final_pool = pool.examples();
    return result;
}

Prediction predict_combined(const NaiveBayesModel& text_model, const LogisticModel& code_model,
                            const TwoViewExample& x, double threshold) {
    if (threshold <= 0.0 || threshold >= 1.0)
        throw ConfigInvalid("predict_combined: threshold must be in (0, 1)");
    const double p_text = nb_predict_proba(text_model, x.text_vec);
    const double p_code = lr_predict_proba(code_model, x.code_vec);
    const double probability = 0.5 * (p_text + p_code);
    return {probability, probability >= threshold ? 1 : 0};
}

}  // namespace secpatch
