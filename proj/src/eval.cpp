#include "secpatch/eval.hpp"

#include <algorithm>
#include <cstdio>

#include <json.hpp>

#include "secpatch/errors.hpp"
#include "secpatch/rng.hpp"

namespace secpatch {

Metrics metrics(const ConfusionMatrix& cm) {
    if (cm.tp < 0 || cm.fp < 0 || cm.fn < 0 || cm.tn < 0)
        throw ConfigInvalid("metrics: confusion counts must be nonnegative");
    if (cm.total() == 0)
        throw EmptyMatrix("metrics: confusion matrix holds no examples");
    auto ratio = [](long num, long den) { return den == 0 ? 0.0 : static_cast<double>(num) / den; };
    Metrics m;
    m.precision = ratio(cm.tp, cm.tp + cm.fp);
    m.recall = ratio(cm.tp, cm.tp + cm.fn);
    m.f1 = m.precision + m.recall == 0.0
               ? 0.0
               : 2.0 * m.precision * m.recall / (m.precision + m.recall);
    m.accuracy = static_cast<double>(cm.tp + cm.tn) / cm.total();
    return m;
}

std::vector<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>>
stratified_kfold(const std::vector<int>& labels, int folds, std::uint64_t seed) {
    if (folds < 2)
        throw TooFewExamples("stratified_kfold: folds must be >= 2");

    std::vector<std::size_t> by_class[2];
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] != 0 && labels[i] != 1)
            throw ConfigInvalid("stratified_kfold: labels must be 0 or 1");
        by_class[labels[i]].push_back(i);
    }
    for (int c = 0; c < 2; ++c)
        if (by_class[c].size() < static_cast<std::size_t>(folds))
            throw TooFewExamples("stratified_kfold: class " + std::to_string(c) + " has " +
                                 std::to_string(by_class[c].size()) + " examples, need >= " +
                                 std::to_string(folds));

    // Shuffle each class once, then deal its indices round-robin so every
    // fold's class counts differ from an even split by at most one.
    Lcg64 rng(seed);
    std::vector<std::vector<std::size_t>> test_sets(static_cast<std::size_t>(folds));
    for (int c = 0; c < 2; ++c) {
        shuffle(by_class[c], rng);
        for (std::size_t i = 0; i < by_class[c].size(); ++i)
            test_sets[i % static_cast<std::size_t>(folds)].push_back(by_class[c][i]);
    }

    std::vector<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> splits;
    splits.reserve(static_cast<std::size_t>(folds));
    for (std::vector<std::size_t>& test : test_sets) {
        std::sort(test.begin(), test.end());
        std::vector<std::size_t> train;
        train.reserve(labels.size() - test.size());
        auto next_held_out = test.begin();
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (next_held_out != test.end() && *next_held_out == i)
                ++next_held_out;
            else
                train.push_back(i);
        }
        splits.emplace_back(std::move(train), std::move(test));
    }
    return splits;
}

namespace {

struct SystemModels {
    NaiveBayesModel text;
    LogisticModel code;
};

SystemModels train_labeled_only(const std::vector<TwoViewExample>& train, int vocab_size,
                                const LearnerOptions& learners) {
    std::vector<SparseVector> text_xs;
    std::vector<int> text_ys;
    text_xs.reserve(train.size());
    text_ys.reserve(train.size());
    Eigen::MatrixXd code_X(static_cast<Eigen::Index>(train.size()),
                           train.empty() ? 0 : train.front().code_vec.size());
    Eigen::VectorXd code_y(static_cast<Eigen::Index>(train.size()));
    for (std::size_t i = 0; i < train.size(); ++i) {
        text_xs.push_back(train[i].text_vec);
        text_ys.push_back(*train[i].label);
        code_X.row(static_cast<Eigen::Index>(i)) = train[i].code_vec.transpose();
        code_y[static_cast<Eigen::Index>(i)] = static_cast<double>(*train[i].label);
    }
    SystemModels models;
    models.text = nb_train(text_xs, text_ys, vocab_size, learners.nb_alpha);
    models.code = lr_train(code_X, code_y, learners.lr);
    return models;
}

enum class Scorer { TextOnly, CodeOnly, Combined };

ConfusionMatrix score_fold(Scorer scorer, const SystemModels& models,
                           const std::vector<TwoViewExample>& labeled,
                           const std::vector<std::size_t>& test) {
    ConfusionMatrix cm;
    for (std::size_t index : test) {
        const TwoViewExample& x = labeled[index];
        double p = 0.0;
        switch (scorer) {
        case Scorer::TextOnly: p = nb_predict_proba(models.text, x.text_vec); break;
        case Scorer::CodeOnly: p = lr_predict_proba(models.code, x.code_vec); break;
        case Scorer::Combined:
            p = 0.5 * (nb_predict_proba(models.text, x.text_vec) +
                       lr_predict_proba(models.code, x.code_vec));
            break;
        }
        const int predicted = p >= 0.5 ? 1 : 0;  // threshold tie resolves to 1
        const int actual = *x.label;
        if (predicted == 1)
            ++(actual == 1 ? cm.tp : cm.fp);
        else
            ++(actual == 1 ? cm.fn : cm.tn);
    }
    return cm;
}

void append_fold(EvalReport& report, int fold, const ConfusionMatrix& cm) {
    report.per_fold.push_back({fold, cm, metrics(cm)});
    report.aggregate_confusion += cm;
}

void finish_report(EvalReport& report) { report.aggregate = metrics(report.aggregate_confusion); }

nlohmann::json confusion_to_json(const ConfusionMatrix& cm) {
    return {{"tp", cm.tp}, {"fp", cm.fp}, {"fn", cm.fn}, {"tn", cm.tn}};
}

nlohmann::json report_to_json(const EvalReport& report) {
    nlohmann::json folds = nlohmann::json::array();
    for (const FoldResult& fr : report.per_fold) {
        folds.push_back({{"fold", fr.fold},
                         {"confusion", confusion_to_json(fr.confusion)},
                         {"precision", fr.metrics.precision},
                         {"recall", fr.metrics.recall},
                         {"f1", fr.metrics.f1},
                         {"accuracy", fr.metrics.accuracy}});
    }
    return {{"system", report.system},
            {"per_fold", folds},
            {"aggregate_confusion", confusion_to_json(report.aggregate_confusion)},
            {"aggregate",
             {{"precision", report.aggregate.precision},
              {"recall", report.aggregate.recall},
              {"f1", report.aggregate.f1},
              {"accuracy", report.aggregate.accuracy}}}};
}

}  // namespace

ComparisonReport run_experiment(const std::vector<TwoViewExample>& labeled,
                                const std::vector<TwoViewExample>& unlabeled, int vocab_size,
                                const CoTrainConfig& config, const LearnerOptions& learners,
                                int folds, std::uint64_t seed) {
    std::vector<int> labels;
    labels.reserve(labeled.size());
    for (const TwoViewExample& example : labeled) {
        if (!example.label)
            throw ConfigInvalid("run_experiment: example \"" + example.id + "\" has no label");
        labels.push_back(*example.label);
    }

    ComparisonReport report;
    report.text_only.system = "text_only";
    report.code_only.system = "code_only";
    report.combined.system = "combined";
    report.cotrained.system = "cotrain";
    report.folds = folds;
    report.seed = seed;
    report.config = config;

    const auto splits = stratified_kfold(labels, folds, seed);
    for (std::size_t fold = 0; fold < splits.size(); ++fold) {
        const auto& [train_idx, test_idx] = splits[fold];
        std::vector<TwoViewExample> train;
        train.reserve(train_idx.size());
        for (std::size_t index : train_idx)
            train.push_back(labeled[index]);

        const SystemModels base = train_labeled_only(train, vocab_size, learners);
        SystemModels boosted = base;
        if (!unlabeled.empty()) {
            CoTrainResult result =
                cotrain(LabeledPool(train), unlabeled, vocab_size, config, learners);
            boosted.text = std::move(result.text_model);
            boosted.code = std::move(result.code_model);
        }

        const int f = static_cast<int>(fold);
        append_fold(report.text_only, f, score_fold(Scorer::TextOnly, base, labeled, test_idx));
        append_fold(report.code_only, f, score_fold(Scorer::CodeOnly, base, labeled, test_idx));
        append_fold(report.combined, f, score_fold(Scorer::Combined, base, labeled, test_idx));
        append_fold(report.cotrained, f,
                    score_fold(Scorer::Combined, boosted, labeled, test_idx));
        report.f1_delta.push_back(report.cotrained.per_fold.back().metrics.f1 -
                                  report.combined.per_fold.back().metrics.f1);
    }
    finish_report(report.text_only);
    finish_report(report.code_only);
    finish_report(report.combined);
    finish_report(report.cotrained);
    return report;
}

std::string to_json(const ComparisonReport& report) {
    nlohmann::json doc;
    doc["folds"] = report.folds;
    doc["seed"] = report.seed;
    doc["config"] = {{"iterations", report.config.iterations},
                     {"pool_size", report.config.pool_size},
                     {"add_positive", report.config.add_positive},
                     {"add_negative", report.config.add_negative},
                     {"min_confidence", report.config.min_confidence},
                     {"seed", report.config.seed}};
    doc["systems"] = {report_to_json(report.text_only), report_to_json(report.code_only),
                      report_to_json(report.combined), report_to_json(report.cotrained)};
    doc["f1_delta"] = report.f1_delta;
    return doc.dump(2) + "\n";
}

std::string to_table(const ComparisonReport& report) {
    std::string out;
    char line[128];
    std::snprintf(line, sizeof line, "%-10s %9s %9s %9s %9s\n", "system", "precision", "recall",
                  "f1", "accuracy");
    out += line;
    for (const EvalReport* r :
         {&report.text_only, &report.code_only, &report.combined, &report.cotrained}) {
        std::snprintf(line, sizeof line, "%-10s %9.4f %9.4f %9.4f %9.4f\n", r->system.c_str(),
                      r->aggregate.precision, r->aggregate.recall, r->aggregate.f1,
                      r->aggregate.accuracy);
        out += line;
    }
    out += "f1 delta (cotrain - combined) per fold:";
    for (double delta : report.f1_delta) {
        std::snprintf(line, sizeof line, " %+.4f", delta);
        out += line;
    }
    out += '\n';
    return out;
}

}  // namespace secpatch
