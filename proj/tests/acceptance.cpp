// Acceptance gate: one line per criterion, nonzero exit when any fails.
//
// Each criterion is self-contained, uses only public library headers (plus
// the CLI binary for the end-to-end determinism check), and pins its
// tolerances and runtime budget in code right here.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "secpatch/cotrain.hpp"
#include "secpatch/diff.hpp"
#include "secpatch/errors.hpp"
#include "secpatch/eval.hpp"
#include "secpatch/learners.hpp"
#include "secpatch/pipeline.hpp"
#include "secpatch/rng.hpp"
#include "secpatch/synth.hpp"

using namespace secpatch;

namespace {

// ---------------------------------------------------------------- plumbing

int failures = 0;

void report(int criterion, bool ok, const std::string& what, double seconds,
            double budget_seconds) {
    const bool in_budget = seconds < budget_seconds;
    std::printf("%s criterion %d: %s (%.2fs, budget %.0fs)\n",
                ok && in_budget ? "PASS" : "FAIL", criterion, what.c_str(), seconds,
                budget_seconds);
    if (!ok || !in_budget)
        ++failures;
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        return {};
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

// ------------------------------------------------- criterion 1: diff oracle

// Independent line-scanning oracle: a payload line counts as added when it
// starts with '+' but not "+++", removed when it starts with '-' but not
// "---"; CRLF is normalized first.
void scan_counts(const std::string& text, long& added, long& removed) {
    added = 0;
    removed = 0;
    std::size_t i = 0;
    while (i < text.size()) {
        std::size_t end = text.find('\n', i);
        if (end == std::string::npos)
            end = text.size();
        std::size_t len = end - i;
        if (len > 0 && text[i + len - 1] == '\r')
            --len;
        const std::string_view line(text.data() + i, len);
        if (line.rfind("+++", 0) != 0 && line.rfind('+', 0) == 0)
            ++added;
        else if (line.rfind("---", 0) != 0 && line.rfind('-', 0) == 0)
            ++removed;
        i = end + 1;
    }
}

// Well-formed random diff: payload lines appear only inside hunks, so the
// line-scanning oracle is exact on it.
std::string fuzz_diff(Lcg64& rng) {
    std::string d;
    const int files = 1 + static_cast<int>(rng.next_below(3));
    for (int f = 0; f < files; ++f) {
        const std::string name = "f" + std::to_string(rng.next_below(100)) + ".c";
        d += "diff --git a/" + name + " b/" + name + "\n";
        if (rng.next_below(4) == 0)
            d += "index " + std::to_string(1000 + rng.next_below(9000)) + ".." +
                 std::to_string(1000 + rng.next_below(9000)) + " 100644\n";
        if (rng.next_below(8) == 0) {
            d += "Binary files a/" + name + " and b/" + name + " differ\n";
            continue;
        }
        d += "--- a/" + name + "\n+++ b/" + name + "\n";
        const int hunks = 1 + static_cast<int>(rng.next_below(3));
        long start = 1;
        for (int h = 0; h < hunks; ++h) {
            long ctx = static_cast<long>(rng.next_below(3));
            const long rem = static_cast<long>(rng.next_below(4));
            const long add = static_cast<long>(rng.next_below(4));
            if (ctx + rem + add == 0)
                ctx = 1;
            d += "@@ -" + std::to_string(start) + "," + std::to_string(ctx + rem) + " +" +
                 std::to_string(start) + "," + std::to_string(ctx + add) + " @@";
            if (rng.next_below(2) == 0)
                d += " void section_" + std::to_string(h) + "()";
            d += "\n";
            for (long i = 0; i < ctx; ++i)
                d += " context " + std::to_string(rng.next_below(50)) + "\n";
            for (long i = 0; i < rem; ++i)
                d += "-removed " + std::to_string(rng.next_below(50)) + "\n";
            for (long i = 0; i < add; ++i)
                d += "+added " + std::to_string(rng.next_below(50)) + "\n";
            if (h + 1 == hunks && rng.next_below(6) == 0)
                d += "\\ No newline at end of file\n";
            start += ctx + rem + 3;
        }
    }
    return d;
}

std::vector<std::string> hand_fixtures() {
    return {
        // 1: empty input
        "",
        // 2: one file, one hunk
        "diff --git a/a.c b/a.c\n--- a/a.c\n+++ b/a.c\n@@ -1,3 +1,4 @@\n int x;\n-old();\n"
        "+new();\n+more();\n x = 1;\n",
        // 3: payload lines that look like headers are skipped by both sides
        "diff --git a/a.c b/a.c\n--- a/a.c\n+++ b/a.c\n@@ -1,2 +1,2 @@\n+real add\n"
        "-real remove\n+++header-like\n---also header-like\n",
        // 4: omitted hunk lengths default to 1
        "diff --git a/b.c b/b.c\n--- a/b.c\n+++ b/b.c\n@@ -3 +3 @@\n-x\n+y\n",
        // 5: CRLF endings
        "diff --git a/c.c b/c.c\r\n--- a/c.c\r\n+++ b/c.c\r\n@@ -1,1 +1,2 @@\r\n x\r\n+y\r\n",
        // 6: binary file between two text files
        "diff --git a/d.bin b/d.bin\nBinary files a/d.bin and b/d.bin differ\n"
        "diff --git a/e.c b/e.c\n--- a/e.c\n+++ b/e.c\n@@ -1,1 +1,1 @@\n-p\n+q\n",
        // 7: quoted paths with spaces
        "diff --git \"a/sp ace.c\" \"b/sp ace.c\"\n--- \"a/sp ace.c\"\n+++ \"b/sp ace.c\"\n"
        "@@ -1,1 +1,2 @@\n keep\n+add\n",
        // 8: new file from /dev/null
        "diff --git a/new.c b/new.c\nnew file mode 100644\n--- /dev/null\n+++ b/new.c\n"
        "@@ -0,0 +1,2 @@\n+line1\n+line2\n",
        // 9: missing trailing newline marker
        "diff --git a/f.c b/f.c\n--- a/f.c\n+++ b/f.c\n@@ -1,1 +1,1 @@\n-a\n+b\n"
        "\\ No newline at end of file\n",
        // 10: timestamps after a tab in the ---/+++ headers
        "diff --git a/g.c b/g.c\n--- a/g.c\t2024-01-01 00:00:00\n+++ b/g.c\t2024-01-02 00:00:00\n"
        "@@ -1,2 +1,1 @@\n-gone\n ctx\n",
        // 11: extended header junk between files
        "diff --git a/h.c b/h.c\nold mode 100644\nnew mode 100755\nindex 12..34 100755\n"
        "--- a/h.c\n+++ b/h.c\n@@ -1,1 +1,1 @@\n-m\n+n\n"
        "diff --git a/i.c b/i.c\nindex 56..78 100644\n--- a/i.c\n+++ b/i.c\n"
        "@@ -5,1 +5,2 @@\n ctx\n+tail\n",
        // 12: several hunks with section headings
        "diff --git a/j.c b/j.c\n--- a/j.c\n+++ b/j.c\n@@ -1,2 +1,2 @@ int main()\n-u\n+v\n"
        " c\n@@ -9,1 +9,3 @@ void helper()\n+w\n+x\n z\n",
    };
}

bool criterion1(std::string& what) {
    std::vector<std::string> corpus = hand_fixtures();
    Lcg64 rng(814);
    while (corpus.size() < 50)
        corpus.push_back(fuzz_diff(rng));

    long mismatches = 0;
    for (const std::string& diff : corpus) {
        ParsedDiff parsed = parse_unified_diff(diff);
        long want_added = 0, want_removed = 0;
        scan_counts(diff, want_added, want_removed);
        if (!parsed.errors.empty() || count_added(parsed.files) != want_added ||
            count_removed(parsed.files) != want_removed)
            ++mismatches;
    }

    // Malformed hunk headers are reported and parsing resynchronizes.
    bool malformed_ok = true;
    const std::string broken =
        "diff --git a/k.c b/k.c\n--- a/k.c\n+++ b/k.c\n@@ -x,2 +1,2 @@\n-lost\n+lost\n"
        "diff --git a/l.c b/l.c\n--- a/l.c\n+++ b/l.c\n@@ -1,1 +1,3 @@\n+a\n+b\n-c\n";
    try {
        ParsedDiff parsed = parse_unified_diff(broken);
        malformed_ok = parsed.errors.size() == 1 &&
                       parsed.errors[0].message.find("malformed hunk header") !=
                           std::string::npos &&
                       count_added(parsed.files) == 2 && count_removed(parsed.files) == 1;
        for (const std::string& other :
             {std::string("diff --git a/m.c b/m.c\n--- a/m.c\n+++ b/m.c\n@@ -1,1 @@\n-q\n"),
              std::string("diff --git a/n.c b/n.c\n--- a/n.c\n+++ b/n.c\n@@ garbage @@\n+r\n")}) {
            ParsedDiff p = parse_unified_diff(other);
            if (p.errors.empty() ||
                p.errors[0].message.find("malformed hunk header") == std::string::npos)
                malformed_ok = false;
        }
    } catch (...) {
        malformed_ok = false;
    }

    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "diff parser vs line-scan oracle on %zu diffs (%ld mismatches), "
                  "malformed hunks reported without aborting: %s",
                  corpus.size(), mismatches, malformed_ok ? "yes" : "no");
    what = buf;
    return mismatches == 0 && malformed_ok;
}

// --------------------------------------------- criterion 2: NB brute force

bool criterion2(std::string& what) {
    constexpr double kTolerance = 1e-12;  // pinned
    Lcg64 rng(905);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const int vocab = 1 + static_cast<int>(rng.next_below(4));       // <= 4 terms
        const int docs = 2 + static_cast<int>(rng.next_below(4));        // <= 5 docs
        const double alphas[] = {0.25, 0.5, 1.0, 2.0};
        const double alpha = alphas[rng.next_below(4)];

        std::vector<std::vector<long>> counts(static_cast<std::size_t>(docs),
                                              std::vector<long>(static_cast<std::size_t>(vocab)));
        std::vector<int> ys(static_cast<std::size_t>(docs));
        std::vector<SparseVector> xs(static_cast<std::size_t>(docs));
        for (int i = 0; i < docs; ++i) {
            ys[static_cast<std::size_t>(i)] =
                i < 2 ? 1 - i : static_cast<int>(rng.next_below(2));  // both classes present
            for (int t = 0; t < vocab; ++t) {
                const long c = static_cast<long>(rng.next_below(4));
                counts[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)] = c;
                if (c > 0)
                    xs[static_cast<std::size_t>(i)].entries.push_back(
                        {t, static_cast<double>(c)});
            }
        }
        std::vector<long> query(static_cast<std::size_t>(vocab));
        SparseVector qx;
        for (int t = 0; t < vocab; ++t) {
            query[static_cast<std::size_t>(t)] = static_cast<long>(rng.next_below(4));
            if (query[static_cast<std::size_t>(t)] > 0)
                qx.entries.push_back({t, static_cast<double>(query[static_cast<std::size_t>(t)])});
        }

        // Exhaustive joint-probability oracle in long double.
        long double joint[2];
        for (int c = 0; c < 2; ++c) {
            long n_class = 0;
            std::vector<long> term_count(static_cast<std::size_t>(vocab), 0);
            long total = 0;
            for (int i = 0; i < docs; ++i) {
                if (ys[static_cast<std::size_t>(i)] != c)
                    continue;
                ++n_class;
                for (int t = 0; t < vocab; ++t) {
                    term_count[static_cast<std::size_t>(t)] +=
                        counts[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)];
                    total += counts[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)];
                }
            }
            long double p = static_cast<long double>(n_class) / docs;
            for (int t = 0; t < vocab; ++t) {
                const long double likelihood =
                    (static_cast<long double>(term_count[static_cast<std::size_t>(t)]) + alpha) /
                    (static_cast<long double>(total) + static_cast<long double>(alpha) * vocab);
                p *= std::pow(likelihood,
                              static_cast<long double>(query[static_cast<std::size_t>(t)]));
            }
            joint[c] = p;
        }
        const double oracle = static_cast<double>(joint[1] / (joint[0] + joint[1]));

        const NaiveBayesModel model = nb_train(xs, ys, vocab, alpha);
        const double direct = nb_predict_proba(model, qx);
        worst = std::max(worst, std::abs(direct - oracle));
    }
    char buf[120];
    std::snprintf(buf, sizeof buf,
                  "naive bayes vs brute-force joint oracle on 200 corpora, worst |Δ| = %.2e "
                  "(tolerance 1e-12)",
                  worst);
    what = buf;
    return worst < kTolerance;
}

// ------------------------------------------ criterion 3: LR gradient check

bool criterion3(std::string& what) {
    constexpr double kH = 1e-5;           // pinned step
    constexpr double kTolerance = 1e-4;   // pinned relative error bound
    Lcg64 rng(1203);
    auto uniform = [&rng](double lo, double hi) { return lo + (hi - lo) * rng.next_unit(); };

    double worst_rel = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng.next_below(5));
        const Eigen::Index d = 1 + static_cast<Eigen::Index>(rng.next_below(4));
        Eigen::MatrixXd X(n, d);
        Eigen::VectorXd y(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            y[i] = static_cast<double>(rng.next_below(2));
            for (Eigen::Index j = 0; j < d; ++j)
                X(i, j) = uniform(-2.0, 2.0);
        }
        LogisticModel model;
        model.weights = Eigen::VectorXd::Zero(d);
        for (Eigen::Index j = 0; j < d; ++j)
            model.weights[j] = uniform(-1.0, 1.0);
        model.bias = uniform(-1.0, 1.0);
        const double lambdas[] = {0.0, 0.01, 0.3};
        model.lambda = lambdas[rng.next_below(3)];

        const LrGradient analytic = lr_gradient(model, X, y);
        Eigen::VectorXd flat(d + 1), numeric(d + 1);
        flat.head(d) = analytic.weights;
        flat[d] = analytic.bias;
        for (Eigen::Index j = 0; j <= d; ++j) {
            LogisticModel plus = model, minus = model;
            if (j < d) {
                plus.weights[j] += kH;
                minus.weights[j] -= kH;
            } else {
                plus.bias += kH;
                minus.bias -= kH;
            }
            numeric[j] = (lr_loss(plus, X, y) - lr_loss(minus, X, y)) / (2.0 * kH);
        }
        const double rel = (flat - numeric).norm() / std::max(1.0, flat.norm());
        worst_rel = std::max(worst_rel, rel);
    }

    // Non-increasing loss at lr = 0.1 on scaled synthetic data.
    Eigen::MatrixXd X(40, 3);
    Eigen::VectorXd y(40);
    for (Eigen::Index i = 0; i < 40; ++i) {
        for (Eigen::Index j = 0; j < 3; ++j)
            X(i, j) = uniform(-1.0, 1.0);
        y[i] = (X(i, 0) - 0.5 * X(i, 1) + 0.2 * uniform(-1.0, 1.0)) > 0.0 ? 1.0 : 0.0;
    }
    LrOptions options;
    options.learning_rate = 0.1;  // pinned by the criterion
    options.lambda = 0.01;
    options.epochs = 300;
    std::vector<double> losses;
    lr_train(X, y, options, &losses);
    bool monotone = losses.size() == 301;
    for (std::size_t i = 0; monotone && i + 1 < losses.size(); ++i)
        if (losses[i + 1] > losses[i] + 1e-12)  // pinned slack for rounding
            monotone = false;

    char buf[140];
    std::snprintf(buf, sizeof buf,
                  "analytic vs central-difference gradients on 100 instances, worst rel err = "
                  "%.2e (tolerance 1e-4); loss non-increasing at lr=0.1: %s",
                  worst_rel, monotone ? "yes" : "no");
    what = buf;
    return worst_rel < kTolerance && monotone;
}

// ------------------------------------------- criterion 4: co-training lift

// Pinned harness configuration for the lift experiment.
CoTrainConfig lift_config(std::uint64_t seed) {
    CoTrainConfig config;
    config.iterations = 5;
    config.pool_size = 75;
    config.add_positive = 1;
    config.add_negative = 3;
    config.min_confidence = 0.6;
    config.seed = seed;
    return config;
}

LearnerOptions lift_learners(std::uint64_t seed) {
    LearnerOptions learners;  // alpha 1.0, lambda 1e-2, lr 0.1, epochs 500
    learners.lr.seed = seed;
    return learners;
}

SynthOptions synth_options(long n_labeled, long n_unlabeled, double noise, std::uint64_t seed) {
    SynthOptions options;
    options.n_labeled = n_labeled;
    options.n_unlabeled = n_unlabeled;
    options.noise = noise;
    options.seed = seed;
    return options;
}

bool criterion4(std::string& what) {
    // Part 1: noise 0.2, 10 seeds, (d) >= (c) in at least 8.
    int lifted = 0;
    std::string losing_seeds;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const SynthDataset data =
            make_synth_dataset(synth_options(8, 500, 0.2, seed));
        const FittedPipeline pipeline = fit_pipeline(data.labeled, PipelineConfig{});
        const ComparisonReport report = run_experiment(
            featurize_all(data.labeled, pipeline), featurize_all(data.unlabeled, pipeline),
            pipeline.vocabulary.size(), lift_config(seed), lift_learners(seed),
            /*folds=*/4, /*seed=*/seed);
        if (report.cotrained.aggregate.f1 >= report.combined.aggregate.f1) {
            ++lifted;
        } else {
            losing_seeds += (losing_seeds.empty() ? "" : ",") + std::to_string(seed);
        }
    }

    // Part 2: noise 0, 10 seeds, F1 = 1.0 on held-out data within 5 iterations.
    int perfect = 0;
    bool within_budget = true;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const SynthDataset train = make_synth_dataset(synth_options(8, 500, 0.0, seed));
        const FittedPipeline pipeline = fit_pipeline(train.labeled, PipelineConfig{});
        const CoTrainResult result = cotrain(
            LabeledPool(featurize_all(train.labeled, pipeline)),
            featurize_all(train.unlabeled, pipeline), pipeline.vocabulary.size(),
            lift_config(seed), lift_learners(seed));
        if (result.log.iterations.size() > 5)
            within_budget = false;

        const SynthDataset held_out =
            make_synth_dataset(synth_options(100, 0, 0.0, seed + 1000));
        ConfusionMatrix cm;
        for (const Commit& commit : held_out.labeled) {
            const Prediction prediction = predict_combined(
                result.text_model, result.code_model, featurize(commit, pipeline), 0.5);
            if (prediction.label == 1)
                ++(*commit.label == 1 ? cm.tp : cm.fp);
            else
                ++(*commit.label == 1 ? cm.fn : cm.tn);
        }
        if (metrics(cm).f1 == 1.0)
            ++perfect;
    }

    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "co-training lift at noise 0.2 in %d/10 seeds (need >= 8%s%s); "
                  "held-out F1 = 1.0 at noise 0 within 5 iterations in %d/10 seeds (need 10)",
                  lifted, losing_seeds.empty() ? "" : "; lost: ",
                  losing_seeds.c_str(), perfect);
    what = buf;
    return lifted >= 8 && perfect == 10 && within_budget;
}

// ------------------------------------------- criterion 5: CLI determinism

int run_cli(const std::string& args) {
    const std::string command = std::string(SECPATCH_CLI) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(command.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

bool criterion5(std::string& what) {
    const auto dir = std::filesystem::temp_directory_path() / "secpatch_acceptance";
    std::filesystem::create_directories(dir);
    const std::string prefix = (dir / "det").string();
    const std::string m1 = (dir / "det1.pch1").string();
    const std::string m2 = (dir / "det2.pch1").string();

    // 1,000 synthetic commits: 500 labeled + 500 unlabeled.
    if (run_cli("synth --n-labeled 500 --n-unlabeled 500 --noise 0.2 --seed 1 --out " + prefix) !=
        0) {
        what = "synth failed";
        return false;
    }
    const std::string train_args = "train --labeled " + prefix + ".labeled.jsonl --unlabeled " +
                                   prefix + ".unlabeled.jsonl --iterations 5 --seed 7 --out ";
    if (run_cli(train_args + m1) != 0 || run_cli(train_args + m2) != 0) {
        what = "train failed";
        return false;
    }

    const std::string model1 = slurp(m1);
    const bool models_equal = !model1.empty() && model1 == slurp(m2);
    const std::string log1 = slurp(m1 + ".trainlog.jsonl");
    const bool logs_equal = log1 == slurp(m2 + ".trainlog.jsonl") && !log1.empty();

    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "two train runs on 1,000 synthetic commits: model files %s (%zu bytes), "
                  "train logs %s",
                  models_equal ? "bit-identical" : "DIFFER", model1.size(),
                  logs_equal ? "bit-identical" : "DIFFER");
    what = buf;
    return models_equal && logs_equal;
}

// --------------------------------------- criterion 6: co-training invariants

TwoViewExample sufficient_example(std::string id, int truth, bool labeled) {
    TwoViewExample out;
    out.id = std::move(id);
    out.text_vec.entries = {{truth == 1 ? 0 : 1, 1.0}};
    out.code_vec = Eigen::VectorXd::Constant(1, truth == 1 ? 1.0 : -1.0);
    if (labeled)
        out.label = truth;
    return out;
}

bool criterion6(std::string& what) {
    std::vector<TwoViewExample> humans;
    for (int i = 0; i < 4; ++i)
        humans.push_back(sufficient_example("h" + std::to_string(i), i % 2, true));
    const LabeledPool labeled(humans);
    std::vector<TwoViewExample> unlabeled;
    for (int i = 0; i < 40; ++i)
        unlabeled.push_back(sufficient_example("u" + std::to_string(i), i % 2, false));

    CoTrainConfig config;
    config.iterations = 4;  // k
    config.pool_size = 10;
    config.add_positive = 1;  // p
    config.add_negative = 2;  // n
    config.min_confidence = 0.5;
    const LearnerOptions learners;
    const CoTrainResult result = cotrain(labeled, unlabeled, 2, config, learners);

    // |L_k| <= |L_0| + 2k(p+n)
    const std::size_t bound = labeled.size() + 2 * 4 * (1 + 2);
    const bool growth_ok = result.final_pool.size() <= bound;

    std::set<std::string> ids;
    bool unique_ok = true;
    for (const TwoViewExample& example : result.final_pool)
        unique_ok = unique_ok && ids.insert(example.id).second;

    bool humans_ok = result.final_pool.size() >= labeled.size();
    for (std::size_t i = 0; humans_ok && i < labeled.size(); ++i) {
        const TwoViewExample& kept = result.final_pool[i];
        const TwoViewExample& original = labeled.examples()[i];
        humans_ok = kept.id == original.id && kept.label == original.label &&
                    kept.provenance == Provenance::Human;
    }

    // tau = 1.0 degenerates to the labeled-only baselines, exactly.
    CoTrainConfig degenerate = config;
    degenerate.min_confidence = 1.0;
    const CoTrainResult tau_one = cotrain(labeled, unlabeled, 2, degenerate, learners);
    std::vector<SparseVector> xs;
    std::vector<int> ys;
    Eigen::MatrixXd X(4, 1);
    Eigen::VectorXd y(4);
    for (std::size_t i = 0; i < labeled.size(); ++i) {
        xs.push_back(labeled.examples()[i].text_vec);
        ys.push_back(*labeled.examples()[i].label);
        X.row(static_cast<Eigen::Index>(i)) = labeled.examples()[i].code_vec.transpose();
        y[static_cast<Eigen::Index>(i)] = static_cast<double>(*labeled.examples()[i].label);
    }
    const bool degenerate_ok = tau_one.text_model == nb_train(xs, ys, 2, learners.nb_alpha) &&
                               tau_one.code_model == lr_train(X, y, learners.lr) &&
                               tau_one.final_pool.size() == labeled.size();

    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "growth bound |L_k| <= |L_0|+2k(p+n): %s (%zu <= %zu); unique ids: %s; "
                  "human labels preserved: %s; tau=1.0 equals labeled-only exactly: %s",
                  growth_ok ? "yes" : "NO", result.final_pool.size(), bound,
                  unique_ok ? "yes" : "NO", humans_ok ? "yes" : "NO",
                  degenerate_ok ? "yes" : "NO");
    what = buf;
    return growth_ok && unique_ok && humans_ok && degenerate_ok;
}

// ------------------------------------------- criterion 7: metrics examples

bool criterion7(std::string& what) {
    const Metrics worked = metrics({2, 1, 1, 6});
    const bool worked_ok =
        worked.precision == 2.0 / 3.0 && worked.recall == 2.0 / 3.0 &&
        worked.accuracy == 0.8 &&
        worked.f1 == 2.0 * worked.precision * worked.recall / (worked.precision + worked.recall);

    const Metrics zeros = metrics({0, 0, 3, 7});
    const bool zero_ok = zeros.precision == 0.0 && zeros.recall == 0.0 && zeros.f1 == 0.0 &&
                         zeros.accuracy == 0.7;
    const Metrics no_recall = metrics({0, 2, 5, 0});
    const bool conventions_ok = no_recall.recall == 0.0 && no_recall.f1 == 0.0;

    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "confusion example precision=recall=f1=2/3, accuracy=0.8: %s; zero-division "
                  "conventions map 0/0 to 0: %s",
                  worked_ok ? "exact" : "NO", zero_ok && conventions_ok ? "yes" : "NO");
    what = buf;
    return worked_ok && zero_ok && conventions_ok;
}

}  // namespace

int main() {
    struct Criterion {
        int number;
        bool (*run)(std::string&);
        double budget_seconds;
    };
    const Criterion criteria[] = {
        {1, criterion1, 1.0},  {2, criterion2, 5.0},  {3, criterion3, 10.0},
        {4, criterion4, 60.0}, {5, criterion5, 30.0}, {6, criterion6, 60.0},
        {7, criterion7, 60.0},
    };
    for (const Criterion& criterion : criteria) {
        Timer timer;
        std::string what;
        bool ok = false;
        try {
            ok = criterion.run(what);
        } catch (const std::exception& e) {
            what += std::string(" [exception: ") + e.what() + "]";
        }
        report(criterion.number, ok, what, timer.seconds(), criterion.budget_seconds);
    }
    if (failures > 0) {
        std::printf("%d criterion(s) failed\n", failures);
        return 1;
    }
    std::printf("all acceptance criteria passed\n");
    return 0;
}
