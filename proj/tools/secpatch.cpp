// secpatch command-line interface.
//
// Exit codes: 0 success, 1 runtime failure (I/O, schema, training errors),
// 2 usage or configuration error. Data goes to stdout ("-" as an output
// path), logs go to stderr.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "secpatch/cotrain.hpp"
#include "secpatch/diff.hpp"
#include "secpatch/errors.hpp"
#include "secpatch/eval.hpp"
#include "secpatch/ingest.hpp"
#include "secpatch/persist.hpp"
#include "secpatch/pipeline.hpp"
#include "secpatch/synth.hpp"

namespace {

using namespace secpatch;

// Flags shared by train and eval: featurization, learner and co-training
// hyperparameters, and the single seed every random choice flows from.
struct TrainFlags {
    std::string stoplist_path;
    std::vector<std::string> tokens;
    long min_df = 2;
    long max_terms = 20000;
    double alpha = 1.0;
    double lambda = 1e-2;
    double learning_rate = 0.1;
    int epochs = 500;
    CoTrainConfig cotrain;
};

void add_train_flags(CLI::App* cmd, TrainFlags& f) {
    cmd->add_option("--stoplist", f.stoplist_path, "Stop-word file, one word per line");
    cmd->add_option("--token", f.tokens, "Sensitive token (repeatable; default built-in list)");
    cmd->add_option("--min-df", f.min_df, "Minimum document frequency for vocabulary terms")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--max-terms", f.max_terms, "Vocabulary size cap")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--alpha", f.alpha, "Naive Bayes smoothing")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--lambda", f.lambda, "Logistic regression L2 strength")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    cmd->add_option("--learning-rate", f.learning_rate, "Logistic regression step size")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--epochs", f.epochs, "Logistic regression epochs")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--iterations", f.cotrain.iterations, "Co-training iterations (k)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--pool", f.cotrain.pool_size,
                    "Unlabeled working-pool size (u); 0 scores the whole set")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    cmd->add_option("--add-pos", f.cotrain.add_positive,
                    "Positives each learner may add per iteration (p)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    cmd->add_option("--add-neg", f.cotrain.add_negative,
                    "Negatives each learner may add per iteration (n)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    cmd->add_option("--tau", f.cotrain.min_confidence,
                    "Minimum pseudo-label confidence, in [0.5, 1]")
        ->check(CLI::Range(0.5, 1.0))
        ->capture_default_str();
    cmd->add_option("--seed", f.cotrain.seed, "Seed for every random choice")
        ->capture_default_str();
}

// Cross-flag invariants CLI11 range checks cannot express. Returns a usage
// message, or empty when the flags are coherent.
std::string check_train_flags(const TrainFlags& f) {
    if (f.cotrain.add_positive + f.cotrain.add_negative < 1)
        return "--add-pos plus --add-neg must be at least 1";
    if (f.cotrain.pool_size != 0 &&
        f.cotrain.pool_size < f.cotrain.add_positive + f.cotrain.add_negative)
        return "--pool must be 0 or at least --add-pos plus --add-neg";
    return {};
}

PipelineConfig pipeline_config(const TrainFlags& f) {
    PipelineConfig config;
    if (!f.stoplist_path.empty())
        config.stoplist = load_stopwords(f.stoplist_path);
    config.sensitive_tokens = f.tokens;
    config.min_df = f.min_df;
    config.max_terms = f.max_terms;
    return config;
}

LearnerOptions learner_options(const TrainFlags& f) {
    LearnerOptions learners;
    learners.nb_alpha = f.alpha;
    learners.lr.lambda = f.lambda;
    learners.lr.learning_rate = f.learning_rate;
    learners.lr.epochs = f.epochs;
    learners.lr.seed = f.cotrain.seed;
    return learners;
}

void write_text(const std::string& out_path, const std::string& content) {
    if (out_path == "-") {
        std::cout << content;
        std::cout.flush();
        return;
    }
    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open \"" + out_path + "\" for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out)
        throw IoError("failed writing \"" + out_path + "\"");
}

std::vector<Commit> read_labeled_file(const std::string& path) {
    std::vector<Commit> commits = read_commits_jsonl(path);
    for (const Commit& commit : commits)
        if (!commit.label)
            throw SchemaError("\"" + path + "\": commit \"" + commit.id +
                              "\" has no label; every record in a labeled file needs one");
    return commits;
}

// Reads an unlabeled pool, stripping any labels so hidden ground truth can
// never reach the co-training loop.
std::vector<Commit> read_unlabeled_file(const std::string& path) {
    std::vector<Commit> commits = read_commits_jsonl(path);
    long stripped = 0;
    for (Commit& commit : commits)
        if (commit.label) {
            commit.label.reset();
            ++stripped;
        }
    if (stripped > 0)
        std::cerr << "note: ignored labels on " << stripped << " of " << commits.size()
                  << " unlabeled commits\n";
    return commits;
}

std::string digest_hex(const std::string& bytes) {
    char buf[9];
    std::snprintf(buf, sizeof buf, "%08x", crc32(bytes));
    return buf;
}

// --- subcommand bodies -------------------------------------------------

struct IngestArgs {
    std::string repo, jsonl, out;
    std::optional<long> limit;
};

int cmd_ingest(const IngestArgs& args) {
    std::vector<Commit> commits;
    if (!args.repo.empty()) {
        commits = enumerate_repo(args.repo, args.limit);
    } else {
        commits = read_commits_jsonl(args.jsonl);
        if (args.limit && static_cast<std::size_t>(*args.limit) < commits.size())
            commits.resize(static_cast<std::size_t>(*args.limit));
    }
    write_commits_jsonl(args.out, commits);
    std::cerr << "ingested " << commits.size() << " commits to " << args.out << "\n";
    return 0;
}

struct ExtractArgs {
    std::string in, out = "-", stoplist_path;
    std::vector<std::string> tokens;
};

int cmd_extract(const ExtractArgs& args) {
    const FeatureSchema schema =
        args.tokens.empty() ? default_schema() : make_schema(args.tokens);
    const std::unordered_set<std::string> stoplist =
        args.stoplist_path.empty() ? default_stopwords() : load_stopwords(args.stoplist_path);

    std::string body;
    const std::vector<Commit> commits = read_commits_jsonl(args.in);
    for (const Commit& commit : commits) {
        const Eigen::VectorXd features =
            extract_code_features(parse_unified_diff(commit.diff).files, schema);
        nlohmann::json line;
        line["id"] = commit.id;
        nlohmann::json table = nlohmann::json::object();
        for (int i = 0; i < schema.feature_count(); ++i)
            table[schema.names[static_cast<std::size_t>(i)]] = features[i];
        line["features"] = std::move(table);
        line["tokens"] = prepare_message(commit.message, stoplist);
        body += line.dump();
        body += '\n';
    }
    write_text(args.out, body);
    std::cerr << "extracted features for " << commits.size() << " commits\n";
    return 0;
}

struct TrainArgs {
    std::string labeled, unlabeled, out;
    TrainFlags flags;
};

int cmd_train(const TrainArgs& args) {
    const std::vector<Commit> labeled = read_labeled_file(args.labeled);
    const FittedPipeline pipeline = fit_pipeline(labeled, pipeline_config(args.flags));
    const std::vector<TwoViewExample> labeled_examples = featurize_all(labeled, pipeline);
    const LearnerOptions learners = learner_options(args.flags);

    ModelBundle bundle;
    bundle.vocabulary = pipeline.vocabulary;
    bundle.schema = pipeline.schema;
    bundle.scaler = pipeline.scaler;
    bundle.config = args.flags.cotrain;

    std::string log_jsonl;
    if (!args.unlabeled.empty()) {
        const std::vector<Commit> unlabeled = read_unlabeled_file(args.unlabeled);
        CoTrainResult result =
            cotrain(LabeledPool(labeled_examples), featurize_all(unlabeled, pipeline),
                    pipeline.vocabulary.size(), args.flags.cotrain, learners);
        bundle.nb = std::move(result.text_model);
        bundle.lr = std::move(result.code_model);
        log_jsonl = to_jsonl(result.log);
        std::cerr << "co-trained on " << labeled.size() << " labeled + " << unlabeled.size()
                  << " unlabeled commits over " << result.log.iterations.size()
                  << " iterations (final pool " << result.final_pool.size() << ")\n";
    } else {
        std::vector<SparseVector> xs;
        std::vector<int> ys;
        Eigen::MatrixXd X(static_cast<Eigen::Index>(labeled_examples.size()),
                          pipeline.schema.feature_count());
        Eigen::VectorXd y(static_cast<Eigen::Index>(labeled_examples.size()));
        for (std::size_t i = 0; i < labeled_examples.size(); ++i) {
            xs.push_back(labeled_examples[i].text_vec);
            ys.push_back(*labeled_examples[i].label);
            X.row(static_cast<Eigen::Index>(i)) = labeled_examples[i].code_vec.transpose();
            y[static_cast<Eigen::Index>(i)] = static_cast<double>(*labeled_examples[i].label);
        }
        bundle.nb = nb_train(xs, ys, pipeline.vocabulary.size(), learners.nb_alpha);
        bundle.lr = lr_train(X, y, learners.lr);
        std::cerr << "no unlabeled pool given: trained labeled-only baselines on "
                  << labeled.size() << " commits\n";
    }

    bundle.train_log_digest = digest_hex(log_jsonl);
    const std::string log_path = args.out + ".trainlog.jsonl";
    write_text(log_path, log_jsonl);
    save_model(bundle, args.out);
    std::cerr << "wrote " << args.out << " and " << log_path << "\n";
    return 0;
}

struct PredictArgs {
    std::string model, in, out = "-";
    double threshold = 0.5;
};

int cmd_predict(const PredictArgs& args) {
    const ModelBundle bundle = load_model(args.model);
    const FittedPipeline pipeline = pipeline_from_bundle(bundle);
    const std::vector<Commit> commits = read_commits_jsonl(args.in);

    std::string body;
    for (const Commit& commit : commits) {
        const TwoViewExample example = featurize(commit, pipeline);
        const Prediction prediction =
            predict_combined(bundle.nb, bundle.lr, example, args.threshold);
        nlohmann::json line;
        line["id"] = commit.id;
        line["probability"] = prediction.probability;
        line["label"] = prediction.label;
        body += line.dump();
        body += '\n';
    }
    write_text(args.out, body);
    std::cerr << "predicted " << commits.size() << " commits\n";
    return 0;
}

struct EvalArgs {
    std::string labeled, unlabeled, report;
    int folds = 10;
    TrainFlags flags;
};

int cmd_eval(const EvalArgs& args) {
    const std::vector<Commit> labeled = read_labeled_file(args.labeled);
    const FittedPipeline pipeline = fit_pipeline(labeled, pipeline_config(args.flags));
    const std::vector<TwoViewExample> labeled_examples = featurize_all(labeled, pipeline);
    std::vector<TwoViewExample> unlabeled_examples;
    if (!args.unlabeled.empty())
        unlabeled_examples = featurize_all(read_unlabeled_file(args.unlabeled), pipeline);

    const ComparisonReport report = run_experiment(
        labeled_examples, unlabeled_examples, pipeline.vocabulary.size(), args.flags.cotrain,
        learner_options(args.flags), args.folds, args.flags.cotrain.seed);

    if (!args.report.empty()) {
        write_text(args.report, to_json(report));
        std::cerr << "wrote report to " << args.report << "\n";
    }
    std::cout << to_table(report);
    return 0;
}

struct SynthArgs {
    std::string out;
    SynthOptions options;
};

int cmd_synth(const SynthArgs& args) {
    const SynthDataset dataset = make_synth_dataset(args.options);
    const std::string labeled_path = args.out + ".labeled.jsonl";
    const std::string unlabeled_path = args.out + ".unlabeled.jsonl";
    write_commits_jsonl(labeled_path, dataset.labeled);
    write_commits_jsonl(unlabeled_path, dataset.unlabeled);
    std::cerr << "wrote " << dataset.labeled.size() << " labeled commits to " << labeled_path
              << " and " << dataset.unlabeled.size() << " unlabeled commits to "
              << unlabeled_path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Classify version-control commits as security patches"};
    app.set_config("--config", "", "Key-value config file; command-line flags win");
    app.require_subcommand(1);

    auto* ingest = app.add_subcommand("ingest", "Normalize commits into dataset JSONL");
    IngestArgs ingest_args;
    long ingest_limit = 0;
    auto* source = ingest->add_option_group("source", "Exactly one input source");
    source->add_option("--repo", ingest_args.repo, "Git checkout to enumerate");
    source->add_option("--jsonl", ingest_args.jsonl, "Existing dataset to normalize");
    source->require_option(1);
    auto* limit_opt = ingest->add_option("--limit", ingest_limit, "Keep at most N commits")
                          ->check(CLI::PositiveNumber);
    ingest->add_option("--out", ingest_args.out, "Output JSONL path")->required();

    auto* extract = app.add_subcommand("extract", "Dump per-commit features as JSONL");
    ExtractArgs extract_args;
    extract->add_option("--in", extract_args.in, "Commit JSONL input")->required();
    extract->add_option("--out", extract_args.out, "Output path or -")->capture_default_str();
    extract->add_option("--stoplist", extract_args.stoplist_path,
                        "Stop-word file, one word per line");
    extract->add_option("--token", extract_args.tokens,
                        "Sensitive token (repeatable; default built-in list)");

    auto* train = app.add_subcommand("train", "Fit the two-view model, optionally co-training");
    TrainArgs train_args;
    train->add_option("--labeled", train_args.labeled, "Labeled commit JSONL")->required();
    train->add_option("--unlabeled", train_args.unlabeled,
                      "Unlabeled commit JSONL (omit to train labeled-only baselines)");
    train->add_option("--out", train_args.out, "Model output path")->required();
    add_train_flags(train, train_args.flags);

    auto* predict = app.add_subcommand("predict", "Score commits with a saved model");
    PredictArgs predict_args;
    predict->add_option("--model", predict_args.model, "Model file from train")->required();
    predict->add_option("--in", predict_args.in, "Commit JSONL input")->required();
    predict->add_option("--out", predict_args.out, "Output path or -")->capture_default_str();
    predict
        ->add_option("--threshold", predict_args.threshold,
                     "Decision threshold, in (0, 1); ties resolve to label 1")
        ->check([](const std::string& value) -> std::string {
            try {
                const double t = std::stod(value);
                if (t > 0.0 && t < 1.0)
                    return {};
            } catch (...) {
            }
            return "threshold must be a number strictly between 0 and 1";
        })
        ->capture_default_str();

    auto* eval = app.add_subcommand("eval", "Cross-validated four-system comparison");
    EvalArgs eval_args;
    eval->add_option("--labeled", eval_args.labeled, "Labeled commit JSONL")->required();
    eval->add_option("--unlabeled", eval_args.unlabeled, "Unlabeled commit JSONL");
    eval->add_option("--folds", eval_args.folds, "Cross-validation folds")
        ->check(CLI::Range(2, 1000000))
        ->capture_default_str();
    eval->add_option("--report", eval_args.report, "Write the JSON report here");
    add_train_flags(eval, eval_args.flags);

    auto* synth = app.add_subcommand("synth", "Generate a synthetic two-view dataset");
    SynthArgs synth_args;
    synth->add_option("--n-labeled", synth_args.options.n_labeled, "Labeled commits (>= 4)")
        ->check(CLI::Range(4L, 2000000000L))
        ->capture_default_str();
    synth
        ->add_option("--n-unlabeled", synth_args.options.n_unlabeled,
                     "Unlabeled commits (>= 0)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    synth->add_option("--noise", synth_args.options.noise, "Message-corruption rate, [0, 0.5)")
        ->check([](const std::string& value) -> std::string {
            try {
                const double e = std::stod(value);
                if (e >= 0.0 && e < 0.5)
                    return {};
            } catch (...) {
            }
            return "noise must be a number in [0, 0.5)";
        })
        ->capture_default_str();
    synth->add_option("--seed", synth_args.options.seed, "Generator seed")
        ->capture_default_str();
    synth->add_option("--out", synth_args.out, "Output prefix for the two JSONL files")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);  // --help / --version
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*ingest) {
            if (*limit_opt)
                ingest_args.limit = ingest_limit;
            return cmd_ingest(ingest_args);
        }
        if (*extract)
            return cmd_extract(extract_args);
        if (*train) {
            if (const std::string usage = check_train_flags(train_args.flags); !usage.empty()) {
                std::cerr << "usage error: " << usage << "\n";
                return 2;
            }
            return cmd_train(train_args);
        }
        if (*predict)
            return cmd_predict(predict_args);
        if (*eval) {
            if (const std::string usage = check_train_flags(eval_args.flags); !usage.empty()) {
                std::cerr << "usage error: " << usage << "\n";
                return 2;
            }
            return cmd_eval(eval_args);
        }
        if (*synth)
            return cmd_synth(synth_args);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;  // unreachable: a subcommand is required
}
