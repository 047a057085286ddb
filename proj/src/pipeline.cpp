#include "secpatch/pipeline.hpp"

#include "secpatch/diff.hpp"

namespace secpatch {

FittedPipeline fit_pipeline(const std::vector<Commit>& commits, const PipelineConfig& config) {
    const std::unordered_set<std::string>& stoplist =
        config.stoplist.empty() ? default_stopwords() : config.stoplist;

    FittedPipeline pipeline;
    pipeline.schema = config.sensitive_tokens.empty() ? default_schema()
                                                      : make_schema(config.sensitive_tokens);

    std::vector<std::vector<std::string>> documents;
    documents.reserve(commits.size());
    std::vector<Eigen::VectorXd> rows;
    rows.reserve(commits.size());
    for (const Commit& commit : commits) {
        documents.push_back(prepare_message(commit.message, stoplist));
        rows.push_back(extract_code_features(parse_unified_diff(commit.diff).files,
                                             pipeline.schema));
    }
    pipeline.vocabulary = fit_vocabulary(documents, config.min_df, config.max_terms);
    pipeline.scaler = fit_scaler(rows);
    return pipeline;
}

FittedPipeline pipeline_from_bundle(const ModelBundle& bundle) {
    return {bundle.vocabulary, bundle.schema, bundle.scaler};
}

TwoViewExample featurize(const Commit& commit, const FittedPipeline& pipeline) {
    TwoViewExample example;
    example.id = commit.id;
    // No stoplist here: tokens the fitting stoplist removed are not in the
    // vocabulary, so vectorize drops them regardless.
    example.text_vec =
        vectorize(prepare_message(commit.message, std::unordered_set<std::string>{}),
                  pipeline.vocabulary);
    example.code_vec =
        apply_scaler(extract_code_features(parse_unified_diff(commit.diff).files,
                                           pipeline.schema),
                     pipeline.scaler);
    example.label = commit.label;
    return example;
}

std::vector<TwoViewExample> featurize_all(const std::vector<Commit>& commits,
                                          const FittedPipeline& pipeline) {
    std::vector<TwoViewExample> examples;
    examples.reserve(commits.size());
    for (const Commit& commit : commits)
        examples.push_back(featurize(commit, pipeline));
    return examples;
}

}  // namespace secpatch
