#pragma once

#include <string>
#include <unordered_set>
#include <vector>

#include "secpatch/codeview.hpp"
#include "secpatch/commit.hpp"
#include "secpatch/cotrain.hpp"
#include "secpatch/persist.hpp"
#include "secpatch/textview.hpp"

namespace secpatch {

// Featurization settings fitted from a labeled set. The stoplist only
// matters while fitting: any token the stoplist removed can never enter the
// vocabulary, so vectorization afterwards filters by vocabulary membership
// alone.
struct PipelineConfig {
    std::unordered_set<std::string> stoplist;   // empty = built-in list
    std::vector<std::string> sensitive_tokens;  // empty = built-in list
    long min_df = 2;
    long max_terms = 20000;
};

struct FittedPipeline {
    Vocabulary vocabulary;
    FeatureSchema schema;
    Scaler scaler;
};

// Fits vocabulary (from the commit messages) and scaler (from the raw code
// features) on the given commits; the schema comes straight from the token
// list. Propagates EmptyVocabulary when no term clears min_df.
FittedPipeline fit_pipeline(const std::vector<Commit>& commits, const PipelineConfig& config);

// Rebuilds the fitted state carried by a saved model.
FittedPipeline pipeline_from_bundle(const ModelBundle& bundle);

// Both views of one commit under a fitted pipeline. Diff parse errors do
// not abort: features come from whatever parsed (views are total).
TwoViewExample featurize(const Commit& commit, const FittedPipeline& pipeline);

std::vector<TwoViewExample> featurize_all(const std::vector<Commit>& commits,
                                          const FittedPipeline& pipeline);

}  // namespace secpatch
