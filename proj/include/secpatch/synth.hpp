#pragma once

#include <cstdint>
#include <vector>

#include "secpatch/commit.hpp"

namespace secpatch {

// Controls the synthetic-commit generator used by the test harness and the
// synth subcommand. noise is the probability that a commit's message view
// is corrupted (drawn from the opposite class's word pool); the diff view
// is never corrupted.
struct SynthOptions {
    long n_labeled = 8;     // >= 4; labels alternate 1,0,1,0,...
    long n_unlabeled = 500; // >= 0; class drawn uniformly, label withheld
    double noise = 0.0;     // in [0, 0.5)
    std::uint64_t seed = 0;
};

struct SynthDataset {
    std::vector<Commit> labeled;    // label present
    std::vector<Commit> unlabeled;  // label absent
};

// Generates commits with two individually sufficient views: security
// commits draw message words from a security pool and diffs whose added
// lines call sensitive APIs; neutral commits draw from disjoint pools.
// Fully deterministic in the seed. Throws ConfigInvalid on out-of-range
// options.
SynthDataset make_synth_dataset(const SynthOptions& options);

}  // namespace secpatch
