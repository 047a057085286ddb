#pragma once

#include <optional>
#include <string>
#include <vector>

namespace secpatch {

// One version-control change. `label` is 1 for a security patch, 0 for
// anything else, and absent for unlabeled commits.
struct Commit {
    std::string id;
    std::string message;
    std::string diff;
    std::optional<int> label;
};

enum class LineKind { Context, Added, Removed };

struct HunkLine {
    LineKind kind;
    std::string text;
};

// One contiguous change region delimited by a `@@ -a[,b] +c[,d] @@` header.
// Omitted lengths default to 1, as in the unified-diff grammar.
struct Hunk {
    long old_start = 0;
    long old_len = 0;
    long new_start = 0;
    long new_len = 0;
    std::vector<HunkLine> lines;
};

struct FileDiff {
    std::string path_old;
    std::string path_new;
    bool is_binary = false;
    std::vector<Hunk> hunks;
};

}  // namespace secpatch
