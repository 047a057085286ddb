#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "secpatch/commit.hpp"

namespace secpatch {

// A malformed construct found while parsing. The parser records it and
// resynchronizes at the next file header instead of aborting.
struct DiffError {
    std::size_t line;  // 1-based line number in the newline-normalized input
    std::string message;
};

struct ParsedDiff {
    std::vector<FileDiff> files;
    std::vector<DiffError> errors;
};

// Parses unified-diff text into per-file hunks. Total over arbitrary input:
// CRLF is normalized to LF, unrecognized material before the first file
// header is skipped, and a malformed `@@` header yields a DiffError after
// which parsing resumes at the next file header. A `+` line not starting
// with `+++` is an added line; a `-` line not starting with `---` is a
// removed line. `Binary files ... differ` marks the file binary with zero
// hunks.
ParsedDiff parse_unified_diff(std::string_view diff_text);

// Payload-line totals across all files.
long count_added(const std::vector<FileDiff>& files);
long count_removed(const std::vector<FileDiff>& files);

}  // namespace secpatch
