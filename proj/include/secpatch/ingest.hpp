#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "secpatch/commit.hpp"

namespace secpatch {

// Reads one JSON object per line with keys id, message, diff and optional
// label in {0,1}. Commits come back in file order. Throws IoError when the
// file cannot be opened and SchemaError (with the line number) for invalid
// JSON, missing keys, an out-of-range label or a duplicate id.
std::vector<Commit> read_commits_jsonl(const std::string& path);

// Writes commits in the same schema, one object per line with sorted keys.
// Field bytes round-trip exactly through read_commits_jsonl.
void write_commits_jsonl(const std::string& path, const std::vector<Commit>& commits);

std::string commit_to_json_line(const Commit& commit);

// Lists commits of a git checkout, newest first, by running the git CLI:
// `log --format=%H` for the ids, then per id `show -s --format=%B` for the
// message and `show --format=` for the unified diff (default 3 context
// lines). Output bytes are forced to valid UTF-8 with invalid sequences
// replaced. Throws ToolNotFound when git is not on PATH and
// SubprocessFailure (stderr captured) on a non-zero exit.
std::vector<Commit> enumerate_repo(const std::string& repo_path,
                                   std::optional<long> limit = std::nullopt);

// Replaces invalid UTF-8 sequences with U+FFFD.
std::string sanitize_utf8(std::string_view bytes);

}  // namespace secpatch
