#include "secpatch/ingest.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>
#include <unordered_set>

#include <json.hpp>

#include "secpatch/errors.hpp"

namespace secpatch {

namespace {

using nlohmann::json;

Commit commit_from_json(const json& record, std::size_t line_number) {
    auto fail = [&](const std::string& what) -> SchemaError {
        return SchemaError("line " + std::to_string(line_number) + ": " + what);
    };
    if (!record.is_object())
        throw fail("record is not a JSON object");
    for (const char* key : {"id", "message", "diff"}) {
        if (!record.contains(key))
            throw fail(std::string("missing key \"") + key + "\"");
        if (!record[key].is_string())
            throw fail(std::string("key \"") + key + "\" is not a string");
    }

    Commit commit;
    commit.id = record["id"].get<std::string>();
    commit.message = record["message"].get<std::string>();
    commit.diff = record["diff"].get<std::string>();
    if (commit.id.empty())
        throw fail("id is empty");

    if (record.contains("label") && !record["label"].is_null()) {
        const json& label = record["label"];
        if (!label.is_number_integer())
            throw fail("label is not an integer");
        long value = label.get<long>();
        if (value != 0 && value != 1)
            throw fail("label " + std::to_string(value) + " outside {0,1}");
        commit.label = static_cast<int>(value);
    }
    return commit;
}

}  // namespace

std::vector<Commit> read_commits_jsonl(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path);

    std::vector<Commit> commits;
    std::unordered_set<std::string> seen;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        json record;
        try {
            record = json::parse(line);
        } catch (const json::parse_error& e) {
            throw SchemaError("line " + std::to_string(line_number) + ": invalid JSON: " + e.what());
        }
        Commit commit = commit_from_json(record, line_number);
        if (!seen.insert(commit.id).second)
            throw SchemaError("line " + std::to_string(line_number) + ": duplicate id \"" + commit.id + "\"");
        commits.push_back(std::move(commit));
    }
    return commits;
}

std::string commit_to_json_line(const Commit& commit) {
    json record;
    record["id"] = commit.id;
    record["message"] = commit.message;
    record["diff"] = commit.diff;
    if (commit.label)
        record["label"] = *commit.label;
    return record.dump();
}

void write_commits_jsonl(const std::string& path, const std::vector<Commit>& commits) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open " + path + " for writing");
    for (const Commit& commit : commits)
        out << commit_to_json_line(commit) << '\n';
    if (!out)
        throw IoError("write failed: " + path);
}

namespace {

std::string shell_quote(const std::string& arg) {
    std::string quoted = "'";
    for (char c : arg) {
        if (c == '\'')
            quoted += "'\\''";
        else
            quoted += c;
    }
    quoted += "'";
    return quoted;
}

struct CommandResult {
    int exit_code;
    std::string output;
    std::string error;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

// Runs a shell command, capturing stdout via popen and stderr via a
// temporary file.
CommandResult run_command(const std::string& command) {
    char stderr_path[] = "/tmp/secpatch-stderr-XXXXXX";
    int fd = mkstemp(stderr_path);
    if (fd < 0)
        throw IoError("cannot create temporary file for stderr");
    close(fd);

    std::string full = command + " 2>" + shell_quote(stderr_path);
    FILE* pipe = popen(full.c_str(), "r");
    if (!pipe) {
        std::remove(stderr_path);
        throw SubprocessFailure("popen failed for: " + command);
    }

    std::string output;
    char buffer[4096];
    std::size_t got;
    while ((got = fread(buffer, 1, sizeof buffer, pipe)) > 0)
        output.append(buffer, got);
    int status = pclose(pipe);

    CommandResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.output = std::move(output);
    result.error = slurp(stderr_path);
    std::remove(stderr_path);
    return result;
}

std::string check_command(const std::string& command) {
    CommandResult result = run_command(command);
    if (result.exit_code == 127)
        throw ToolNotFound("git not found on PATH (command: " + command + ")");
    if (result.exit_code != 0)
        throw SubprocessFailure("command failed (exit " + std::to_string(result.exit_code) +
                                "): " + command + "\n" + result.error);
    return result.output;
}

}  // namespace

std::string sanitize_utf8(std::string_view bytes) {
    static constexpr std::string_view replacement = "\xEF\xBF\xBD";  // U+FFFD
    std::string out;
    out.reserve(bytes.size());
    std::size_t i = 0;
    while (i < bytes.size()) {
        unsigned char c = static_cast<unsigned char>(bytes[i]);
        std::size_t len;
        unsigned long min_value;
        if (c < 0x80) {
            out += static_cast<char>(c);
            ++i;
            continue;
        } else if ((c & 0xE0) == 0xC0) {
            len = 2;
            min_value = 0x80;
        } else if ((c & 0xF0) == 0xE0) {
            len = 3;
            min_value = 0x800;
        } else if ((c & 0xF8) == 0xF0) {
            len = 4;
            min_value = 0x10000;
        } else {
            out += replacement;
            ++i;
            continue;
        }

        unsigned long code = c & (0x7F >> len);
        bool valid = i + len <= bytes.size();
        for (std::size_t k = 1; valid && k < len; ++k) {
            unsigned char cont = static_cast<unsigned char>(bytes[i + k]);
            if ((cont & 0xC0) != 0x80)
                valid = false;
            else
                code = (code << 6) | (cont & 0x3F);
        }
        if (valid && (code < min_value || code > 0x10FFFF || (code >= 0xD800 && code <= 0xDFFF)))
            valid = false;

        if (valid) {
            out.append(bytes.substr(i, len));
            i += len;
        } else {
            out += replacement;
            ++i;
        }
    }
    return out;
}

std::vector<Commit> enumerate_repo(const std::string& repo_path, std::optional<long> limit) {
    std::string base = "git -C " + shell_quote(repo_path);
    std::string list_cmd = base + " log --format=%H";
    if (limit)
        list_cmd += " -n " + std::to_string(*limit);

    std::vector<std::string> hashes;
    {
        std::istringstream lines(check_command(list_cmd));
        std::string hash;
        while (std::getline(lines, hash)) {
            if (!hash.empty())
                hashes.push_back(hash);
            if (limit && static_cast<long>(hashes.size()) >= *limit)
                break;
        }
    }

    std::vector<Commit> commits;
    commits.reserve(hashes.size());
    for (const std::string& hash : hashes) {
        Commit commit;
        commit.id = hash;
        commit.message =
            sanitize_utf8(check_command(base + " show -s --format=%B --encoding=UTF-8 " + hash));
        commit.diff =
            sanitize_utf8(check_command(base + " show --format= --encoding=UTF-8 " + hash));
        commits.push_back(std::move(commit));
    }
    return commits;
}

}  // namespace secpatch
