#include "secpatch/diff.hpp"

#include <algorithm>
#include <cctype>
#include <limits>

namespace secpatch {

namespace {

bool starts_with(std::string_view s, std::string_view prefix) {
    return s.substr(0, prefix.size()) == prefix;
}

bool ends_with(std::string_view s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

// CRLF -> LF, then split on '\n'. A trailing newline does not produce a
// final empty line.
std::vector<std::string> split_lines(std::string_view text) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        if (start == text.size()) {
            break;
        }
        std::size_t nl = text.find('\n', start);
        std::string_view line = (nl == std::string_view::npos)
                                    ? text.substr(start)
                                    : text.substr(start, nl - start);
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        lines.emplace_back(line);
        if (nl == std::string_view::npos)
            break;
        start = nl + 1;
    }
    return lines;
}

struct Cursor {
    std::string_view rest;

    bool literal(std::string_view want) {
        if (!starts_with(rest, want))
            return false;
        rest.remove_prefix(want.size());
        return true;
    }

    bool number(long& out) {
        if (rest.empty() || !std::isdigit(static_cast<unsigned char>(rest.front())))
            return false;
        long value = 0;
        std::size_t used = 0;
        while (used < rest.size() && std::isdigit(static_cast<unsigned char>(rest[used]))) {
            int digit = rest[used] - '0';
            if (value > (std::numeric_limits<long>::max() - digit) / 10)
                return false;  // overflowing line numbers are malformed
            value = value * 10 + digit;
            ++used;
        }
        rest.remove_prefix(used);
        out = value;
        return true;
    }
};

// `@@ -a[,b] +c[,d] @@` with optional trailing section text.
bool parse_hunk_header(std::string_view line, Hunk& hunk) {
    Cursor cur{line};
    if (!cur.literal("@@ -"))
        return false;
    if (!cur.number(hunk.old_start))
        return false;
    hunk.old_len = 1;
    if (cur.literal(",") && !cur.number(hunk.old_len))
        return false;
    if (!cur.literal(" +"))
        return false;
    if (!cur.number(hunk.new_start))
        return false;
    hunk.new_len = 1;
    if (cur.literal(",") && !cur.number(hunk.new_len))
        return false;
    return cur.literal(" @@");
}

// Minimal unquoting for diff paths: handles \\ \" \t \n; anything else is
// kept verbatim.
std::string unquote(std::string_view quoted) {
    std::string out;
    std::size_t i = 1;  // skip opening quote
    while (i < quoted.size() && quoted[i] != '"') {
        char c = quoted[i];
        if (c == '\\' && i + 1 < quoted.size()) {
            char esc = quoted[++i];
            switch (esc) {
            case 'n': out += '\n'; break;
            case 't': out += '\t'; break;
            default: out += esc; break;
            }
        } else {
            out += c;
        }
        ++i;
    }
    return out;
}

std::string strip_git_prefix(std::string path) {
    if (starts_with(path, "a/") || starts_with(path, "b/"))
        return path.substr(2);
    return path;
}

// Path portion of a `---`/`+++` header: quoted string, or everything up to
// the first tab (the usual timestamp separator).
std::string parse_header_path(std::string_view rest) {
    if (!rest.empty() && rest.front() == '"')
        return strip_git_prefix(unquote(rest));
    std::size_t tab = rest.find('\t');
    if (tab != std::string_view::npos)
        rest = rest.substr(0, tab);
    return strip_git_prefix(std::string(rest));
}

// `diff --git a/old b/new`; paths here are provisional and overridden by a
// following `---`/`+++` pair when present.
void parse_git_paths(std::string_view line, FileDiff& file) {
    std::string_view rest = line.substr(std::string_view("diff --git ").size());
    if (!rest.empty() && rest.front() == '"') {
        file.path_old = strip_git_prefix(unquote(rest));
        return;
    }
    std::size_t split = rest.find(" b/");
    if (split == std::string_view::npos)
        return;
    file.path_old = strip_git_prefix(std::string(rest.substr(0, split)));
    file.path_new = strip_git_prefix(std::string(rest.substr(split + 1)));
}

// `Binary files <old> and <new> differ`
void parse_binary_paths(std::string_view line, FileDiff& file) {
    std::string_view middle = line;
    middle.remove_prefix(std::string_view("Binary files ").size());
    middle.remove_suffix(std::string_view(" differ").size());
    std::size_t split = middle.find(" and ");
    if (split == std::string_view::npos)
        return;
    file.path_old = strip_git_prefix(std::string(middle.substr(0, split)));
    file.path_new = strip_git_prefix(std::string(middle.substr(split + 5)));
}

}  // namespace

ParsedDiff parse_unified_diff(std::string_view diff_text) {
    ParsedDiff out;
    const std::vector<std::string> lines = split_lines(diff_text);

    FileDiff current;
    bool file_open = false;
    bool paths_from_headers = false;
    bool in_hunk = false;
    bool skipping = false;  // resynchronizing after a malformed hunk header

    auto close_file = [&] {
        if (file_open)
            out.files.push_back(std::move(current));
        current = FileDiff{};
        file_open = false;
        paths_from_headers = false;
        in_hunk = false;
    };

    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::string& line = lines[i];

        // File boundaries resynchronize the parser even inside a skipped
        // region.
        if (starts_with(line, "diff --git ")) {
            close_file();
            parse_git_paths(line, current);
            file_open = true;
            skipping = false;
            continue;
        }
        if (starts_with(line, "--- ") && i + 1 < lines.size() && starts_with(lines[i + 1], "+++ ")) {
            std::string path_old = parse_header_path(std::string_view(line).substr(4));
            std::string path_new = parse_header_path(std::string_view(lines[i + 1]).substr(4));
            if (file_open && !paths_from_headers && current.hunks.empty() && !current.is_binary) {
                // Completes the header of a file opened by `diff --git`.
                if (!path_old.empty())
                    current.path_old = std::move(path_old);
                if (!path_new.empty())
                    current.path_new = std::move(path_new);
            } else {
                close_file();
                current.path_old = std::move(path_old);
                current.path_new = std::move(path_new);
                file_open = true;
            }
            paths_from_headers = true;
            in_hunk = false;
            skipping = false;
            ++i;  // the `+++` line is consumed as part of the boundary
            continue;
        }

        if (skipping)
            continue;

        if (starts_with(line, "@@")) {
            if (!file_open)
                continue;  // leading material before any file header
            Hunk hunk;
            if (parse_hunk_header(line, hunk)) {
                current.hunks.push_back(std::move(hunk));
                in_hunk = true;
            } else {
                out.errors.push_back({i + 1, "malformed hunk header: " + line});
                in_hunk = false;
                skipping = true;
            }
            continue;
        }

        if (starts_with(line, "Binary files ") && ends_with(line, " differ")) {
            if (!file_open)
                file_open = true;
            current.is_binary = true;
            if (current.path_new.empty() && current.path_old.empty())
                parse_binary_paths(line, current);
            in_hunk = false;
            continue;
        }

        if (in_hunk) {
            Hunk& hunk = current.hunks.back();
            if (line.empty()) {
                hunk.lines.push_back({LineKind::Context, ""});
            } else if (starts_with(line, "+++") || starts_with(line, "---")) {
                in_hunk = false;  // header material, never payload
            } else if (line[0] == '+') {
                hunk.lines.push_back({LineKind::Added, line.substr(1)});
            } else if (line[0] == '-') {
                hunk.lines.push_back({LineKind::Removed, line.substr(1)});
            } else if (line[0] == ' ') {
                hunk.lines.push_back({LineKind::Context, line.substr(1)});
            } else if (line[0] == '\\') {
                // "\ No newline at end of file"
            } else {
                in_hunk = false;
            }
            continue;
        }

        // Junk between sections: git extended headers, commit message text.
    }
    close_file();

    return out;
}

long count_added(const std::vector<FileDiff>& files) {
    long total = 0;
    for (const FileDiff& file : files)
        for (const Hunk& hunk : file.hunks)
            total += std::count_if(hunk.lines.begin(), hunk.lines.end(),
                                   [](const HunkLine& l) { return l.kind == LineKind::Added; });
    return total;
}

long count_removed(const std::vector<FileDiff>& files) {
    long total = 0;
    for (const FileDiff& file : files)
        for (const Hunk& hunk : file.hunks)
            total += std::count_if(hunk.lines.begin(), hunk.lines.end(),
                                   [](const HunkLine& l) { return l.kind == LineKind::Removed; });
    return total;
}

}  // namespace secpatch
