#include "secpatch/synth.hpp"

#include <array>
#include <cstdio>
#include <string>

#include "secpatch/errors.hpp"
#include "secpatch/rng.hpp"

namespace secpatch {

namespace {

// The two message pools are disjoint even after stemming, so the text view
// is fully class-determined unless the noise coin flips it. The pools are
// kept small relative to the draws per message so that even a handful of
// labeled commits covers most of a pool — each view must be learnable from
// the small labeled prefix, not merely separable in principle.
constexpr std::array<const char*, 8> kSecurityWords = {
    "overflow", "bounds",  "sanitize", "vulnerability",
    "exploit",  "injection", "overread", "unsafe"};

constexpr std::array<const char*, 8> kNeutralWords = {
    "refactor", "cleanup", "typo",   "docs",
    "rename",   "feature", "layout", "styling"};

// Added lines in security diffs call these; all appear in the default
// sensitive-token list, so the code view separates the classes on its own.
constexpr std::array<const char*, 6> kSensitiveCalls = {
    "memcpy", "strcpy", "strlen", "malloc", "bounds", "overflow"};

// Identifier pool for neutral added lines and for removed/context lines of
// both classes; none of these collide with a sensitive token.
constexpr std::array<const char*, 12> kPlainIdentifiers = {
    "counter", "total",   "items",  "widget", "render", "update",
    "cursor",  "palette", "theme",  "margin", "column", "row"};

constexpr std::array<const char*, 8> kFileNames = {"core",   "parser", "buffer", "net",
                                                   "auth",   "render", "ui",     "util"};

std::string make_message(int label, bool corrupted, Lcg64& rng) {
    const bool use_security = (label == 1) != corrupted;
    std::string message;
    for (int i = 0; i < 6; ++i) {
        const auto& pool = use_security ? kSecurityWords : kNeutralWords;
        if (i > 0)
            message += ' ';
        message += pool[rng.next_below(pool.size())];
    }
    return message;
}

std::string make_diff(int label, Lcg64& rng) {
    const std::string file = kFileNames[rng.next_below(kFileNames.size())];
    // Structural shape is held constant across classes so the code view's
    // signal is exactly the sensitive-token counts; with tiny labeled sets,
    // any structural variance would invite spurious weights.
    const long added = 3;
    const long removed = 1;
    const long start = 1 + static_cast<long>(rng.next_below(90));

    std::string diff;
    diff += "diff --git a/src/" + file + ".c b/src/" + file + ".c\n";
    diff += "--- a/src/" + file + ".c\n";
    diff += "+++ b/src/" + file + ".c\n";
    diff += "@@ -" + std::to_string(start) + "," + std::to_string(2 + removed) + " +" +
            std::to_string(start) + "," + std::to_string(2 + added) + " @@\n";

    auto plain = [&rng] { return kPlainIdentifiers[rng.next_below(kPlainIdentifiers.size())]; };
    diff += " " + std::string(plain()) + " = 0;\n";
    for (long i = 0; i < removed; ++i)
        diff += "-" + std::string(plain()) + " = " + plain() + " + 1;\n";
    for (long i = 0; i < added; ++i) {
        if (label == 1) {
            const char* call = kSensitiveCalls[rng.next_below(kSensitiveCalls.size())];
            diff += "+" + std::string(call) + "(" + plain() + ", " + plain() + ");\n";
        } else {
            diff += "+" + std::string(plain()) + " = " + plain() + "(" + plain() + ");\n";
        }
    }
    diff += " return " + std::string(plain()) + ";\n";
    return diff;
}

}  // namespace

SynthDataset make_synth_dataset(const SynthOptions& options) {
    if (options.n_labeled < 4)
        throw ConfigInvalid("synth: n_labeled must be >= 4");
    if (options.n_unlabeled < 0)
        throw ConfigInvalid("synth: n_unlabeled must be >= 0");
    if (!(options.noise >= 0.0 && options.noise < 0.5))
        throw ConfigInvalid("synth: noise must be in [0, 0.5)");

    Lcg64 rng(options.seed);
    SynthDataset dataset;
    dataset.labeled.reserve(static_cast<std::size_t>(options.n_labeled));
    dataset.unlabeled.reserve(static_cast<std::size_t>(options.n_unlabeled));

    const long total = options.n_labeled + options.n_unlabeled;
    for (long i = 0; i < total; ++i) {
        const bool is_labeled = i < options.n_labeled;
        const int label =
            is_labeled ? static_cast<int>((i + 1) % 2) : static_cast<int>(rng.next_below(2));
        const bool corrupted = rng.next_unit() < options.noise;

        Commit commit;
        char id[32];
        std::snprintf(id, sizeof id, "synth-%06ld", i);
        commit.id = id;
        commit.message = make_message(label, corrupted, rng);
        commit.diff = make_diff(label, rng);
        if (is_labeled)
            commit.label = label;
        (is_labeled ? dataset.labeled : dataset.unlabeled).push_back(std::move(commit));
    }
    return dataset;
}

}  // namespace secpatch
