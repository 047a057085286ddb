#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "secpatch/codeview.hpp"
#include "secpatch/cotrain.hpp"
#include "secpatch/learners.hpp"
#include "secpatch/textview.hpp"

namespace secpatch {

// Everything needed to score a commit, in one versioned file. The digest
// is the CRC-32 (hex, lowercase) of the training log JSONL, or empty when
// the bundle was trained without a log.
struct ModelBundle {
    int format_version = 1;
    Vocabulary vocabulary;
    FeatureSchema schema;
    Scaler scaler;
    NaiveBayesModel nb;
    LogisticModel lr;
    CoTrainConfig config;
    std::string train_log_digest;

    friend bool operator==(const ModelBundle&, const ModelBundle&) = default;
};

inline constexpr int kModelFormatVersion = 1;

// Container layout (all integers little-endian):
//   bytes 0-3    magic "PCH1"
//   bytes 4-11   uint64 body length L
//   bytes 12..   L bytes of canonical JSON (sorted keys, no whitespace,
//                every floating-point value rendered as a decimal string
//                with 17 significant digits)
//   last 4 bytes uint32 CRC-32 (IEEE) of the body bytes
// Saves are byte-identical for equal bundles. The write goes to a
// temporary file in the target directory and is renamed into place.
void save_model(const ModelBundle& bundle, const std::string& path);

// Reads and validates a bundle: magic and length (FormatError), checksum
// (ChecksumError, also covers truncation), format version (VersionError),
// then the invariants of every contained type (FormatError). IoError when
// the file cannot be read.
ModelBundle load_model(const std::string& path);

// The canonical JSON body save_model writes, exposed for golden tests.
std::string bundle_to_json(const ModelBundle& bundle);

// CRC-32 as used by the container: IEEE polynomial (reflected 0xEDB88320),
// initial value and final XOR 0xFFFFFFFF. crc32("123456789") = 0xCBF43926.
std::uint32_t crc32(std::string_view bytes);

// Decimal rendering at 17 significant digits (printf %.17g semantics with
// trailing zeros removed), enough to reproduce the double bit-for-bit.
std::string format_double(double value);

// Inverse of format_double; throws FormatError on anything but a full,
// finite parse.
double parse_double(const std::string& text);

}  // namespace secpatch
