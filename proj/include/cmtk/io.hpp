#pragma once

// Sequence input: CSV (one value per line) or a JSON array of numbers / "p/q" strings.

#include "cmtk/seqcore.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace cmtk {

struct SequenceToken {
    std::string text;
    int line = 0;  // 1-based source line, 0 when unknown (JSON)
};

using AnySequence = std::variant<Sequence<Rational>, Sequence<double>>;

/// Splits CSV content into tokens. Blank lines and lines starting with '#' are skipped;
/// only the first comma-separated field of a line is used.
std::vector<SequenceToken> tokenize_csv(const std::string& content);

/// Collects the elements of a top-level JSON array, keeping the literal text of numbers.
std::vector<SequenceToken> tokenize_json(const std::string& content);

/// Builds a sequence. Without a forced mode the result is exact when every token parses as a
/// rational and binary64 otherwise.
AnySequence parse_sequence(const std::vector<SequenceToken>& tokens, std::optional<Mode> mode = std::nullopt,
                           double step = 1.0);

/// Reads a file, choosing JSON when the first non-blank character is '['.
AnySequence read_sequence_file(const std::string& path, std::optional<Mode> mode = std::nullopt,
                               double step = 1.0);

}  // namespace cmtk
