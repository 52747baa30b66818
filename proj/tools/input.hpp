#pragma once

#include <filesystem>
#include <istream>
#include <stdexcept>
#include <string>
#include <vector>

#include "congestion/geometry.hpp"

namespace congestion::io {

enum class InputMode { segments, polyline };

struct ParseError : std::runtime_error {
    ParseError(std::size_t line, const std::string& what);
    std::size_t line;
};

struct ParsedInput {
    std::vector<Segment> segments;
    std::size_t dropped_zero_length = 0;
    std::vector<std::string> warnings;

    bool empty() const { return segments.empty(); }
};

/// Segments mode: "x1 y1 x2 y2" per line. Polyline mode: "x y" per line, consecutive
/// vertices joined. '#' starts a comment; blank lines are skipped.
ParsedInput parse_input(std::istream& in, InputMode mode);
ParsedInput parse_input(const std::filesystem::path& path, InputMode mode);

} // namespace congestion::io
