#include "input.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>

namespace congestion::io {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

std::vector<double> parse_numbers(std::string_view text, std::size_t line)
{
    std::vector<double> out;
    std::size_t pos = 0;
    while (true) {
        while (pos < text.size() && is_space(text[pos]))
            ++pos;
        if (pos == text.size())
            break;
        std::size_t end = pos;
        while (end < text.size() && !is_space(text[end]))
            ++end;
        const std::string_view token = text.substr(pos, end - pos);
        double v = 0.0;
        const char* first = token.data();
        if (!token.empty() && token.front() == '+')
            ++first;
        const auto [ptr, ec] = std::from_chars(first, token.data() + token.size(), v);
        if (ec != std::errc{} || ptr != token.data() + token.size() || !std::isfinite(v))
            throw ParseError(line, "not a finite number: '" + std::string(token) + "'");
        out.push_back(v);
        pos = end;
    }
    return out;
}

} // namespace

ParseError::ParseError(std::size_t line_number, const std::string& what)
    : std::runtime_error("line " + std::to_string(line_number) + ": " + what), line(line_number)
{
}

ParsedInput parse_input(std::istream& in, InputMode mode)
{
    ParsedInput result;
    const std::size_t arity = mode == InputMode::segments ? 4 : 2;
    std::optional<Point> previous;
    std::string text;
    std::size_t line = 0;

    const auto add = [&](const Segment& s) {
        if (s.length() > 0.0)
            result.segments.push_back(s);
        else
            ++result.dropped_zero_length;
    };

    while (std::getline(in, text)) {
        ++line;
        if (const auto hash = text.find('#'); hash != std::string::npos)
            text.erase(hash);
        const auto values = parse_numbers(text, line);
        if (values.empty())
            continue;
        if (values.size() != arity)
            throw ParseError(line, "expected " + std::to_string(arity) + " numbers, got " +
                                       std::to_string(values.size()));
        if (mode == InputMode::segments) {
            add({{values[0], values[1]}, {values[2], values[3]}});
        } else {
            const Point p{values[0], values[1]};
            if (previous)
                add({*previous, p});
            previous = p;
        }
    }
    if (result.dropped_zero_length > 0)
        result.warnings.push_back("dropped " + std::to_string(result.dropped_zero_length) +
                                  " zero-length segment(s)");
    if (result.segments.empty())
        result.warnings.push_back("input contains no segments");
    return result;
}

ParsedInput parse_input(const std::filesystem::path& path, InputMode mode)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path.string());
    return parse_input(in, mode);
}

} // namespace congestion::io
