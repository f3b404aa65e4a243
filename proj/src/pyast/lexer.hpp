#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qpac::pyast::detail {

enum class TokenKind { Name, Int, Str, Op, Ellipsis, Unknown };

struct Token {
    TokenKind kind = TokenKind::Unknown;
    std::string text;  // decoded value for Str
    int line = 0;
};

// One logical line: physical lines joined while brackets are open.
struct LogicalLine {
    int indent = 0;
    int line = 0;
    std::vector<Token> tokens;
    std::optional<std::string> bracket_error;
};

std::vector<LogicalLine> split_logical_lines(std::string_view source);

}  // namespace qpac::pyast::detail
