#include "lexer.hpp"

#include <cctype>
#include <charconv>
#include <cstdint>

namespace qpac::pyast::detail {
namespace {

bool is_ident_start(char c) {
    const auto u = static_cast<unsigned char>(c);
    return std::isalpha(u) || c == '_' || u >= 0x80;
}

bool is_ident_char(char c) {
    const auto u = static_cast<unsigned char>(c);
    return std::isalnum(u) || c == '_' || u >= 0x80;
}

bool is_string_prefix(std::string_view id) {
    static constexpr std::string_view prefixes[] = {"r", "u", "b", "f", "rb", "br", "fr", "rf",
                                                    "R", "U", "B", "F", "Rb", "bR", "RB", "BR"};
    for (auto p : prefixes) {
        if (id == p) return true;
    }
    return false;
}

char closing_for(char open) {
    switch (open) {
        case '(': return ')';
        case '[': return ']';
        default: return '}';
    }
}

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<LogicalLine> run() {
        while (pos_ < src_.size()) {
            if (at_line_start_ && brackets_.empty()) {
                measure_indent();
                continue;
            }
            const char c = src_[pos_];
            if (c == '\n') {
                newline();
                continue;
            }
            if (c == ' ' || c == '\t' || c == '\r' || c == '\f') {
                ++pos_;
                continue;
            }
            if (c == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
                continue;
            }
            if (c == '\\' && pos_ + 1 < src_.size() &&
                (src_[pos_ + 1] == '\n' || src_[pos_ + 1] == '\r')) {
                ++pos_;
                if (src_[pos_] == '\r') ++pos_;
                if (pos_ < src_.size() && src_[pos_] == '\n') ++pos_;
                ++line_;
                continue;
            }
            lex_token();
        }
        if (!current_.tokens.empty()) {
            if (!brackets_.empty() && !current_.bracket_error) {
                current_.bracket_error = std::string("unclosed '") + brackets_.back() + "'";
            }
            flush();
        }
        return std::move(lines_);
    }

private:
    void measure_indent() {
        int col = 0;
        while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t')) {
            col = src_[pos_] == '\t' ? (col / 8 + 1) * 8 : col + 1;
            ++pos_;
        }
        pending_indent_ = col;
        at_line_start_ = false;
    }

    void newline() {
        ++pos_;
        ++line_;
        if (brackets_.empty()) {
            flush();
            at_line_start_ = true;
        }
    }

    void flush() {
        if (!current_.tokens.empty()) lines_.push_back(std::move(current_));
        current_ = LogicalLine{};
    }

    void emit(TokenKind kind, std::string text, int line) {
        if (current_.tokens.empty()) {
            current_.indent = pending_indent_;
            current_.line = line;
        }
        current_.tokens.push_back(Token{kind, std::move(text), line});
    }

    void lex_token() {
        const char c = src_[pos_];
        const int start_line = line_;
        if (is_ident_start(c)) {
            const std::size_t begin = pos_;
            while (pos_ < src_.size() && is_ident_char(src_[pos_])) ++pos_;
            std::string_view id = src_.substr(begin, pos_ - begin);
            if (pos_ < src_.size() && (src_[pos_] == '\'' || src_[pos_] == '"') &&
                is_string_prefix(id)) {
                const bool raw = id.find_first_of("rR") != std::string_view::npos;
                const bool formatted = id.find_first_of("fF") != std::string_view::npos;
                auto value = lex_string(raw);
                if (!value || formatted) {
                    emit(TokenKind::Unknown, std::string(id), start_line);
                } else {
                    emit(TokenKind::Str, std::move(*value), start_line);
                }
                return;
            }
            emit(TokenKind::Name, std::string(id), start_line);
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            lex_number();
            return;
        }
        if (c == '.' && src_.substr(pos_, 3) == "...") {
            pos_ += 3;
            emit(TokenKind::Ellipsis, "...", start_line);
            return;
        }
        if (c == '\'' || c == '"') {
            auto value = lex_string(false);
            emit(value ? TokenKind::Str : TokenKind::Unknown, value.value_or("<string>"), start_line);
            return;
        }
        if (c == '(' || c == '[' || c == '{') {
            brackets_.push_back(c);
            ++pos_;
            emit(TokenKind::Op, std::string(1, c), start_line);
            return;
        }
        if (c == ')' || c == ']' || c == '}') {
            if (brackets_.empty()) {
                if (!current_.bracket_error) current_.bracket_error = std::string("unmatched '") + c + "'";
            } else if (closing_for(brackets_.back()) != c) {
                if (!current_.bracket_error) {
                    current_.bracket_error = std::string("'") + c + "' does not match '" +
                                             brackets_.back() + "'";
                }
                brackets_.pop_back();
            } else {
                brackets_.pop_back();
            }
            ++pos_;
            emit(TokenKind::Op, std::string(1, c), start_line);
            return;
        }
        static constexpr std::string_view two_char[] = {"==", "!=", "<=", ">=", "+=", "-=", "*=",
                                                        "/=", "%=", "&=", "|=", "^=", "@=", "**",
                                                        "//", "->", "<<", ">>", ":="};
        for (auto op : two_char) {
            if (src_.substr(pos_, 2) == op) {
                pos_ += 2;
                emit(TokenKind::Op, std::string(op), start_line);
                return;
            }
        }
        static constexpr std::string_view single = ",.=+-*:/%<>&|^~@;";
        ++pos_;
        emit(single.find(c) != std::string_view::npos ? TokenKind::Op : TokenKind::Unknown,
             std::string(1, c), start_line);
    }

    void lex_number() {
        const int start_line = line_;
        const std::size_t begin = pos_;
        while (pos_ < src_.size() &&
               (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
            ++pos_;
        }
        bool integral = true;
        if (pos_ < src_.size() && src_[pos_] == '.' && src_.substr(pos_, 3) != "...") {
            const bool attr = pos_ + 1 < src_.size() && is_ident_start(src_[pos_ + 1]) &&
                              src_[pos_ + 1] != 'e' && src_[pos_ + 1] != 'E' &&
                              src_[pos_ + 1] != 'j' && src_[pos_ + 1] != 'J';
            if (!attr) {
                integral = false;
                ++pos_;
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            }
        }
        if (pos_ < src_.size() && is_ident_char(src_[pos_])) {
            integral = false;
            while (pos_ < src_.size() && (is_ident_char(src_[pos_]) || src_[pos_] == '.')) ++pos_;
        }
        std::string text;
        for (char ch : src_.substr(begin, pos_ - begin)) {
            if (ch != '_') text.push_back(ch);
        }
        if (integral) {
            std::int64_t v = 0;
            auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
            if (ec == std::errc{} && ptr == text.data() + text.size()) {
                emit(TokenKind::Int, std::move(text), start_line);
                return;
            }
        }
        emit(TokenKind::Unknown, std::move(text), start_line);
    }

    // Returns the decoded body, or nullopt for an unterminated literal.
    std::optional<std::string> lex_string(bool raw) {
        const char quote = src_[pos_];
        const bool triple = src_.substr(pos_, 3) == std::string(3, quote);
        pos_ += triple ? 3 : 1;
        std::string out;
        while (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (triple && src_.substr(pos_, 3) == std::string(3, quote)) {
                pos_ += 3;
                return out;
            }
            if (!triple && c == quote) {
                ++pos_;
                return out;
            }
            if (c == '\n') {
                if (!triple) return std::nullopt;
                ++line_;
            }
            if (c == '\\' && pos_ + 1 < src_.size()) {
                const char next = src_[pos_ + 1];
                if (next == '\n') ++line_;
                if (raw) {
                    out.push_back(c);
                    out.push_back(next);
                } else {
                    switch (next) {
                        case 'n': out.push_back('\n'); break;
                        case 't': out.push_back('\t'); break;
                        case '\n': break;
                        default: out.push_back(next); break;
                    }
                }
                pos_ += 2;
                continue;
            }
            out.push_back(c);
            ++pos_;
        }
        return std::nullopt;
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int pending_indent_ = 0;
    bool at_line_start_ = true;
    std::vector<char> brackets_;
    LogicalLine current_;
    std::vector<LogicalLine> lines_;
};

}  // namespace

std::vector<LogicalLine> split_logical_lines(std::string_view source) {
    return Lexer(source).run();
}

}  // namespace qpac::pyast::detail
