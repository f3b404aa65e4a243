#include "qpac/pyast.hpp"

#include <algorithm>
#include <array>
#include <span>

#include "lexer.hpp"

namespace qpac::pyast {
namespace {

using detail::LogicalLine;
using detail::Token;
using detail::TokenKind;

std::atomic<std::uint64_t> g_parse_invocations{0};

// Keywords that start statements the subset does not model.
constexpr std::array<std::string_view, 24> kUnmodeledHeads = {
    "import", "from",   "def",    "class",  "if",    "elif",     "else",   "while",
    "with",   "try",    "except", "finally", "return", "raise",   "assert", "del",
    "global", "nonlocal", "async", "await",  "yield", "break",    "continue", "lambda"};

// Keywords that cannot appear inside a subset expression.
constexpr std::array<std::string_view, 12> kExprKeywords = {
    "if", "else", "lambda", "not", "and", "or", "in", "is", "for", "yield", "await", "pass"};

bool contains(std::span<const std::string_view> set, std::string_view s) {
    return std::find(set.begin(), set.end(), s) != set.end();
}

// Thrown inside the expression parser when a construct falls outside the subset.
struct Reject {
    std::string reason;
};

class ExprParser {
public:
    explicit ExprParser(std::span<const Token> tokens) : toks_(tokens) {}

    [[nodiscard]] bool at_end() const { return pos_ >= toks_.size(); }
    [[nodiscard]] std::size_t position() const { return pos_; }
    [[nodiscard]] const std::vector<Warning>& warnings() const { return warnings_; }

    ExprPtr expression() {
        ExprPtr left = term();
        while (peek_op("+") || peek_op("-")) {
            const Token& op = toks_[pos_++];
            ExprPtr right = term();
            left = make_binop(op.text == "+" ? BinOpKind::Add : BinOpKind::Sub, left, right,
                              left->line);
        }
        return left;
    }

    void expect_end() {
        if (!at_end()) throw Reject{"unexpected '" + toks_[pos_].text + "'"};
    }

private:
    ExprPtr term() {
        ExprPtr left = unary();
        while (peek_op("*")) {
            ++pos_;
            ExprPtr right = unary();
            left = make_binop(BinOpKind::Mult, left, right, left->line);
        }
        return left;
    }

    ExprPtr unary() {
        if (peek_op("-")) {
            const int line = toks_[pos_++].line;
            ExprPtr operand = unary();
            if (const auto* k = operand->as<IntConst>()) return make_int(-k->value, line);
            return make_binop(BinOpKind::Sub, make_int(0, line), operand, line);
        }
        if (peek_op("+")) {
            ++pos_;
            return unary();
        }
        return postfix();
    }

    ExprPtr postfix() {
        ExprPtr base = atom();
        while (!at_end()) {
            if (peek_op("(")) {
                if (!base->as<Name>() && !base->as<Attribute>()) {
                    throw Reject{"call target is neither a name nor an attribute"};
                }
                base = call(base);
            } else if (peek_op(".")) {
                // `[..]. [..]` inside call arguments is handled by call().
                if (base->as<ListLit>() && pos_ + 1 < toks_.size() && is_op(toks_[pos_ + 1], "[")) {
                    break;
                }
                ++pos_;
                const Token& attr = next("attribute name");
                if (attr.kind != TokenKind::Name) throw Reject{"expected attribute name"};
                base = make_attribute(base, attr.text, base->line);
            } else if (peek_op("[")) {
                ++pos_;
                ExprPtr index = expression();
                expect_op("]");
                base = make_subscript(base, index, base->line);
            } else {
                break;
            }
        }
        return base;
    }

    ExprPtr call(const ExprPtr& func) {
        expect_op("(");
        std::vector<ExprPtr> args;
        std::vector<Keyword> keywords;
        while (!peek_op(")")) {
            if (pos_ + 1 < toks_.size() && toks_[pos_].kind == TokenKind::Name &&
                is_op(toks_[pos_ + 1], "=")) {
                std::string name = toks_[pos_].text;
                pos_ += 2;
                keywords.push_back(Keyword{std::move(name), expression()});
            } else {
                if (!keywords.empty()) throw Reject{"positional argument after keyword argument"};
                args.push_back(expression());
            }
            if (peek_op(",")) {
                ++pos_;
                continue;
            }
            if (peek_op(".") && !args.empty() && args.back()->as<ListLit>() &&
                keywords.empty() && pos_ + 1 < toks_.size() && is_op(toks_[pos_ + 1], "[")) {
                warnings_.push_back(
                    {toks_[pos_].line, "'.' between list arguments read as ',' separator"});
                ++pos_;
                continue;
            }
            if (!peek_op(")")) {
                throw Reject{at_end() ? "unterminated call" : "unexpected '" + toks_[pos_].text + "'"};
            }
        }
        ++pos_;
        return make_call(func, std::move(args), std::move(keywords), func->line);
    }

    ExprPtr atom() {
        const Token& t = next("expression");
        switch (t.kind) {
            case TokenKind::Name:
                if (contains(kExprKeywords, t.text)) throw Reject{"keyword '" + t.text + "'"};
                return make_name(t.text, t.line);
            case TokenKind::Int:
                return make_int(std::stoll(t.text), t.line);
            case TokenKind::Str: {
                std::string value = t.text;
                while (!at_end() && toks_[pos_].kind == TokenKind::Str) value += toks_[pos_++].text;
                return make_str(std::move(value), t.line);
            }
            case TokenKind::Op:
                if (t.text == "[") {
                    std::vector<ExprPtr> elements;
                    while (!peek_op("]")) {
                        elements.push_back(expression());
                        if (peek_op(",")) {
                            ++pos_;
                        } else if (!peek_op("]")) {
                            throw Reject{"malformed list literal"};
                        }
                    }
                    ++pos_;
                    return make_list(std::move(elements), t.line);
                }
                if (t.text == "(") {
                    ExprPtr inner = expression();
                    expect_op(")");
                    return inner;
                }
                throw Reject{"unexpected '" + t.text + "'"};
            case TokenKind::Ellipsis:
                throw Reject{"ellipsis inside expression"};
            case TokenKind::Unknown:
                throw Reject{"unsupported token '" + t.text + "'"};
        }
        throw Reject{"unexpected token"};
    }

    static bool is_op(const Token& t, std::string_view op) {
        return t.kind == TokenKind::Op && t.text == op;
    }

    bool peek_op(std::string_view op) const { return !at_end() && is_op(toks_[pos_], op); }

    void expect_op(std::string_view op) {
        if (!peek_op(op)) throw Reject{"expected '" + std::string(op) + "'"};
        ++pos_;
    }

    const Token& next(std::string_view what) {
        if (at_end()) throw Reject{"expected " + std::string(what)};
        return toks_[pos_++];
    }

    std::span<const Token> toks_;
    std::size_t pos_ = 0;
    std::vector<Warning> warnings_;
};

class ModuleParser {
public:
    explicit ModuleParser(std::vector<LogicalLine> lines) : lines_(std::move(lines)) {}

    ModuleAst run() {
        ModuleAst m;
        while (pos_ < lines_.size()) block(0, m.body);
        m.warnings = std::move(warnings_);
        std::stable_sort(m.warnings.begin(), m.warnings.end(),
                         [](const Warning& a, const Warning& b) { return a.line < b.line; });
        return m;
    }

private:
    // Parses statements with indent >= `indent` into `out`.
    void block(int indent, std::vector<Stmt>& out) {
        while (pos_ < lines_.size() && lines_[pos_].indent >= indent) {
            const LogicalLine& ll = lines_[pos_];
            if (ll.indent > indent && !out.empty()) {
                warn(ll.line, "unexpected indentation");
            }
            statement(out);
        }
    }

    void statement(std::vector<Stmt>& out) {
        const LogicalLine& ll = lines_[pos_];
        const Token& head = ll.tokens.front();
        if (head.kind == TokenKind::Name && contains(kUnmodeledHeads, head.text)) {
            skip_unmodeled(head.text);
            return;
        }
        if (head.kind == TokenKind::Name && head.text == "for") {
            for_loop(out);
            return;
        }
        ++pos_;
        if (ll.bracket_error) throw ParseError(ll.line, *ll.bracket_error);
        if (auto s = simple_statement(ll.tokens, ll.line)) out.push_back(std::move(*s));
    }

    // Skips a statement whose head keyword is outside the subset, together
    // with any indented block it owns.
    void skip_unmodeled(const std::string& keyword) {
        const LogicalLine& ll = lines_[pos_];
        const int header_indent = ll.indent;
        const bool compound = ll.tokens.back().kind == TokenKind::Op && ll.tokens.back().text == ":";
        warn(ll.line, "skipped unmodeled '" + keyword + "' statement");
        ++pos_;
        if (compound) {
            while (pos_ < lines_.size() && lines_[pos_].indent > header_indent) ++pos_;
        }
    }

    void for_loop(std::vector<Stmt>& out) {
        const LogicalLine& ll = lines_[pos_];
        if (ll.bracket_error) throw ParseError(ll.line, *ll.bracket_error);
        const auto& t = ll.tokens;
        auto colon = std::find_if(t.begin(), t.end(), [](const Token& tok) {
            return tok.kind == TokenKind::Op && tok.text == ":";
        });
        const bool shaped = t.size() >= 5 && t[1].kind == TokenKind::Name && t[2].kind == TokenKind::Name &&
                            t[2].text == "in" && colon != t.end() && colon - t.begin() > 3;
        std::optional<ExprPtr> iterable;
        if (shaped) {
            std::span<const Token> iter_tokens(t.begin() + 3, colon);
            try {
                ExprParser p(iter_tokens);
                iterable = p.expression();
                p.expect_end();
            } catch (const Reject&) {
                iterable.reset();
            }
        }
        const int header_indent = ll.indent;
        const int header_line = ll.line;
        ++pos_;
        if (!iterable) {
            warn(header_line, "skipped unsupported 'for' statement");
            while (pos_ < lines_.size() && lines_[pos_].indent > header_indent) ++pos_;
            return;
        }

        For loop{Name{t[1].text}, *iterable, {}};
        if (colon + 1 != t.end()) {
            std::vector<Token> inline_body(colon + 1, t.end());
            if (auto s = simple_statement(inline_body, header_line)) loop.body.push_back(std::move(*s));
        } else {
            if (pos_ >= lines_.size() || lines_[pos_].indent <= header_indent) {
                throw ParseError(header_line, "'for' without an indented body");
            }
            block(lines_[pos_].indent, loop.body);
        }
        if (loop.body.empty()) {
            warn(header_line, "'for' body has no modeled statements");
            return;
        }
        out.push_back(Stmt{std::move(loop), header_line});
    }

    std::optional<Stmt> simple_statement(std::span<const Token> t, int line) {
        if (t.size() == 1 && t[0].kind == TokenKind::Ellipsis) return Stmt{Pass{}, line};
        if (t.size() == 1 && t[0].kind == TokenKind::Name && t[0].text == "pass") return Stmt{Pass{}, line};
        if (t.front().kind == TokenKind::Name && contains(kUnmodeledHeads, t.front().text)) {
            warn(line, "skipped unmodeled '" + t.front().text + "' statement");
            return std::nullopt;
        }
        std::vector<Name> targets;
        std::size_t start = 0;
        while (start + 1 < t.size() && t[start].kind == TokenKind::Name &&
               t[start + 1].kind == TokenKind::Op && t[start + 1].text == "=") {
            targets.push_back(Name{t[start].text});
            start += 2;
        }
        try {
            ExprParser p(t.subspan(start));
            ExprPtr value = p.expression();
            p.expect_end();
            warnings_.insert(warnings_.end(), p.warnings().begin(), p.warnings().end());
            if (targets.empty()) return Stmt{ExprStmt{value}, line};
            return Stmt{Assign{std::move(targets), value}, line};
        } catch (const Reject& r) {
            warn(line, "skipped unrecognized statement: " + r.reason);
            return std::nullopt;
        }
    }

    void warn(int line, std::string msg) { warnings_.push_back({line, std::move(msg)}); }

    std::vector<LogicalLine> lines_;
    std::size_t pos_ = 0;
    std::vector<Warning> warnings_;
};

}  // namespace

ParseError::ParseError(int line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

ModuleAst parse(std::string_view source) {
    g_parse_invocations.fetch_add(1, std::memory_order_relaxed);
    return ModuleParser(detail::split_logical_lines(source)).run();
}

std::optional<ExprPtr> parse_expression(std::string_view text, int line) {
    auto lines = detail::split_logical_lines(text);
    if (lines.size() != 1 || lines.front().bracket_error) return std::nullopt;
    auto& tokens = lines.front().tokens;
    for (auto& tok : tokens) tok.line += line - 1;
    try {
        ExprParser p(tokens);
        ExprPtr e = p.expression();
        p.expect_end();
        return e;
    } catch (const Reject&) {
        return std::nullopt;
    }
}

std::uint64_t parse_invocations() noexcept {
    return g_parse_invocations.load(std::memory_order_relaxed);
}

}  // namespace qpac::pyast
