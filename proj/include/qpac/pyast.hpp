#pragma once

// Python-subset AST used by the pattern detectors.
//
// The parser understands module-level assignments, expression statements,
// method calls with positional/keyword arguments, integer/string/list
// literals, subscripts, {+,-,*} over integers and `for` loops. Anything else
// is skipped with a warning so real-world files can still be analyzed.

#include <atomic>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace qpac::pyast {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Name {
    std::string id;
};

struct IntConst {
    std::int64_t value = 0;
};

struct StrConst {
    std::string value;
};

struct ListLit {
    std::vector<ExprPtr> elements;
};

struct Keyword {
    std::string name;
    ExprPtr value;
};

struct Call {
    ExprPtr func;  // Name or Attribute
    std::vector<ExprPtr> args;
    std::vector<Keyword> keywords;
};

struct Attribute {
    ExprPtr base;
    std::string attr;
};

enum class BinOpKind { Add, Sub, Mult };

struct BinOp {
    BinOpKind op = BinOpKind::Add;
    ExprPtr left;
    ExprPtr right;
};

struct Subscript {
    ExprPtr base;
    ExprPtr index;
};

struct Expr {
    using Node = std::variant<Name, IntConst, StrConst, ListLit, Call, Attribute, BinOp, Subscript>;
    Node node;
    int line = 0;

    template <typename T>
    [[nodiscard]] const T* as() const noexcept {
        return std::get_if<T>(&node);
    }
};

// Node constructors. `line` is the 1-based source line of the first token.
ExprPtr make_name(std::string id, int line = 0);
ExprPtr make_int(std::int64_t value, int line = 0);
ExprPtr make_str(std::string value, int line = 0);
ExprPtr make_list(std::vector<ExprPtr> elements, int line = 0);
ExprPtr make_call(ExprPtr func, std::vector<ExprPtr> args, std::vector<Keyword> keywords = {},
                  int line = 0);
ExprPtr make_attribute(ExprPtr base, std::string attr, int line = 0);
ExprPtr make_binop(BinOpKind op, ExprPtr left, ExprPtr right, int line = 0);
ExprPtr make_subscript(ExprPtr base, ExprPtr index, int line = 0);

struct Stmt;

struct Assign {
    std::vector<Name> targets;  // never empty
    ExprPtr value;
};

struct ExprStmt {
    ExprPtr value;
};

struct For {
    Name loop_var;
    ExprPtr iterable;
    std::vector<Stmt> body;  // never empty
};

// `pass` and a bare `...` line.
struct Pass {};

struct Stmt {
    using Node = std::variant<Assign, ExprStmt, For, Pass>;
    Node node;
    int line = 0;

    template <typename T>
    [[nodiscard]] const T* as() const noexcept {
        return std::get_if<T>(&node);
    }
};

struct Warning {
    int line = 0;
    std::string message;
};

struct ModuleAst {
    std::vector<Stmt> body;
    std::vector<Warning> warnings;
};

class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& what);
    [[nodiscard]] int line() const noexcept { return line_; }

private:
    int line_;
};

// Parses a whole source file. Throws ParseError only for bracket imbalance on
// a statement the parser otherwise recognizes (or EOF inside brackets).
ModuleAst parse(std::string_view source);

// Parses a single expression (e.g. the argument text captured by a regex).
// Returns nullopt when the text is not a complete subset expression.
std::optional<ExprPtr> parse_expression(std::string_view text, int line = 0);

// Number of parse() calls made by this process. Used to check that a pair is
// parsed once per file regardless of how many detectors run.
std::uint64_t parse_invocations() noexcept;

// Reduces every integer-only BinOp to an IntConst. Idempotent; subtrees that
// contain names are rebuilt only where a child changed.
ExprPtr fold_constants(const ExprPtr& e);

// Integer value of an expression after folding, if it is constant.
std::optional<std::int64_t> constant_value(const ExprPtr& e);

// Structural equality ignoring line numbers.
bool equivalent(const Expr& a, const Expr& b);
bool equivalent(const ExprPtr& a, const ExprPtr& b);

// Indented rendering in the style of Python's ast.dump(indent=2).
std::string dump(const ModuleAst& m);
std::string dump(const Expr& e);

// Renders the AST back to subset source. parse(unparse(m)) reproduces m up to
// line numbers.
std::string unparse(const ModuleAst& m);
std::string unparse(const Expr& e);

// "obj.method" for Call(Attribute(Name obj, method)); empty otherwise.
struct MethodCall {
    std::string receiver;
    std::string method;
    const Call* call = nullptr;
};
std::optional<MethodCall> as_method_call(const Expr& e);

}  // namespace qpac::pyast
