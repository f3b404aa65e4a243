#include <sstream>

#include "qpac/pyast.hpp"

namespace qpac::pyast {

ExprPtr make_name(std::string id, int line) {
    return std::make_shared<const Expr>(Expr{Name{std::move(id)}, line});
}
ExprPtr make_int(std::int64_t value, int line) {
    return std::make_shared<const Expr>(Expr{IntConst{value}, line});
}
ExprPtr make_str(std::string value, int line) {
    return std::make_shared<const Expr>(Expr{StrConst{std::move(value)}, line});
}
ExprPtr make_list(std::vector<ExprPtr> elements, int line) {
    return std::make_shared<const Expr>(Expr{ListLit{std::move(elements)}, line});
}
ExprPtr make_call(ExprPtr func, std::vector<ExprPtr> args, std::vector<Keyword> keywords, int line) {
    return std::make_shared<const Expr>(
        Expr{Call{std::move(func), std::move(args), std::move(keywords)}, line});
}
ExprPtr make_attribute(ExprPtr base, std::string attr, int line) {
    return std::make_shared<const Expr>(Expr{Attribute{std::move(base), std::move(attr)}, line});
}
ExprPtr make_binop(BinOpKind op, ExprPtr left, ExprPtr right, int line) {
    return std::make_shared<const Expr>(Expr{BinOp{op, std::move(left), std::move(right)}, line});
}
ExprPtr make_subscript(ExprPtr base, ExprPtr index, int line) {
    return std::make_shared<const Expr>(Expr{Subscript{std::move(base), std::move(index)}, line});
}

namespace {

std::optional<std::int64_t> apply(BinOpKind op, std::int64_t a, std::int64_t b) {
    std::int64_t r = 0;
    bool overflow = false;
    switch (op) {
        case BinOpKind::Add: overflow = __builtin_add_overflow(a, b, &r); break;
        case BinOpKind::Sub: overflow = __builtin_sub_overflow(a, b, &r); break;
        case BinOpKind::Mult: overflow = __builtin_mul_overflow(a, b, &r); break;
    }
    if (overflow) return std::nullopt;
    return r;
}

// Folds each element; `changed` is set when any element was replaced.
std::vector<ExprPtr> fold_all(const std::vector<ExprPtr>& in, bool& changed) {
    std::vector<ExprPtr> out;
    out.reserve(in.size());
    for (const auto& e : in) {
        out.push_back(fold_constants(e));
        changed = changed || out.back() != e;
    }
    return out;
}

}  // namespace

ExprPtr fold_constants(const ExprPtr& e) {
    if (!e) return e;
    const int line = e->line;
    if (const auto* b = e->as<BinOp>()) {
        ExprPtr l = fold_constants(b->left);
        ExprPtr r = fold_constants(b->right);
        const auto* lk = l->as<IntConst>();
        const auto* rk = r->as<IntConst>();
        if (lk && rk) {
            if (auto v = apply(b->op, lk->value, rk->value)) return make_int(*v, line);
        }
        if (l == b->left && r == b->right) return e;
        return make_binop(b->op, l, r, line);
    }
    if (const auto* c = e->as<Call>()) {
        bool changed = false;
        ExprPtr func = fold_constants(c->func);
        changed = func != c->func;
        auto args = fold_all(c->args, changed);
        std::vector<Keyword> kws;
        for (const auto& kw : c->keywords) {
            kws.push_back({kw.name, fold_constants(kw.value)});
            changed = changed || kws.back().value != kw.value;
        }
        return changed ? make_call(func, std::move(args), std::move(kws), line) : e;
    }
    if (const auto* l = e->as<ListLit>()) {
        bool changed = false;
        auto elements = fold_all(l->elements, changed);
        return changed ? make_list(std::move(elements), line) : e;
    }
    if (const auto* a = e->as<Attribute>()) {
        ExprPtr base = fold_constants(a->base);
        return base != a->base ? make_attribute(base, a->attr, line) : e;
    }
    if (const auto* s = e->as<Subscript>()) {
        ExprPtr base = fold_constants(s->base);
        ExprPtr index = fold_constants(s->index);
        return base != s->base || index != s->index ? make_subscript(base, index, line) : e;
    }
    return e;
}

std::optional<std::int64_t> constant_value(const ExprPtr& e) {
    if (!e) return std::nullopt;
    ExprPtr folded = fold_constants(e);
    if (const auto* k = folded->as<IntConst>()) return k->value;
    return std::nullopt;
}

namespace {

bool equivalent_all(const std::vector<ExprPtr>& a, const std::vector<ExprPtr>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!equivalent(a[i], b[i])) return false;
    }
    return true;
}

}  // namespace

bool equivalent(const ExprPtr& a, const ExprPtr& b) {
    if (!a || !b) return a == b;
    return equivalent(*a, *b);
}

bool equivalent(const Expr& a, const Expr& b) {
    if (a.node.index() != b.node.index()) return false;
    return std::visit(
        [&b](const auto& x) -> bool {
            using T = std::decay_t<decltype(x)>;
            const T& y = std::get<T>(b.node);
            if constexpr (std::is_same_v<T, Name>) {
                return x.id == y.id;
            } else if constexpr (std::is_same_v<T, IntConst>) {
                return x.value == y.value;
            } else if constexpr (std::is_same_v<T, StrConst>) {
                return x.value == y.value;
            } else if constexpr (std::is_same_v<T, ListLit>) {
                return equivalent_all(x.elements, y.elements);
            } else if constexpr (std::is_same_v<T, Call>) {
                if (!equivalent(x.func, y.func) || !equivalent_all(x.args, y.args)) return false;
                if (x.keywords.size() != y.keywords.size()) return false;
                for (std::size_t i = 0; i < x.keywords.size(); ++i) {
                    if (x.keywords[i].name != y.keywords[i].name ||
                        !equivalent(x.keywords[i].value, y.keywords[i].value)) {
                        return false;
                    }
                }
                return true;
            } else if constexpr (std::is_same_v<T, Attribute>) {
                return x.attr == y.attr && equivalent(x.base, y.base);
            } else if constexpr (std::is_same_v<T, BinOp>) {
                return x.op == y.op && equivalent(x.left, y.left) && equivalent(x.right, y.right);
            } else {
                return equivalent(x.base, y.base) && equivalent(x.index, y.index);
            }
        },
        a.node);
}

std::optional<MethodCall> as_method_call(const Expr& e) {
    const auto* call = e.as<Call>();
    if (!call) return std::nullopt;
    const auto* attr = call->func->as<Attribute>();
    if (!attr) return std::nullopt;
    const auto* recv = attr->base->as<Name>();
    if (!recv) return std::nullopt;
    return MethodCall{recv->id, attr->attr, call};
}

// ---------------------------------------------------------------------------
// dump: mirrors Python's ast.dump(tree, indent=2) layout.

namespace {

std::string py_repr(const std::string& s) {
    const bool use_double = s.find('\'') != std::string::npos && s.find('"') == std::string::npos;
    const char q = use_double ? '"' : '\'';
    std::string out(1, q);
    for (char c : s) {
        switch (c) {
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default:
                if (c == q) out.push_back('\\');
                out.push_back(c);
        }
    }
    out.push_back(q);
    return out;
}

struct Formatted {
    std::string text;
    bool simple;
};

class Dumper {
public:
    Formatted node(std::string_view cls, std::vector<std::pair<std::string_view, Formatted>> fields,
                   int level) {
        bool all_simple = true;
        std::vector<std::string> args;
        for (auto& [name, value] : fields) {
            all_simple = all_simple && value.simple;
            args.push_back(std::string(name) + "=" + value.text);
        }
        if (all_simple && args.size() <= 3) {
            return {std::string(cls) + "(" + join(args, ", ") + ")", args.empty()};
        }
        return {std::string(cls) + "(" + prefix(level) + join(args, sep(level)) + ")", false};
    }

    template <typename Items, typename F>
    Formatted list(const Items& items, int level, F&& format_item) {
        ++level;
        if (items.empty()) return {"[]", true};
        std::vector<std::string> parts;
        for (const auto& item : items) parts.push_back(format_item(item, level).text);
        return {"[" + prefix(level) + join(parts, sep(level)) + "]", false};
    }

    Formatted expr(const ExprPtr& e, int level) {
        ++level;
        return std::visit(
            [&](const auto& x) -> Formatted {
                using T = std::decay_t<decltype(x)>;
                if constexpr (std::is_same_v<T, Name>) {
                    return node("Name", {{"id", {py_repr(x.id), true}}, load()}, level);
                } else if constexpr (std::is_same_v<T, IntConst>) {
                    return node("Constant", {{"value", {std::to_string(x.value), true}}}, level);
                } else if constexpr (std::is_same_v<T, StrConst>) {
                    return node("Constant", {{"value", {py_repr(x.value), true}}}, level);
                } else if constexpr (std::is_same_v<T, ListLit>) {
                    return node("List", {{"elts", list(x.elements, level, expr_fn())}, load()}, level);
                } else if constexpr (std::is_same_v<T, Call>) {
                    auto kw = [this](const Keyword& k, int lvl) {
                        ++lvl;
                        return node("keyword",
                                    {{"arg", {py_repr(k.name), true}}, {"value", expr(k.value, lvl)}},
                                    lvl);
                    };
                    return node("Call",
                                {{"func", expr(x.func, level)},
                                 {"args", list(x.args, level, expr_fn())},
                                 {"keywords", list(x.keywords, level, kw)}},
                                level);
                } else if constexpr (std::is_same_v<T, Attribute>) {
                    return node("Attribute",
                                {{"value", expr(x.base, level)}, {"attr", {py_repr(x.attr), true}}, load()},
                                level);
                } else if constexpr (std::is_same_v<T, BinOp>) {
                    const char* op = x.op == BinOpKind::Add   ? "Add()"
                                     : x.op == BinOpKind::Sub ? "Sub()"
                                                              : "Mult()";
                    return node("BinOp",
                                {{"left", expr(x.left, level)},
                                 {"op", {op, true}},
                                 {"right", expr(x.right, level)}},
                                level);
                } else {
                    return node("Subscript",
                                {{"value", expr(x.base, level)}, {"slice", expr(x.index, level)}, load()},
                                level);
                }
            },
            e->node);
    }

    Formatted stmt(const Stmt& s, int level) {
        ++level;
        return std::visit(
            [&](const auto& x) -> Formatted {
                using T = std::decay_t<decltype(x)>;
                if constexpr (std::is_same_v<T, Assign>) {
                    auto target = [this](const Name& n, int lvl) {
                        return node("Name", {{"id", {py_repr(n.id), true}}, store()}, lvl + 1);
                    };
                    return node("Assign",
                                {{"targets", list(x.targets, level, target)},
                                 {"value", expr(x.value, level)}},
                                level);
                } else if constexpr (std::is_same_v<T, ExprStmt>) {
                    return node("Expr", {{"value", expr(x.value, level)}}, level);
                } else if constexpr (std::is_same_v<T, For>) {
                    return node("For",
                                {{"target", node("Name", {{"id", {py_repr(x.loop_var.id), true}}, store()},
                                                 level + 1)},
                                 {"iter", expr(x.iterable, level)},
                                 {"body", list(x.body, level, stmt_fn())},
                                 {"orelse", {"[]", true}}},
                                level);
                } else {
                    return Formatted{"Pass()", true};
                }
            },
            s.node);
    }

private:
    using Field = std::pair<std::string_view, Formatted>;
    static Field load() { return {"ctx", {"Load()", true}}; }
    static Field store() { return {"ctx", {"Store()", true}}; }
    auto expr_fn() {
        return [this](const ExprPtr& e, int lvl) { return expr(e, lvl); };
    }
    auto stmt_fn() {
        return [this](const Stmt& s, int lvl) { return stmt(s, lvl); };
    }
    static std::string prefix(int level) { return "\n" + std::string(2 * level, ' '); }
    static std::string sep(int level) { return ",\n" + std::string(2 * level, ' '); }
    static std::string join(const std::vector<std::string>& parts, const std::string& s) {
        std::string out;
        for (std::size_t i = 0; i < parts.size(); ++i) {
            if (i) out += s;
            out += parts[i];
        }
        return out;
    }
};

}  // namespace

std::string dump(const ModuleAst& m) {
    Dumper d;
    const int level = 1;
    auto body = d.list(m.body, level, [&d](const Stmt& s, int lvl) { return d.stmt(s, lvl); });
    return d.node("Module", {{"body", body}, {"type_ignores", {"[]", true}}}, level).text;
}

std::string dump(const Expr& e) {
    Dumper d;
    return d.expr(std::make_shared<const Expr>(e), 0).text;
}

// ---------------------------------------------------------------------------
// unparse

namespace {

void unparse_expr(const Expr& e, std::ostream& os);

void unparse_operand(const ExprPtr& e, std::ostream& os) {
    const auto* k = e->as<IntConst>();
    const bool wrap = e->as<BinOp>() || (k && k->value < 0);
    if (wrap) os << '(';
    unparse_expr(*e, os);
    if (wrap) os << ')';
}

void unparse_list(const std::vector<ExprPtr>& items, std::ostream& os) {
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) os << ", ";
        unparse_expr(*items[i], os);
    }
}

void unparse_expr(const Expr& e, std::ostream& os) {
    std::visit(
        [&os](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, Name>) {
                os << x.id;
            } else if constexpr (std::is_same_v<T, IntConst>) {
                os << x.value;
            } else if constexpr (std::is_same_v<T, StrConst>) {
                os << py_repr(x.value);
            } else if constexpr (std::is_same_v<T, ListLit>) {
                os << '[';
                unparse_list(x.elements, os);
                os << ']';
            } else if constexpr (std::is_same_v<T, Call>) {
                unparse_expr(*x.func, os);
                os << '(';
                unparse_list(x.args, os);
                for (std::size_t i = 0; i < x.keywords.size(); ++i) {
                    if (i || !x.args.empty()) os << ", ";
                    os << x.keywords[i].name << '=';
                    unparse_expr(*x.keywords[i].value, os);
                }
                os << ')';
            } else if constexpr (std::is_same_v<T, Attribute>) {
                unparse_operand(x.base, os);
                os << '.' << x.attr;
            } else if constexpr (std::is_same_v<T, BinOp>) {
                unparse_operand(x.left, os);
                os << (x.op == BinOpKind::Add ? " + " : x.op == BinOpKind::Sub ? " - " : " * ");
                unparse_operand(x.right, os);
            } else {
                unparse_operand(x.base, os);
                os << '[';
                unparse_expr(*x.index, os);
                os << ']';
            }
        },
        e.node);
}

void unparse_stmt(const Stmt& s, int depth, std::ostream& os) {
    const std::string indent(4 * depth, ' ');
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, Assign>) {
                os << indent;
                for (const auto& t : x.targets) os << t.id << " = ";
                unparse_expr(*x.value, os);
                os << '\n';
            } else if constexpr (std::is_same_v<T, ExprStmt>) {
                os << indent;
                unparse_expr(*x.value, os);
                os << '\n';
            } else if constexpr (std::is_same_v<T, For>) {
                os << indent << "for " << x.loop_var.id << " in ";
                unparse_expr(*x.iterable, os);
                os << ":\n";
                for (const auto& inner : x.body) unparse_stmt(inner, depth + 1, os);
            } else {
                os << indent << "pass\n";
            }
        },
        s.node);
}

}  // namespace

std::string unparse(const ModuleAst& m) {
    std::ostringstream os;
    for (const auto& s : m.body) unparse_stmt(s, 0, os);
    return os.str();
}

std::string unparse(const Expr& e) {
    std::ostringstream os;
    unparse_expr(e, os);
    return os.str();
}

}  // namespace qpac::pyast
