#include "qpac/semantics.hpp"

#include <regex>

namespace qpac::semantics {

using pyast::Assign;
using pyast::Call;
using pyast::ExprPtr;
using pyast::ExprStmt;
using pyast::For;
using pyast::ModuleAst;
using pyast::Stmt;

std::string_view to_string(MeasureVariant v) noexcept {
    switch (v) {
        case MeasureVariant::Measure: return "measure";
        case MeasureVariant::MeasureAll: return "measure_all";
        case MeasureVariant::MeasureInactive: return "measure_inactive";
    }
    return "measure";
}

std::optional<MeasureVariant> measure_variant_from(std::string_view method) noexcept {
    if (method == "measure") return MeasureVariant::Measure;
    if (method == "measure_all") return MeasureVariant::MeasureAll;
    if (method == "measure_inactive") return MeasureVariant::MeasureInactive;
    return std::nullopt;
}

std::string_view to_string(FileSide side) noexcept {
    return side == FileSide::Buggy ? "buggy" : "fixed";
}

namespace {

// Visits statements in source order, descending into loop bodies. The
// callback receives the product of enclosing loop iteration counts.
template <typename F>
void walk(const std::vector<Stmt>& body, std::int64_t multiplier, std::vector<Warning>* warnings,
          F&& visit) {
    for (const auto& stmt : body) {
        visit(stmt, multiplier);
        if (const auto* loop = stmt.as<For>()) {
            const std::int64_t n = expand_loop_multiplier(*loop, warnings);
            std::int64_t inner = 0;
            if (__builtin_mul_overflow(multiplier, n, &inner)) inner = INT64_MAX;
            walk(loop->body, inner, warnings, visit);
        }
    }
}

// Name of the called constructor: `QuantumCircuit(...)` or `qiskit.QuantumCircuit(...)`.
std::string_view callee_name(const Call& call) {
    if (const auto* n = call.func->as<pyast::Name>()) return n->id;
    if (const auto* a = call.func->as<pyast::Attribute>()) return a->attr;
    return {};
}

bool is_measure_like(std::string_view method) { return method.starts_with("measure"); }

}  // namespace

// ---------------------------------------------------------------------------

std::int64_t expand_loop_multiplier(const For& loop, std::vector<Warning>* warnings) {
    const ExprPtr iter = pyast::fold_constants(loop.iterable);
    auto warn = [&](std::string msg) {
        if (warnings) warnings->push_back({iter->line, std::move(msg)});
        return std::int64_t{1};
    };
    if (const auto* list = iter->as<pyast::ListLit>()) {
        return static_cast<std::int64_t>(list->elements.size());
    }
    const auto* call = iter->as<Call>();
    const auto* fn = call ? call->func->as<pyast::Name>() : nullptr;
    if (!fn || fn->id != "range") {
        return warn("loop over '" + pyast::unparse(*iter) + "' counted as one iteration");
    }
    if (call->args.empty() || call->args.size() > 3 || !call->keywords.empty()) {
        return warn("malformed range() counted as one iteration");
    }
    std::vector<std::int64_t> v;
    for (const auto& a : call->args) {
        const auto* k = a->as<pyast::IntConst>();
        if (!k) return warn("range() with non-constant bounds counted as one iteration");
        v.push_back(k->value);
    }
    std::int64_t start = 0, stop = 0, step = 1;
    if (v.size() == 1) {
        stop = v[0];
    } else {
        start = v[0];
        stop = v[1];
        if (v.size() == 3) step = v[2];
    }
    if (step == 0) return warn("range() with zero step counted as one iteration");
    // Python semantics: ceil(max(stop - start, 0) / step) for step > 0.
    const std::int64_t span = step > 0 ? stop - start : start - stop;
    const std::int64_t stride = step > 0 ? step : -step;
    if (span <= 0) return 0;
    return (span + stride - 1) / stride;
}

CircuitTable extract_circuits(const ModuleAst& ast, const RegisterTable& regs) {
    CircuitTable table;
    auto warn = [&table](int line, std::string msg) { table.warnings.push_back({line, std::move(msg)}); };

    walk(ast.body, 1, nullptr, [&](const Stmt& stmt, std::int64_t) {
        const auto* assign = stmt.as<Assign>();
        if (!assign) return;
        const auto* call = assign->value->as<Call>();
        if (!call || callee_name(*call) != "QuantumCircuit") return;

        std::optional<CircuitInfo> info = CircuitInfo{0, 0, stmt.line};
        std::vector<std::int64_t> literals;
        bool has_registers = false;
        for (const auto& raw : call->args) {
            const ExprPtr arg = pyast::fold_constants(raw);
            if (const auto* k = arg->as<pyast::IntConst>()) {
                literals.push_back(k->value);
                continue;
            }
            const auto* name = arg->as<pyast::Name>();
            auto reg = name ? regs.entries.find(name->id) : regs.entries.end();
            if (reg == regs.entries.end()) {
                warn(stmt.line, "circuit '" + assign->targets.front().id + "': cannot resolve argument '" +
                                    pyast::unparse(*arg) + "'");
                info.reset();
                break;
            }
            has_registers = true;
            auto& slot = reg->second.kind == filters::RegisterKind::Quantum ? info->qubits : info->clbits;
            slot += reg->second.size;
        }
        if (!info) return;
        if (has_registers) {
            if (!literals.empty()) {
                warn(stmt.line, "circuit '" + assign->targets.front().id +
                                    "': integer arguments mixed with registers ignored");
            }
        } else if (!literals.empty()) {
            if (literals.size() > 2) {
                warn(stmt.line, "circuit '" + assign->targets.front().id + "': extra integer arguments ignored");
            }
            if (literals[0] < 0 || (literals.size() > 1 && literals[1] < 0)) {
                warn(stmt.line, "circuit '" + assign->targets.front().id + "': negative size");
                return;
            }
            info->qubits = literals[0];
            info->clbits = literals.size() > 1 ? literals[1] : 0;
        }
        for (const auto& target : assign->targets) {
            if (table.circuits.contains(target.id)) {
                warn(stmt.line, "circuit '" + target.id + "' reassigned; first definition kept");
                continue;
            }
            table.circuits.emplace(target.id, *info);
        }
    });
    return table;
}

std::vector<GateCall> extract_gate_calls(const ModuleAst& ast, const StandardGateTable& /*gates*/,
                                         const CircuitTable& circuits) {
    std::vector<GateCall> out;
    walk(ast.body, 1, nullptr, [&](const Stmt& stmt, std::int64_t) {
        const auto* es = stmt.as<ExprStmt>();
        if (!es) return;
        auto mc = pyast::as_method_call(*es->value);
        if (!mc || !circuits.circuits.contains(mc->receiver) || is_measure_like(mc->method)) return;
        GateCall gc{mc->receiver, mc->method, {}, stmt.line};
        for (const auto& a : mc->call->args) gc.qubit_args.push_back(pyast::fold_constants(a));
        out.push_back(std::move(gc));
    });
    return out;
}

OpaqueGates extract_opaque_gates(const ModuleAst& ast, std::vector<Warning>* warnings) {
    OpaqueGates out;
    walk(ast.body, 1, nullptr, [&](const Stmt& stmt, std::int64_t) {
        const auto* assign = stmt.as<Assign>();
        if (!assign) return;
        const auto* call = assign->value->as<Call>();
        if (!call || callee_name(*call) != "Gate") return;
        ExprPtr qubits = call->args.size() >= 2 ? call->args[1] : nullptr;
        for (const auto& kw : call->keywords) {
            if (kw.name == "num_qubits") qubits = kw.value;
        }
        const auto n = pyast::constant_value(qubits);
        if (!n) {
            if (warnings) warnings->push_back({stmt.line, "Gate() with non-constant qubit count ignored"});
            return;
        }
        if (*n < 3) return;
        ++out.count;
        out.lines.push_back(stmt.line);
        for (const auto& t : assign->targets) out.names.insert(t.id);
    });
    return out;
}

CompositeWraps extract_composite_wraps(const ModuleAst& ast) {
    CompositeWraps out;
    walk(ast.body, 1, nullptr, [&](const Stmt& stmt, std::int64_t) {
        const auto* assign = stmt.as<Assign>();
        if (!assign) return;
        const auto* call = assign->value->as<Call>();
        const auto* attr = call ? call->func->as<pyast::Attribute>() : nullptr;
        if (!attr || attr->attr != "to_instruction" || !call->args.empty()) return;
        ++out.count;
        out.lines.push_back(stmt.line);
    });
    return out;
}

MeasureCalls extract_measure_calls(const ModuleAst& ast) {
    MeasureCalls out;
    std::map<std::string, int> ops_per_receiver;
    walk(ast.body, 1, &out.warnings, [&](const Stmt& stmt, std::int64_t multiplier) {
        const auto* es = stmt.as<ExprStmt>();
        if (!es) return;
        auto mc = pyast::as_method_call(*es->value);
        if (!mc) return;
        const int ordinal = ops_per_receiver[mc->receiver]++;
        if (!is_measure_like(mc->method)) return;
        auto variant = measure_variant_from(mc->method);
        if (!variant) {
            out.warnings.push_back({stmt.line, "unrecognized measure variant '" + mc->method + "' ignored"});
            return;
        }
        MeasureCall m{mc->receiver, *variant, {}, stmt.line, multiplier, ordinal};
        for (const auto& a : mc->call->args) m.args.push_back(pyast::fold_constants(a));
        out.calls.push_back(std::move(m));
    });
    return out;
}

HadamardLedger seed_hadamard_ledger(const CircuitTable& circuits) {
    HadamardLedger ledger;
    for (const auto& [name, info] : circuits.circuits) {
        auto& slots = ledger.counts[name];
        for (std::int64_t q = 0; q < info.qubits; ++q) slots.emplace(q, 0);
    }
    return ledger;
}

// ---------------------------------------------------------------------------

FileFacts analyze_file(std::string_view source, const StandardGateTable& gates) {
    FileFacts f;
    f.ast = pyast::parse(source);
    f.registers = filters::filter_registers(source);
    f.circuits = extract_circuits(f.ast, f.registers);
    f.gate_lines = filters::filter_gate_lines(source);
    f.measure_lines = filters::filter_measures(source);
    f.gate_calls = extract_gate_calls(f.ast, gates, f.circuits);
    f.measures = extract_measure_calls(f.ast);
    f.hadamards = filters::count_hadamards(source, seed_hadamard_ledger(f.circuits));
    f.opaque = extract_opaque_gates(f.ast, &f.measures.warnings);
    f.composite = extract_composite_wraps(f.ast);

    static const std::regex circuit_re(R"(.+QuantumCircuit.*)");
    const auto lines = filters::split_lines(source);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (std::regex_search(lines[i].begin(), lines[i].end(), circuit_re)) {
            f.circuit_lines.push_back(static_cast<int>(i + 1));
        }
    }

    for (const auto& m : f.measures.calls) {
        auto c = f.circuits.circuits.find(m.circuit);
        if (c != f.circuits.circuits.end() && c->second.line > m.line) {
            f.measures.warnings.push_back(
                {m.line, "measure on '" + m.circuit + "' before the circuit is created"});
        }
    }
    return f;
}

namespace {

void collect_warnings(std::string_view side, const FileFacts& f, std::vector<std::string>& out) {
    std::vector<Warning> all;
    auto add = [&all](const std::vector<Warning>& ws) { all.insert(all.end(), ws.begin(), ws.end()); };
    add(f.ast.warnings);
    add(f.registers.warnings);
    add(f.circuits.warnings);
    add(f.measures.warnings);
    add(f.hadamards.warnings);
    std::stable_sort(all.begin(), all.end(), [](const Warning& a, const Warning& b) { return a.line < b.line; });
    for (const auto& w : all) {
        out.push_back(std::string(side) + ":" + std::to_string(w.line) + ": " + w.message);
    }
}

}  // namespace

DetectionContext build_context(const CodePair& pair, std::shared_ptr<const StandardGateTable> gates) {
    DetectionContext ctx;
    ctx.pair_id = pair.pair_id;
    ctx.gates = gates ? std::move(gates) : StandardGateTable::builtin();
    ctx.classes = filters::coarse_classify(pair);

    const std::pair<FileSide, const std::string*> files[] = {{FileSide::Buggy, &pair.buggy_source},
                                                             {FileSide::Fixed, &pair.fixed_source}};
    for (const auto& [side, source] : files) {
        FileFacts& facts = side == FileSide::Buggy ? ctx.buggy : ctx.fixed;
        try {
            facts = analyze_file(*source, *ctx.gates);
            collect_warnings(to_string(side), facts, ctx.warnings);
        } catch (const pyast::ParseError& e) {
            ctx.unanalyzable = true;
            ctx.warnings.push_back(std::string(to_string(side)) + ":" + std::to_string(e.line()) +
                                   ": parse error: " + e.what());
        }
    }
    if (ctx.unanalyzable) {
        ctx.buggy = FileFacts{};
        ctx.fixed = FileFacts{};
    }
    return ctx;
}

}  // namespace qpac::semantics
