#include "qpac/detectors.hpp"

#include <algorithm>
#include <future>
#include <map>
#include <stdexcept>

namespace qpac::detectors {

using semantics::FileFacts;
using semantics::GateCall;
using semantics::MeasureCall;

const PatternVerdict& DetectionReport::verdict(PatternId id) const {
    for (const auto& v : verdicts) {
        if (v.pattern == id) return v;
    }
    throw std::out_of_range("report has no verdict for " + std::string(to_string(id)));
}

std::set<PatternId> DetectionReport::detected() const {
    std::set<PatternId> out;
    for (const auto& v : verdicts) {
        if (v.detected) out.insert(v.pattern);
    }
    return out;
}

namespace {

// Returns a non-detected verdict when the detector must not run at all.
std::optional<PatternVerdict> precheck(PatternId id, const DetectionContext& ctx) {
    if (ctx.unanalyzable) return PatternVerdict{id, false, {}, "pair is unanalyzable"};
    if (!ctx.classes.contains(class_of(id))) return PatternVerdict{id, false, {}, std::string(kPrunedNote)};
    return std::nullopt;
}

bool same_args(const std::vector<pyast::ExprPtr>& a, const std::vector<pyast::ExprPtr>& b) {
    return std::equal(a.begin(), a.end(), b.begin(), b.end(),
                      [](const auto& x, const auto& y) { return pyast::equivalent(x, y); });
}

std::string render_args(const std::vector<pyast::ExprPtr>& args) {
    std::string out = "(";
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (i) out += ", ";
        out += pyast::unparse(*args[i]);
    }
    return out + ")";
}

std::string render_call(const GateCall& g) { return g.circuit + "." + g.gate + render_args(g.qubit_args); }

void add_pair(PatternVerdict& v, int buggy_line, int fixed_line, const std::string& note) {
    v.evidence.push_back({FileSide::Buggy, buggy_line, note});
    v.evidence.push_back({FileSide::Fixed, fixed_line, note});
}

void finish(PatternVerdict& v) { v.detected = !v.evidence.empty(); }

}  // namespace

PatternVerdict detect_incorrect_initialization(const DetectionContext& ctx) {
    const PatternId id = PatternId::IncorrectInitialization;
    if (auto early = precheck(id, ctx)) return *early;
    PatternVerdict v{id, false, {}, {}};
    const FileFacts& b = ctx.buggy;
    const FileFacts& f = ctx.fixed;
    const bool gate_lines = !b.gate_lines.empty() || !f.gate_lines.empty();
    const bool circuit_lines = !b.circuit_lines.empty() || !f.circuit_lines.empty();

    // Case 1: the same gate acts on different qubits. Calls are paired per
    // gate name in order of appearance, so a changed gate name never lands
    // here (that is the standard-gate pattern).
    if (gate_lines) {
        std::map<std::string, std::vector<const GateCall*>> by_gate_b, by_gate_f;
        for (const auto& g : b.gate_calls) by_gate_b[g.gate].push_back(&g);
        for (const auto& g : f.gate_calls) by_gate_f[g.gate].push_back(&g);
        for (const auto& [gate, calls_b] : by_gate_b) {
            auto it = by_gate_f.find(gate);
            if (it == by_gate_f.end()) continue;
            const auto& calls_f = it->second;
            for (std::size_t i = 0; i < std::min(calls_b.size(), calls_f.size()); ++i) {
                if (same_args(calls_b[i]->qubit_args, calls_f[i]->qubit_args)) continue;
                add_pair(v, calls_b[i]->line, calls_f[i]->line,
                         gate + ": qubits " + render_args(calls_b[i]->qubit_args) + " -> " +
                             render_args(calls_f[i]->qubit_args));
            }
        }
    }

    // Case 2: a circuit is created with a different number of qubits.
    if (circuit_lines) {
        for (const auto& [name, cb] : b.circuits.circuits) {
            auto it = f.circuits.circuits.find(name);
            if (it == f.circuits.circuits.end() || it->second.qubits == cb.qubits) continue;
            add_pair(v, cb.line, it->second.line,
                     name + ": " + std::to_string(cb.qubits) + " qubits -> " + std::to_string(it->second.qubits));
        }
    }
    std::stable_sort(v.evidence.begin(), v.evidence.end(), [](const Evidence& x, const Evidence& y) {
        return std::tie(x.file, x.line) < std::tie(y.file, y.line);
    });
    finish(v);
    return v;
}

PatternVerdict detect_unequal_bits(const DetectionContext& ctx) {
    const PatternId id = PatternId::UnequalBits;
    if (auto early = precheck(id, ctx)) return *early;
    PatternVerdict v{id, false, {}, {}};
    for (const auto& [name, cb] : ctx.buggy.circuits.circuits) {
        auto it = ctx.fixed.circuits.circuits.find(name);
        if (it == ctx.fixed.circuits.circuits.end()) continue;
        const auto& cf = it->second;
        if (cb.qubits != cb.clbits && cf.qubits == cf.clbits) {
            add_pair(v, cb.line, cf.line,
                     name + ": " + std::to_string(cb.qubits) + " qubits/" + std::to_string(cb.clbits) +
                         " clbits -> " + std::to_string(cf.qubits) + "/" + std::to_string(cf.clbits));
        }
    }
    finish(v);
    return v;
}

PatternVerdict detect_incorrect_standard_gate(const DetectionContext& ctx) {
    const PatternId id = PatternId::IncorrectStandardGate;
    if (auto early = precheck(id, ctx)) return *early;
    PatternVerdict v{id, false, {}, {}};
    if (ctx.buggy.gate_lines.empty() && ctx.fixed.gate_lines.empty()) return v;
    const auto& gb = ctx.buggy.gate_calls;
    const auto& gf = ctx.fixed.gate_calls;
    for (std::size_t i = 0; i < std::min(gb.size(), gf.size()); ++i) {
        if (gb[i].gate == gf[i].gate) continue;
        if (!ctx.gates->contains(gb[i].gate) || !ctx.gates->contains(gf[i].gate)) continue;
        add_pair(v, gb[i].line, gf[i].line, render_call(gb[i]) + " -> " + render_call(gf[i]));
    }
    finish(v);
    return v;
}

PatternVerdict detect_incorrect_opaque_gate(const DetectionContext& ctx) {
    const PatternId id = PatternId::IncorrectOpaqueGate;
    if (auto early = precheck(id, ctx)) return *early;
    PatternVerdict v{id, false, {}, {}};
    const std::int64_t opaque_drop = ctx.buggy.opaque.count - ctx.fixed.opaque.count;
    const std::int64_t composite_gain = ctx.fixed.composite.count - ctx.buggy.composite.count;
    if (opaque_drop > 0 && composite_gain >= opaque_drop) {
        const std::string note = "opaque gates on >=3 qubits -" + std::to_string(opaque_drop) +
                                 ", composite gates +" + std::to_string(composite_gain);
        for (int line : ctx.buggy.opaque.lines) v.evidence.push_back({FileSide::Buggy, line, note});
        for (int line : ctx.fixed.composite.lines) v.evidence.push_back({FileSide::Fixed, line, note});
    }
    finish(v);
    return v;
}

PatternVerdict detect_incorrect_hadamard(const DetectionContext& ctx) {
    const PatternId id = PatternId::IncorrectHadamard;
    if (auto early = precheck(id, ctx)) return *early;
    PatternVerdict v{id, false, {}, {}};
    const auto& hb = ctx.buggy.hadamards;
    const auto& hf = ctx.fixed.hadamards;
    for (const auto& [circuit, slots_b] : hb.counts) {
        auto slots_f = hf.counts.find(circuit);
        if (slots_f == hf.counts.end()) continue;
        for (const auto& [qubit, count_b] : slots_b) {
            auto it = slots_f->second.find(qubit);
            if (it == slots_f->second.end()) continue;
            const std::int64_t count_f = it->second;
            // Odd in the buggy file, inverted (even and present) in the fix.
            if (count_b % 2 == 1 && count_f % 2 == 0 && count_f > 0) {
                const std::string note = circuit + "[" + std::to_string(qubit) + "]: " + std::to_string(count_b) +
                                         " Hadamards -> " + std::to_string(count_f);
                v.evidence.push_back({FileSide::Buggy, hb.lines.at(circuit).at(qubit).back(), note});
                v.evidence.push_back({FileSide::Fixed, hf.lines.at(circuit).at(qubit).back(), note});
            }
        }
    }
    finish(v);
    return v;
}

PatternVerdict detect_incorrect_measurement(const DetectionContext& ctx) {
    const PatternId id = PatternId::IncorrectMeasurement;
    if (auto early = precheck(id, ctx)) return *early;
    PatternVerdict v{id, false, {}, {}};
    if (ctx.buggy.measure_lines.empty() && ctx.fixed.measure_lines.empty()) return v;
    const auto& mb = ctx.buggy.measures.calls;
    const auto& mf = ctx.fixed.measures.calls;
    auto label = [](const MeasureCall& m) {
        return m.circuit + "." + std::string(semantics::to_string(m.variant)) + render_args(m.args);
    };

    // Stage 1: number of measure calls.
    if (mb.size() != mf.size()) {
        const std::string note = "measure calls: " + std::to_string(mb.size()) + " -> " + std::to_string(mf.size());
        const auto& longer = mb.size() > mf.size() ? mb : mf;
        const FileSide side = mb.size() > mf.size() ? FileSide::Buggy : FileSide::Fixed;
        for (std::size_t i = std::min(mb.size(), mf.size()); i < longer.size(); ++i) {
            v.evidence.push_back({side, longer[i].line, note});
        }
        finish(v);
        return v;
    }
    // Stage 2: order of variants.
    for (std::size_t i = 0; i < mb.size(); ++i) {
        if (mb[i].variant != mf[i].variant) {
            add_pair(v, mb[i].line, mf[i].line, "variant: " + label(mb[i]) + " -> " + label(mf[i]));
        }
    }
    if (!v.evidence.empty()) {
        finish(v);
        return v;
    }
    // Stage 3: arguments.
    for (std::size_t i = 0; i < mb.size(); ++i) {
        if (!same_args(mb[i].args, mf[i].args)) {
            add_pair(v, mb[i].line, mf[i].line, "arguments: " + label(mb[i]) + " -> " + label(mf[i]));
        }
    }
    if (!v.evidence.empty()) {
        finish(v);
        return v;
    }
    // Stage 4: position relative to the other operations on the circuit.
    for (std::size_t i = 0; i < mb.size(); ++i) {
        if (mb[i].ordinal != mf[i].ordinal) {
            add_pair(v, mb[i].line, mf[i].line,
                     "position: " + label(mb[i]) + " moved from operation " + std::to_string(mb[i].ordinal) +
                         " to " + std::to_string(mf[i].ordinal));
        }
    }
    finish(v);
    return v;
}

PatternVerdict detect_excessive_measurement(const DetectionContext& ctx) {
    const PatternId id = PatternId::ExcessiveMeasurement;
    if (auto early = precheck(id, ctx)) return *early;
    PatternVerdict v{id, false, {}, {}};

    struct Tally {
        std::int64_t count = 0;
        std::vector<int> lines;
    };
    auto tally = [](const FileFacts& f) {
        std::map<std::string, Tally> out;
        for (const auto& m : f.measures.calls) {
            auto c = f.circuits.circuits.find(m.circuit);
            if (c == f.circuits.circuits.end() || c->second.line > m.line) continue;
            auto& t = out[m.circuit];
            if (__builtin_add_overflow(t.count, m.multiplier, &t.count)) t.count = INT64_MAX;
            t.lines.push_back(m.line);
        }
        return out;
    };
    const auto tb = tally(ctx.buggy);
    const auto tf = tally(ctx.fixed);
    for (const auto& [name, info] : ctx.buggy.circuits.circuits) {
        if (!ctx.fixed.circuits.circuits.contains(name)) continue;
        auto b = tb.find(name);
        if (b == tb.end()) continue;
        auto f = tf.find(name);
        const std::int64_t after = f == tf.end() ? 0 : f->second.count;
        if (after >= b->second.count) continue;
        const std::string note =
            name + ": " + std::to_string(b->second.count) + " measurements -> " + std::to_string(after);
        for (int line : b->second.lines) v.evidence.push_back({FileSide::Buggy, line, note});
        if (f != tf.end()) {
            for (int line : f->second.lines) v.evidence.push_back({FileSide::Fixed, line, note});
        }
    }
    finish(v);
    return v;
}

PatternVerdict run_detector(PatternId id, const DetectionContext& ctx) {
    switch (id) {
        case PatternId::IncorrectInitialization: return detect_incorrect_initialization(ctx);
        case PatternId::UnequalBits: return detect_unequal_bits(ctx);
        case PatternId::IncorrectStandardGate: return detect_incorrect_standard_gate(ctx);
        case PatternId::IncorrectOpaqueGate: return detect_incorrect_opaque_gate(ctx);
        case PatternId::IncorrectHadamard: return detect_incorrect_hadamard(ctx);
        case PatternId::IncorrectMeasurement: return detect_incorrect_measurement(ctx);
        case PatternId::ExcessiveMeasurement: return detect_excessive_measurement(ctx);
    }
    throw std::invalid_argument("unknown pattern id");
}

namespace {

std::size_t slot_of(PatternId id) {
    return static_cast<std::size_t>(std::find(kAllPatterns.begin(), kAllPatterns.end(), id) - kAllPatterns.begin());
}

DetectionReport assemble(const DetectionContext& ctx, std::vector<PatternVerdict> verdicts) {
    DetectionReport r;
    r.pair_id = ctx.pair_id;
    r.unanalyzable = ctx.unanalyzable;
    r.classes_considered = ctx.classes;
    r.verdicts = std::move(verdicts);
    r.warnings = ctx.warnings;
    for (const auto& v : r.verdicts) {
        if (v.note == kPrunedNote) r.warnings.push_back(std::string(to_string(v.pattern)) + ": " + v.note);
    }
    return r;
}

}  // namespace

DetectionReport detect_all(const DetectionContext& ctx) { return detect_all(ctx, kAllPatterns); }

DetectionReport detect_all(const DetectionContext& ctx, std::span<const PatternId> order) {
    std::vector<PatternVerdict> verdicts(kAllPatterns.size());
    std::vector<bool> done(kAllPatterns.size(), false);
    auto run = [&](PatternId id) {
        const std::size_t slot = slot_of(id);
        if (done[slot]) return;
        verdicts[slot] = run_detector(id, ctx);
        done[slot] = true;
    };
    for (auto id : order) run(id);
    for (auto id : kAllPatterns) run(id);
    return assemble(ctx, std::move(verdicts));
}

DetectionReport detect_all_parallel(const DetectionContext& ctx) {
    std::vector<std::future<PatternVerdict>> futures;
    futures.reserve(kAllPatterns.size());
    for (auto id : kAllPatterns) {
        futures.push_back(std::async(std::launch::async, [id, &ctx] { return run_detector(id, ctx); }));
    }
    std::vector<PatternVerdict> verdicts;
    for (auto& f : futures) verdicts.push_back(f.get());
    return assemble(ctx, std::move(verdicts));
}

}  // namespace qpac::detectors
