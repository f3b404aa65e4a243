#include <gtest/gtest.h>

#include <cstdlib>
#include <regex>

#include "program_gen.hpp"
#include "qpac/semantics.hpp"
#include "test_support.hpp"

using namespace qpac;
using namespace qpac::semantics;
using qpac::pyast::parse;

namespace {

CircuitTable circuits_of(const std::string& src) {
    return extract_circuits(parse(src), filters::filter_registers(src));
}

std::vector<GateCall> gates_of(const std::string& src) {
    auto ast = parse(src);
    auto circuits = extract_circuits(ast, filters::filter_registers(src));
    return extract_gate_calls(ast, *StandardGateTable::builtin(), circuits);
}

std::vector<std::int64_t> int_args(const GateCall& g) {
    std::vector<std::int64_t> out;
    for (const auto& a : g.qubit_args) out.push_back(pyast::constant_value(a).value_or(-999));
    return out;
}

const pyast::For& first_loop(const pyast::ModuleAst& m) {
    for (const auto& s : m.body) {
        if (const auto* f = s.as<pyast::For>()) return *f;
    }
    throw std::logic_error("no loop");
}

// Text-only resolution of circuit sizes, used as an independent check.
std::map<std::string, std::pair<std::int64_t, std::int64_t>> textual_circuits(const std::string& src) {
    static const std::regex reg(R"(^\s*(\w+)\s*=\s*(Quantum|Classical)Register\(\s*(\d+))");
    static const std::regex circ(R"(^\s*(\w+)\s*=\s*QuantumCircuit\(([^)]*)\))");
    std::map<std::string, std::pair<char, std::int64_t>> regs;
    std::map<std::string, std::pair<std::int64_t, std::int64_t>> out;
    std::istringstream in(src);
    std::string line;
    while (std::getline(in, line)) {
        std::smatch m;
        if (std::regex_search(line, m, reg)) {
            regs[m[1]] = {m[2].str()[0], std::stoll(m[3])};
            continue;
        }
        if (!std::regex_search(line, m, circ) || out.count(m[1])) continue;
        std::vector<std::string> args;
        std::stringstream ss(m[2].str());
        std::string a;
        while (std::getline(ss, a, ',')) {
            a.erase(0, a.find_first_not_of(' '));
            a.erase(a.find_last_not_of(' ') + 1);
            if (a.find('=') == std::string::npos) args.push_back(a);
        }
        if (args.empty()) continue;
        if (std::isdigit(static_cast<unsigned char>(args[0][0]))) {
            out[m[1]] = {std::stoll(args[0]), args.size() > 1 ? std::stoll(args[1]) : 0};
        } else {
            std::int64_t q = 0, c = 0;
            for (const auto& name : args) (regs.at(name).first == 'Q' ? q : c) += regs.at(name).second;
            out[m[1]] = {q, c};
        }
    }
    return out;
}

}  // namespace

TEST(Circuits, FromRegisters) {
    auto t = circuits_of("qreg = QuantumRegister(3)\ncreg = ClassicalRegister(2)\nqc = QuantumCircuit(qreg, creg)\n");
    ASSERT_EQ(t.circuits.count("qc"), 1u);
    EXPECT_EQ(t.circuits["qc"], (CircuitInfo{3, 2, 3}));
}

TEST(Circuits, FromIntegers) {
    EXPECT_EQ(circuits_of("qc = QuantumCircuit(3, 3)").circuits["qc"], (CircuitInfo{3, 3, 1}));
    EXPECT_EQ(circuits_of("qc = QuantumCircuit(2)").circuits["qc"], (CircuitInfo{2, 0, 1}));
    EXPECT_EQ(circuits_of("qc = QuantumCircuit(1+1, 2*2)").circuits["qc"], (CircuitInfo{2, 4, 1}));
}

TEST(Circuits, SeveralRegistersOfOneKindAreSummed) {
    auto t = circuits_of("a = QuantumRegister(2)\nb = QuantumRegister(3)\nc = ClassicalRegister(1)\n"
                         "qc = QuantumCircuit(a, b, c)\n");
    EXPECT_EQ(t.circuits["qc"].qubits, 5);
    EXPECT_EQ(t.circuits["qc"].clbits, 1);
}

TEST(Circuits, UnresolvedArgumentIsWarned) {
    auto t = circuits_of("qc = QuantumCircuit(n)\n");
    EXPECT_TRUE(t.circuits.empty());
    EXPECT_FALSE(t.warnings.empty());
}

TEST(Circuits, AgreeWithTextualOracleOnCorpus) {
    int files = 0;
    for (const auto& dir : {qpac::testing::golden_dir(), qpac::testing::negatives_dir()}) {
        for (const auto& c : scan_corpus(dir)) {
            for (const auto* src : {&c.pair.buggy_source, &c.pair.fixed_source}) {
                auto got = circuits_of(*src);
                std::map<std::string, std::pair<std::int64_t, std::int64_t>> flat;
                for (const auto& [name, info] : got.circuits) flat[name] = {info.qubits, info.clbits};
                EXPECT_EQ(flat, textual_circuits(*src)) << c.name;
                ++files;
            }
        }
    }
    EXPECT_GE(files, 30);
}

TEST(GateCalls, RenamedReceivers) {
    auto p = qpac::testing::golden_case("g04_standard_gate_renamed");
    auto b = gates_of(p.buggy_source);
    auto f = gates_of(p.fixed_source);
    ASSERT_EQ(b.size(), 1u);
    ASSERT_EQ(f.size(), 1u);
    EXPECT_EQ(b[0].circuit, "a");
    EXPECT_EQ(b[0].gate, "sdg");
    EXPECT_EQ(int_args(b[0]), std::vector<std::int64_t>{1});
    EXPECT_EQ(f[0].circuit, "qc");
    EXPECT_EQ(f[0].gate, "tdg");
    EXPECT_EQ(int_args(f[0]), std::vector<std::int64_t>{1});
}

TEST(GateCalls, ArgumentsAreFolded) {
    auto g = gates_of("qc = QuantumCircuit(2)\nqc.h(0+1)\n");
    ASSERT_EQ(g.size(), 1u);
    EXPECT_EQ(g[0].gate, "h");
    ASSERT_NE(g[0].qubit_args[0]->as<pyast::IntConst>(), nullptr);
    EXPECT_EQ(int_args(g[0]), std::vector<std::int64_t>{1});
}

TEST(GateCalls, UnknownReceiverAndMeasuresExcluded) {
    auto g = gates_of("qc = QuantumCircuit(2)\nhelper.h(0)\nqc.measure(0, 0)\nqc.measure_all()\nqc.cx(0, 1)\n");
    ASSERT_EQ(g.size(), 1u);
    EXPECT_EQ(g[0].gate, "cx");
    EXPECT_EQ(g[0].line, 5);
}

TEST(GateCalls, LoopBodiesIncluded) {
    auto g = gates_of("qc = QuantumCircuit(3)\nfor i in range(3):\n    qc.h(i)\n");
    ASSERT_EQ(g.size(), 1u);
    EXPECT_EQ(g[0].line, 3);
}

TEST(Opaque, ThreeQubitGate) {
    auto o = extract_opaque_gates(parse("gt = Gate('my_custom_gate', 3, [])"));
    EXPECT_EQ(o.count, 1);
    EXPECT_EQ(o.names, std::set<std::string>{"gt"});
    EXPECT_EQ(o.lines, std::vector<int>{1});
}

TEST(Opaque, TwoQubitGateBelowThreshold) {
    EXPECT_EQ(extract_opaque_gates(parse("g = Gate('cx2', 2, [])")).count, 0);
}

TEST(Opaque, CountsEveryInstantiation) {
    auto src = "a = Gate('x3', 3, [])\nb = Gate(name='y', num_qubits=4, params=[])\nx = 1\nc = Gate('z', 2+1, [])\n";
    auto o = extract_opaque_gates(parse(src));
    // Oracle: count the Gate( constructors whose qubit argument is >= 3.
    EXPECT_EQ(o.count, 3);
    EXPECT_EQ(o.names, (std::set<std::string>{"a", "b", "c"}));
}

TEST(Composite, Wraps) {
    EXPECT_EQ(extract_composite_wraps(parse("gt = sub_circuit.to_instruction()")).count, 1);
    EXPECT_EQ(extract_composite_wraps(parse("qc = QuantumCircuit(1)\nqc.h(0)\n")).count, 0);
    auto two = extract_composite_wraps(parse("a = s.to_instruction()\nx = 2\nb = t.to_instruction()\n"));
    EXPECT_EQ(two.count, 2);
    EXPECT_EQ(two.lines, (std::vector<int>{1, 3}));
}

TEST(Measures, MeasureAllVariant) {
    auto m = extract_measure_calls(parse("qr = QuantumRegister(2, name='qreg')\n"
                                         "cr = ClassicalRegister(2, name='creg')\n"
                                         "qc = QuantumCircuit(qr,cr)\n"
                                         "\n"
                                         "qc.h(qr)\n"
                                         "qc.measure_all()\n"));
    ASSERT_EQ(m.calls.size(), 1u);
    EXPECT_EQ(m.calls[0].circuit, "qc");
    EXPECT_EQ(m.calls[0].variant, MeasureVariant::MeasureAll);
    EXPECT_TRUE(m.calls[0].args.empty());
    EXPECT_EQ(m.calls[0].line, 6);
}

TEST(Measures, ListArguments) {
    auto p = qpac::testing::golden_case("g08_measurement_arguments");
    auto m = extract_measure_calls(parse(p.fixed_source));
    ASSERT_EQ(m.calls.size(), 1u);
    const auto& c = m.calls[0];
    EXPECT_EQ(c.variant, MeasureVariant::Measure);
    EXPECT_EQ(c.line, 4);
    ASSERT_EQ(c.args.size(), 2u);
    EXPECT_TRUE(pyast::equivalent(c.args[0], *pyast::parse_expression("[0,1,2]")));
    EXPECT_TRUE(pyast::equivalent(c.args[1], *pyast::parse_expression("[1,0,2]")));
    EXPECT_EQ(c.ordinal, 2);  // after x and barrier
}

TEST(Measures, EmptyAst) { EXPECT_TRUE(extract_measure_calls(pyast::ModuleAst{}).calls.empty()); }

TEST(Measures, LoopMultiplierAndInactiveVariant) {
    auto m = extract_measure_calls(parse("for i in range(4):\n    for j in [1, 2]:\n        qc.measure(i, j)\n"
                                         "qc.measure_inactive()\n"));
    ASSERT_EQ(m.calls.size(), 2u);
    EXPECT_EQ(m.calls[0].multiplier, 8);
    EXPECT_EQ(m.calls[1].variant, MeasureVariant::MeasureInactive);
    EXPECT_EQ(m.calls[1].multiplier, 1);
}

TEST(Measures, VariantNames) {
    for (auto v : {MeasureVariant::Measure, MeasureVariant::MeasureAll, MeasureVariant::MeasureInactive}) {
        EXPECT_EQ(measure_variant_from(to_string(v)), v);
    }
    EXPECT_FALSE(measure_variant_from("measure_active"));
}

TEST(LoopMultiplier, Ranges) {
    EXPECT_EQ(expand_loop_multiplier(first_loop(parse("for i in range(10):\n    pass\n"))), 10);
    EXPECT_EQ(expand_loop_multiplier(first_loop(parse("for i in range(5):\n    pass\n"))), 5);
    EXPECT_EQ(expand_loop_multiplier(first_loop(parse("for i in range(2, 9, 3):\n    pass\n"))), 3);
    EXPECT_EQ(expand_loop_multiplier(first_loop(parse("for i in range(9, 2, -3):\n    pass\n"))), 3);
    EXPECT_EQ(expand_loop_multiplier(first_loop(parse("for i in range(5, 2):\n    pass\n"))), 0);
    EXPECT_EQ(expand_loop_multiplier(first_loop(parse("for i in range(-3):\n    pass\n"))), 0);
}

TEST(LoopMultiplier, ListLiteral) {
    EXPECT_EQ(expand_loop_multiplier(first_loop(parse("for i in [0, 2, 4]:\n    pass\n"))), 3);
    EXPECT_EQ(expand_loop_multiplier(first_loop(parse("for i in []:\n    pass\n"))), 0);
}

TEST(LoopMultiplier, MatchesPythonRangeOracle) {
    for (int start = -4; start <= 20; ++start) {
        for (int stop = -4; stop <= 20; stop += 3) {
            for (int step : {-3, -1, 1, 2, 5}) {
                const auto src = "for i in range(" + std::to_string(start) + ", " + std::to_string(stop) + ", " +
                                 std::to_string(step) + "):\n    pass\n";
                EXPECT_EQ(expand_loop_multiplier(first_loop(parse(src))),
                          qpac::testing::python_range_len(start, stop, step))
                    << src;
            }
        }
    }
}

TEST(LoopMultiplier, NonConstantDefaultsToOne) {
    std::vector<pyast::Warning> w;
    EXPECT_EQ(expand_loop_multiplier(first_loop(parse("for i in range(n):\n    pass\n")), &w), 1);
    EXPECT_EQ(w.size(), 1u);
    w.clear();
    EXPECT_EQ(expand_loop_multiplier(first_loop(parse("for q in qc.qubits:\n    pass\n")), &w), 1);
    EXPECT_EQ(w.size(), 1u);
    w.clear();
    EXPECT_EQ(expand_loop_multiplier(first_loop(parse("for i in range(0, 4, 0):\n    pass\n")), &w), 1);
    EXPECT_EQ(w.size(), 1u);
}

TEST(GateTable, DataFileMatchesBuiltin) {
    auto file = StandardGateTable::load(qpac::testing::data_dir() / "standard_gates.txt");
    EXPECT_EQ(file.names(), StandardGateTable::builtin()->names());
    EXPECT_TRUE(file.contains("h"));
    EXPECT_TRUE(file.contains("tdg"));
    EXPECT_FALSE(file.contains("H"));
    EXPECT_FALSE(file.contains("append"));
    EXPECT_FALSE(file.contains("barrier"));
}

TEST(GateTable, FromTextSkipsCommentsAndBlanks) {
    auto t = StandardGateTable::from_text("# gates\n\nh\n  x  # pauli\n");
    EXPECT_EQ(t.names(), (std::set<std::string, std::less<>>{"h", "x"}));
}

TEST(GateTable, EnvironmentOverride) {
    qpac::testing::TempDir tmp("gates");
    qpac::testing::write_file(tmp.path() / "g.txt", "h\nmyop\n");
    ::setenv("QPAC_GATE_TABLE", (tmp.path() / "g.txt").c_str(), 1);
    auto t = gate_table_from_environment();
    ::unsetenv("QPAC_GATE_TABLE");
    EXPECT_TRUE(t->contains("myop"));
    EXPECT_FALSE(t->contains("x"));
    EXPECT_EQ(gate_table_from_environment()->names(), StandardGateTable::builtin()->names());
}

TEST(Context, InitializationCase) {
    auto ctx = build_context(qpac::testing::golden_case("g01_incorrect_initialization"));
    EXPECT_FALSE(ctx.unanalyzable);
    EXPECT_EQ(ctx.pair_id, "g01_incorrect_initialization");
    ASSERT_EQ(ctx.buggy.gate_calls.size(), 1u);
    ASSERT_EQ(ctx.fixed.gate_calls.size(), 1u);
    EXPECT_EQ(ctx.buggy.gate_calls[0].gate, "h");
    EXPECT_EQ(int_args(ctx.buggy.gate_calls[0]), std::vector<std::int64_t>{0});
    EXPECT_EQ(int_args(ctx.fixed.gate_calls[0]), std::vector<std::int64_t>{1});
    EXPECT_TRUE(ctx.classes.contains(PatternClass::Initialization));
    EXPECT_TRUE(ctx.classes.contains(PatternClass::Operation));
}

TEST(Context, IdenticalFilesAreSymmetric) {
    for (const auto& c : scan_corpus(qpac::testing::golden_dir())) {
        for (const auto* src : {&c.pair.buggy_source, &c.pair.fixed_source}) {
            auto ctx = qpac::testing::context_of(*src, *src);
            EXPECT_EQ(pyast::dump(ctx.buggy.ast), pyast::dump(ctx.fixed.ast));
            EXPECT_EQ(ctx.buggy.gate_lines, ctx.fixed.gate_lines);
            EXPECT_EQ(ctx.buggy.measure_lines, ctx.fixed.measure_lines);
            EXPECT_EQ(ctx.buggy.hadamards.counts, ctx.fixed.hadamards.counts);
            EXPECT_EQ(ctx.buggy.opaque.count, ctx.fixed.opaque.count);
            EXPECT_EQ(ctx.buggy.gate_calls.size(), ctx.fixed.gate_calls.size());
            EXPECT_EQ(ctx.buggy.measures.calls.size(), ctx.fixed.measures.calls.size());
        }
    }
}

TEST(Context, EmptyFiles) {
    auto ctx = qpac::testing::context_of("", "");
    EXPECT_FALSE(ctx.unanalyzable);
    EXPECT_TRUE(ctx.classes.empty());
    EXPECT_TRUE(ctx.buggy.circuits.circuits.empty());
    EXPECT_TRUE(ctx.fixed.gate_calls.empty());
    EXPECT_TRUE(ctx.fixed.measures.calls.empty());
    EXPECT_EQ(ctx.buggy.opaque.count, 0);
}

TEST(Context, ParseErrorMarksUnanalyzable) {
    auto ctx = qpac::testing::context_of("qc = QuantumCircuit(2)\nqc.h(0\n", "qc = QuantumCircuit(2)\n");
    EXPECT_TRUE(ctx.unanalyzable);
    ASSERT_FALSE(ctx.warnings.empty());
    EXPECT_NE(ctx.warnings[0].find("buggy:2"), std::string::npos);
}

TEST(Context, ParsesEachFileOnce) {
    const auto before = pyast::parse_invocations();
    auto ctx = build_context(qpac::testing::golden_case("g09_excessive_measurement"));
    EXPECT_EQ(pyast::parse_invocations() - before, 2u);
    const auto before_bad = pyast::parse_invocations();
    (void)qpac::testing::context_of("qc.h(0\n", "qc.h(1\n");
    EXPECT_EQ(pyast::parse_invocations() - before_bad, 2u);
}

TEST(Context, FoldedLiteralsGiveEqualFacts) {
    for (const auto& c : scan_corpus(qpac::testing::golden_dir())) {
        auto plain = analyze_file(c.pair.buggy_source, *StandardGateTable::builtin());
        auto inflated =
            analyze_file(qpac::testing::inflate_integer_literals(c.pair.buggy_source), *StandardGateTable::builtin());
        EXPECT_EQ(plain.hadamards.counts, inflated.hadamards.counts) << c.name;
        EXPECT_EQ(plain.opaque.count, inflated.opaque.count) << c.name;
        ASSERT_EQ(plain.circuits.circuits.size(), inflated.circuits.circuits.size()) << c.name;
        for (const auto& [name, info] : plain.circuits.circuits) {
            EXPECT_EQ(inflated.circuits.circuits.at(name), info) << c.name;
        }
        ASSERT_EQ(plain.gate_calls.size(), inflated.gate_calls.size()) << c.name;
        for (std::size_t i = 0; i < plain.gate_calls.size(); ++i) {
            ASSERT_EQ(plain.gate_calls[i].qubit_args.size(), inflated.gate_calls[i].qubit_args.size());
            for (std::size_t k = 0; k < plain.gate_calls[i].qubit_args.size(); ++k) {
                EXPECT_TRUE(pyast::equivalent(plain.gate_calls[i].qubit_args[k], inflated.gate_calls[i].qubit_args[k]))
                    << c.name;
            }
        }
        ASSERT_EQ(plain.measures.calls.size(), inflated.measures.calls.size()) << c.name;
        for (std::size_t i = 0; i < plain.measures.calls.size(); ++i) {
            EXPECT_EQ(plain.measures.calls[i].multiplier, inflated.measures.calls[i].multiplier) << c.name;
        }
    }
}
