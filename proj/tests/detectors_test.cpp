#include <gtest/gtest.h>

#include <algorithm>
#include <regex>

#include "program_gen.hpp"
#include "qpac/detectors.hpp"
#include "test_support.hpp"

using namespace qpac;
using namespace qpac::detectors;
using qpac::testing::context_of;

namespace {

std::set<PatternId> detected_in(const std::string& name) {
    return detect_all(semantics::build_context(qpac::testing::golden_case(name))).detected();
}

bool fires(PatternId id, const std::string& buggy, const std::string& fixed) {
    return run_detector(id, context_of(buggy, fixed)).detected;
}

std::vector<std::pair<FileSide, int>> evidence_lines(const PatternVerdict& v) {
    std::vector<std::pair<FileSide, int>> out;
    for (const auto& e : v.evidence) out.emplace_back(e.file, e.line);
    return out;
}

}  // namespace

// --- incorrect initialization -------------------------------------------------

TEST(Initialization, ReferenceCase) {
    auto ctx = semantics::build_context(qpac::testing::golden_case("g01_incorrect_initialization"));
    auto v = detect_incorrect_initialization(ctx);
    EXPECT_TRUE(v.detected);
    EXPECT_EQ(evidence_lines(v), (std::vector<std::pair<FileSide, int>>{{FileSide::Buggy, 2}, {FileSide::Fixed, 2}}));
}

TEST(Initialization, IdenticalFiles) {
    const std::string src = "qc = QuantumCircuit(2)\nqc.h(0)\n";
    EXPECT_FALSE(fires(PatternId::IncorrectInitialization, src, src));
}

TEST(Initialization, ConstructorCountChange) {
    EXPECT_TRUE(fires(PatternId::IncorrectInitialization, "qc = QuantumCircuit(2)\nqc.h(0)\n",
                      "qc = QuantumCircuit(3)\nqc.h(0)\n"));
}

TEST(Initialization, FoldedArgumentIsNotAChange) {
    EXPECT_FALSE(fires(PatternId::IncorrectInitialization, "qc = QuantumCircuit(2)\nqc.h(0+1)\n",
                       "qc = QuantumCircuit(2)\nqc.h(1)\n"));
}

TEST(Initialization, AddedGateIsNotAChange) {
    EXPECT_FALSE(fires(PatternId::IncorrectInitialization, "qc = QuantumCircuit(2)\nqc.h(0)\n",
                       "qc = QuantumCircuit(2)\nqc.h(0)\nqc.cx(0, 1)\n"));
}

// --- unequal bits ---------------------------------------------------------------

TEST(UnequalBits, ReferenceCase) {
    auto ctx = semantics::build_context(qpac::testing::golden_case("g02_unequal_bits"));
    EXPECT_TRUE(detect_unequal_bits(ctx).detected);
}

TEST(UnequalBits, EqualInBothFiles) {
    const std::string src = "qc = QuantumCircuit(3, 3)\n";
    EXPECT_FALSE(fires(PatternId::UnequalBits, src, src));
    EXPECT_FALSE(fires(PatternId::UnequalBits, src, "qc = QuantumCircuit(2, 2)\n"));
}

TEST(UnequalBits, UnusedRegisterChange) {
    EXPECT_FALSE(fires(PatternId::UnequalBits,
                       "qreg = QuantumRegister(3)\ncreg = ClassicalRegister(3)\nextra = ClassicalRegister(2)\n"
                       "qc = QuantumCircuit(qreg, creg)\n",
                       "qreg = QuantumRegister(3)\ncreg = ClassicalRegister(3)\nextra = ClassicalRegister(3)\n"
                       "qc = QuantumCircuit(qreg, creg)\n"));
}

TEST(UnequalBits, IntegerConstructor) {
    EXPECT_TRUE(fires(PatternId::UnequalBits, "qc = QuantumCircuit(3, 2)\n", "qc = QuantumCircuit(3, 3)\n"));
    EXPECT_FALSE(fires(PatternId::UnequalBits, "qc = QuantumCircuit(3, 3)\n", "qc = QuantumCircuit(3, 2)\n"));
}

// --- standard gates -------------------------------------------------------------

TEST(StandardGate, ReferenceCase) {
    EXPECT_EQ(detected_in("g03_standard_gate"), std::set<PatternId>{PatternId::IncorrectStandardGate});
}

TEST(StandardGate, RenamedCircuit) {
    EXPECT_EQ(detected_in("g04_standard_gate_renamed"), std::set<PatternId>{PatternId::IncorrectStandardGate});
}

TEST(StandardGate, ReorderIsReported) {
    EXPECT_EQ(detected_in("g11_reordered_gates"), std::set<PatternId>{PatternId::IncorrectStandardGate});
}

TEST(StandardGate, NonStandardNamesIgnored) {
    EXPECT_FALSE(fires(PatternId::IncorrectStandardGate, "qc = QuantumCircuit(2)\nqc.foo(0)\n",
                       "qc = QuantumCircuit(2)\nqc.h(0)\n"));
}

TEST(StandardGate, RenamingTheCircuitNeverChangesTheVerdict) {
    qpac::testing::ProgramGenerator gen(314);
    const std::regex qc(R"(\bqc\b)");
    for (int i = 0; i < 150; ++i) {
        const auto b = gen.program();
        const auto f = gen.mutate(b);
        const auto buggy = qpac::testing::join_lines(b);
        const auto fixed = qpac::testing::join_lines(f);
        const bool plain = fires(PatternId::IncorrectStandardGate, buggy, fixed);
        EXPECT_EQ(fires(PatternId::IncorrectStandardGate, buggy, std::regex_replace(fixed, qc, "circuit")), plain);
        EXPECT_EQ(fires(PatternId::IncorrectStandardGate, std::regex_replace(buggy, qc, "a"), fixed), plain);
    }
}

// --- opaque gates ----------------------------------------------------------------

TEST(OpaqueGate, ReferenceCase) {
    auto ctx = semantics::build_context(qpac::testing::golden_case("g05_opaque_gate"));
    auto v = detect_incorrect_opaque_gate(ctx);
    EXPECT_TRUE(v.detected);
    EXPECT_EQ(evidence_lines(v), (std::vector<std::pair<FileSide, int>>{{FileSide::Buggy, 2}, {FileSide::Fixed, 4}}));
}

TEST(OpaqueGate, NoOpaqueGates) {
    EXPECT_FALSE(fires(PatternId::IncorrectOpaqueGate, "qc = QuantumCircuit(3)\n",
                       "qc = QuantumCircuit(3)\ngt = sub.to_instruction()\n"));
}

TEST(OpaqueGate, TooFewComposites) {
    EXPECT_FALSE(fires(PatternId::IncorrectOpaqueGate, "a = Gate('a', 3, [])\nb = Gate('b', 3, [])\nqc.append(a, [0])\n",
                       "a = s.to_instruction()\nqc.append(a, [0])\n"));
    EXPECT_TRUE(fires(PatternId::IncorrectOpaqueGate, "a = Gate('a', 3, [])\nb = Gate('b', 3, [])\nqc.append(a, [0])\n",
                      "a = s.to_instruction()\nb = t.to_instruction()\nqc.append(a, [0])\n"));
}

// --- Hadamard --------------------------------------------------------------------

TEST(Hadamard, ReferenceCase) {
    auto ctx = semantics::build_context(qpac::testing::golden_case("g06_hadamard"));
    auto v = detect_incorrect_hadamard(ctx);
    EXPECT_TRUE(v.detected);
    EXPECT_EQ(evidence_lines(v), (std::vector<std::pair<FileSide, int>>{{FileSide::Buggy, 2}, {FileSide::Fixed, 7}}));
}

TEST(Hadamard, EvenEverywhere) {
    EXPECT_FALSE(fires(PatternId::IncorrectHadamard, "qc = QuantumCircuit(2)\nqc.h(0)\nqc.h(0)\n",
                       "qc = QuantumCircuit(2)\nqc.h(1)\nqc.h(1)\n"));
}

TEST(Hadamard, MatchesCountingOracle) {
    qpac::testing::Rng rng(808);
    int positives = 0;
    for (int i = 0; i < 200; ++i) {
        const int n = rng.uniform(1, 4);
        auto b = qpac::testing::hadamard_program(rng, n);
        auto f = qpac::testing::hadamard_program(rng, n);
        const bool expected = qpac::testing::hadamard_oracle(b, f);
        positives += expected;
        EXPECT_EQ(fires(PatternId::IncorrectHadamard, b.source, f.source), expected) << b.source << "---\n"
                                                                                    << f.source;
    }
    EXPECT_GT(positives, 20);
}

// --- measurement -------------------------------------------------------------------

TEST(Measurement, VariantChange) {
    auto ctx = semantics::build_context(qpac::testing::golden_case("g07_measurement_variant"));
    auto v = detect_incorrect_measurement(ctx);
    ASSERT_TRUE(v.detected);
    EXPECT_EQ(v.evidence.at(0).note.rfind("variant:", 0), 0u) << v.evidence.at(0).note;
}

TEST(Measurement, ArgumentChange) {
    auto ctx = semantics::build_context(qpac::testing::golden_case("g08_measurement_arguments"));
    auto v = detect_incorrect_measurement(ctx);
    ASSERT_TRUE(v.detected);
    EXPECT_EQ(v.evidence.at(0).note.rfind("arguments:", 0), 0u) << v.evidence.at(0).note;
    EXPECT_EQ(evidence_lines(v), (std::vector<std::pair<FileSide, int>>{{FileSide::Buggy, 4}, {FileSide::Fixed, 4}}));
}

TEST(Measurement, IdenticalFiles) {
    const std::string src = "qc = QuantumCircuit(2, 2)\nqc.measure(0, 0)\nqc.measure_all()\n";
    EXPECT_FALSE(fires(PatternId::IncorrectMeasurement, src, src));
}

TEST(Measurement, CallCountStage) {
    auto ctx = context_of("qc.measure(0, 0)\n", "qc.measure(0, 0)\nqc.measure(1, 1)\n");
    auto v = detect_incorrect_measurement(ctx);
    ASSERT_TRUE(v.detected);
    EXPECT_EQ(evidence_lines(v), (std::vector<std::pair<FileSide, int>>{{FileSide::Fixed, 2}}));
}

TEST(Measurement, PositionStage) {
    auto v = detect_incorrect_measurement(context_of("qc.h(0)\nqc.measure(0, 0)\nqc.x(0)\n",
                                                     "qc.h(0)\nqc.x(0)\nqc.measure(0, 0)\n"));
    ASSERT_TRUE(v.detected);
    EXPECT_EQ(v.evidence.at(0).note.rfind("position:", 0), 0u);
    // Moving by blank lines or comments is not a position change.
    EXPECT_FALSE(fires(PatternId::IncorrectMeasurement, "qc.h(0)\nqc.measure(0, 0)\n",
                       "qc.h(0)\n\n# now measure\nqc.measure(0, 0)\n"));
}

// --- excessive measurement -----------------------------------------------------------

TEST(Excessive, ReferenceCase) {
    auto ctx = semantics::build_context(qpac::testing::golden_case("g09_excessive_measurement"));
    auto v = detect_excessive_measurement(ctx);
    ASSERT_TRUE(v.detected);
    EXPECT_EQ(v.evidence.at(0).note, "circ: 10 measurements -> 5");
}

TEST(Excessive, EqualCounts) {
    const std::string src = "circ = QuantumCircuit(3, 3)\nfor i in range(3):\n    circ.measure(i, i)\n";
    EXPECT_FALSE(fires(PatternId::ExcessiveMeasurement, src, src));
}

TEST(Excessive, UnrolledEqualsLoop) {
    EXPECT_FALSE(fires(PatternId::ExcessiveMeasurement,
                       "circ = QuantumCircuit(3, 3)\ncirc.measure(0, 0)\ncirc.measure(1, 1)\ncirc.measure(2, 2)\n",
                       "circ = QuantumCircuit(3, 3)\nfor i in range(3):\n    circ.measure(i, i)\n"));
    EXPECT_TRUE(fires(PatternId::ExcessiveMeasurement,
                      "circ = QuantumCircuit(3, 3)\ncirc.measure(0, 0)\ncirc.measure(1, 1)\ncirc.measure(2, 2)\n",
                      "circ = QuantumCircuit(3, 3)\nfor i in [0, 1]:\n    circ.measure(i, i)\n"));
}

TEST(Excessive, ForwardReferencesIgnored) {
    EXPECT_FALSE(fires(PatternId::ExcessiveMeasurement, "circ.measure(0, 0)\ncirc = QuantumCircuit(1, 1)\n",
                       "circ = QuantumCircuit(1, 1)\n"));
}

TEST(Excessive, MatchesUnrolledOracle) {
    qpac::testing::Rng rng(99);
    int positives = 0;
    for (int i = 0; i < 200; ++i) {
        auto b = qpac::testing::measure_program(rng);
        auto f = qpac::testing::measure_program(rng);
        auto ctx = context_of(b.source, f.source);
        std::int64_t total_b = 0, total_f = 0;
        for (const auto& m : ctx.buggy.measures.calls) total_b += m.multiplier;
        for (const auto& m : ctx.fixed.measures.calls) total_f += m.multiplier;
        EXPECT_EQ(total_b, b.total) << b.source;
        EXPECT_EQ(total_f, f.total) << f.source;
        const bool expected = f.total < b.total;
        positives += expected;
        EXPECT_EQ(detect_excessive_measurement(ctx).detected, expected);
    }
    EXPECT_GT(positives, 30);
}

// --- orchestration -------------------------------------------------------------------

TEST(DetectAll, InitializationCaseOnly) {
    auto r = detect_all(semantics::build_context(qpac::testing::golden_case("g01_incorrect_initialization")));
    EXPECT_EQ(r.detected(), std::set<PatternId>{PatternId::IncorrectInitialization});
    ASSERT_EQ(r.verdicts.size(), 7u);
    for (std::size_t i = 0; i < r.verdicts.size(); ++i) EXPECT_EQ(r.verdicts[i].pattern, kAllPatterns[i]);
}

TEST(DetectAll, FoldedConstantNothing) { EXPECT_TRUE(detected_in("g10_folded_constant").empty()); }

TEST(DetectAll, PrunedClassesAreNoted) {
    auto r = detect_all(context_of("x = 1\n", "x = 2\n"));
    EXPECT_TRUE(r.detected().empty());
    for (const auto& v : r.verdicts) EXPECT_EQ(v.note, kPrunedNote);
    EXPECT_EQ(r.warnings.size(), 7u);
}

TEST(DetectAll, UnanalyzablePairReportsNothing) {
    auto r = detect_all(context_of("qc.h(0\n", "qc.h(1)\n"));
    EXPECT_TRUE(r.unanalyzable);
    EXPECT_TRUE(r.detected().empty());
    EXPECT_EQ(r.verdict(PatternId::UnequalBits).note, "pair is unanalyzable");
}

TEST(DetectAll, ReflexiveOnEveryCorpusFile) {
    for (const auto& dir : {qpac::testing::golden_dir(), qpac::testing::negatives_dir()}) {
        for (const auto& c : scan_corpus(dir)) {
            EXPECT_TRUE(detect_all(context_of(c.pair.buggy_source, c.pair.buggy_source)).detected().empty()) << c.name;
            EXPECT_TRUE(detect_all(context_of(c.pair.fixed_source, c.pair.fixed_source)).detected().empty()) << c.name;
        }
    }
}

TEST(DetectAll, ReflexiveOnGeneratedPrograms) {
    qpac::testing::ProgramGenerator gen(2718);
    for (int i = 0; i < 150; ++i) {
        const auto src = qpac::testing::join_lines(gen.program());
        EXPECT_TRUE(detect_all(context_of(src, src)).detected().empty()) << src;
    }
}

TEST(DetectAll, OrderAndThreadingDoNotMatter) {
    qpac::testing::ProgramGenerator gen(1);
    std::mt19937_64 rng(2);
    for (int i = 0; i < 60; ++i) {
        const auto b = gen.program();
        auto ctx = context_of(qpac::testing::join_lines(b), qpac::testing::join_lines(gen.mutate(b)));
        const auto base = detect_all(ctx);
        std::vector<PatternId> order(kAllPatterns.begin(), kAllPatterns.end());
        for (int k = 0; k < 5; ++k) {
            std::shuffle(order.begin(), order.end(), rng);
            EXPECT_EQ(detect_all(ctx, order), base);
        }
        EXPECT_EQ(detect_all_parallel(ctx), base);
        for (auto id : kAllPatterns) EXPECT_EQ(run_detector(id, ctx), base.verdict(id));
    }
}

TEST(DetectAll, CoarsePruningLosesNothingOnCorpus) {
    for (const auto& dir : {qpac::testing::golden_dir(), qpac::testing::negatives_dir()}) {
        for (const auto& c : scan_corpus(dir)) {
            auto ctx = semantics::build_context(c.pair);
            auto unpruned = ctx;
            unpruned.classes = {kAllClasses.begin(), kAllClasses.end()};
            const auto full = detect_all(unpruned).detected();
            const auto pruned = detect_all(ctx).detected();
            EXPECT_TRUE(std::includes(pruned.begin(), pruned.end(), full.begin(), full.end())) << c.name;
        }
    }
}
