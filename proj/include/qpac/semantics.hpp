#pragma once

// Program facts resolved from the ASTs, and the per-pair DetectionContext
// that every detector reads. A context is built once per pair (one parse per
// file) and is immutable afterwards.

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "qpac/filters.hpp"
#include "qpac/pairio.hpp"
#include "qpac/pattern.hpp"
#include "qpac/pyast.hpp"

namespace qpac::semantics {

using filters::HadamardLedger;
using filters::RegisterTable;
using pyast::Warning;

struct CircuitInfo {
    std::int64_t qubits = 0;
    std::int64_t clbits = 0;
    int line = 0;

    bool operator==(const CircuitInfo&) const = default;
};

struct CircuitTable {
    std::map<std::string, CircuitInfo> circuits;
    std::vector<Warning> warnings;
};

// A method call on a known circuit, e.g. `qc.cx(0, 1)`. Arguments are
// constant-folded.
struct GateCall {
    std::string circuit;
    std::string gate;
    std::vector<pyast::ExprPtr> qubit_args;
    int line = 0;
};

enum class MeasureVariant { Measure, MeasureAll, MeasureInactive };

std::string_view to_string(MeasureVariant v) noexcept;
std::optional<MeasureVariant> measure_variant_from(std::string_view method) noexcept;

struct MeasureCall {
    std::string circuit;
    MeasureVariant variant = MeasureVariant::Measure;
    std::vector<pyast::ExprPtr> args;  // folded
    int line = 0;
    // Product of the iteration counts of the enclosing loops.
    std::int64_t multiplier = 1;
    // Index of this call among all method-call statements on the same receiver.
    int ordinal = 0;
};

struct MeasureCalls {
    std::vector<MeasureCall> calls;
    std::vector<Warning> warnings;
};

// Builtin gate names. Membership is case-sensitive.
class StandardGateTable {
public:
    static std::shared_ptr<const StandardGateTable> builtin();
    // One gate name per line; blank lines and `#` comments ignored.
    static StandardGateTable from_text(std::string_view text);
    static StandardGateTable load(const std::filesystem::path& path);

    [[nodiscard]] bool contains(std::string_view name) const;
    [[nodiscard]] const std::set<std::string, std::less<>>& names() const noexcept { return names_; }

private:
    std::set<std::string, std::less<>> names_;
};

// Builtin table, or the file named by QPAC_GATE_TABLE when set.
std::shared_ptr<const StandardGateTable> gate_table_from_environment();

struct OpaqueGates {
    std::int64_t count = 0;
    std::set<std::string> names;
    std::vector<int> lines;
};

struct CompositeWraps {
    std::int64_t count = 0;
    std::vector<int> lines;
};

CircuitTable extract_circuits(const pyast::ModuleAst& ast, const RegisterTable& regs);

std::vector<GateCall> extract_gate_calls(const pyast::ModuleAst& ast, const StandardGateTable& gates,
                                         const CircuitTable& circuits);

OpaqueGates extract_opaque_gates(const pyast::ModuleAst& ast, std::vector<Warning>* warnings = nullptr);

CompositeWraps extract_composite_wraps(const pyast::ModuleAst& ast);

MeasureCalls extract_measure_calls(const pyast::ModuleAst& ast);

// Iteration count of a `for` over range(...) or a list literal; 1 (with a
// warning) when the bounds are not constant.
std::int64_t expand_loop_multiplier(const pyast::For& loop, std::vector<Warning>* warnings = nullptr);

// Ledger with a zero slot for every qubit of every resolved circuit.
HadamardLedger seed_hadamard_ledger(const CircuitTable& circuits);

// Everything the detectors know about one file.
struct FileFacts {
    pyast::ModuleAst ast;
    RegisterTable registers;
    CircuitTable circuits;
    filters::GateLineTable gate_lines;
    filters::MeasureLineTable measure_lines;
    std::vector<GateCall> gate_calls;
    MeasureCalls measures;
    HadamardLedger hadamards;
    OpaqueGates opaque;
    CompositeWraps composite;
    // Lines of `.+QuantumCircuit.*` matches.
    std::vector<int> circuit_lines;
};

enum class FileSide { Buggy, Fixed };
std::string_view to_string(FileSide side) noexcept;

struct DetectionContext {
    std::string pair_id;
    FileFacts buggy;
    FileFacts fixed;
    std::set<PatternClass> classes;
    std::shared_ptr<const StandardGateTable> gates;
    bool unanalyzable = false;
    std::vector<std::string> warnings;

    [[nodiscard]] const FileFacts& side(FileSide s) const { return s == FileSide::Buggy ? buggy : fixed; }
};

FileFacts analyze_file(std::string_view source, const StandardGateTable& gates);

// Parses each file exactly once. A ParseError in either file yields an
// unanalyzable context instead of an exception.
DetectionContext build_context(const CodePair& pair,
                               std::shared_ptr<const StandardGateTable> gates = StandardGateTable::builtin());

}  // namespace qpac::semantics
