#pragma once

// Regex passes over raw source text.
//
// The coarse filter decides which pattern classes are worth analyzing at all;
// the fine filters pull line-level tables out of the text for individual
// detectors. Everything here is line-local and depends only on the text.

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "qpac/pairio.hpp"
#include "qpac/pattern.hpp"
#include "qpac/pyast.hpp"

namespace qpac::filters {

using pyast::Warning;

std::set<PatternClass> coarse_classify(std::string_view buggy_source, std::string_view fixed_source);
std::set<PatternClass> coarse_classify(const CodePair& pair);

struct GateLine {
    int line = 0;
    std::string receiver;
    std::string method;
    std::string raw_args;

    bool operator==(const GateLine&) const = default;
};
using GateLineTable = std::vector<GateLine>;

// One entry per `<name>.<name>(...)` line.
GateLineTable filter_gate_lines(std::string_view source);

enum class RegisterKind { Quantum, Classical };

struct RegisterInfo {
    RegisterKind kind = RegisterKind::Quantum;
    std::int64_t size = 0;
    int line = 0;

    bool operator==(const RegisterInfo&) const = default;
};

struct RegisterTable {
    std::map<std::string, RegisterInfo> entries;
    std::vector<Warning> warnings;
};

RegisterTable filter_registers(std::string_view source);

// line -> trimmed text of every line matching `.+\.measure.*`
using MeasureLineTable = std::map<int, std::string>;

MeasureLineTable filter_measures(std::string_view source);

// circuit -> qubit index -> number of Hadamards applied.
struct HadamardLedger {
    std::map<std::string, std::map<std::int64_t, std::int64_t>> counts;
    // Source lines of the counted applications, per slot.
    std::map<std::string, std::map<std::int64_t, std::vector<int>>> lines;
    std::vector<Warning> warnings;
};

// Adds one to the ledger slot of every `<circuit>.h(<qubit>)` line. Only
// circuits and qubit slots already present in the ledger are counted; the
// rest are reported as warnings.
HadamardLedger count_hadamards(std::string_view source, HadamardLedger ledger);

// Splits text into physical lines (without terminators), 1-based by index+1.
std::vector<std::string_view> split_lines(std::string_view source);

}  // namespace qpac::filters
