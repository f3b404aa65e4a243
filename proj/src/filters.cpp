#include "qpac/filters.hpp"

#include <regex>

namespace qpac::filters {
namespace {

// Coarse class regexes. Only the measurement one is given verbatim in the
// method description; the other two are supersets of their fine filters.
const std::regex& measurement_coarse() {
    static const std::regex re(R"(.+measure.*)");
    return re;
}
const std::regex& initialization_coarse() {
    static const std::regex re(R"(.+(QuantumCircuit|QuantumRegister|ClassicalRegister).*)");
    return re;
}
const std::regex& operation_coarse() {
    static const std::regex re(R"(.+\..*)");
    return re;
}

// `.+\..*` narrowed so that receiver, method and argument text can be read off.
const std::regex& gate_line() {
    static const std::regex re(R"(^\s*(\w+)\.(\w+)\((.*)\)\s*(#.*)?$)");
    return re;
}

const std::regex& register_line() {
    static const std::regex re(
        R"(^\s*(\w+)\s*=\s*((?:\w+\.)*(QuantumRegister|ClassicalRegister)\(.*\))\s*(#.*)?$)");
    return re;
}

const std::regex& measure_line() {
    static const std::regex re(R"(.+\.measure.*)");
    return re;
}

// Circuit regex `.+\.h` and Qubit regex `\.h(...)` combined.
const std::regex& hadamard_line() {
    static const std::regex re(R"(^\s*(\w+)\.h\((.*)\)\s*(#.*)?$)");
    return re;
}

bool any_line_matches(std::string_view source, const std::regex& re) {
    for (auto line : split_lines(source)) {
        if (std::regex_search(line.begin(), line.end(), re)) return true;
    }
    return false;
}

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<std::string_view> split_lines(std::string_view source) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start < source.size()) {
        auto nl = source.find('\n', start);
        if (nl == std::string_view::npos) nl = source.size();
        std::string_view line = source.substr(start, nl - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        start = nl + 1;
    }
    return lines;
}

std::set<PatternClass> coarse_classify(std::string_view buggy_source, std::string_view fixed_source) {
    std::set<PatternClass> out;
    const std::pair<PatternClass, const std::regex*> rules[] = {
        {PatternClass::Initialization, &initialization_coarse()},
        {PatternClass::Operation, &operation_coarse()},
        {PatternClass::Measurement, &measurement_coarse()},
    };
    for (const auto& [cls, re] : rules) {
        if (any_line_matches(buggy_source, *re) || any_line_matches(fixed_source, *re)) {
            out.insert(cls);
        }
    }
    return out;
}

std::set<PatternClass> coarse_classify(const CodePair& pair) {
    return coarse_classify(pair.buggy_source, pair.fixed_source);
}

GateLineTable filter_gate_lines(std::string_view source) {
    GateLineTable table;
    const auto lines = split_lines(source);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        std::match_results<std::string_view::const_iterator> m;
        if (!std::regex_search(lines[i].begin(), lines[i].end(), m, gate_line())) continue;
        table.push_back(GateLine{static_cast<int>(i + 1), m[1].str(), m[2].str(), m[3].str()});
    }
    return table;
}

RegisterTable filter_registers(std::string_view source) {
    RegisterTable table;
    const auto lines = split_lines(source);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const int line_no = static_cast<int>(i + 1);
        std::match_results<std::string_view::const_iterator> m;
        if (!std::regex_search(lines[i].begin(), lines[i].end(), m, register_line())) continue;
        const std::string name = m[1].str();
        const RegisterKind kind =
            m[3].str() == "QuantumRegister" ? RegisterKind::Quantum : RegisterKind::Classical;

        auto call_expr = pyast::parse_expression(m[2].str(), line_no);
        const pyast::Call* call = call_expr ? (*call_expr)->as<pyast::Call>() : nullptr;
        if (!call) {
            table.warnings.push_back({line_no, "register '" + name + "': unparsable constructor"});
            continue;
        }
        pyast::ExprPtr size_arg;
        if (!call->args.empty()) {
            size_arg = call->args.front();
        } else {
            for (const auto& kw : call->keywords) {
                if (kw.name == "size") size_arg = kw.value;
            }
        }
        auto size = pyast::constant_value(size_arg);
        if (!size || *size < 0) {
            table.warnings.push_back(
                {line_no, "register '" + name + "': size is not a non-negative integer constant"});
            continue;
        }
        table.entries[name] = RegisterInfo{kind, *size, line_no};
    }
    return table;
}

MeasureLineTable filter_measures(std::string_view source) {
    MeasureLineTable table;
    const auto lines = split_lines(source);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (std::regex_search(lines[i].begin(), lines[i].end(), measure_line())) {
            table.emplace(static_cast<int>(i + 1), std::string(trim(lines[i])));
        }
    }
    return table;
}

HadamardLedger count_hadamards(std::string_view source, HadamardLedger ledger) {
    const auto lines = split_lines(source);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const int line_no = static_cast<int>(i + 1);
        std::match_results<std::string_view::const_iterator> m;
        if (!std::regex_search(lines[i].begin(), lines[i].end(), m, hadamard_line())) continue;
        const std::string circuit = m[1].str();
        auto slots = ledger.counts.find(circuit);
        if (slots == ledger.counts.end()) {
            ledger.warnings.push_back(
                {line_no, "Hadamard on '" + circuit + "', which is not a known circuit"});
            continue;
        }
        auto arg = pyast::parse_expression(m[2].str(), line_no);
        std::vector<pyast::ExprPtr> qubits;
        if (arg) {
            pyast::ExprPtr folded = pyast::fold_constants(*arg);
            if (const auto* list = folded->as<pyast::ListLit>()) {
                qubits = list->elements;
            } else {
                qubits.push_back(folded);
            }
        }
        if (qubits.empty()) {
            ledger.warnings.push_back({line_no, "Hadamard argument is not a qubit index"});
            continue;
        }
        for (const auto& q : qubits) {
            const auto* k = q->as<pyast::IntConst>();
            if (!k) {
                ledger.warnings.push_back(
                    {line_no, "Hadamard qubit '" + pyast::unparse(*q) + "' is not a constant"});
                continue;
            }
            auto slot = slots->second.find(k->value);
            if (slot == slots->second.end()) {
                ledger.warnings.push_back({line_no, "Hadamard qubit " + std::to_string(k->value) +
                                                        " is outside circuit '" + circuit + "'"});
                continue;
            }
            ++slot->second;
            ledger.lines[circuit][k->value].push_back(line_no);
        }
    }
    return ledger;
}

}  // namespace qpac::filters
