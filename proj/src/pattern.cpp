#include "qpac/pattern.hpp"

namespace qpac {

std::string_view to_string(PatternId id) noexcept {
    switch (id) {
        case PatternId::IncorrectInitialization: return "incorrect_initialization";
        case PatternId::UnequalBits: return "unequal_bits";
        case PatternId::IncorrectStandardGate: return "incorrect_standard_gate";
        case PatternId::IncorrectOpaqueGate: return "incorrect_opaque_gate";
        case PatternId::IncorrectHadamard: return "incorrect_hadamard";
        case PatternId::IncorrectMeasurement: return "incorrect_measurement";
        case PatternId::ExcessiveMeasurement: return "excessive_measurement";
    }
    return "unknown";
}

std::string_view to_string(PatternClass c) noexcept {
    switch (c) {
        case PatternClass::Initialization: return "initialization";
        case PatternClass::Operation: return "operation";
        case PatternClass::Measurement: return "measurement";
    }
    return "unknown";
}

std::optional<PatternId> pattern_from_string(std::string_view s) noexcept {
    for (auto id : kAllPatterns) {
        if (to_string(id) == s) return id;
    }
    return std::nullopt;
}

std::optional<PatternClass> class_from_string(std::string_view s) noexcept {
    for (auto c : kAllClasses) {
        if (to_string(c) == s) return c;
    }
    return std::nullopt;
}

PatternClass class_of(PatternId id) noexcept {
    switch (id) {
        case PatternId::IncorrectInitialization:
        case PatternId::UnequalBits:
            return PatternClass::Initialization;
        case PatternId::IncorrectStandardGate:
        case PatternId::IncorrectOpaqueGate:
        case PatternId::IncorrectHadamard:
            return PatternClass::Operation;
        case PatternId::IncorrectMeasurement:
        case PatternId::ExcessiveMeasurement:
            return PatternClass::Measurement;
    }
    return PatternClass::Operation;
}

}  // namespace qpac
