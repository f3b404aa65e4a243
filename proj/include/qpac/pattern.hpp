#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace qpac {

enum class PatternClass { Initialization, Operation, Measurement };

enum class PatternId {
    IncorrectInitialization,
    UnequalBits,
    IncorrectStandardGate,
    IncorrectOpaqueGate,
    IncorrectHadamard,
    IncorrectMeasurement,
    ExcessiveMeasurement,
};

inline constexpr std::array<PatternId, 7> kAllPatterns = {
    PatternId::IncorrectInitialization, PatternId::UnequalBits,
    PatternId::IncorrectStandardGate,   PatternId::IncorrectOpaqueGate,
    PatternId::IncorrectHadamard,       PatternId::IncorrectMeasurement,
    PatternId::ExcessiveMeasurement,
};

inline constexpr std::array<PatternClass, 3> kAllClasses = {
    PatternClass::Initialization, PatternClass::Operation, PatternClass::Measurement};

std::string_view to_string(PatternId id) noexcept;
std::string_view to_string(PatternClass c) noexcept;
std::optional<PatternId> pattern_from_string(std::string_view s) noexcept;
std::optional<PatternClass> class_from_string(std::string_view s) noexcept;

// Category each pattern belongs to.
PatternClass class_of(PatternId id) noexcept;

}  // namespace qpac
