#pragma once

// The seven bug-fix pattern detectors. Each one is a pure function of a
// DetectionContext; detect_all runs every detector and joins the verdicts.

#include <set>
#include <span>
#include <string>
#include <vector>

#include "qpac/pattern.hpp"
#include "qpac/semantics.hpp"

namespace qpac::detectors {

using semantics::DetectionContext;
using semantics::FileSide;

struct Evidence {
    FileSide file = FileSide::Buggy;
    int line = 0;
    std::string note;

    bool operator==(const Evidence&) const = default;
};

struct PatternVerdict {
    PatternId pattern = PatternId::IncorrectInitialization;
    bool detected = false;
    std::vector<Evidence> evidence;  // empty unless detected
    // Why a negative verdict was not evaluated ("pruned by coarse filter").
    std::string note;

    bool operator==(const PatternVerdict&) const = default;
};

struct DetectionReport {
    std::string pair_id;
    bool unanalyzable = false;
    std::set<PatternClass> classes_considered;
    // One verdict per pattern, in kAllPatterns order.
    std::vector<PatternVerdict> verdicts;
    std::vector<std::string> warnings;

    [[nodiscard]] const PatternVerdict& verdict(PatternId id) const;
    [[nodiscard]] std::set<PatternId> detected() const;

    bool operator==(const DetectionReport&) const = default;
};

inline constexpr std::string_view kPrunedNote = "pruned by coarse filter";

PatternVerdict detect_incorrect_initialization(const DetectionContext& ctx);
PatternVerdict detect_unequal_bits(const DetectionContext& ctx);
PatternVerdict detect_incorrect_standard_gate(const DetectionContext& ctx);
PatternVerdict detect_incorrect_opaque_gate(const DetectionContext& ctx);
PatternVerdict detect_incorrect_hadamard(const DetectionContext& ctx);
PatternVerdict detect_incorrect_measurement(const DetectionContext& ctx);
PatternVerdict detect_excessive_measurement(const DetectionContext& ctx);

PatternVerdict run_detector(PatternId id, const DetectionContext& ctx);

DetectionReport detect_all(const DetectionContext& ctx);

// Runs the detectors in the given order (each id at most once; missing ids
// are run afterwards). The report does not depend on the order.
DetectionReport detect_all(const DetectionContext& ctx, std::span<const PatternId> order);

// Same report, with each detector evaluated on its own thread.
DetectionReport detect_all_parallel(const DetectionContext& ctx);

}  // namespace qpac::detectors
