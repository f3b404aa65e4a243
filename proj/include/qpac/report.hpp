#pragma once

// Report serialization, corpus scoring and feature export.

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qpac/detectors.hpp"
#include "qpac/pairio.hpp"

namespace qpac::report {

using detectors::DetectionReport;

enum class Format { Json, Text };
std::optional<Format> format_from_string(std::string_view s) noexcept;

// JSON layout (keys in this order):
//   {"pair_id", "unanalyzable", "classes_considered": [...],
//    "patterns": [{"id", "detected", "evidence": [{"file", "line", "note"}]}],
//    "warnings": [...]}
// Output is deterministic and newline-terminated.
std::string emit_report(const DetectionReport& report, Format format);

// Inverse of emit_report(.., Format::Json). Throws std::invalid_argument.
DetectionReport parse_report_json(std::string_view json_text);

// Keeps only the verdicts for `patterns`; verdict values are untouched.
DetectionReport restrict_patterns(const DetectionReport& report, const std::set<PatternId>& patterns);

// Numeric summary of one pair, repeated for each pattern's record.
inline constexpr std::array<std::string_view, 7> kFeatureNames = {
    "gate_call_count_delta", "measure_count_delta", "hadamard_parity_flips", "opaque_delta",
    "composite_delta",       "circuit_count",       "register_count"};

struct FeatureRecord {
    std::string pair_id;
    PatternId pattern = PatternId::IncorrectInitialization;
    bool detected = false;
    std::vector<std::pair<std::string, std::int64_t>> features;  // kFeatureNames order
};

std::vector<FeatureRecord> extract_features(const semantics::DetectionContext& ctx,
                                            const DetectionReport& report);

// Single JSON line, newline-terminated.
std::string emit_feature_record(const FeatureRecord& record);

struct PatternScore {
    std::int64_t true_pos = 0;
    std::int64_t false_pos = 0;
    std::int64_t true_neg = 0;
    std::int64_t false_neg = 0;
};

struct CaseResult {
    std::string name;
    std::set<PatternId> expected;
    std::set<PatternId> detected;
    std::optional<std::string> error;
    [[nodiscard]] bool matches() const { return !error && expected == detected; }
};

struct CorpusScore {
    std::map<PatternId, PatternScore> per_pattern;
    std::vector<CaseResult> cases;  // sorted by case name
    [[nodiscard]] std::size_t mismatches() const;
};

struct CaseOutcome {
    const CorpusCase* source = nullptr;
    std::optional<semantics::DetectionContext> context;
    std::optional<DetectionReport> report;
};

// Builds a context and report for every loadable case. Cases run
// concurrently; results come back in input order.
std::vector<CaseOutcome> analyze_corpus(const std::vector<CorpusCase>& cases,
                                        std::shared_ptr<const semantics::StandardGateTable> gates);

CorpusScore score_corpus(const std::vector<CaseOutcome>& outcomes);

std::string emit_corpus_score(const CorpusScore& score, Format format);

}  // namespace qpac::report
