#include "qpac/report.hpp"

#include <algorithm>
#include <atomic>
#include <iomanip>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace qpac::report {

using nlohmann::ordered_json;
using detectors::Evidence;
using detectors::PatternVerdict;
using semantics::FileSide;

std::optional<Format> format_from_string(std::string_view s) noexcept {
    if (s == "json") return Format::Json;
    if (s == "text") return Format::Text;
    return std::nullopt;
}

namespace {

ordered_json report_to_json(const DetectionReport& r) {
    ordered_json j;
    j["pair_id"] = r.pair_id;
    j["unanalyzable"] = r.unanalyzable;
    j["classes_considered"] = ordered_json::array();
    for (auto c : r.classes_considered) j["classes_considered"].push_back(std::string(to_string(c)));
    j["patterns"] = ordered_json::array();
    for (const auto& v : r.verdicts) {
        ordered_json p;
        p["id"] = std::string(to_string(v.pattern));
        p["detected"] = v.detected;
        p["evidence"] = ordered_json::array();
        for (const auto& e : v.evidence) {
            ordered_json ev;
            ev["file"] = std::string(semantics::to_string(e.file));
            ev["line"] = e.line;
            ev["note"] = e.note;
            p["evidence"].push_back(std::move(ev));
        }
        j["patterns"].push_back(std::move(p));
    }
    j["warnings"] = r.warnings;
    return j;
}

std::string text_report(const DetectionReport& r) {
    std::ostringstream os;
    os << "pair: " << r.pair_id << (r.unanalyzable ? "  (UNANALYZABLE)" : "") << "\n";
    os << "classes considered:";
    if (r.classes_considered.empty()) os << " none";
    for (auto c : r.classes_considered) os << ' ' << to_string(c);
    os << "\n\n";
    os << std::left << std::setw(26) << "pattern" << std::setw(10) << "detected" << "evidence\n";
    for (const auto& v : r.verdicts) {
        os << std::left << std::setw(26) << to_string(v.pattern) << std::setw(10) << (v.detected ? "yes" : "no");
        if (v.evidence.empty()) {
            os << (v.note.empty() ? "-" : "(" + v.note + ")") << "\n";
            continue;
        }
        for (std::size_t i = 0; i < v.evidence.size(); ++i) {
            const auto& e = v.evidence[i];
            if (i) os << std::string(36, ' ');
            os << semantics::to_string(e.file) << ':' << e.line << "  " << e.note << "\n";
        }
    }
    if (!r.warnings.empty()) {
        os << "\nwarnings:\n";
        for (const auto& w : r.warnings) os << "  " << w << "\n";
    }
    return os.str();
}

}  // namespace

std::string emit_report(const DetectionReport& report, Format format) {
    if (format == Format::Text) return text_report(report);
    return report_to_json(report).dump(2) + "\n";
}

DetectionReport parse_report_json(std::string_view json_text) {
    try {
        const auto j = ordered_json::parse(json_text);
        DetectionReport r;
        r.pair_id = j.at("pair_id").get<std::string>();
        r.unanalyzable = j.at("unanalyzable").get<bool>();
        for (const auto& c : j.at("classes_considered")) {
            auto cls = class_from_string(c.get<std::string>());
            if (!cls) throw std::invalid_argument("unknown class " + c.dump());
            r.classes_considered.insert(*cls);
        }
        for (const auto& p : j.at("patterns")) {
            auto id = pattern_from_string(p.at("id").get<std::string>());
            if (!id) throw std::invalid_argument("unknown pattern " + p.at("id").dump());
            PatternVerdict v{*id, p.at("detected").get<bool>(), {}, {}};
            for (const auto& e : p.at("evidence")) {
                const auto file = e.at("file").get<std::string>();
                if (file != "buggy" && file != "fixed") throw std::invalid_argument("bad evidence file " + file);
                v.evidence.push_back(Evidence{file == "buggy" ? FileSide::Buggy : FileSide::Fixed,
                                              e.at("line").get<int>(), e.at("note").get<std::string>()});
            }
            // Notes are implied by the report header, not serialized per pattern.
            if (r.unanalyzable) {
                v.note = "pair is unanalyzable";
            } else if (!r.classes_considered.contains(class_of(*id))) {
                v.note = std::string(detectors::kPrunedNote);
            }
            r.verdicts.push_back(std::move(v));
        }
        r.warnings = j.at("warnings").get<std::vector<std::string>>();
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("malformed report: ") + e.what());
    }
}

DetectionReport restrict_patterns(const DetectionReport& report, const std::set<PatternId>& patterns) {
    DetectionReport out = report;
    std::erase_if(out.verdicts, [&](const PatternVerdict& v) { return !patterns.contains(v.pattern); });
    return out;
}

// ---------------------------------------------------------------------------

namespace {

std::int64_t total_measurements(const semantics::FileFacts& f) {
    std::int64_t n = 0;
    for (const auto& m : f.measures.calls) n += m.multiplier;
    return n;
}

std::int64_t parity_flips(const semantics::FileFacts& b, const semantics::FileFacts& f) {
    std::int64_t flips = 0;
    for (const auto& [circuit, slots] : b.hadamards.counts) {
        auto other = f.hadamards.counts.find(circuit);
        if (other == f.hadamards.counts.end()) continue;
        for (const auto& [qubit, count] : slots) {
            auto it = other->second.find(qubit);
            if (it != other->second.end() && (count % 2) != (it->second % 2)) ++flips;
        }
    }
    return flips;
}

}  // namespace

std::vector<FeatureRecord> extract_features(const semantics::DetectionContext& ctx, const DetectionReport& report) {
    const auto& b = ctx.buggy;
    const auto& f = ctx.fixed;
    const std::int64_t values[] = {
        static_cast<std::int64_t>(f.gate_calls.size()) - static_cast<std::int64_t>(b.gate_calls.size()),
        total_measurements(f) - total_measurements(b),
        parity_flips(b, f),
        b.opaque.count - f.opaque.count,
        f.composite.count - b.composite.count,
        static_cast<std::int64_t>(b.circuits.circuits.size()),
        static_cast<std::int64_t>(b.registers.entries.size()),
    };
    std::vector<FeatureRecord> out;
    for (const auto& v : report.verdicts) {
        FeatureRecord rec{ctx.pair_id, v.pattern, v.detected, {}};
        for (std::size_t i = 0; i < kFeatureNames.size(); ++i) {
            rec.features.emplace_back(std::string(kFeatureNames[i]), values[i]);
        }
        out.push_back(std::move(rec));
    }
    return out;
}

std::string emit_feature_record(const FeatureRecord& record) {
    ordered_json j;
    j["pair_id"] = record.pair_id;
    j["pattern"] = std::string(to_string(record.pattern));
    j["detected"] = record.detected;
    j["features"] = ordered_json::object();
    for (const auto& [name, value] : record.features) j["features"][name] = value;
    return j.dump() + "\n";
}

// ---------------------------------------------------------------------------

std::size_t CorpusScore::mismatches() const {
    return static_cast<std::size_t>(std::count_if(cases.begin(), cases.end(),
                                                  [](const CaseResult& c) { return !c.matches(); }));
}

std::vector<CaseOutcome> analyze_corpus(const std::vector<CorpusCase>& cases,
                                        std::shared_ptr<const semantics::StandardGateTable> gates) {
    std::vector<CaseOutcome> out(cases.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < cases.size(); i = next++) {
            out[i].source = &cases[i];
            if (cases[i].error) continue;
            out[i].context = semantics::build_context(cases[i].pair, gates);
            out[i].report = detectors::detect_all(*out[i].context);
        }
    };
    const std::size_t n_threads =
        std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, std::max<std::size_t>(cases.size(), 1));
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < n_threads; ++t) pool.emplace_back(worker);
    worker();
    return out;
}

CorpusScore score_corpus(const std::vector<CaseOutcome>& outcomes) {
    CorpusScore score;
    for (auto id : kAllPatterns) score.per_pattern[id] = {};
    for (const auto& o : outcomes) {
        CaseResult r{o.source->name, o.source->expected_patterns, {}, o.source->error};
        if (o.report) {
            r.detected = o.report->detected();
            if (o.report->unanalyzable) r.error = "unanalyzable: parse error";
        }
        if (!r.error) {
            for (auto id : kAllPatterns) {
                const bool want = r.expected.contains(id);
                const bool got = r.detected.contains(id);
                auto& s = score.per_pattern[id];
                (want ? (got ? s.true_pos : s.false_neg) : (got ? s.false_pos : s.true_neg))++;
            }
        }
        score.cases.push_back(std::move(r));
    }
    std::sort(score.cases.begin(), score.cases.end(),
              [](const CaseResult& a, const CaseResult& b) { return a.name < b.name; });
    return score;
}

namespace {

std::vector<std::string> names(const std::set<PatternId>& ids) {
    std::vector<std::string> out;
    for (auto id : ids) out.emplace_back(to_string(id));
    return out;
}

std::string join(const std::vector<std::string>& parts) {
    if (parts.empty()) return "{}";
    std::string out = "{";
    for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? ", " : "") + parts[i];
    return out + "}";
}

}  // namespace

std::string emit_corpus_score(const CorpusScore& score, Format format) {
    if (format == Format::Json) {
        ordered_json j;
        j["cases"] = ordered_json::array();
        for (const auto& c : score.cases) {
            ordered_json cj;
            cj["case"] = c.name;
            cj["match"] = c.matches();
            cj["expected"] = names(c.expected);
            cj["detected"] = names(c.detected);
            cj["error"] = c.error ? ordered_json(*c.error) : ordered_json(nullptr);
            j["cases"].push_back(std::move(cj));
        }
        j["patterns"] = ordered_json::object();
        for (const auto& [id, s] : score.per_pattern) {
            j["patterns"][std::string(to_string(id))] = {{"true_pos", s.true_pos},
                                                         {"false_pos", s.false_pos},
                                                         {"true_neg", s.true_neg},
                                                         {"false_neg", s.false_neg}};
        }
        j["total_cases"] = score.cases.size();
        j["mismatches"] = score.mismatches();
        return j.dump(2) + "\n";
    }

    std::ostringstream os;
    for (const auto& c : score.cases) {
        os << (c.matches() ? "ok    " : "FAIL  ") << c.name;
        if (c.error) {
            os << "  error: " << *c.error;
        } else if (!c.matches()) {
            os << "  expected " << join(names(c.expected)) << " got " << join(names(c.detected));
        }
        os << "\n";
    }
    os << "\n" << std::left << std::setw(26) << "pattern" << "  tp  fp  tn  fn\n";
    for (const auto& [id, s] : score.per_pattern) {
        os << std::left << std::setw(26) << to_string(id) << std::right << std::setw(4) << s.true_pos
           << std::setw(4) << s.false_pos << std::setw(4) << s.true_neg << std::setw(4) << s.false_neg << "\n";
    }
    os << "\n" << score.cases.size() << " cases, " << score.mismatches() << " mismatches\n";
    return os.str();
}

}  // namespace qpac::report
