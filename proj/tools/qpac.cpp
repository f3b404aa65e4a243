// qpac: quantum bug-fix pattern classifier.
//
//   qpac detect --buggy <path> --fixed <path> [--format json|text] [--patterns id,id,...]
//   qpac corpus <root> [--format json|text]
//   qpac features <root> --out <path>
//
// Exit codes: 0 analyzed / corpus clean, 1 corpus mismatch, 2 I/O or parse
// failure, 64 usage error. QPAC_GATE_TABLE names an alternative gate list.

#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qpac/detectors.hpp"
#include "qpac/pairio.hpp"
#include "qpac/report.hpp"
#include "qpac/semantics.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitMismatch = 1;
constexpr int kExitIo = 2;
constexpr int kExitUsage = 64;

using qpac::report::Format;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Format parse_format(const std::string& s) {
    auto f = qpac::report::format_from_string(s);
    if (!f) throw UsageError("unknown format '" + s + "' (expected json or text)");
    return *f;
}

std::set<qpac::PatternId> parse_pattern_list(const std::string& list) {
    std::set<qpac::PatternId> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        auto id = qpac::pattern_from_string(item);
        if (!id) throw UsageError("unknown pattern id '" + item + "'");
        out.insert(*id);
    }
    return out;
}

int cmd_detect(const std::string& buggy, const std::string& fixed, const std::string& format,
               const std::optional<std::string>& patterns) {
    const Format fmt = parse_format(format);
    std::optional<std::set<qpac::PatternId>> subset;
    if (patterns) subset = parse_pattern_list(*patterns);

    const auto gates = qpac::semantics::gate_table_from_environment();
    const auto pair = qpac::load_pair(buggy, fixed);
    const auto ctx = qpac::semantics::build_context(pair, gates);
    auto report = qpac::detectors::detect_all(ctx);
    if (subset) report = qpac::report::restrict_patterns(report, *subset);
    std::cout << qpac::report::emit_report(report, fmt);
    if (report.unanalyzable) {
        for (const auto& w : report.warnings) {
            if (w.find("parse error") != std::string::npos) std::cerr << "qpac: " << w << "\n";
        }
        return kExitIo;
    }
    return kExitOk;
}

int cmd_corpus(const std::string& root, const std::string& format) {
    const Format fmt = parse_format(format);
    const auto gates = qpac::semantics::gate_table_from_environment();
    const auto cases = qpac::scan_corpus(root);
    const auto outcomes = qpac::report::analyze_corpus(cases, gates);
    const auto score = qpac::report::score_corpus(outcomes);
    std::cout << qpac::report::emit_corpus_score(score, fmt);
    return score.mismatches() == 0 ? kExitOk : kExitMismatch;
}

int cmd_features(const std::string& root, const std::string& out_path) {
    const auto gates = qpac::semantics::gate_table_from_environment();
    const auto cases = qpac::scan_corpus(root);
    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out) {
        std::cerr << "qpac: " << out_path << ": cannot open for writing\n";
        return kExitIo;
    }
    const auto outcomes = qpac::report::analyze_corpus(cases, gates);
    for (const auto& o : outcomes) {
        if (!o.report) {
            std::cerr << "qpac: skipping case " << o.source->name << ": " << o.source->error.value_or("") << "\n";
            continue;
        }
        for (const auto& rec : qpac::report::extract_features(*o.context, *o.report)) {
            out << qpac::report::emit_feature_record(rec);
        }
    }
    out.flush();
    if (!out) {
        std::cerr << "qpac: " << out_path << ": write failed\n";
        return kExitIo;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Classify quantum bug-fix patterns in buggy/fixed Qiskit program pairs"};
    app.require_subcommand(1);

    std::string buggy, fixed, format = "json";
    std::optional<std::string> patterns;
    auto* detect = app.add_subcommand("detect", "Report the bug-fix patterns in one buggy/fixed pair");
    detect->add_option("--buggy", buggy, "Buggy source file")->required();
    detect->add_option("--fixed", fixed, "Fixed source file")->required();
    detect->add_option("--format", format, "Output format: json or text");
    detect->add_option("--patterns", patterns, "Comma-separated pattern ids to report");

    std::string root, corpus_format = "json";
    auto* corpus = app.add_subcommand("corpus", "Score a labeled corpus of cases");
    corpus->add_option("root", root, "Corpus root directory")->required();
    corpus->add_option("--format", corpus_format, "Output format: json or text");

    std::string features_root, out_path;
    auto* features = app.add_subcommand("features", "Export per-pattern feature records as JSON lines");
    features->add_option("root", features_root, "Corpus root directory")->required();
    features->add_option("--out", out_path, "Output file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*detect) return cmd_detect(buggy, fixed, format, patterns);
        if (*corpus) return cmd_corpus(root, corpus_format);
        if (*features) return cmd_features(features_root, out_path);
    } catch (const UsageError& e) {
        std::cerr << "qpac: " << e.what() << "\n";
        return kExitUsage;
    } catch (const qpac::IoError& e) {
        std::cerr << "qpac: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitUsage;
}
