#pragma once

// Loading of buggy/fixed code pairs and labeled corpora.
//
// Corpus layout, one directory per case:
//   <root>/<case>/buggy.py
//   <root>/<case>/fixed.py
//   <root>/<case>/expected.json   {"patterns": ["unequal_bits", ...]}   (optional)

#include <filesystem>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qpac/pattern.hpp"

namespace qpac {

class IoError : public std::runtime_error {
public:
    IoError(std::filesystem::path path, const std::string& what);
    [[nodiscard]] const std::filesystem::path& path() const noexcept { return path_; }

private:
    std::filesystem::path path_;
};

struct CodePair {
    std::string pair_id;
    std::string buggy_source;
    std::string fixed_source;
    std::filesystem::path buggy_path;
    std::filesystem::path fixed_path;
};

struct CorpusCase {
    std::string name;  // case directory name
    CodePair pair;
    std::set<PatternId> expected_patterns;
    // Set when the case could not be loaded completely; the case is still
    // listed so that one broken directory never hides the others.
    std::optional<std::string> error;
};

std::string read_text_file(const std::filesystem::path& path);

CodePair load_pair(const std::filesystem::path& buggy_path, const std::filesystem::path& fixed_path);

// Cases sorted by directory name. Throws IoError if `root` is unreadable.
std::vector<CorpusCase> scan_corpus(const std::filesystem::path& root);

// expected.json codec. parse_expected throws std::invalid_argument on a
// malformed document or an unknown pattern id.
std::set<PatternId> parse_expected(std::string_view json_text);
std::string format_expected(const std::set<PatternId>& patterns);

}  // namespace qpac
