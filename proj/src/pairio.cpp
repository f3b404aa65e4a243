#include "qpac/pairio.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace qpac {

namespace fs = std::filesystem;

IoError::IoError(fs::path path, const std::string& what)
    : std::runtime_error(path.string() + ": " + what), path_(std::move(path)) {}

std::string read_text_file(const fs::path& path) {
    std::error_code ec;
    if (fs::is_directory(path, ec)) throw IoError(path, "is a directory");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path, "cannot open file for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError(path, "read failed");
    std::string text = std::move(buf).str();
    if (text.starts_with("\xEF\xBB\xBF")) text.erase(0, 3);
    return text;
}

namespace {

std::string pair_id_for(const fs::path& buggy, const fs::path& fixed) {
    const std::string a = buggy.stem().string();
    const std::string b = fixed.stem().string();
    std::size_t n = 0;
    while (n < a.size() && n < b.size() && a[n] == b[n]) ++n;
    std::string prefix = a.substr(0, n);
    while (!prefix.empty() && (prefix.back() == '_' || prefix.back() == '-' || prefix.back() == '.')) {
        prefix.pop_back();
    }
    if (!prefix.empty() && a != b) return prefix;

    const fs::path pa = fs::absolute(buggy).lexically_normal().parent_path();
    const fs::path pb = fs::absolute(fixed).lexically_normal().parent_path();
    if (pa == pb && !pa.filename().empty()) return pa.filename().string();
    return a == b ? a : a + ".." + b;
}

}  // namespace

CodePair load_pair(const fs::path& buggy_path, const fs::path& fixed_path) {
    CodePair pair;
    pair.buggy_path = buggy_path;
    pair.fixed_path = fixed_path;
    pair.buggy_source = read_text_file(buggy_path);
    pair.fixed_source = read_text_file(fixed_path);
    pair.pair_id = pair_id_for(buggy_path, fixed_path);
    return pair;
}

std::set<PatternId> parse_expected(std::string_view json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("patterns") || !doc["patterns"].is_array()) {
        throw std::invalid_argument("expected an object with a \"patterns\" array");
    }
    std::set<PatternId> out;
    for (const auto& item : doc["patterns"]) {
        if (!item.is_string()) throw std::invalid_argument("pattern ids must be strings");
        auto id = pattern_from_string(item.get<std::string>());
        if (!id) throw std::invalid_argument("unknown pattern id '" + item.get<std::string>() + "'");
        out.insert(*id);
    }
    return out;
}

std::string format_expected(const std::set<PatternId>& patterns) {
    nlohmann::ordered_json doc;
    doc["patterns"] = nlohmann::ordered_json::array();
    for (auto id : patterns) doc["patterns"].push_back(std::string(to_string(id)));
    return doc.dump() + "\n";
}

std::vector<CorpusCase> scan_corpus(const fs::path& root) {
    std::error_code ec;
    if (!fs::is_directory(root, ec)) throw IoError(root, "not a readable directory");

    std::vector<fs::path> dirs;
    fs::directory_iterator it(root, ec);
    if (ec) throw IoError(root, ec.message());
    for (const auto& entry : it) {
        if (entry.is_directory(ec)) dirs.push_back(entry.path());
    }
    std::sort(dirs.begin(), dirs.end(),
              [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });

    std::vector<CorpusCase> cases;
    cases.reserve(dirs.size());
    for (const auto& dir : dirs) {
        CorpusCase c;
        c.name = dir.filename().string();
        try {
            c.pair = load_pair(dir / "buggy.py", dir / "fixed.py");
            c.pair.pair_id = c.name;
        } catch (const IoError& e) {
            c.pair.pair_id = c.name;
            c.pair.buggy_path = dir / "buggy.py";
            c.pair.fixed_path = dir / "fixed.py";
            c.error = e.what();
        }
        const fs::path expected = dir / "expected.json";
        if (!c.error && fs::exists(expected, ec)) {
            try {
                c.expected_patterns = parse_expected(read_text_file(expected));
            } catch (const std::exception& e) {
                c.error = expected.string() + ": " + e.what();
            }
        }
        cases.push_back(std::move(c));
    }
    return cases;
}

}  // namespace qpac
