#include <cstdlib>
#include <sstream>

#include "qpac/semantics.hpp"

namespace qpac::semantics {
namespace {

// Keep in sync with data/standard_gates.txt (checked by the gate table test).
constexpr std::string_view kBuiltinGates[] = {
    "h",   "x",   "y",    "z",   "s",   "sdg", "t",   "tdg",   "sx",   "sxdg", "id",  "i",   "p",
    "r",   "u",   "u1",   "u2",  "u3",  "rx",  "ry",  "rz",    "rxx",  "ryy",  "rzz", "rzx", "cx",
    "cy",  "cz",  "ch",   "cs",  "csdg", "csx", "cp",  "crx",  "cry",  "crz",  "cu",  "cu1", "cu3",
    "ccx", "ccz", "mcx",  "mcp", "swap", "cswap", "iswap", "dcx", "ecr", "rccx", "rcccx"};

}  // namespace

std::shared_ptr<const StandardGateTable> StandardGateTable::builtin() {
    static const auto table = [] {
        StandardGateTable t;
        for (auto g : kBuiltinGates) t.names_.emplace(g);
        return std::make_shared<const StandardGateTable>(std::move(t));
    }();
    return table;
}

StandardGateTable StandardGateTable::from_text(std::string_view text) {
    StandardGateTable t;
    for (auto line : filters::split_lines(text)) {
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        const auto b = line.find_first_not_of(" \t");
        if (b == std::string_view::npos) continue;
        const auto e = line.find_last_not_of(" \t");
        t.names_.emplace(line.substr(b, e - b + 1));
    }
    return t;
}

StandardGateTable StandardGateTable::load(const std::filesystem::path& path) {
    return from_text(read_text_file(path));
}

bool StandardGateTable::contains(std::string_view name) const {
    return names_.find(name) != names_.end();
}

std::shared_ptr<const StandardGateTable> gate_table_from_environment() {
    const char* path = std::getenv("QPAC_GATE_TABLE");
    if (!path || !*path) return StandardGateTable::builtin();
    return std::make_shared<const StandardGateTable>(StandardGateTable::load(path));
}

}  // namespace qpac::semantics
