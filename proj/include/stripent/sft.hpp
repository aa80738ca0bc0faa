#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace stripent {

// A nearest-neighbor shift of finite type on Z^2 with per-symbol multiplicity
// weights. Adjacency is ordered: h_allowed(a,b) reads "a immediately left of
// b", v_allowed(a,b) reads "a immediately below b". Symbols are opaque ids.
struct SftSpec {
    std::string name;
    std::vector<std::string> symbols;
    std::vector<double> weight;
    std::vector<uint8_t> h_table; // row-major [a*S+b], 1 = allowed
    std::vector<uint8_t> v_table;

    int size() const { return static_cast<int>(symbols.size()); }
    bool h_allowed(int a, int b) const { return h_table[static_cast<size_t>(a) * symbols.size() + b] != 0; }
    bool v_allowed(int a, int b) const { return v_table[static_cast<size_t>(a) * symbols.size() + b] != 0; }
    bool h_symmetric() const;

    // -1 when the id is unknown.
    int index_of(const std::string& id) const;

    // Throws ContractError unless: >= 2 symbols, unique ids, positive weights,
    // total adjacency tables.
    void validate() const;
};

// Finite configuration: assignment of spec symbols to a finite set of sites.
struct FiniteConfig {
    std::map<std::pair<int, int>, std::string> cells;

    void set(int x, int y, const std::string& sym) { cells[{x, y}] = sym; }
};

SftSpec hard_square();
SftSpec full_shift(int q);

// Every horizontally/vertically adjacent ordered pair in cfg must be allowed.
// Unknown symbols are a contract error.
bool is_locally_admissible(const SftSpec& spec, const FiniteConfig& cfg);

// Line-oriented text format, see README. load throws ContractError with a
// line number on malformed input; save emits the canonical serialization.
SftSpec load_sft(const std::string& text);
std::string save_sft(const SftSpec& spec);

bool specs_equal(const SftSpec& a, const SftSpec& b);

} // namespace stripent
