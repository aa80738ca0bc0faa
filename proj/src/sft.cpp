#include "stripent/sft.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "stripent/errors.hpp"

namespace stripent {

bool SftSpec::h_symmetric() const {
    int s = size();
    for (int a = 0; a < s; ++a)
        for (int b = a + 1; b < s; ++b)
            if (h_allowed(a, b) != h_allowed(b, a)) return false;
    return true;
}

int SftSpec::index_of(const std::string& id) const {
    for (size_t i = 0; i < symbols.size(); ++i)
        if (symbols[i] == id) return static_cast<int>(i);
    return -1;
}

void SftSpec::validate() const {
    if (symbols.size() < 2) throw ContractError("sft '" + name + "': alphabet needs at least 2 symbols");
    std::set<std::string> seen;
    for (const auto& s : symbols)
        if (!seen.insert(s).second) throw ContractError("sft '" + name + "': duplicate symbol '" + s + "'");
    if (weight.size() != symbols.size()) throw ContractError("sft '" + name + "': weight vector size mismatch");
    for (size_t i = 0; i < weight.size(); ++i)
        if (!(weight[i] > 0.0) || !std::isfinite(weight[i]))
            throw ContractError("sft '" + name + "': symbol '" + symbols[i] + "' has nonpositive weight");
    size_t s2 = symbols.size() * symbols.size();
    if (h_table.size() != s2 || v_table.size() != s2)
        throw ContractError("sft '" + name + "': adjacency tables must be total");
}

SftSpec hard_square() {
    SftSpec s;
    s.name = "hardsquare";
    s.symbols = {"0", "1"};
    s.weight = {1.0, 1.0};
    s.h_table.assign(4, 1);
    s.v_table.assign(4, 1);
    s.h_table[1 * 2 + 1] = 0; // no adjacent 1s
    s.v_table[1 * 2 + 1] = 0;
    return s;
}

SftSpec full_shift(int q) {
    if (q < 2) throw ContractError("full_shift: need q >= 2");
    SftSpec s;
    s.name = "fullshift" + std::to_string(q);
    for (int i = 0; i < q; ++i) {
        s.symbols.push_back(std::to_string(i));
        s.weight.push_back(1.0);
    }
    s.h_table.assign(static_cast<size_t>(q) * q, 1);
    s.v_table.assign(static_cast<size_t>(q) * q, 1);
    return s;
}

bool is_locally_admissible(const SftSpec& spec, const FiniteConfig& cfg) {
    std::map<std::pair<int, int>, int> idx;
    for (const auto& [site, sym] : cfg.cells) {
        int i = spec.index_of(sym);
        if (i < 0) throw ContractError("configuration uses unknown symbol '" + sym + "'");
        idx[site] = i;
    }
    for (const auto& [site, a] : idx) {
        auto [x, y] = site;
        auto right = idx.find({x + 1, y});
        if (right != idx.end() && !spec.h_allowed(a, right->second)) return false;
        auto above = idx.find({x, y + 1});
        if (above != idx.end() && !spec.v_allowed(a, above->second)) return false;
    }
    return true;
}

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream is(line);
    std::string t;
    while (is >> t) out.push_back(t);
    return out;
}

std::string fmt_weight(double w) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", w);
    return buf;
}

// Emits default = the majority value, then the sorted exceptions.
void save_table(std::ostringstream& os, const SftSpec& s, const std::vector<uint8_t>& t, char dir) {
    int n = s.size();
    int allowed = 0;
    for (uint8_t v : t) allowed += v != 0;
    bool def_allow = allowed * 2 >= n * n;
    os << dir << "default " << (def_allow ? "allow" : "forbid") << "\n";
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            bool v = t[static_cast<size_t>(a) * n + b] != 0;
            if (v != def_allow)
                os << dir << (v ? "allow " : "forbid ") << s.symbols[a] << " " << s.symbols[b] << "\n";
        }
}

} // namespace

std::string save_sft(const SftSpec& spec) {
    spec.validate();
    std::ostringstream os;
    os << "sft " << (spec.name.empty() ? "unnamed" : spec.name) << "\n";
    for (int i = 0; i < spec.size(); ++i)
        os << "symbol " << spec.symbols[i] << " " << fmt_weight(spec.weight[i]) << "\n";
    save_table(os, spec, spec.h_table, 'h');
    save_table(os, spec, spec.v_table, 'v');
    return os.str();
}

SftSpec load_sft(const std::string& text) {
    SftSpec s;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    bool have_name = false;
    int h_default = -1, v_default = -1; // -1 = unset
    struct Rule { char dir; bool allow; std::string a, b; int line; };
    std::vector<Rule> rules;

    auto fail = [&](const std::string& msg) {
        throw ContractError("parse error line " + std::to_string(lineno) + ": " + msg);
    };

    while (std::getline(is, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        auto tok = tokenize(line);
        if (tok.empty()) continue;
        const std::string& kw = tok[0];
        if (kw == "sft") {
            if (tok.size() != 2) fail("expected: sft <name>");
            s.name = tok[1];
            have_name = true;
        } else if (kw == "symbol") {
            if (tok.size() != 3) fail("expected: symbol <id> <weight>");
            if (s.index_of(tok[1]) >= 0) fail("duplicate symbol '" + tok[1] + "'");
            char* end = nullptr;
            double w = std::strtod(tok[2].c_str(), &end);
            if (end == tok[2].c_str() || *end != '\0') fail("bad weight '" + tok[2] + "'");
            if (!(w > 0.0)) fail("nonpositive weight for symbol '" + tok[1] + "'");
            s.symbols.push_back(tok[1]);
            s.weight.push_back(w);
        } else if (kw == "hdefault" || kw == "vdefault") {
            if (tok.size() != 2 || (tok[1] != "allow" && tok[1] != "forbid")) fail("expected: " + kw + " allow|forbid");
            (kw[0] == 'h' ? h_default : v_default) = tok[1] == "allow" ? 1 : 0;
        } else if (kw == "hallow" || kw == "hforbid" || kw == "vallow" || kw == "vforbid") {
            if (tok.size() != 3) fail("expected: " + kw + " <a> <b>");
            rules.push_back({kw[0], kw.substr(1) == "allow", tok[1], tok[2], lineno});
        } else {
            fail("unknown directive '" + kw + "'");
        }
    }
    lineno = 0;
    if (!have_name) throw ContractError("parse error: missing 'sft <name>' header");
    if (s.symbols.size() < 2) throw ContractError("parse error: alphabet needs at least 2 symbols");
    if (h_default < 0) throw ContractError("parse error: missing hdefault directive");
    if (v_default < 0) throw ContractError("parse error: missing vdefault directive");

    size_t n = s.symbols.size();
    s.h_table.assign(n * n, static_cast<uint8_t>(h_default));
    s.v_table.assign(n * n, static_cast<uint8_t>(v_default));
    for (const auto& r : rules) {
        int a = s.index_of(r.a), b = s.index_of(r.b);
        if (a < 0 || b < 0)
            throw ContractError("parse error line " + std::to_string(r.line) + ": unknown symbol in rule");
        auto& t = r.dir == 'h' ? s.h_table : s.v_table;
        t[static_cast<size_t>(a) * n + b] = r.allow ? 1 : 0;
    }
    s.validate();
    return s;
}

bool specs_equal(const SftSpec& a, const SftSpec& b) {
    return a.name == b.name && a.symbols == b.symbols && a.weight == b.weight &&
           a.h_table == b.h_table && a.v_table == b.v_table;
}

} // namespace stripent
