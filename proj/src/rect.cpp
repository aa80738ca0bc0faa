#include "stripent/rect.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <map>
#include <numeric>
#include <queue>

#include "stripent/errors.hpp"
#include "stripent/perc.hpp"
#include "stripent/rng.hpp"

namespace stripent {

std::vector<Site> Rect::sites() const {
    std::vector<Site> out;
    out.reserve(area());
    for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x) out.push_back({x, y});
    return out;
}

EdgeLabel edge_label_from_char(char c) {
    switch (c) {
        case '0': return EdgeLabel::Zero;
        case '+': return EdgeLabel::Plus;
        case '-': return EdgeLabel::Minus;
    }
    throw ContractError(std::string("unknown edge label '") + c + "'");
}

namespace {

int label_value(EdgeLabel l, const Site& s) {
    switch (l) {
        case EdgeLabel::Zero: return 0;
        case EdgeLabel::Plus: return is_black(s) ? 1 : 0;
        case EdgeLabel::Minus: return is_black(s) ? 0 : 1;
    }
    return 0;
}

std::vector<BoundarySite> edge_sites(const Rect& r, char which) {
    std::vector<BoundarySite> out;
    switch (which) {
        case 'u':
            for (int x = r.x0; x <= r.x1; ++x) out.push_back({{x, r.y1 + 1}, 0});
            break;
        case 'd':
            for (int x = r.x0; x <= r.x1; ++x) out.push_back({{x, r.y0 - 1}, 0});
            break;
        case 'l':
            for (int y = r.y0; y <= r.y1; ++y) out.push_back({{r.x0 - 1, y}, 0});
            break;
        case 'r':
            for (int y = r.y0; y <= r.y1; ++y) out.push_back({{r.x1 + 1, y}, 0});
            break;
    }
    return out;
}

} // namespace

std::vector<BoundarySite> boundary_sites_up(const Rect& r) { return edge_sites(r, 'u'); }
std::vector<BoundarySite> boundary_sites_down(const Rect& r) { return edge_sites(r, 'd'); }
std::vector<BoundarySite> boundary_sites_left(const Rect& r) { return edge_sites(r, 'l'); }
std::vector<BoundarySite> boundary_sites_right(const Rect& r) { return edge_sites(r, 'r'); }

std::vector<BoundarySite> boundary_config(const Rect& r, EdgeLabel u, EdgeLabel d, EdgeLabel l,
                                          EdgeLabel rgt) {
    std::vector<BoundarySite> out;
    for (auto [edge, lab] : {std::pair<char, EdgeLabel>{'u', u}, {'d', d}, {'l', l}, {'r', rgt}})
        for (auto bs : edge_sites(r, edge)) {
            bs.value = label_value(lab, bs.site);
            out.push_back(bs);
        }
    return out;
}

double RectMeasure::site_prob(const Site& s, int value) const {
    auto [num, den] = site_prob_frac(s, value);
    return static_cast<double>(num) / static_cast<double>(den);
}

std::pair<long long, long long> RectMeasure::site_prob_frac(const Site& s, int value) const {
    auto it = std::find(sites.begin(), sites.end(), s);
    if (it == sites.end()) throw ContractError("site_prob: site outside rectangle");
    int idx = static_cast<int>(it - sites.begin());
    long long num = 0;
    for (uint32_t f : fillings)
        if (static_cast<int>((f >> idx) & 1u) == value) ++num;
    return {num, count()};
}

RectMeasure exact_rect_measure(const Rect& r, const std::vector<BoundarySite>& boundary) {
    if (r.area() < 1) throw ContractError("exact_rect_measure: empty rectangle");
    if (r.area() > max_enum_sites())
        throw ResourceError("exact_rect_measure: " + std::to_string(r.area()) +
                            " sites exceed the cap (STRIPENT_MAX_SITES)");
    // the boundary alone must be hard-core admissible
    std::map<Site, int> bval;
    for (const auto& b : boundary) bval[b.site] = b.value;
    for (const auto& [s, v] : bval) {
        if (v != 1) continue;
        for (const Site& nb : {Site{s.first + 1, s.second}, Site{s.first, s.second + 1}}) {
            auto it = bval.find(nb);
            if (it != bval.end() && it->second == 1)
                throw ContractError("exact_rect_measure: boundary has two adjacent 1s");
        }
    }

    RectMeasure m;
    m.rect = r;
    m.boundary = boundary;
    m.sites = r.sites();
    int n = static_cast<int>(m.sites.size());
    std::map<Site, int> index;
    for (int i = 0; i < n; ++i) index[m.sites[i]] = i;

    std::vector<uint32_t> nbr(n, 0);  // interior neighbors below/left (already placed)
    std::vector<uint8_t> forced(n, 0);
    for (int i = 0; i < n; ++i) {
        auto [x, y] = m.sites[i];
        for (const Site& nb : {Site{x - 1, y}, Site{x, y - 1}, Site{x + 1, y}, Site{x, y + 1}}) {
            auto bi = bval.find(nb);
            if (bi != bval.end() && bi->second == 1) forced[i] = 1;
            auto ii = index.find(nb);
            if (ii != index.end() && ii->second < i) nbr[i] |= 1u << ii->second;
        }
    }

    uint32_t cur = 0;
    auto rec = [&](auto&& self, int i) -> void {
        if (i == n) {
            m.fillings.push_back(cur);
            return;
        }
        self(self, i + 1); // site i = 0
        if (!forced[i] && (cur & nbr[i]) == 0) {
            cur |= 1u << i;
            self(self, i + 1);
            cur &= ~(1u << i);
        }
    };
    rec(rec, 0);
    return m;
}

RectMeasure exact_rect_measure(const Rect& r, EdgeLabel u, EdgeLabel d, EdgeLabel l, EdgeLabel rgt) {
    return exact_rect_measure(r, boundary_config(r, u, d, l, rgt));
}

CheckerboardOrder CheckerboardOrder::over(const std::vector<Site>& sites) {
    CheckerboardOrder o;
    for (size_t i = 0; i < sites.size(); ++i)
        if (is_black(sites[i])) o.black_mask |= 1u << i;
    return o;
}

DiscreteMeasure DiscreteMeasure::uniform(const RectMeasure& m) {
    DiscreteMeasure d;
    d.atoms = m.fillings;
    d.weight.assign(d.atoms.size(), 1);
    d.total = static_cast<long long>(d.atoms.size());
    return d;
}

// ---------------------------------------------------------------------------
// Dinic max flow on the bipartite coupling network
// ---------------------------------------------------------------------------

namespace {

struct FlowEdge {
    int to;
    long long cap;
    int rev;
};

struct FlowGraph {
    std::vector<std::vector<FlowEdge>> adj;
    std::vector<int> level, iter;

    explicit FlowGraph(int n) : adj(n), level(n), iter(n) {}

    void add_edge(int a, int b, long long cap) {
        adj[a].push_back({b, cap, static_cast<int>(adj[b].size())});
        adj[b].push_back({a, 0, static_cast<int>(adj[a].size()) - 1});
    }

    bool bfs(int s, int t) {
        std::fill(level.begin(), level.end(), -1);
        std::queue<int> q;
        level[s] = 0;
        q.push(s);
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (const auto& e : adj[v])
                if (e.cap > 0 && level[e.to] < 0) {
                    level[e.to] = level[v] + 1;
                    q.push(e.to);
                }
        }
        return level[t] >= 0;
    }

    long long dfs(int v, int t, long long f) {
        if (v == t) return f;
        for (int& i = iter[v]; i < static_cast<int>(adj[v].size()); ++i) {
            FlowEdge& e = adj[v][i];
            if (e.cap > 0 && level[v] < level[e.to]) {
                long long d = dfs(e.to, t, std::min(f, e.cap));
                if (d > 0) {
                    e.cap -= d;
                    adj[e.to][e.rev].cap += d;
                    return d;
                }
            }
        }
        return 0;
    }

    long long max_flow(int s, int t) {
        long long total = 0;
        while (bfs(s, t)) {
            std::fill(iter.begin(), iter.end(), 0);
            while (long long f = dfs(s, t, LLONG_MAX)) total += f;
        }
        return total;
    }
};

} // namespace

DominanceResult dominance_check(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                const CheckerboardOrder& order) {
    if (mu.total <= 0 || nu.total <= 0) throw ContractError("dominance_check: empty measure");
    long long g = std::gcd(mu.total, nu.total);
    long long denom = mu.total / g * nu.total;
    long long mu_scale = denom / mu.total, nu_scale = denom / nu.total;

    int nm = static_cast<int>(mu.atoms.size()), nn = static_cast<int>(nu.atoms.size());
    int src = nm + nn, snk = nm + nn + 1;
    FlowGraph gph(nm + nn + 2);
    for (int i = 0; i < nm; ++i) gph.add_edge(src, i, mu.weight[i] * mu_scale);
    for (int j = 0; j < nn; ++j) gph.add_edge(nm + j, snk, nu.weight[j] * nu_scale);
    for (int i = 0; i < nm; ++i)
        for (int j = 0; j < nn; ++j)
            if (order.leq(mu.atoms[i], nu.atoms[j])) gph.add_edge(i, nm + j, denom);

    long long flow = gph.max_flow(src, snk);
    DominanceResult res;
    res.denom = denom;
    res.dominated = flow == denom;
    if (res.dominated) {
        for (int i = 0; i < nm; ++i)
            for (const auto& e : gph.adj[i])
                if (e.to >= nm && e.to < nm + nn) {
                    long long used = gph.adj[e.to][e.rev].cap; // flow pushed on i -> j
                    if (used > 0) res.coupling.push_back({mu.atoms[i], nu.atoms[e.to - nm], used});
                }
    } else {
        // residual-reachable mu-atoms generate the violating up-set
        std::vector<uint8_t> seen(nm + nn + 2, 0);
        std::queue<int> q;
        q.push(src);
        seen[src] = 1;
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (const auto& e : gph.adj[v])
                if (e.cap > 0 && !seen[e.to]) {
                    seen[e.to] = 1;
                    q.push(e.to);
                }
        }
        std::vector<uint32_t> gen;
        for (int i = 0; i < nm; ++i)
            if (seen[i]) gen.push_back(mu.atoms[i]);
        auto in_upset = [&](uint32_t a) {
            for (uint32_t gatom : gen)
                if (order.leq(gatom, a)) return true;
            return false;
        };
        for (int i = 0; i < nm; ++i)
            if (in_upset(mu.atoms[i])) {
                res.upset_atoms.push_back(mu.atoms[i]);
                res.mu_upset += mu.weight[i] * mu_scale;
            }
        for (int j = 0; j < nn; ++j)
            if (in_upset(nu.atoms[j])) res.nu_upset += nu.weight[j] * nu_scale;
    }
    return res;
}

RestrictionCheck dominance_restriction_check(const Rect& inner, const Rect& outer, EdgeLabel u,
                                             EdgeLabel d, EdgeLabel l, EdgeLabel r) {
    if (!outer.contains_rect(inner))
        throw ContractError("dominance_restriction_check: rectangles not nested");
    RectMeasure small = exact_rect_measure(inner, u, d, l, r);
    RectMeasure big = exact_rect_measure(outer, u, d, l, r);

    // marginal of the big measure on the inner sites
    std::vector<int> pick;
    for (const Site& s : inner.sites()) {
        auto it = std::find(big.sites.begin(), big.sites.end(), s);
        pick.push_back(static_cast<int>(it - big.sites.begin()));
    }
    std::map<uint32_t, long long> marg;
    for (uint32_t f : big.fillings) {
        uint32_t key = 0;
        for (size_t i = 0; i < pick.size(); ++i)
            if ((f >> pick[i]) & 1u) key |= 1u << i;
        ++marg[key];
    }
    DiscreteMeasure outer_on_inner;
    for (auto [atom, w] : marg) {
        outer_on_inner.atoms.push_back(atom);
        outer_on_inner.weight.push_back(w);
    }
    outer_on_inner.total = big.count();

    RestrictionCheck chk;
    chk.inner = inner;
    chk.outer = outer;
    auto lc = [](EdgeLabel e) { return e == EdgeLabel::Zero ? '0' : e == EdgeLabel::Plus ? '+' : '-'; };
    chk.labels = std::string() + lc(u) + lc(d) + lc(l) + lc(r);
    // plus-flavored boundaries dominate their extensions; minus-flavored ones
    // are dominated by them
    bool plus_flavor = (u == EdgeLabel::Plus || d == EdgeLabel::Plus || l == EdgeLabel::Plus);
    chk.expect_outer_below = plus_flavor;
    CheckerboardOrder order = CheckerboardOrder::over(inner.sites());
    DiscreteMeasure inner_m = DiscreteMeasure::uniform(small);
    DominanceResult res = plus_flavor ? dominance_check(outer_on_inner, inner_m, order)
                                      : dominance_check(inner_m, outer_on_inner, order);
    chk.holds = res.dominated;
    return chk;
}

PathContext::PathContext(const Rect& r, const Site& source, const TargetSides& targets) {
    rect = r;
    sites = r.sites();
    int w = r.width();
    int n = static_cast<int>(sites.size());
    nbrs.assign(n, {-1, -1, -1, -1});
    goal.assign(n, 0);
    for (int i = 0; i < n; ++i) {
        const Site s = sites[i];
        if (s.first < r.x1) nbrs[i][0] = i + 1;
        if (s.first > r.x0) nbrs[i][1] = i - 1;
        if (s.second < r.y1) nbrs[i][2] = i + w;
        if (s.second > r.y0) nbrs[i][3] = i - w;
        goal[i] = (targets.up && s.second == r.y1) || (targets.down && s.second == r.y0) ||
                  (targets.left && s.first == r.x0) || (targets.right && s.first == r.x1);
        if (s == source) src = i;
    }
    if (src < 0) throw ContractError("path event: source outside rectangle");
}

bool open_path_to_target(uint32_t open, const Rect& r, const Site& src, const TargetSides& targets) {
    PathContext ctx(r, src, targets);
    return ctx.reach([&](int i) { return ((open >> i) & 1u) != 0; });
}

DisagreementResult disagreement_prob(const RectMeasure& a, const RectMeasure& b, const Site& site,
                                     const TargetSides& targets) {
    if (a.rect.x0 != b.rect.x0 || a.rect.x1 != b.rect.x1 || a.rect.y0 != b.rect.y0 ||
        a.rect.y1 != b.rect.y1)
        throw ContractError("disagreement_prob: mismatched rectangles");
    if (a.rect.area() > env_cap("STRIPENT_MAX_SITES", 12))
        throw ResourceError("disagreement_prob: rectangle too large for pair enumeration");
    DisagreementResult res;
    res.den = a.count() * b.count();
    PathContext ctx(a.rect, site, targets);
    for (uint32_t x : a.fillings)
        for (uint32_t y : b.fillings) {
            uint32_t d = x ^ y;
            if (ctx.reach([&](int i) { return ((d >> i) & 1u) != 0; })) ++res.num;
        }
    res.prob = static_cast<double>(res.num) / static_cast<double>(res.den);
    return res;
}

std::vector<SandwichReport> percolation_sandwich(const Rect& r) {
    std::vector<SandwichReport> out;
    struct PairSpec {
        EdgeLabel mu[4], mp[4];
        TargetSides targets;
        const char* name;
    };
    const EdgeLabel Z = EdgeLabel::Zero, P = EdgeLabel::Plus, M = EdgeLabel::Minus;
    std::vector<PairSpec> pairs = {
        {{Z, M, M, M}, {Z, P, P, P}, {false, true, true, true}, "0---/0+++"},
        {{M, Z, M, M}, {P, Z, P, P}, {true, false, true, true}, "-0--/+0++"},
    };
    for (const auto& ps : pairs) {
        SandwichReport rep;
        rep.rect = r;
        rep.pair = ps.name;
        RectMeasure minus_m = exact_rect_measure(r, ps.mu[0], ps.mu[1], ps.mu[2], ps.mu[3]);
        RectMeasure plus_m = exact_rect_measure(r, ps.mp[0], ps.mp[1], ps.mp[2], ps.mp[3]);
        rep.all_ok = true;
        for (const Site& s : minus_m.sites) {
            SandwichSiteRow row;
            row.site = s;
            row.black = is_black(s);
            auto [mn, md] = minus_m.site_prob_frac(s, 0);
            auto [pn, pd] = plus_m.site_prob_frac(s, 0);
            row.p0_minus = static_cast<double>(mn) / md;
            row.p0_plus = static_cast<double>(pn) / pd;
            // parity rule: the order of the central difference flips at white sites
            long long dn = row.black ? mn * pd - pn * md : pn * md - mn * pd;
            long long dd = md * pd;
            row.diff = static_cast<double>(dn) / static_cast<double>(dd);
            PercExact pe = perc_exact_rational(1, 2, r, s, ps.targets);
            row.perc_bound = 2.0 * pe.prob;
            row.lower_ok = dn >= 0;
            // dn/dd <= 2 num/den  <=>  dn * den <= 2 num * dd (all nonneg)
            row.upper_ok = static_cast<__int128>(dn) * pe.den <=
                           static_cast<__int128>(2) * pe.num * dd;
            row.exact_ok = row.lower_ok && row.upper_ok;
            rep.all_ok = rep.all_ok && row.exact_ok;
            rep.rows.push_back(row);
        }
        out.push_back(rep);
    }
    return out;
}

// ---------------------------------------------------------------------------
// heat-bath dynamics and CFTP
// ---------------------------------------------------------------------------

uint32_t heat_bath_update(uint32_t state, int site_index, double u, const Rect&,
                          const std::vector<Site>& sites,
                          const std::vector<BoundarySite>& boundary) {
    const Site s = sites[site_index];
    bool blocked = false;
    for (const auto& b : boundary)
        if (b.value == 1 && std::abs(b.site.first - s.first) + std::abs(b.site.second - s.second) == 1)
            blocked = true;
    if (!blocked)
        for (size_t j = 0; j < sites.size(); ++j) {
            if (static_cast<int>(j) == site_index || !((state >> j) & 1u)) continue;
            if (std::abs(sites[j].first - s.first) + std::abs(sites[j].second - s.second) == 1) {
                blocked = true;
                break;
            }
        }
    uint32_t bit = 1u << site_index;
    if (blocked) return state & ~bit;
    // free site: u >= 1/2 moves toward the checkerboard-larger value
    bool one = is_black(s) ? (u >= 0.5) : (u < 0.5);
    return one ? (state | bit) : (state & ~bit);
}

uint32_t cftp_sample(const Rect& r, const std::vector<BoundarySite>& boundary, uint64_t seed,
                     int max_doublings) {
    if (r.area() > max_enum_sites())
        throw ResourceError("cftp_sample: rectangle exceeds the site cap");
    std::vector<Site> sites = r.sites();
    int n = static_cast<int>(sites.size());

    auto blocked_by_boundary = [&](const Site& s) {
        for (const auto& b : boundary)
            if (b.value == 1 &&
                std::abs(b.site.first - s.first) + std::abs(b.site.second - s.second) == 1)
                return true;
        return false;
    };
    uint32_t top = 0, bottom = 0;
    for (int i = 0; i < n; ++i) {
        if (blocked_by_boundary(sites[i])) continue;
        if (is_black(sites[i])) top |= 1u << i;   // checkerboard-maximal admissible
        else bottom |= 1u << i;                   // checkerboard-minimal admissible
    }

    for (int e = 0; e <= max_doublings; ++e) {
        long long T = 1LL << e;
        uint32_t hi = top, lo = bottom;
        // steps t = -T .. -1, randomness indexed by |t| so earlier epochs reuse it
        for (long long t = -T; t < 0; ++t) {
            uint64_t step = static_cast<uint64_t>(-t);
            int site = static_cast<int>(hash_u64(seed, 0x5174e5ULL, step) % static_cast<uint64_t>(n));
            double u = uniform01(hash_u64(seed, 0xc01feeULL, step));
            hi = heat_bath_update(hi, site, u, r, sites, boundary);
            lo = heat_bath_update(lo, site, u, r, sites, boundary);
        }
        if (hi == lo) return hi;
    }
    throw ContractError("cftp_sample: no coalescence within the doubling cap");
}

} // namespace stripent
