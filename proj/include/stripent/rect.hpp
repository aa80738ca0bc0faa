#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "stripent/spectral.hpp"

namespace stripent {

using Site = std::pair<int, int>;

inline bool is_black(int x, int y) { return ((x + y) & 1) == 0; }
inline bool is_black(const Site& s) { return is_black(s.first, s.second); }

struct Rect {
    int x0 = 0, x1 = 0, y0 = 0, y1 = 0; // inclusive

    int width() const { return x1 - x0 + 1; }
    int height() const { return y1 - y0 + 1; }
    int area() const { return width() * height(); }
    bool contains(const Site& s) const {
        return s.first >= x0 && s.first <= x1 && s.second >= y0 && s.second <= y1;
    }
    bool contains_rect(const Rect& r) const {
        return r.x0 >= x0 && r.x1 <= x1 && r.y0 >= y0 && r.y1 <= y1;
    }
    // raster order, bottom row first
    std::vector<Site> sites() const;
};

enum class EdgeLabel { Zero, Plus, Minus };

EdgeLabel edge_label_from_char(char c); // '0', '+', '-'

// The boundary of R is the set of sites at l1-distance exactly 1, partitioned
// among the four edges (diagonal frame corners are not adjacent to R).
struct BoundarySite {
    Site site;
    int value = 0;
};

std::vector<BoundarySite> boundary_sites_up(const Rect& r);
std::vector<BoundarySite> boundary_sites_down(const Rect& r);
std::vector<BoundarySite> boundary_sites_left(const Rect& r);
std::vector<BoundarySite> boundary_sites_right(const Rect& r);

// + puts 1 on black / 0 on white (checkerboard-maximal); - the opposite;
// 0 puts 0 everywhere.
std::vector<BoundarySite> boundary_config(const Rect& r, EdgeLabel u, EdgeLabel d, EdgeLabel l,
                                          EdgeLabel rgt);

// Exact uniform hard-core measure on the rectangle interior given an
// admissible boundary. Fillings are bit masks over sites() order.
struct RectMeasure {
    Rect rect;
    std::vector<Site> sites;
    std::vector<BoundarySite> boundary;
    std::vector<uint32_t> fillings;

    long long count() const { return static_cast<long long>(fillings.size()); }
    double site_prob(const Site& s, int value) const;
    // exact rational: (#fillings with the value, count)
    std::pair<long long, long long> site_prob_frac(const Site& s, int value) const;
};

RectMeasure exact_rect_measure(const Rect& r, const std::vector<BoundarySite>& boundary);
RectMeasure exact_rect_measure(const Rect& r, EdgeLabel u, EdgeLabel d, EdgeLabel l, EdgeLabel rgt);

// Site-dependent partial order on fillings: at black sites 0 < 1, at white
// sites 1 < 0, compared coordinatewise.
struct CheckerboardOrder {
    uint32_t black_mask = 0;

    static CheckerboardOrder over(const std::vector<Site>& sites);
    bool leq(uint32_t a, uint32_t b) const {
        uint32_t white = ~black_mask;
        return (a & black_mask & ~b) == 0 && (b & white & ~a) == 0;
    }
};

// Finitely supported measure with integer weights (total = common denominator).
struct DiscreteMeasure {
    std::vector<uint32_t> atoms;
    std::vector<long long> weight;
    long long total = 0;

    static DiscreteMeasure uniform(const RectMeasure& m);
};

struct CouplingEntry {
    uint32_t x = 0, y = 0;
    long long flow = 0; // probability = flow / denom
};

struct DominanceResult {
    bool dominated = false;
    long long denom = 0;
    std::vector<CouplingEntry> coupling; // witness when dominated
    // witness up-set when not dominated: mu(U) > nu(U), as fractions over denom
    std::vector<uint32_t> upset_atoms;
    long long mu_upset = 0, nu_upset = 0;
};

// Decides mu <= nu (stochastic dominance) by integer max-flow feasibility;
// Strassen gives the equivalence with up-set monotonicity, and the min cut
// yields the violating up-set on failure.
DominanceResult dominance_check(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                const CheckerboardOrder& order);

struct RestrictionCheck {
    Rect inner, outer;
    std::string labels;
    bool expect_outer_below = false; // direction implied by the boundary flavor
    bool holds = false;
};

// Marginalizes the outer-rectangle measure to the inner rectangle and runs
// dominance_check in the direction the boundary flavor implies.
RestrictionCheck dominance_restriction_check(const Rect& inner, const Rect& outer, EdgeLabel u,
                                             EdgeLabel d, EdgeLabel l, EdgeLabel r);

// Sides of the rectangle toward which a path may exit.
struct TargetSides {
    bool up = false, down = false, left = false, right = false;
};

// The one definition of the exit event "src <-> boundary sides": src open and
// an open nearest-neighbor path inside the rectangle from src to some site of
// the rectangle adjacent to a boundary site on a target side. Percolation,
// disagreement paths and the sandwich bound all evaluate reach() on this context.
struct PathContext {
    Rect rect;
    std::vector<Site> sites;
    std::vector<std::array<int, 4>> nbrs; // index of lattice neighbor or -1
    std::vector<uint8_t> goal;
    int src = -1;

    PathContext(const Rect& r, const Site& source, const TargetSides& targets);

    template <class OpenFn>
    bool reach(OpenFn&& open) const {
        if (!open(src)) return false;
        std::vector<uint8_t> seen(sites.size(), 0);
        std::vector<int> stack = {src};
        seen[src] = 1;
        while (!stack.empty()) {
            int i = stack.back();
            stack.pop_back();
            if (goal[i]) return true;
            for (int j : nbrs[i]) {
                if (j < 0 || seen[j] || !open(j)) continue;
                seen[j] = 1;
                stack.push_back(j);
            }
        }
        return false;
    }
};

bool open_path_to_target(uint32_t open, const Rect& r, const Site& src, const TargetSides& targets);

// (mu^delta x mu^eta)(disagreement path from site to the target sides),
// exact; fraction returned as numerator/denominator.
struct DisagreementResult {
    double prob = 0.0;
    long long num = 0, den = 0;
};
DisagreementResult disagreement_prob(const RectMeasure& a, const RectMeasure& b, const Site& site,
                                     const TargetSides& targets);

struct SandwichSiteRow {
    Site site;
    bool black = false;
    // p0_* = P(x(site)=0); diff is already parity-oriented
    double p0_minus = 0.0, p0_plus = 0.0, diff = 0.0, perc_bound = 0.0;
    bool lower_ok = false, upper_ok = false; // 0 <= diff <= 2 P_{1/2}(...)
    bool exact_ok = false;                   // both, decided in integer arithmetic
};

struct SandwichReport {
    Rect rect;
    std::string pair; // "0---/0+++" or "-0--/+0++"
    std::vector<SandwichSiteRow> rows;
    bool all_ok = false;
};

// Both boundary-pair sandwiches on a rectangle: (0,-,-,-) vs (0,+,+,+) with the top
// side excluded from the percolation target, and (-,0,-,-) vs (+,0,+,+) with
// the bottom side excluded. Exact rational arithmetic throughout.
std::vector<SandwichReport> percolation_sandwich(const Rect& r);

// Monotone heat-bath update at one site; exposed for the monotonicity tests.
uint32_t heat_bath_update(uint32_t state, int site_index, double u, const Rect& r,
                          const std::vector<Site>& sites,
                          const std::vector<BoundarySite>& boundary);

// Exact sampling by monotone coupling from the past; deterministic in seed.
uint32_t cftp_sample(const Rect& r, const std::vector<BoundarySite>& boundary, uint64_t seed,
                     int max_doublings = 32);

} // namespace stripent
