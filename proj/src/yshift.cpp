#include "stripent/yshift.hpp"

#include <cmath>
#include <map>

#include "stripent/errors.hpp"

namespace stripent {

namespace {

bool grid_h_ok(int sa, int sb, YVariant variant) {
    if (((sa & SegR) != 0) != ((sb & SegL) != 0)) return false; // segments must join
    if (variant == YVariant::SharedSideOnly) {
        if ((sa & SegU) && (sb & SegU)) return false;
        if ((sa & SegD) && (sb & SegD)) return false;
    } else {
        if ((sa & (SegU | SegD)) && (sb & (SegU | SegD))) return false;
    }
    return true;
}

bool grid_v_ok(int sa, int sb, YVariant variant) { // sa below, sb above
    if (((sa & SegU) != 0) != ((sb & SegD) != 0)) return false;
    if (variant == YVariant::SharedSideOnly) {
        if ((sa & SegL) && (sb & SegL)) return false;
        if ((sa & SegR) && (sb & SegR)) return false;
    } else {
        if ((sa & (SegL | SegR)) && (sb & (SegL | SegR))) return false;
    }
    return true;
}

} // namespace

SftSpec build_y(double k, YVariant variant) {
    if (!(k >= 2.0)) throw ContractError("build_y: k must be >= 2");
    SftSpec s;
    s.name = "counterexample_y";
    s.symbols = {"Z", "N", "s1", "s2", "s3", "s4", "s5", "s6"};
    s.weight = {1.0, k, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0};
    int S = 8;
    auto grid = [&](int i) { return i >= 2; };
    auto seg = [&](int i) { return grid_segments[i - 2]; };
    s.h_table.assign(S * S, 0);
    s.v_table.assign(S * S, 0);
    for (int a = 0; a < S; ++a)
        for (int b = 0; b < S; ++b) {
            bool h, v;
            if (grid(a) && grid(b)) {
                h = grid_h_ok(seg(a), seg(b), variant);
                v = grid_v_ok(seg(a), seg(b), variant);
            } else if (!grid(a) && !grid(b)) {
                h = a == b;           // Z|Z and N|N only
                v = a != b;           // rows of integers alternate
            } else if (grid(a) && !grid(b)) {
                h = true;             // grid next to integers is free
                v = b == 0;           // only Z may sit on top of a grid tile
            } else {
                h = true;
                v = true;             // anything may sit on top of an integer
            }
            s.h_table[a * S + b] = h ? 1 : 0;
            s.v_table[a * S + b] = v ? 1 : 0;
        }
    return s;
}

SftSpec build_y_uncollapsed(int k, YVariant variant) {
    if (k < 2) throw ContractError("build_y_uncollapsed: k must be >= 2");
    SftSpec s;
    s.name = "counterexample_y_explicit";
    for (int i = 0; i <= k; ++i) s.symbols.push_back(std::to_string(i));
    for (int g = 1; g <= 6; ++g) s.symbols.push_back("s" + std::to_string(g));
    int S = k + 7;
    s.weight.assign(S, 1.0);
    auto is_int = [&](int i) { return i <= k; };
    auto seg = [&](int i) { return grid_segments[i - (k + 1)]; };
    s.h_table.assign(static_cast<size_t>(S) * S, 0);
    s.v_table.assign(static_cast<size_t>(S) * S, 0);
    for (int a = 0; a < S; ++a)
        for (int b = 0; b < S; ++b) {
            bool h, v;
            if (is_int(a) && is_int(b)) {
                bool za = a == 0, zb = b == 0;
                h = za == zb;
                v = (za != zb);
            } else if (!is_int(a) && !is_int(b)) {
                h = grid_h_ok(seg(a), seg(b), variant);
                v = grid_v_ok(seg(a), seg(b), variant);
            } else if (!is_int(a) && is_int(b)) {
                h = true;
                v = b == 0;
            } else {
                h = true;
                v = true;
            }
            s.h_table[static_cast<size_t>(a) * S + b] = h ? 1 : 0;
            s.v_table[static_cast<size_t>(a) * S + b] = v ? 1 : 0;
        }
    return s;
}

YEntropyReport y_entropy_table(double k, int n_max, double tol, YVariant variant) {
    if (n_max < 1) throw ContractError("y_entropy_table: n_max must be >= 1");
    SftSpec spec = build_y(k, variant);
    YEntropyReport rep;
    rep.k = k;
    rep.table = entropy_sequence(spec, std::max(n_max, 2), tol);
    while (static_cast<int>(rep.table.rows.size()) > n_max) rep.table.rows.pop_back();
    double lnk = std::log(k);
    double ln8 = std::log(8.0);
    double ln8482 = std::log(8.0 * 48.0 * 48.0);
    rep.all_asserted_ok = true;
    for (const auto& row : rep.table.rows) {
        if (row.failed) break;
        YBoundRow b;
        b.n = row.n;
        b.h = row.h;
        if (row.n % 2 == 1) { // strip 2m-1, m = (n+1)/2
            int m = (row.n + 1) / 2;
            b.lower = m * lnk;
            b.upper = m * lnk + ln8;
            b.asserted = k > 48.0 * 48.0;
        } else { // strip 2m
            int m = row.n / 2;
            b.lower = m * lnk;
            b.upper = m * lnk + ln8482;
            b.asserted = k > 48.0 * 48.0 * 48.0 * 48.0;
        }
        b.ok = row.h.lo >= b.lower - 1e-9 && row.h.hi <= b.upper + 1e-9;
        if (b.asserted && !b.ok) rep.all_asserted_ok = false;
        rep.bounds.push_back(b);
    }
    return rep;
}

OscillationReport oscillation_report(double k, int n_max, double tol, YVariant variant) {
    if (n_max < 3) throw ContractError("oscillation_report: n_max must be >= 3");
    OscillationReport rep;
    rep.k = k;
    double ln8482 = std::log(8.0 * 48.0 * 48.0);
    rep.epsilon_bound = std::log(k) - 2.0 * ln8482;
    rep.applies = k > 8.0 * 48.0 * 48.0 * 8.0 * 48.0 * 48.0;
    YEntropyReport yt = y_entropy_table(k, n_max, tol, variant);
    for (const auto& row : yt.table.rows)
        if (row.has_delta) rep.deltas.push_back(row.delta.mid());
    // odd-step differences Delta_{2m} = h_{2m+1} - h_{2m} (1-based deltas)
    bool first = true;
    for (size_t i = 1; i + 1 <= rep.deltas.size(); i += 2) {
        double gap = rep.deltas[i] - rep.deltas[i - 1]; // Delta_{2m} - Delta_{2m-1}
        if (first || gap < rep.min_odd_step) rep.min_odd_step = gap;
        first = false;
    }
    rep.oscillates = !first && rep.min_odd_step >= rep.epsilon_bound && rep.epsilon_bound > 0.0;
    try {
        ExtrapolationResult ex = extrapolate(yt.table);
        rep.extrapolation_unreliable = ex.status != FitStatus::Ok;
    } catch (const ContractError&) {
        rep.extrapolation_unreliable = true; // too few deltas to even fit
    }
    return rep;
}

// ---------------------------------------------------------------------------
// segment-closed loop search
// ---------------------------------------------------------------------------

namespace {

struct LoopSearch {
    int w, h;
    YVariant variant;
    std::vector<int> board; // -1 empty, else segment set
    bool found = false;

    LoopSearch(int w_, int h_, YVariant v) : w(w_), h(h_), variant(v), board(w_ * h_, -1) {}

    int at(int x, int y) const { return board[y * w + x]; }
    bool inside(int x, int y) const { return x >= 0 && x < w && y >= 0 && y < h; }

    bool compatible(int x, int y, int seg) const {
        // against all assigned neighbors
        if (inside(x - 1, y) && at(x - 1, y) >= 0 && !grid_h_ok(at(x - 1, y), seg, variant)) return false;
        if (inside(x + 1, y) && at(x + 1, y) >= 0 && !grid_h_ok(seg, at(x + 1, y), variant)) return false;
        if (inside(x, y - 1) && at(x, y - 1) >= 0 && !grid_v_ok(at(x, y - 1), seg, variant)) return false;
        if (inside(x, y + 1) && at(x, y + 1) >= 0 && !grid_v_ok(seg, at(x, y + 1), variant)) return false;
        return true;
    }

    // an unmatched segment end: tile at (x,y) has a segment toward (nx,ny)
    // which is still empty
    bool find_obligation(int& ox, int& oy, int& dir) const {
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                int seg = at(x, y);
                if (seg < 0) continue;
                struct { int bit, dx, dy; } dirs[4] = {
                    {SegL, -1, 0}, {SegR, 1, 0}, {SegU, 0, 1}, {SegD, 0, -1}};
                for (int d = 0; d < 4; ++d) {
                    if (!(seg & dirs[d].bit)) continue;
                    int nx = x + dirs[d].dx, ny = y + dirs[d].dy;
                    if (!inside(nx, ny)) { ox = -1; return true; } // can never close
                    if (at(nx, ny) < 0) {
                        ox = nx;
                        oy = ny;
                        dir = dirs[d].bit;
                        return true;
                    }
                }
            }
        return false;
    }

    void grow() {
        if (found) return;
        int ox, oy, dir = 0;
        if (!find_obligation(ox, oy, dir)) {
            found = true; // every segment matched inside the board
            return;
        }
        if (ox < 0) return; // obligation points off the board
        // the new tile must carry the matching segment
        int need = dir == SegL ? SegR : dir == SegR ? SegL : dir == SegU ? SegD : SegU;
        for (int g = 0; g < 6; ++g) {
            int seg = grid_segments[g];
            if (!(seg & need)) continue;
            if (!compatible(ox, oy, seg)) continue;
            board[oy * w + ox] = seg;
            grow();
            board[oy * w + ox] = -1;
            if (found) return;
        }
    }
};

} // namespace

bool exists_closed_grid_loop(int board_w, int board_h, YVariant variant) {
    if (board_w < 1 || board_h < 1) throw ContractError("exists_closed_grid_loop: bad board");
    LoopSearch ls(board_w, board_h, variant);
    for (int y = 0; y < board_h && !ls.found; ++y)
        for (int x = 0; x < board_w && !ls.found; ++x)
            for (int g = 0; g < 6 && !ls.found; ++g) {
                if (!ls.compatible(x, y, grid_segments[g])) continue;
                ls.board[y * ls.w + x] = grid_segments[g];
                ls.grow();
                ls.board[y * ls.w + x] = -1;
            }
    return ls.found;
}

} // namespace stripent
