#pragma once

#include <string>
#include <vector>

#include "stripent/entropy.hpp"
#include "stripent/sft.hpp"

namespace stripent {

// Segment sets of the six grid tiles: s1 horizontal line, s2 vertical line,
// s3..s6 T-junctions. Bits: Left, Right, Up, Down.
enum GridSegment : int { SegL = 1, SegR = 2, SegU = 4, SegD = 8 };

inline constexpr int grid_segments[6] = {
    SegL | SegR,        // s1
    SegU | SegD,        // s2
    SegL | SegR | SegU, // s3
    SegU | SegD | SegR, // s4
    SegL | SegR | SegD, // s5
    SegU | SegD | SegL, // s6
};

// Two readings of "parallel segments at unit distance which do not meet" for
// adjacent grid tiles. SharedSideOnly forbids two stubs on the same side
// (both Up or both Down across a horizontal pair); AnyPerpendicularPair also
// forbids opposite stubs.
enum class YVariant { SharedSideOnly, AnyPerpendicularPair };

// The block-gluing counterexample with the k interchangeable nonzero integers
// collapsed into the single symbol N of weight k. Symbols: Z, N, s1..s6.
SftSpec build_y(double k, YVariant variant = YVariant::SharedSideOnly);

// Oracle alphabet with explicit integers 0..k (weights all 1).
SftSpec build_y_uncollapsed(int k, YVariant variant = YVariant::SharedSideOnly);

struct YBoundRow {
    int n = 0;
    Interval h;
    double lower = 0.0, upper = 0.0; // the strip bound family for this n
    bool asserted = false;           // k clears the derivation threshold
    bool ok = false;                 // bounds hold (always reported)
};

struct YEntropyReport {
    double k = 0.0;
    EntropyTable table;
    std::vector<YBoundRow> bounds;
    bool all_asserted_ok = false;
};

// h_n(Y;k) for n = 1..n_max with the odd/even strip bound families
// n ln k <= h_{2n-1} <= n ln k + ln 8 and n ln k <= h_{2n} <= n ln k + ln(8*48^2),
// asserted when k exceeds 48^2 (odd) / 48^4 (even).
YEntropyReport y_entropy_table(double k, int n_max, double tol = 1e-12,
                               YVariant variant = YVariant::SharedSideOnly);

struct OscillationReport {
    double k = 0.0;
    double epsilon_bound = 0.0;   // ln k - 2 ln(8*48^2)
    bool applies = false;         // k > (8*48^2)^2
    std::vector<double> deltas;   // Delta_1 .. Delta_{n_max-1}
    double min_odd_step = 0.0;    // min over computed n of Delta_{2n} - Delta_{2n-1}
    bool oscillates = false;      // odd-step minus even-step gap >= epsilon_bound
    bool extrapolation_unreliable = false;
};

OscillationReport oscillation_report(double k, int n_max, double tol = 1e-12,
                                     YVariant variant = YVariant::SharedSideOnly);

// Exhaustive search for a nonempty segment-closed grid configuration (every
// segment of every tile matched inside the configuration) on a w x h board.
// Rings with protruding stubs are locally admissible, so the meaningful
// closed-loop notion is the segment-closed one; none exists.
bool exists_closed_grid_loop(int board_w, int board_h,
                             YVariant variant = YVariant::SharedSideOnly);

} // namespace stripent
