// Acceptance suite: one line per criterion, nonzero exit on any failure.
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "stripent/entropy.hpp"
#include "stripent/errors.hpp"
#include "stripent/parry.hpp"
#include "stripent/perc.hpp"
#include "stripent/rect.hpp"
#include "stripent/rng.hpp"
#include "stripent/spectral.hpp"
#include "stripent/transfer.hpp"
#include "stripent/yshift.hpp"

using namespace stripent;

namespace {

struct Check {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& msg) {
        if (!cond && ok) {
            ok = false;
            detail = msg;
        }
    }
};

const double kPhi = (1.0 + std::sqrt(5.0)) / 2.0;
const EdgeLabel Z = EdgeLabel::Zero, P = EdgeLabel::Plus, M = EdgeLabel::Minus;

uint64_t column_mask(const std::vector<int>& col) {
    uint64_t m = 0;
    for (size_t y = 0; y < col.size(); ++y)
        if (col[y] == 1) m |= 1ULL << y;
    return m;
}

// ---------------------------------------------------------------------------

void criterion_closed_forms(Check& c) {
    SftSpec hs = hard_square();
    double h1 = strip_entropy(hs, 1, 1e-12).mid();
    double h2 = strip_entropy(hs, 2, 1e-12).mid();
    c.require(std::fabs(h1 - std::log(kPhi)) < 1e-10, "h_1 differs from ln((1+sqrt5)/2)");
    c.require(std::fabs(h2 - std::log(1.0 + std::sqrt(2.0))) < 1e-10, "h_2 differs from ln(1+sqrt2)");
}

void criterion_fibonacci(Check& c) {
    SftSpec hs = hard_square();
    long long a = 2, b = 3;
    c.require(enumerate_columns(hs, 1).count() == a, "n=1 count");
    c.require(enumerate_columns(hs, 2).count() == b, "n=2 count");
    for (int n = 3; n <= 20; ++n) {
        long long f = a + b;
        a = b;
        b = f;
        c.require(enumerate_columns(hs, n).count() == f,
                  "column count at n=" + std::to_string(n) + " is not F_{n+2}");
    }
}

void criterion_recursive_builder(Check& c) {
    SftSpec hs = hard_square();
    for (int n = 1; n <= 10; ++n) {
        RecursiveTransfer rec = build_transfer_recursive_hardsquare(n);
        ColumnSet cols = enumerate_columns(hs, n);
        TransferMatrix direct = build_transfer(hs, cols);
        c.require(rec.matrix.dim == direct.dim, "dimension mismatch at n=" + std::to_string(n));
        if (rec.matrix.dim != direct.dim) return;
        std::vector<int> perm(direct.dim, -1);
        std::map<uint64_t, int> where;
        for (int j = 0; j < rec.matrix.dim; ++j) where[rec.column_masks[j]] = j;
        for (int i = 0; i < direct.dim; ++i) perm[i] = where.at(column_mask(cols.columns[i]));
        for (int r = 0; r < direct.dim; ++r)
            for (int col = 0; col < direct.dim; ++col)
                if (direct.entry(r, col) != rec.matrix.entry(perm[r], perm[col])) {
                    c.require(false, "entry mismatch at n=" + std::to_string(n));
                    return;
                }
    }
}

void criterion_trace_sandwich(Check& c) {
    SftSpec hs = hard_square();
    for (int n = 1; n <= 12; ++n) {
        TransferMatrix m = build_transfer(hs, n);
        PerronResult pr = perron_power(m, 1e-12);
        double prev_width = HUGE_VAL;
        for (long long k = 2; k <= 1024; k *= 2) {
            Interval iv = trace_power_bound(m, k);
            c.require(iv.lo <= pr.lambda && pr.lambda <= iv.hi,
                      "sandwich misses lambda at n=" + std::to_string(n) + " k=" + std::to_string(k));
            c.require(iv.width() <= prev_width * (1.0 + 1e-9),
                      "width not shrinking at n=" + std::to_string(n) + " k=" + std::to_string(k));
            double factor_bound =
                pr.enclosure.hi * (std::pow(2.0, static_cast<double>(n) / static_cast<double>(k)) - 1.0);
            c.require(iv.width() <= factor_bound + 1e-9,
                      "width exceeds the 2^(n/k) factor bound at n=" + std::to_string(n) +
                          " k=" + std::to_string(k));
            prev_width = iv.width();
        }
    }
}

void criterion_exponential_differences(Check& c) {
    SftSpec hs = hard_square();
    EntropyTable t16 = entropy_sequence(hs, 16, 1e-12);
    ExtrapolationResult e16 = extrapolate(t16);
    c.require(e16.status == FitStatus::Ok, "fit did not converge");
    c.require(e16.ratio < 0.35,
              "fitted ratio " + std::to_string(e16.ratio) + " is not below 0.35");
    EntropyTable t14 = entropy_sequence(hs, 14, 1e-12);
    ExtrapolationResult e14 = extrapolate(t14);
    c.require(std::fabs(e14.h_est - e16.h_est) < 1e-6,
              "extrapolations from n_max=14 and 16 disagree by " +
                  std::to_string(std::fabs(e14.h_est - e16.h_est)));
    // second differences decrease over the resolvable range n in [3,15]
    std::vector<double> d;
    for (const auto& r : t16.rows)
        if (r.has_delta) d.push_back(r.delta.mid());
    double floor = 1e-10;
    for (size_t i = 3; i + 1 < d.size(); ++i) {
        double s_prev = std::fabs(d[i - 1] - d[i - 2]), s = std::fabs(d[i] - d[i - 1]);
        if (s_prev < floor || s < floor) continue;
        c.require(s < s_prev, "second differences fail to decrease at n=" + std::to_string(i));
    }
}

void criterion_per_site_lower(Check& c) {
    SftSpec hs = hard_square();
    EntropyTable t = entropy_sequence(hs, 16, 1e-12);
    ExtrapolationResult ex = extrapolate(t);
    for (const auto& r : t.rows)
        c.require(r.h_over_n >= ex.h_est - 1e-6,
                  "h_n/n below h_est - 1e-6 at n=" + std::to_string(r.n));
}

void criterion_uniform_conditional(Check& c) {
    SftSpec hs = hard_square();
    for (int n = 2; n <= 4; ++n) {
        ColumnSet cols = enumerate_columns(hs, n);
        ParryChain ch = parry(build_transfer(hs, cols), cols);
        for (int w = 1; w <= 3; ++w) {
            double dev = verify_uniform_conditional(ch, w);
            c.require(dev == 0.0, "deviation " + std::to_string(dev) + " at n=" +
                                      std::to_string(n) + " w=" + std::to_string(w));
        }
    }
}

void criterion_th1_strassen(Check& c) {
    const EdgeLabel labs[3] = {M, Z, P};
    auto rank = [](EdgeLabel e) { return e == M ? 0 : e == Z ? 1 : 2; };
    // all rectangle shapes up to 2x3 at both corner parities
    std::vector<Rect> rects;
    for (int w = 1; w <= 2; ++w)
        for (int h = 1; h <= 3; ++h)
            for (int ox = 0; ox <= 1; ++ox) rects.push_back({ox, ox + w - 1, 0, h - 1});
    rects.push_back({0, 2, 0, 1}); // 3x2 shapes as well
    rects.push_back({1, 3, 0, 1});
    for (const Rect& r : rects) {
        CheckerboardOrder ord = CheckerboardOrder::over(r.sites());
        std::map<int, RectMeasure> measures;
        std::map<int, DiscreteMeasure> uniforms;
        auto key = [&](int a, int b, int l, int rr) { return ((a * 3 + b) * 3 + l) * 3 + rr; };
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                for (int l = 0; l < 3; ++l)
                    for (int rr = 0; rr < 3; ++rr) {
                        RectMeasure m = exact_rect_measure(r, labs[a], labs[b], labs[l], labs[rr]);
                        uniforms[key(a, b, l, rr)] = DiscreteMeasure::uniform(m);
                        measures.emplace(key(a, b, l, rr), std::move(m));
                    }
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                for (int l = 0; l < 3; ++l)
                    for (int rr = 0; rr < 3; ++rr)
                        for (int a2 = 0; a2 < 3; ++a2)
                            for (int b2 = 0; b2 < 3; ++b2)
                                for (int l2 = 0; l2 < 3; ++l2)
                                    for (int r2 = 0; r2 < 3; ++r2) {
                                        if (rank(labs[a]) > rank(labs[a2]) ||
                                            rank(labs[b]) > rank(labs[b2]) ||
                                            rank(labs[l]) > rank(labs[l2]) ||
                                            rank(labs[rr]) > rank(labs[r2]))
                                            continue;
                                        const DiscreteMeasure& lo = uniforms[key(a, b, l, rr)];
                                        const DiscreteMeasure& hi = uniforms[key(a2, b2, l2, r2)];
                                        DominanceResult res = dominance_check(lo, hi, ord);
                                        if (!res.dominated) {
                                            c.require(false, "dominance fails on a comparable pair");
                                            return;
                                        }
                                        // verify the witness coupling exactly
                                        std::map<uint32_t, long long> ml, mr;
                                        for (const auto& e : res.coupling) {
                                            if (!ord.leq(e.x, e.y)) {
                                                c.require(false, "coupling leaves the order");
                                                return;
                                            }
                                            ml[e.x] += e.flow;
                                            mr[e.y] += e.flow;
                                        }
                                        for (size_t i = 0; i < lo.atoms.size(); ++i)
                                            if (ml[lo.atoms[i]] !=
                                                lo.weight[i] * (res.denom / lo.total)) {
                                                c.require(false, "left marginal off");
                                                return;
                                            }
                                        for (size_t j = 0; j < hi.atoms.size(); ++j)
                                            if (mr[hi.atoms[j]] !=
                                                hi.weight[j] * (res.denom / hi.total)) {
                                                c.require(false, "right marginal off");
                                                return;
                                            }
                                    }
    }
    // engineered incomparable pair is rejected with a certified up-set
    Rect r{0, 1, 0, 0};
    CheckerboardOrder ord = CheckerboardOrder::over(r.sites());
    DiscreteMeasure mu{{0b01u}, {1}, 1}, nu{{0b10u}, {1}, 1};
    DominanceResult res = dominance_check(mu, nu, ord);
    c.require(!res.dominated, "incomparable point masses wrongly dominated");
    c.require(res.mu_upset > res.nu_upset, "up-set witness does not separate the measures");
}

void criterion_restriction_family(Check& c) {
    struct Inst {
        Rect in, out;
        EdgeLabel u, d, l, r;
    };
    std::vector<Inst> instances = {
        // shared top edge
        {{0, 1, 1, 2}, {-1, 2, 0, 2}, Z, P, P, P},
        {{0, 1, 1, 2}, {-1, 2, 0, 2}, Z, M, M, M},
        {{0, 0, 0, 1}, {-1, 1, -1, 1}, Z, P, P, P},
        {{1, 2, 1, 2}, {0, 3, 0, 2}, Z, M, M, M},
        // shared bottom edge
        {{0, 1, 0, 1}, {-1, 2, 0, 2}, P, Z, P, P},
        {{0, 1, 0, 1}, {-1, 2, 0, 2}, M, Z, M, M},
        {{1, 1, 1, 2}, {0, 2, 1, 3}, P, Z, P, P},
        {{0, 1, 0, 1}, {-2, 2, 0, 2}, M, Z, M, M},
        // shared top and bottom edges
        {{0, 1, 0, 1}, {-1, 2, 0, 1}, Z, Z, P, P},
        {{1, 2, 0, 2}, {0, 4, 0, 2}, Z, Z, P, P},
        {{0, 0, 0, 1}, {-2, 2, 0, 1}, Z, Z, P, P},
    };
    for (const auto& inst : instances) {
        RestrictionCheck chk = dominance_restriction_check(inst.in, inst.out, inst.u, inst.d,
                                                           inst.l, inst.r);
        c.require(chk.holds, "restriction dominance fails for labels " + chk.labels);
    }
}

void criterion_sandwich(Check& c) {
    for (int w = 1; w <= 3; ++w)
        for (int h = 1; h <= 3; ++h) {
            Rect r{0, w - 1, 0, h - 1};
            for (const auto& rep : percolation_sandwich(r))
                for (const auto& row : rep.rows)
                    c.require(row.exact_ok, "sandwich fails on " + std::to_string(w) + "x" +
                                                std::to_string(h) + " pair " + rep.pair);
        }
}

void criterion_cond_indep(Check& c) {
    SftSpec hs = hard_square();
    for (int n = 4; n <= 6; ++n) {
        ColumnSet cols = enumerate_columns(hs, n);
        ParryChain ch = parry(build_transfer(hs, cols), cols);
        int j = n / 2 + 1;
        for (int m : {6, 8}) {
            CondIndepReport r1 = conditional_independence_test(ch, j, 1, m);
            CondIndepReport r2 = conditional_independence_test(ch, j, 2, m);
            c.require(r1.intersect && r2.intersect,
                      "conditional intervals fail to intersect at n=" + std::to_string(n) +
                          " m=" + std::to_string(m));
        }
    }
}

void criterion_middle_row(Check& c) {
    // containment at the loose window
    MiddleRowReport loose = middle_row_experiment(8, 2);
    for (const auto& r : loose.rows)
        if (r.n == 4 || r.n == 6 || r.n == 8) {
            c.require(r.contained && r.gap == 0.0,
                      "conditional interval misses Delta_n at n=" + std::to_string(r.n));
        }
    // the tight window shows |middle-row - Delta_n| shrinking
    MiddleRowReport tight = middle_row_experiment(8, 7);
    std::map<int, double> diff;
    for (const auto& r : tight.rows) diff[r.n] = r.abs_diff;
    c.require(diff[6] < diff[4] && diff[8] < diff[6], "middle-row differences do not shrink");
}

void criterion_marginal_decay(Check& c) {
    MarginalDecayReport rep = marginal_decay_table(hard_square(), 14);
    c.require(rep.bottom_fit.slope < 0.0, "bottom-aligned fit is not decaying");
    c.require(rep.shift_fit.slope < 0.0, "shifted fit is not decaying");
    c.require(rep.bottom_fit.max_ratio_to_envelope <= 3.0,
              "a bottom-aligned point exceeds 3x the fitted envelope");
    c.require(rep.shift_fit.max_ratio_to_envelope <= 3.0,
              "a shifted point exceeds 3x the fitted envelope");
}

void criterion_cftp(Check& c) {
    struct Case {
        Rect r;
        double crit99; // chi-square 0.99 quantile at df = count-1
    };
    // 2x2 has 7 fillings (df 6), 2x3 has 17 (df 16)
    std::vector<Case> cases = {{{0, 1, 0, 1}, 16.811894}, {{0, 1, 0, 2}, 31.999927}};
    for (const auto& cs : cases) {
        auto boundary = boundary_config(cs.r, Z, Z, Z, Z);
        RectMeasure exact = exact_rect_measure(cs.r, boundary);
        std::map<uint32_t, long long> freq;
        long long samples = 100000;
        for (long long i = 0; i < samples; ++i)
            ++freq[cftp_sample(cs.r, boundary, hash_u64(20240517ULL, 0xacc3ULL,
                                                        static_cast<uint64_t>(i)))];
        double expected = static_cast<double>(samples) / static_cast<double>(exact.count());
        double chi2 = 0.0;
        for (uint32_t f : exact.fillings) {
            double obs = freq.count(f) ? static_cast<double>(freq[f]) : 0.0;
            chi2 += (obs - expected) * (obs - expected) / expected;
        }
        c.require(chi2 < cs.crit99, "chi2 " + std::to_string(chi2) + " over the 99% quantile " +
                                        std::to_string(cs.crit99));
    }
}

void criterion_percolation(Check& c) {
    PercEstimate e1 = perc_mc(0.5, 1, 1000000, 20240517ULL);
    double exact = 15.0 / 32.0;
    double sigma = std::sqrt(exact * (1.0 - exact) / static_cast<double>(e1.trials));
    c.require(std::fabs(e1.estimate - exact) < 4.0 * sigma,
              "n=1 estimate " + std::to_string(e1.estimate) + " more than 4 sigma from 15/32");
    // decay fit over n in {2,4,8,16,32}
    std::vector<std::pair<int, double>> pts;
    for (int n : {2, 4, 8, 16, 32}) {
        PercEstimate e = perc_mc(0.5, n, 300000, 20240517ULL);
        c.require(e.hits > 0, "no hits at n=" + std::to_string(n));
        if (e.hits > 0) pts.push_back({n, std::log(e.estimate)});
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto [x, y] : pts) { sx += x; sy += y; sxx += double(x) * x; sxy += x * y; }
    double np = static_cast<double>(pts.size());
    double slope = (np * sxy - sx * sy) / (np * sxx - sx * sx);
    c.require(slope < 0.0, "decay fit slope is not negative");
    // the small-p closed form dominates the estimates
    for (double p : {0.1, 0.2})
        for (int n : {1, 2, 4, 8, 16}) {
            PercEstimate e = perc_mc(p, n, 200000, 20240517ULL);
            double bound = small_p_bound(p, n);
            double s = std::sqrt(std::max(e.estimate, 1e-7) / static_cast<double>(e.trials));
            c.require(e.estimate <= bound + 4.0 * s,
                      "estimate exceeds the small-p bound at p=" + std::to_string(p) +
                          " n=" + std::to_string(n));
        }
}

void criterion_counterexample(Check& c) {
    for (int k : {2, 3}) {
        SftSpec collapsed = build_y(static_cast<double>(k));
        SftSpec full = build_y_uncollapsed(k);
        for (int height = 1; height <= 3; ++height)
            for (int width = 1; width <= 4; ++width) {
                CountResult cc = weighted_count(collapsed, height, width);
                double bf = brute_force_weighted_count(full, width, height);
                c.require(cc.exact && cc.value() == bf,
                          "collapse mismatch at k=" + std::to_string(k) + " shape " +
                              std::to_string(width) + "x" + std::to_string(height));
            }
    }
    double k = 339738625.0; // (8*48^2)^2 + 1
    YEntropyReport rep = y_entropy_table(k, 5, 1e-12);
    c.require(rep.bounds.size() == 5, "bound table incomplete");
    for (const auto& b : rep.bounds) {
        c.require(b.asserted, "bound family not asserted at n=" + std::to_string(b.n));
        c.require(b.ok, "strip bound violated at n=" + std::to_string(b.n));
    }
    OscillationReport osc = oscillation_report(k, 5, 1e-12);
    c.require(osc.applies, "oscillation hypotheses unmet");
    c.require(osc.epsilon_bound > 0.0, "epsilon bound not positive");
    c.require(osc.deltas.size() >= 3, "too few deltas");
    if (osc.deltas.size() >= 2)
        c.require(osc.deltas[1] - osc.deltas[0] >= osc.epsilon_bound,
                  "Delta_2 - Delta_1 below ln k - 2 ln(8*48^2)");
    c.require(osc.oscillates, "odd/even oscillation not demonstrated");
}

void criterion_dbar_values(Check& c) {
    c.require(std::fabs(dbar_entropy_bound(0.0, 2)) < 1e-12, "eps=0, |A|=2");
    c.require(std::fabs(dbar_entropy_bound(0.0, 7)) < 1e-12, "eps=0, |A|=7");
    c.require(std::fabs(dbar_entropy_bound(0.5, 2) - (0.5 * std::log(2.0) + std::log(2.0))) < 1e-12,
              "eps=0.5, |A|=2");
    c.require(std::fabs(dbar_entropy_bound(1.0, 2) - std::log(2.0)) < 1e-12, "eps=1, |A|=2");
}

} // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        std::function<void(Check&)> fn;
    };
    std::vector<Criterion> criteria = {
        {1, "closed-form spectral checks h_1, h_2", criterion_closed_forms},
        {2, "Fibonacci column counts to n=20", criterion_fibonacci},
        {3, "recursive four-copy builder equals direct builder", criterion_recursive_builder},
        {4, "trace-power sandwich, n<=12, k in {2..1024}", criterion_trace_sandwich},
        {5, "exponential convergence of differences", criterion_exponential_differences},
        {6, "h_n/n >= h_est - 1e-6", criterion_per_site_lower},
        {7, "uniform conditional distribution, exact zero", criterion_uniform_conditional},
        {8, "stochastic dominance with Strassen witnesses", criterion_th1_strassen},
        {9, "restriction monotonicity of nested rectangles", criterion_restriction_family},
        {10, "site-probability sandwich, exact, rectangles up to 3x3", criterion_sandwich},
        {11, "conditional-entropy intervals intersect", criterion_cond_indep},
        {12, "middle-row experiment", criterion_middle_row},
        {13, "single-site marginal decay envelope", criterion_marginal_decay},
        {14, "CFTP chi-square at 99%", criterion_cftp},
        {15, "percolation MC, decay fit, small-p bound", criterion_percolation},
        {16, "counterexample collapse, bounds, oscillation", criterion_counterexample},
        {17, "dbar entropy-bound closed forms", criterion_dbar_values},
    };
    int failures = 0;
    for (auto& cr : criteria) {
        auto t0 = std::chrono::steady_clock::now();
        Check chk;
        try {
            cr.fn(chk);
        } catch (const std::exception& e) {
            chk.ok = false;
            chk.detail = std::string("exception: ") + e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s criterion %2d: %s (%.1fs)%s%s\n", chk.ok ? "PASS" : "FAIL", cr.id, cr.name,
                    secs, chk.ok ? "" : " -- ", chk.ok ? "" : chk.detail.c_str());
        std::fflush(stdout);
        if (!chk.ok) ++failures;
    }
    if (failures) std::printf("%d criterion(s) FAILED\n", failures);
    else std::printf("all 17 criteria passed\n");
    return failures == 0 ? 0 : 1;
}
