#include "stripent/selftest.hpp"

#include <cmath>
#include <sstream>

#include "stripent/entropy.hpp"
#include "stripent/errors.hpp"
#include "stripent/parry.hpp"
#include "stripent/perc.hpp"
#include "stripent/rect.hpp"
#include "stripent/spectral.hpp"
#include "stripent/transfer.hpp"
#include "stripent/yshift.hpp"

namespace stripent {

namespace {

struct Suite {
    std::vector<CheckResult> results;

    void check(const std::string& name, bool ok, const std::string& detail = "") {
        results.push_back({name, ok, detail});
    }

    template <class Fn>
    void run(const std::string& name, Fn&& fn) {
        try {
            fn(*this, name);
        } catch (const std::exception& e) {
            check(name, false, std::string("exception: ") + e.what());
        }
    }
};

} // namespace

std::vector<CheckResult> selftest(Fault fault) {
    Suite s;
    SftSpec hs = hard_square();

    s.run("fibonacci_column_counts", [&](Suite& su, const std::string& name) {
        long long a = 2, b = 3; // counts at n = 1, 2
        bool ok = true;
        for (int n = 1; n <= 14; ++n) {
            long long expect = n == 1 ? a : n == 2 ? b : 0;
            if (n > 2) {
                expect = a + b;
                a = b;
                b = expect;
            }
            if (enumerate_columns(hs, n).count() != expect) ok = false;
        }
        su.check(name, ok);
    });

    s.run("transfer_small_matrices", [&](Suite& su, const std::string& name) {
        TransferMatrix b1 = build_transfer(hs, 1);
        if (fault == Fault::WrongTransferEntry) b1.val[1] = 0.0; // injected corruption
        bool ok = b1.dim == 2 && b1.entry(0, 0) == 1.0 && b1.entry(0, 1) == 1.0 &&
                  b1.entry(1, 0) == 1.0 && b1.entry(1, 1) == 0.0;
        TransferMatrix b2 = build_transfer(hs, 2);
        ok = ok && b2.dim == 3 && b2.entry(1, 1) == 0.0 && b2.entry(2, 2) == 0.0 &&
             b2.entry(0, 1) == 1.0;
        su.check(name, ok, ok ? "" : "transfer entries differ from the pairwise adjacency rule");
    });

    s.run("recursive_equals_direct", [&](Suite& su, const std::string& name) {
        bool ok = true;
        for (int n = 2; n <= 8 && ok; ++n) {
            RecursiveTransfer rec = build_transfer_recursive_hardsquare(n);
            ColumnSet cols = enumerate_columns(hs, n);
            TransferMatrix direct = build_transfer(hs, cols);
            if (rec.matrix.dim != direct.dim) { ok = false; break; }
            // reindex by the bitmask encoding of the enumerated columns
            std::vector<int> perm(rec.matrix.dim, -1);
            for (int i = 0; i < direct.dim; ++i) {
                uint64_t mask = 0;
                for (int y = 0; y < n; ++y)
                    if (cols.columns[i][y] == 1) mask |= 1ULL << y;
                for (int j = 0; j < rec.matrix.dim; ++j)
                    if (rec.column_masks[j] == mask) perm[i] = j;
            }
            for (int r = 0; r < direct.dim && ok; ++r)
                for (int c = 0; c < direct.dim; ++c)
                    if (direct.entry(r, c) != rec.matrix.entry(perm[r], perm[c])) { ok = false; break; }
        }
        su.check(name, ok);
    });

    s.run("closed_form_strip_entropies", [&](Suite& su, const std::string& name) {
        double h1 = strip_entropy(hs, 1, 1e-12).mid();
        double h2 = strip_entropy(hs, 2, 1e-12).mid();
        bool ok = std::fabs(h1 - std::log((1.0 + std::sqrt(5.0)) / 2.0)) < 1e-10 &&
                  std::fabs(h2 - std::log(1.0 + std::sqrt(2.0))) < 1e-10;
        su.check(name, ok);
    });

    s.run("trace_power_sandwich", [&](Suite& su, const std::string& name) {
        bool ok = true;
        for (int n = 1; n <= 6 && ok; ++n) {
            TransferMatrix m = build_transfer(hs, n);
            double lam = perron_power(m, 1e-12).lambda;
            for (long long k = 2; k <= 64; k *= 2) {
                Interval iv = trace_power_bound(m, k);
                if (!(iv.lo <= lam && lam <= iv.hi)) ok = false;
            }
        }
        su.check(name, ok);
    });

    s.run("weighted_count_brute_force", [&](Suite& su, const std::string& name) {
        bool ok = true;
        for (int n = 1; n <= 4 && ok; ++n)
            for (int m = 1; m <= 4 && ok; ++m) {
                CountResult c = weighted_count(hs, n, m);
                double bf = brute_force_weighted_count(hs, m, n);
                if (!c.exact || c.value() != bf) ok = false;
            }
        su.check(name, ok);
    });

    s.run("parry_stationarity", [&](Suite& su, const std::string& name) {
        ColumnSet cols = enumerate_columns(hs, 2);
        ParryChain ch = parry(build_transfer(hs, cols), cols);
        std::vector<double> piP(ch.dim(), 0.0);
        for (int r = 0; r < ch.dim(); ++r)
            for (size_t k = ch.P.row_ptr[r]; k < ch.P.row_ptr[r + 1]; ++k)
                piP[ch.P.col_idx[k]] += ch.pi[r] * ch.P.val[k];
        double dev = 0.0;
        for (int i = 0; i < ch.dim(); ++i) dev = std::max(dev, std::fabs(piP[i] - ch.pi[i]));
        su.check(name, dev < 1e-12, "pi P deviates by " + std::to_string(dev));
    });

    s.run("uniform_conditional_exact_zero", [&](Suite& su, const std::string& name) {
        bool ok = true;
        for (int n = 2; n <= 3 && ok; ++n) {
            ColumnSet cols = enumerate_columns(hs, n);
            ParryChain ch = parry(build_transfer(hs, cols), cols);
            for (int w = 1; w <= 2; ++w)
                if (verify_uniform_conditional(ch, w) != 0.0) ok = false;
        }
        su.check(name, ok);
    });

    s.run("y_collapse_exactness", [&](Suite& su, const std::string& name) {
        bool ok = true;
        for (int k = 2; k <= 3 && ok; ++k) {
            SftSpec collapsed = build_y(static_cast<double>(k));
            SftSpec full = build_y_uncollapsed(k);
            for (int height = 1; height <= 2 && ok; ++height)
                for (int width = 1; width <= 3 && ok; ++width) {
                    CountResult c = weighted_count(collapsed, height, width);
                    double bf = brute_force_weighted_count(full, width, height);
                    if (!c.exact || c.value() != bf) ok = false;
                }
        }
        su.check(name, ok);
    });

    s.run("percolation_sandwich_2x2", [&](Suite& su, const std::string& name) {
        auto reports = percolation_sandwich(Rect{0, 1, 0, 1});
        bool ok = !reports.empty();
        for (const auto& r : reports) ok = ok && r.all_ok;
        su.check(name, ok);
    });

    s.run("perc_exact_15_over_32", [&](Suite& su, const std::string& name) {
        PercExact pe = perc_exact_rational(1, 2, Rect{-1, 1, -1, 1}, {0, 0},
                                           TargetSides{true, true, true, true});
        su.check(name, pe.num * 32 == pe.den * 15,
                 std::to_string(pe.num) + "/" + std::to_string(pe.den));
    });

    s.run("dbar_bound_values", [&](Suite& su, const std::string& name) {
        bool ok = dbar_entropy_bound(0.0, 2) == 0.0 &&
                  std::fabs(dbar_entropy_bound(0.5, 2) - (0.5 * std::log(2.0) + std::log(2.0))) < 1e-12 &&
                  std::fabs(dbar_entropy_bound(1.0, 2) - std::log(2.0)) < 1e-12;
        su.check(name, ok);
    });

    s.run("dominance_identity", [&](Suite& su, const std::string& name) {
        RectMeasure m = exact_rect_measure(Rect{0, 1, 0, 1}, EdgeLabel::Zero, EdgeLabel::Zero,
                                           EdgeLabel::Zero, EdgeLabel::Zero);
        DiscreteMeasure u = DiscreteMeasure::uniform(m);
        CheckerboardOrder ord = CheckerboardOrder::over(m.sites);
        su.check(name, m.count() == 7 && dominance_check(u, u, ord).dominated);
    });

    s.run("sft_roundtrip", [&](Suite& su, const std::string& name) {
        SftSpec y = build_y(7.0);
        su.check(name, specs_equal(load_sft(save_sft(y)), y) &&
                           specs_equal(load_sft(save_sft(hs)), hs));
    });

    return s.results;
}

} // namespace stripent
