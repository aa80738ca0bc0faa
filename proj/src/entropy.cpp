#include "stripent/entropy.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "stripent/errors.hpp"

namespace stripent {

Interval strip_entropy(const SftSpec& spec, int n, double tol) {
    if (!(tol > 0.0)) throw ContractError("strip_entropy: tol must be positive");
    TransferMatrix m = build_transfer(spec, n);
    PerronResult pr = perron_power(m, 0.49 * tol);
    return {std::log(pr.enclosure.lo), std::log(pr.enclosure.hi)};
}

EntropyTable entropy_sequence(const SftSpec& spec, int n_max, double tol) {
    if (n_max < 2) throw ContractError("entropy_sequence: n_max must be >= 2");
    EntropyTable t;
    t.spec_name = spec.name;
    t.tol = tol;
    for (int n = 1; n <= n_max; ++n) {
        EntropyRow row;
        row.n = n;
        try {
            row.h = strip_entropy(spec, n, tol);
            row.h_over_n = row.h.mid() / n;
        } catch (const ResourceError&) {
            row.failed = true;
            t.rows.push_back(row);
            break;
        }
        t.rows.push_back(row);
    }
    for (size_t i = 0; i + 1 < t.rows.size(); ++i) {
        if (t.rows[i].failed || t.rows[i + 1].failed) continue;
        t.rows[i].has_delta = true;
        t.rows[i].delta = t.rows[i + 1].h.minus(t.rows[i].h);
    }
    return t;
}

ExtrapolationResult extrapolate(const EntropyTable& table) {
    std::vector<double> d, width;
    for (const auto& r : table.rows)
        if (r.has_delta) {
            d.push_back(r.delta.mid());
            width.push_back(r.delta.width());
        }
    if (d.size() < 4) throw ContractError("extrapolate: need at least 4 delta entries");

    double wmax = 0.0;
    for (double w : width) wmax = std::max(wmax, w);
    double floor = std::max(1e-13, 1000.0 * wmax);

    ExtrapolationResult res;
    std::vector<std::pair<int, double>> pts; // (n, ln s_n), s_n = |d_{n+1}-d_n|
    for (size_t i = 0; i + 1 < d.size(); ++i) {
        double s = std::fabs(d[i + 1] - d[i]);
        if (s > floor) pts.push_back({static_cast<int>(i) + 1, std::log(s)});
    }
    res.h_est = d.back();
    if (pts.empty()) {
        res.status = FitStatus::ExactlyConstant;
        return res;
    }
    if (pts.size() > 8) pts.erase(pts.begin(), pts.end() - 8);
    res.n_lo = pts.front().first;
    res.n_hi = pts.back().first;
    if (pts.size() < 2) {
        res.status = FitStatus::Unreliable;
        return res;
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto [x, y] : pts) { sx += x; sy += y; sxx += double(x) * x; sxy += x * y; }
    double np = static_cast<double>(pts.size());
    double det = np * sxx - sx * sx;
    res.rate = (np * sxy - sx * sy) / det;
    double c = (sy * sxx - sx * sxy) / det;
    res.ratio = std::exp(res.rate);
    double ss = 0.0;
    for (auto [x, y] : pts) {
        double e = y - (c + res.rate * x);
        ss += e * e;
    }
    res.fit_residual = std::sqrt(ss / np);
    if (res.rate >= 0.0) {
        res.status = FitStatus::Unreliable;
        return res;
    }
    double last_gap = d[d.size() - 1] - d[d.size() - 2];
    res.h_est = d.back() + last_gap * res.ratio / (1.0 - res.ratio);
    return res;
}

double dbar_entropy_bound(double eps, int alphabet_size) {
    if (eps < 0.0 || eps > 1.0) throw ContractError("dbar_entropy_bound: eps must lie in [0,1]");
    if (alphabet_size < 2) throw ContractError("dbar_entropy_bound: alphabet needs >= 2 symbols");
    auto xlnx = [](double x) { return x > 0.0 ? x * std::log(x) : 0.0; };
    return eps * std::log(static_cast<double>(alphabet_size)) - xlnx(eps) - xlnx(1.0 - eps);
}

MiddleRowReport middle_row_experiment(const SftSpec& spec, int n_max, int window, double tol) {
    if (n_max < 4) throw ContractError("middle_row_experiment: n_max must be >= 4");
    if (window < 1) throw ContractError("middle_row_experiment: window must be >= 1");
    MiddleRowReport rep;
    rep.window = window;
    std::vector<Interval> h(n_max + 2);
    for (int n = 1; n <= n_max + 1; ++n) h[n] = strip_entropy(spec, n, tol);
    for (int n = 2; n <= n_max; ++n) {
        MiddleRowRow row;
        row.n = n;
        int mid = n / 2;
        ColumnSet cols = enumerate_columns(spec, n + 1);
        ParryChain chain = parry(build_transfer(spec, cols), cols);
        row.conditional = conditional_row_entropy(chain, RowSelector{{mid + 1}},
                                                  RowSelector{{mid}}, window);
        row.delta = h[n + 1].minus(h[n]);
        row.abs_diff = std::fabs(row.conditional.mid() - row.delta.mid());
        row.contained = row.conditional.intersects(row.delta);
        row.gap = row.contained ? 0.0
                                : std::max(row.delta.lo - row.conditional.hi,
                                           row.conditional.lo - row.delta.hi);
        rep.rows.push_back(row);
    }
    return rep;
}

MiddleRowReport middle_row_experiment(int n_max, int window, double tol) {
    return middle_row_experiment(hard_square(), n_max, window, tol);
}

std::string entropy_table_csv(const EntropyTable& t) {
    std::ostringstream os;
    os << "n,h_n,lo,hi,h_n_over_n,delta_n\n";
    char buf[256];
    for (const auto& r : t.rows) {
        if (r.failed) {
            os << r.n << ",FAILED,,,,\n";
            continue;
        }
        if (r.has_delta)
            std::snprintf(buf, sizeof buf, "%d,%.15g,%.15g,%.15g,%.15g,%.15g\n", r.n, r.h.mid(),
                          r.h.lo, r.h.hi, r.h_over_n, r.delta.mid());
        else
            std::snprintf(buf, sizeof buf, "%d,%.15g,%.15g,%.15g,%.15g,\n", r.n, r.h.mid(), r.h.lo,
                          r.h.hi, r.h_over_n);
        os << buf;
    }
    return os.str();
}

} // namespace stripent
