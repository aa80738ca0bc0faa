#include "stripent/spectral.hpp"

#include <cmath>
#include <string>

#include "stripent/errors.hpp"

namespace stripent {

PerronResult perron_power(const TransferMatrix& m, double tol, int max_iter) {
    if (m.dim < 1) throw ContractError("perron_power: empty matrix");
    if (!(tol > 0.0)) throw ContractError("perron_power: tol must be positive");
    int d = m.dim;
    std::vector<double> v(d, 1.0), mv(d), w(d);
    PerronResult res;
    double lo = 0.0, hi = 0.0;
    for (int it = 1; it <= max_iter; ++it) {
        m.apply(v, mv);
        lo = HUGE_VAL;
        hi = 0.0;
        double norm = 0.0;
        for (int i = 0; i < d; ++i) {
            w[i] = mv[i] + v[i]; // (M+I) v
            double r = w[i] / v[i];
            lo = std::min(lo, r);
            hi = std::max(hi, r);
            norm = std::max(norm, w[i]);
        }
        res.iterations = it;
        for (int i = 0; i < d; ++i) v[i] = w[i] / norm;
        if ((hi - lo) / lo < tol) {
            res.converged = true;
            break;
        }
    }
    res.enclosure = {lo - 1.0, hi - 1.0};
    res.lambda = 0.5 * (res.enclosure.lo + res.enclosure.hi);
    res.right_vector = v;
    m.apply(v, mv);
    double rmax = 0.0, vmax = 0.0;
    for (int i = 0; i < d; ++i) {
        rmax = std::max(rmax, std::fabs(mv[i] - res.lambda * v[i]));
        vmax = std::max(vmax, std::fabs(v[i]));
    }
    res.residual = rmax / (vmax * std::max(1.0, res.lambda)); // scale-free
    if (!res.converged)
        throw ContractError("perron_power: no convergence after " + std::to_string(max_iter) +
                            " iterations; last enclosure [" + std::to_string(res.enclosure.lo) +
                            ", " + std::to_string(res.enclosure.hi) + "]");
    return res;
}

namespace {

struct ScaledDense {
    std::vector<double> a; // dim x dim, row major; true matrix = a * exp(logscale)
    int d = 0;
    double logscale = 0.0;

    void rescale() {
        double mx = 0.0;
        for (double x : a) mx = std::max(mx, std::fabs(x));
        if (mx > 0.0 && (mx > 1e150 || mx < 1e-150)) {
            for (double& x : a) x /= mx;
            logscale += std::log(mx);
        }
    }
};

ScaledDense multiply(const ScaledDense& x, const ScaledDense& y) {
    ScaledDense z;
    z.d = x.d;
    z.logscale = x.logscale + y.logscale;
    z.a.assign(static_cast<size_t>(x.d) * x.d, 0.0);
    for (int i = 0; i < x.d; ++i) {
        const double* xi = &x.a[static_cast<size_t>(i) * x.d];
        double* zi = &z.a[static_cast<size_t>(i) * x.d];
        for (int k = 0; k < x.d; ++k) {
            double xv = xi[k];
            if (xv == 0.0) continue;
            const double* yk = &y.a[static_cast<size_t>(k) * x.d];
            for (int j = 0; j < x.d; ++j) zi[j] += xv * yk[j];
        }
    }
    z.rescale();
    return z;
}

} // namespace

Interval trace_power_bound(const TransferMatrix& m, long long k) {
    if (!m.symmetric) throw ContractError("trace_power_bound: matrix must be symmetric (real spectrum)");
    if (k < 2 || k % 2 != 0) throw ContractError("trace_power_bound: k must be even and >= 2");
    ScaledDense base;
    base.d = m.dim;
    base.a.assign(static_cast<size_t>(m.dim) * m.dim, 0.0);
    for (int r = 0; r < m.dim; ++r)
        for (size_t p = m.row_ptr[r]; p < m.row_ptr[r + 1]; ++p)
            base.a[static_cast<size_t>(r) * m.dim + m.col_idx[p]] = m.val[p];
    base.rescale();

    ScaledDense acc;
    int mults = 0;
    bool have = false;
    long long e = k;
    while (e > 0) {
        if (e & 1) {
            acc = have ? multiply(acc, base) : base;
            have = true;
            ++mults;
        }
        e >>= 1;
        if (e > 0) {
            base = multiply(base, base);
            ++mults;
        }
    }
    double tr = 0.0;
    for (int i = 0; i < acc.d; ++i) tr += acc.a[static_cast<size_t>(i) * acc.d + i];
    if (!(tr > 0.0)) throw ContractError("trace_power_bound: nonpositive trace");
    double log_tr = std::log(tr) + acc.logscale;
    double slack = 1e-12 * static_cast<double>(mults + 1);
    Interval out;
    out.hi = std::exp(log_tr / static_cast<double>(k)) * (1.0 + slack);
    out.lo = std::exp((log_tr - std::log(static_cast<double>(m.dim))) / static_cast<double>(k)) * (1.0 - slack);
    return out;
}

long long trace_power_schedule(int n, int dim) {
    if (n < 1 || dim < 1) throw ContractError("trace_power_schedule: bad arguments");
    double target = 1.0 + std::pow(4.0, -n);
    for (long long k = 2;; k *= 2) {
        if (std::pow(static_cast<double>(dim), 1.0 / static_cast<double>(k)) <= target) return k;
        if (k > (1LL << 62) / 2) throw ResourceError("trace_power_schedule: k overflow");
    }
}

} // namespace stripent
