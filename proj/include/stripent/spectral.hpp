#pragma once

#include <vector>

#include "stripent/transfer.hpp"

namespace stripent {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double width() const { return hi - lo; }
    double mid() const { return 0.5 * (lo + hi); }
    bool contains(double x) const { return lo <= x && x <= hi; }
    bool intersects(const Interval& o) const { return lo <= o.hi && o.lo <= hi; }
    Interval minus(const Interval& o) const { return {lo - o.hi, hi - o.lo}; }
};

struct PerronResult {
    double lambda = 0.0;
    Interval enclosure;                // Collatz-Wielandt bounds
    std::vector<double> right_vector;  // positive, sup-norm 1
    double residual = 0.0;             // ||Mv - lambda v||_inf / ||v||_inf
    int iterations = 0;
    bool converged = false;
};

// Power iteration on M + I (defeats imprimitivity; the spectral radius shifts
// by exactly 1). Convergence criterion is the certified Collatz-Wielandt gap
// (hi-lo)/lo < tol, not raw vector change. Throws ContractError with the last
// enclosure on non-convergence.
PerronResult perron_power(const TransferMatrix& m, double tol, int max_iter = 200000);

// Eigenvalue sandwich lambda^k <= tr(M^k) <= dim * lambda^k for symmetric
// nonnegative M and even k, evaluated by repeated squaring with per-step
// scalar rescaling (the trace is carried in log scale). Endpoints are nudged
// outward by the documented rounding allowance 1e-12 * (#multiplies).
Interval trace_power_bound(const TransferMatrix& m, long long k);

// Smallest even k in the ladder 2,4,8,... with dim^(1/k) <= 1 + 4^-n, which
// pins |lambda - tr^(1/k)| below 2^-n for 0-1 strip matrices.
long long trace_power_schedule(int n, int dim);

} // namespace stripent
