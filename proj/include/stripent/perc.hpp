#pragma once

#include <cstdint>
#include <vector>

#include "stripent/rect.hpp"
#include "stripent/spectral.hpp"

namespace stripent {

struct PercEstimate {
    double p = 0.0;
    int n = 0;
    long long trials = 0;
    long long hits = 0;
    double estimate = 0.0;
    Interval ci95;
    uint64_t seed = 0;
};

struct PercExact {
    long long num = 0;
    long long den = 1;
    double prob = 0.0;
};

// Exact probability of the exit event on a rectangle (see PathContext) under
// independent site percolation with rational p = p_num/p_den. Sum over all
// open/closed assignments; integers throughout.
PercExact perc_exact_rational(long long p_num, long long p_den, const Rect& region,
                              const Site& source, const TargetSides& targets,
                              long long site_cap = 0 /* 0 = STRIPENT_MAX_SITES */);

double perc_exact(double p, const Rect& region, const Site& source, const TargetSides& targets);

// Monte Carlo estimate of P_p(0 <-> boundary of [-n,n]^2) with the same event
// predicate, lazily sampling site states from hash(seed, trial, site); open
// iff u(site) < p, which couples estimates monotonically across p for a fixed
// seed. Wilson-score 95% interval.
PercEstimate perc_mc(double p, int n, long long trials, uint64_t seed);

// (4p)^n / (1 - 4p) for p < 1/4; the bound may exceed 1 and is reported as-is.
double small_p_bound(double p, int n);

} // namespace stripent
