#include "stripent/perc.hpp"

#include <cmath>

#include "stripent/errors.hpp"
#include "stripent/rng.hpp"

namespace stripent {

PercExact perc_exact_rational(long long p_num, long long p_den, const Rect& region,
                              const Site& source, const TargetSides& targets, long long site_cap) {
    if (p_den <= 0 || p_num < 0 || p_num > p_den) throw ContractError("perc_exact: bad probability");
    long long cap = site_cap > 0 ? site_cap : max_enum_sites();
    int n = region.area();
    if (n > cap)
        throw ResourceError("perc_exact: " + std::to_string(n) + " sites exceed the cap");
    if (n > 62) throw ResourceError("perc_exact: mask enumeration limited to 62 sites");
    if (n * std::log(static_cast<double>(p_den)) > std::log(9.0e18))
        throw ResourceError("perc_exact: denominator p_den^sites overflows 64 bits");

    PathContext ctx(region, source, targets);
    // weight of a mask is p_num^|open| * (p_den-p_num)^|closed|; denominator p_den^n
    std::vector<long long> pw(n + 1), qw(n + 1);
    pw[0] = qw[0] = 1;
    for (int i = 1; i <= n; ++i) {
        pw[i] = pw[i - 1] * p_num;
        qw[i] = qw[i - 1] * (p_den - p_num);
    }
    PercExact res;
    res.den = 1;
    for (int i = 0; i < n; ++i) res.den *= p_den;
    for (uint64_t mask = 0; mask < (1ULL << n); ++mask) {
        if (!((mask >> ctx.src) & 1ULL)) continue; // source must be open
        if (!ctx.reach([&](int i) { return ((mask >> i) & 1ULL) != 0; })) continue;
        int open = __builtin_popcountll(mask);
        res.num += pw[open] * qw[n - open];
    }
    res.prob = static_cast<double>(res.num) / static_cast<double>(res.den);
    return res;
}

double perc_exact(double p, const Rect& region, const Site& source, const TargetSides& targets) {
    if (p < 0.0 || p > 1.0) throw ContractError("perc_exact: p outside [0,1]");
    // exact rational path when p has a small denominator that fits 64 bits
    for (long long den : {1LL, 2LL, 4LL, 5LL, 8LL, 10LL, 16LL, 20LL, 100LL}) {
        double scaled = p * static_cast<double>(den);
        if (scaled == std::rint(scaled) &&
            region.area() * std::log(static_cast<double>(den)) <= std::log(9.0e18))
            return perc_exact_rational(static_cast<long long>(std::rint(scaled)), den, region,
                                       source, targets)
                .prob;
    }
    int n = region.area();
    if (n > max_enum_sites()) throw ResourceError("perc_exact: region exceeds the site cap");
    PathContext ctx(region, source, targets);
    double total = 0.0;
    for (uint64_t mask = 0; mask < (1ULL << n); ++mask) {
        if (!((mask >> ctx.src) & 1ULL)) continue;
        if (!ctx.reach([&](int i) { return ((mask >> i) & 1ULL) != 0; })) continue;
        int open = __builtin_popcountll(mask);
        total += std::pow(p, open) * std::pow(1.0 - p, n - open);
    }
    return total;
}

PercEstimate perc_mc(double p, int n, long long trials, uint64_t seed) {
    if (trials < 1) throw ContractError("perc_mc: trials must be >= 1");
    if (p < 0.0 || p > 1.0) throw ContractError("perc_mc: p outside [0,1]");
    Rect box{-n, n, -n, n};
    TargetSides all{true, true, true, true};
    PathContext ctx(box, {0, 0}, all);
    PercEstimate est;
    est.p = p;
    est.n = n;
    est.trials = trials;
    est.seed = seed;
    for (long long t = 0; t < trials; ++t) {
        auto open = [&](int i) {
            return uniform01(hash_u64(seed, static_cast<uint64_t>(t) + 1, static_cast<uint64_t>(i))) < p;
        };
        if (ctx.reach(open)) ++est.hits;
    }
    est.estimate = static_cast<double>(est.hits) / static_cast<double>(est.trials);
    // Wilson score interval at z = 1.96
    double z = 1.959963984540054;
    double nn = static_cast<double>(trials), ph = est.estimate;
    double denom = 1.0 + z * z / nn;
    double center = (ph + z * z / (2.0 * nn)) / denom;
    double half = z * std::sqrt(ph * (1.0 - ph) / nn + z * z / (4.0 * nn * nn)) / denom;
    est.ci95 = {center - half, center + half};
    return est;
}

double small_p_bound(double p, int n) {
    if (p < 0.0 || p >= 0.25) throw ContractError("small_p_bound: requires 0 <= p < 0.25");
    if (n < 0) throw ContractError("small_p_bound: n must be >= 0");
    return std::pow(4.0 * p, n) / (1.0 - 4.0 * p);
}

} // namespace stripent
