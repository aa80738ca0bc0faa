#pragma once

#include <string>
#include <vector>

#include "stripent/parry.hpp"
#include "stripent/spectral.hpp"

namespace stripent {

struct EntropyRow {
    int n = 0;
    Interval h;          // enclosure of h_n = ln lambda(B_n), nats per column
    double h_over_n = 0.0;
    bool has_delta = false;
    Interval delta;      // h_{n+1} - h_n, outward rounded
    bool failed = false; // resource exhaustion marker
};

struct EntropyTable {
    std::string spec_name;
    double tol = 0.0;
    std::vector<EntropyRow> rows;
};

enum class FitStatus { Ok, ExactlyConstant, Unreliable };

struct ExtrapolationResult {
    double h_est = 0.0;
    double rate = 0.0;     // slope of ln|second difference| against n
    double ratio = 0.0;    // exp(rate)
    double fit_residual = 0.0;
    int n_lo = 0, n_hi = 0;
    FitStatus status = FitStatus::Ok;
};

Interval strip_entropy(const SftSpec& spec, int n, double tol);
EntropyTable entropy_sequence(const SftSpec& spec, int n_max, double tol);

// Least-squares fit of ln|Delta_{n+1} - Delta_n| on the stable suffix (second
// differences below the precision floor are excluded); h_est = last Delta plus
// a geometric tail at the fitted ratio.
ExtrapolationResult extrapolate(const EntropyTable& table);

// eps ln|A| - eps ln eps - (1-eps) ln(1-eps), with 0 ln 0 := 0.
double dbar_entropy_bound(double eps, int alphabet_size);

struct MiddleRowRow {
    int n = 0;
    Interval conditional; // h(R_{mid+1} | R_mid) under the strip-(n+1) chain
    Interval delta;       // spectral h_{n+1} - h_n
    double abs_diff = 0.0;
    bool contained = false; // intervals intersect
    double gap = 0.0;       // distance between the intervals (0 when they meet)
};

struct MiddleRowReport {
    int window = 0;
    std::vector<MiddleRowRow> rows;
};

MiddleRowReport middle_row_experiment(const SftSpec& spec, int n_max, int window,
                                      double tol = 1e-12);
MiddleRowReport middle_row_experiment(int n_max, int window, double tol = 1e-12); // hard squares

std::string entropy_table_csv(const EntropyTable& t);

} // namespace stripent
