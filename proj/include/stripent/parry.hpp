#pragma once

#include <string>
#include <vector>

#include "stripent/spectral.hpp"
#include "stripent/transfer.hpp"

namespace stripent {

// Stationary Markov measure of maximal entropy on the column states of a
// strip: P_ij = M_ij v_j / (lambda v_i), pi_i = u_i v_i / <u,v>. The original
// edge weights are kept because finite-window conditionals of the measure are
// exactly ratios of edge-weight products (the v and lambda factors cancel),
// which keeps uniformity checks exact for 0-1 matrices.
struct ParryChain {
    ColumnSet columns;
    double lambda = 0.0;
    std::vector<double> pi;
    TransferMatrix P;    // stochastic, same sparsity as the transfer matrix
    TransferMatrix edge; // the weighted transfer matrix itself
    bool perturbed = false;

    int dim() const { return P.dim; }
    int height() const { return columns.height; }

    // Negative-control knob: nudges one transition weight and rebuilds the
    // affected row of P.
    void perturb_edge(int r, int c, double delta);
};

struct RowSelector {
    std::vector<int> heights; // 1-based, subset of [1, n]
};

ParryChain parry(const TransferMatrix& m, const ColumnSet& cols, double tol = 1e-13);

// P(column value at `height` equals symbol `value`); independent of the
// horizontal coordinate by stationarity.
double site_marginal(const ParryChain& chain, int height, int value);

// Max deviation from uniform of the conditional distribution of w interior
// columns given any admissible flanking pair at distance w+1. Exact (zero to
// the last bit) for unperturbed 0-1 chains.
double verify_uniform_conditional(const ParryChain& chain, int w, long long node_cap = 50000000);

struct MarginalDecayRow {
    int n = 0;
    int i = 0;
    bool bottom_aligned = false; // false = shifted alignment
    int distance = 0;            // n-i for bottom alignment, i for shifted
    double diff = 0.0;
};

struct DecayFit {
    double slope = 0.0;     // per unit distance, expected negative
    double intercept = 0.0; // log prefactor
    int points = 0;
    double max_ratio_to_envelope = 0.0;
};

struct MarginalDecayReport {
    std::vector<MarginalDecayRow> rows;
    DecayFit bottom_fit;
    DecayFit shift_fit;
    double floor = 0.0; // diffs below this are numerically unresolved and not fitted
};

MarginalDecayReport marginal_decay_table(const SftSpec& spec, int n_max, int value = 1,
                                         double floor = 1e-9);

// Entropy-rate sandwich for the factor process reading only the selected
// heights: H(Y_0 | Y_{-m..-1}, X_{-m}) <= rate <= H(Y_0 | Y_{-m..-1}),
// both evaluated exactly from the chain over words of length m+1.
Interval row_entropy_bounds(const ParryChain& chain, const RowSelector& heights, int m,
                            long long node_cap = 400000000);

// Chain rule interval: bounds(I union J) minus bounds(I), outward rounded.
Interval conditional_row_entropy(const ParryChain& chain, const RowSelector& J,
                                 const RowSelector& I, int m);

struct CondIndepReport {
    Interval depth1;     // h(R_j | R_{j-1})
    Interval depth_full; // h(R_j | R_{j-depth} ... R_{j-1})
    bool intersect = false;
};

CondIndepReport conditional_independence_test(const ParryChain& chain, int j, int depth, int m);

} // namespace stripent
