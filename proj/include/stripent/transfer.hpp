#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stripent/sft.hpp"

namespace stripent {

// Vertically admissible height-n columns, bottom entry first, sorted in
// canonical lexicographic order with the bottom row most significant.
struct ColumnSet {
    int height = 0;
    std::vector<std::vector<int>> columns; // symbol indices

    int count() const { return static_cast<int>(columns.size()); }
};

// Sparse row-compressed weighted transfer operator of the strip shift H_n.
// For a symmetric horizontal rule the entry is compat * sqrt(w_r * w_c),
// otherwise compat * w_c; the spectral radius is the same either way.
struct TransferMatrix {
    int dim = 0;
    bool symmetric = false;
    std::vector<size_t> row_ptr;
    std::vector<int> col_idx;
    std::vector<double> val;
    std::vector<double> column_weight;

    double entry(int r, int c) const;
    size_t nnz() const { return val.size(); }
    void apply(const std::vector<double>& v, std::vector<double>& out) const;           // out = M v
    void apply_transpose(const std::vector<double>& v, std::vector<double>& out) const; // out = M^T v
    std::vector<std::vector<double>> dense() const;
};

ColumnSet enumerate_columns(const SftSpec& spec, int n);
TransferMatrix build_transfer(const SftSpec& spec, const ColumnSet& cols);
TransferMatrix build_transfer(const SftSpec& spec, int n);

// The four-copy doubling construction for hard squares. Returns the matrix
// over its own block column order together with that order (bitmask encoded,
// bit i = row i+1 of the column).
struct RecursiveTransfer {
    TransferMatrix matrix;
    std::vector<uint64_t> column_masks;
};
RecursiveTransfer build_transfer_recursive_hardsquare(int n);

// Weighted count of locally admissible n x m strip configurations, evaluated
// as a scaled vector-matrix-vector product. `exact` is set while every
// intermediate stays below 2^53 and all weights are integers; the linear
// value is kept unscaled whenever it fits so exact counts compare bit-for-bit.
struct CountResult {
    double log_value = 0.0;
    bool exact = false;
    bool has_linear = false;
    double linear_value = 0.0;
    double value() const;
};
CountResult weighted_count(const SftSpec& spec, int n, int m);

// Independent oracle: raster backtracking over single sites, never touching
// the transfer machinery. node_cap guards runaway enumerations.
double brute_force_weighted_count(const SftSpec& spec, int width, int height,
                                  long long node_cap = 4000000000LL);

// Coordinate-list text export: "dim", then "r c value" lines.
std::string export_matrix(const TransferMatrix& m);

} // namespace stripent
