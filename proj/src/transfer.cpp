#include "stripent/transfer.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "stripent/errors.hpp"

namespace stripent {

double TransferMatrix::entry(int r, int c) const {
    for (size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k)
        if (col_idx[k] == c) return val[k];
    return 0.0;
}

void TransferMatrix::apply(const std::vector<double>& v, std::vector<double>& out) const {
    out.assign(dim, 0.0);
    for (int r = 0; r < dim; ++r) {
        double acc = 0.0;
        for (size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) acc += val[k] * v[col_idx[k]];
        out[r] = acc;
    }
}

void TransferMatrix::apply_transpose(const std::vector<double>& v, std::vector<double>& out) const {
    out.assign(dim, 0.0);
    for (int r = 0; r < dim; ++r) {
        double vr = v[r];
        if (vr == 0.0) continue;
        for (size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) out[col_idx[k]] += val[k] * vr;
    }
}

std::vector<std::vector<double>> TransferMatrix::dense() const {
    std::vector<std::vector<double>> d(dim, std::vector<double>(dim, 0.0));
    for (int r = 0; r < dim; ++r)
        for (size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) d[r][col_idx[k]] = val[k];
    return d;
}

ColumnSet enumerate_columns(const SftSpec& spec, int n) {
    spec.validate();
    if (n < 1) throw ContractError("enumerate_columns: n must be >= 1");
    long long cap = max_columns();
    ColumnSet cs;
    cs.height = n;
    int s = spec.size();
    std::vector<int> col;
    col.reserve(n);
    // depth-first over symbols in index order = lexicographic with the bottom
    // row most significant
    auto rec = [&](auto&& self, int depth) -> void {
        if (depth == n) {
            if (static_cast<long long>(cs.columns.size()) >= cap)
                throw ResourceError("enumerate_columns: more than " + std::to_string(cap) +
                                    " columns (STRIPENT_MAX_COLUMNS)");
            cs.columns.push_back(col);
            return;
        }
        for (int a = 0; a < s; ++a) {
            if (depth > 0 && !spec.v_allowed(col[depth - 1], a)) continue;
            col.push_back(a);
            self(self, depth + 1);
            col.pop_back();
        }
    };
    rec(rec, 0);
    return cs;
}

TransferMatrix build_transfer(const SftSpec& spec, const ColumnSet& cols) {
    TransferMatrix m;
    m.dim = cols.count();
    m.symmetric = spec.h_symmetric();
    int n = cols.height;
    m.column_weight.resize(m.dim);
    for (int i = 0; i < m.dim; ++i) {
        double w = 1.0;
        for (int y = 0; y < n; ++y) w *= spec.weight[cols.columns[i][y]];
        m.column_weight[i] = w;
    }
    m.row_ptr.assign(m.dim + 1, 0);

    // machine-word fast path for binary alphabets: a column is the bitmask of
    // its symbol-1 rows, and the per-row rule check collapses to AND tests
    if (spec.size() == 2 && n <= 64) {
        std::vector<uint64_t> mask(m.dim);
        for (int i = 0; i < m.dim; ++i)
            for (int y = 0; y < n; ++y)
                if (cols.columns[i][y] == 1) mask[i] |= 1ULL << y;
        uint64_t low = n == 64 ? ~0ULL : (1ULL << n) - 1;
        bool f11 = !spec.h_allowed(1, 1), f10 = !spec.h_allowed(1, 0);
        bool f01 = !spec.h_allowed(0, 1), f00 = !spec.h_allowed(0, 0);
        for (int r = 0; r < m.dim; ++r) {
            m.row_ptr[r] = m.col_idx.size();
            uint64_t a = mask[r];
            for (int c = 0; c < m.dim; ++c) {
                uint64_t b = mask[c];
                if (f11 && (a & b)) continue;
                if (f10 && (a & ~b & low)) continue;
                if (f01 && (~a & b & low)) continue;
                if (f00 && (~a & ~b & low)) continue;
                double e = m.symmetric ? std::sqrt(m.column_weight[r] * m.column_weight[c])
                                       : m.column_weight[c];
                m.col_idx.push_back(c);
                m.val.push_back(e);
            }
        }
        m.row_ptr[m.dim] = m.col_idx.size();
        return m;
    }

    for (int r = 0; r < m.dim; ++r) {
        m.row_ptr[r] = m.col_idx.size();
        const auto& u = cols.columns[r];
        for (int c = 0; c < m.dim; ++c) {
            const auto& v = cols.columns[c];
            bool ok = true;
            for (int y = 0; y < n; ++y)
                if (!spec.h_allowed(u[y], v[y])) { ok = false; break; }
            if (!ok) continue;
            double e = m.symmetric ? std::sqrt(m.column_weight[r] * m.column_weight[c])
                                   : m.column_weight[c];
            m.col_idx.push_back(c);
            m.val.push_back(e);
        }
    }
    m.row_ptr[m.dim] = m.col_idx.size();
    return m;
}

TransferMatrix build_transfer(const SftSpec& spec, int n) {
    return build_transfer(spec, enumerate_columns(spec, n));
}

RecursiveTransfer build_transfer_recursive_hardsquare(int n) {
    if (n < 1) throw ContractError("build_transfer_recursive_hardsquare: n must be >= 1");
    // B_1 over columns (0), (1); mask bit i-1 holds row i
    std::vector<uint64_t> masks = {0u, 1u};
    std::vector<std::vector<uint8_t>> B = {{1, 1}, {1, 0}};
    for (int h = 1; h < n; ++h) {
        size_t d = masks.size();
        // Tile four copies indexed by the new bottom symbol (block 0 then
        // block 1), zero the blocks the new symbol forbids, then drop the
        // rows/columns whose column is not vertically admissible.
        std::vector<uint64_t> nm;
        std::vector<int> keep; // index into the 2d virtual grid
        for (int b = 0; b < 2; ++b)
            for (size_t u = 0; u < d; ++u) {
                if (b == 1 && (masks[u] & 1u)) continue; // 1 below a column starting with 1
                keep.push_back(b * static_cast<int>(d) + static_cast<int>(u));
                nm.push_back((masks[u] << 1) | static_cast<uint64_t>(b));
            }
        size_t nd = nm.size();
        std::vector<std::vector<uint8_t>> NB(nd, std::vector<uint8_t>(nd, 0));
        for (size_t i = 0; i < nd; ++i)
            for (size_t j = 0; j < nd; ++j) {
                int bi = keep[i] / static_cast<int>(d), u = keep[i] % static_cast<int>(d);
                int bj = keep[j] / static_cast<int>(d), v = keep[j] % static_cast<int>(d);
                if (bi == 1 && bj == 1) continue; // lower-right copy zeroed
                NB[i][j] = B[u][v];
            }
        masks.swap(nm);
        B.swap(NB);
    }
    RecursiveTransfer out;
    out.column_masks = masks;
    TransferMatrix& m = out.matrix;
    m.dim = static_cast<int>(masks.size());
    m.symmetric = true;
    m.column_weight.assign(m.dim, 1.0);
    m.row_ptr.assign(m.dim + 1, 0);
    for (int r = 0; r < m.dim; ++r) {
        m.row_ptr[r] = m.col_idx.size();
        for (int c = 0; c < m.dim; ++c)
            if (B[r][c]) {
                m.col_idx.push_back(c);
                m.val.push_back(1.0);
            }
    }
    m.row_ptr[m.dim] = m.col_idx.size();
    return out;
}

double CountResult::value() const {
    if (has_linear) return linear_value;
    return log_value < 690.0 ? std::exp(log_value) : HUGE_VAL;
}

CountResult weighted_count(const SftSpec& spec, int n, int m) {
    if (n < 1 || m < 1) throw ContractError("weighted_count: n and m must be >= 1");
    ColumnSet cols = enumerate_columns(spec, n);
    int d = cols.count();
    // asymmetric weighting keeps every intermediate an integer when the
    // weights are integers
    std::vector<double> w(d);
    for (int i = 0; i < d; ++i) {
        double p = 1.0;
        for (int y = 0; y < n; ++y) p *= spec.weight[cols.columns[i][y]];
        w[i] = p;
    }
    bool integral = true;
    for (double x : spec.weight)
        if (x != std::rint(x)) integral = false;

    std::vector<double> vec = w, next(d);
    double logscale = 0.0;
    bool exact = integral;
    auto maxabs = [&](const std::vector<double>& v) {
        double mx = 0.0;
        for (double x : v) mx = std::max(mx, std::fabs(x));
        return mx;
    };
    if (maxabs(vec) > 9.0e15) exact = false;

    for (int step = 1; step < m; ++step) {
        // next[c] = sum_r vec[r] * compat(r,c) * w[c]
        std::fill(next.begin(), next.end(), 0.0);
        for (int r = 0; r < d; ++r) {
            if (vec[r] == 0.0) continue;
            const auto& u = cols.columns[r];
            for (int c = 0; c < d; ++c) {
                const auto& v = cols.columns[c];
                bool ok = true;
                for (int y = 0; y < n; ++y)
                    if (!spec.h_allowed(u[y], v[y])) { ok = false; break; }
                if (ok) next[c] += vec[r];
            }
        }
        for (int c = 0; c < d; ++c) next[c] *= w[c];
        double mx = maxabs(next);
        if (mx > 9.0e15) exact = false;
        if (mx > 1e280) {
            for (double& x : next) x /= mx;
            logscale += std::log(mx);
        }
        vec.swap(next);
    }
    double total = 0.0;
    for (double x : vec) total += x;
    CountResult res;
    res.log_value = std::log(total) + logscale;
    res.exact = exact && total <= 9.0e15;
    if (logscale == 0.0) {
        res.has_linear = true;
        res.linear_value = total;
    }
    return res;
}

double brute_force_weighted_count(const SftSpec& spec, int width, int height, long long node_cap) {
    if (width < 1 || height < 1) throw ContractError("brute_force_weighted_count: bad shape");
    int s = spec.size();
    std::vector<int> grid(static_cast<size_t>(width) * height, -1);
    long long nodes = 0;
    double total = 0.0;
    // raster order: whole rows bottom to top; checking the left and below
    // neighbors at placement covers every adjacent pair exactly once
    auto rec = [&](auto&& self, int pos, double prod) -> void {
        if (++nodes > node_cap)
            throw ResourceError("brute_force_weighted_count: node cap exceeded");
        if (pos == width * height) {
            total += prod;
            return;
        }
        int x = pos % width, y = pos / width;
        for (int a = 0; a < s; ++a) {
            if (x > 0 && !spec.h_allowed(grid[pos - 1], a)) continue;
            if (y > 0 && !spec.v_allowed(grid[pos - width], a)) continue;
            grid[pos] = a;
            self(self, pos + 1, prod * spec.weight[a]);
        }
        grid[pos] = -1;
    };
    rec(rec, 0, 1.0);
    return total;
}

std::string export_matrix(const TransferMatrix& m) {
    std::ostringstream os;
    os << "# transfer matrix, coordinate list; columns in canonical order\n";
    os << m.dim << "\n";
    char buf[64];
    for (int r = 0; r < m.dim; ++r)
        for (size_t k = m.row_ptr[r]; k < m.row_ptr[r + 1]; ++k) {
            std::snprintf(buf, sizeof buf, "%d %d %.17g\n", r, m.col_idx[k], m.val[k]);
            os << buf;
        }
    return os.str();
}

} // namespace stripent
