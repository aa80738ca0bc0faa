#include "stripent/parry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "stripent/errors.hpp"

namespace stripent {

namespace {

std::string render_column(const ColumnSet& cols, int idx) {
    std::string s;
    for (int v : cols.columns[idx]) s += std::to_string(v) + ",";
    if (!s.empty()) s.pop_back();
    return "(" + s + ")";
}

void reach(const TransferMatrix& m, bool transpose, std::vector<uint8_t>& seen) {
    std::vector<int> stack = {0};
    seen.assign(m.dim, 0);
    seen[0] = 1;
    while (!stack.empty()) {
        int r = stack.back();
        stack.pop_back();
        if (!transpose) {
            for (size_t k = m.row_ptr[r]; k < m.row_ptr[r + 1]; ++k) {
                int c = m.col_idx[k];
                if (!seen[c]) { seen[c] = 1; stack.push_back(c); }
            }
        } else {
            for (int rr = 0; rr < m.dim; ++rr) {
                if (seen[rr]) continue;
                for (size_t k = m.row_ptr[rr]; k < m.row_ptr[rr + 1]; ++k)
                    if (m.col_idx[k] == r) { seen[rr] = 1; stack.push_back(rr); break; }
            }
        }
    }
}

} // namespace

void ParryChain::perturb_edge(int r, int c, double delta) {
    bool found = false;
    for (size_t k = edge.row_ptr[r]; k < edge.row_ptr[r + 1]; ++k)
        if (edge.col_idx[k] == c) { edge.val[k] += delta; found = true; }
    if (!found) throw ContractError("perturb_edge: entry not in sparsity pattern");
    for (size_t k = P.row_ptr[r]; k < P.row_ptr[r + 1]; ++k)
        if (P.col_idx[k] == c) P.val[k] += delta;
    double sum = 0.0;
    for (size_t k = P.row_ptr[r]; k < P.row_ptr[r + 1]; ++k) sum += P.val[k];
    for (size_t k = P.row_ptr[r]; k < P.row_ptr[r + 1]; ++k) P.val[k] /= sum;
    perturbed = true;
}

ParryChain parry(const TransferMatrix& m, const ColumnSet& cols, double tol) {
    if (m.dim != cols.count()) throw ContractError("parry: matrix/column-set size mismatch");
    std::vector<uint8_t> fwd, bwd;
    reach(m, false, fwd);
    reach(m, true, bwd);
    for (int i = 0; i < m.dim; ++i)
        if (!fwd[i] || !bwd[i])
            throw ContractError("parry: reducible transfer matrix, column " + render_column(cols, i) +
                                (!fwd[i] ? " unreachable from" : " cannot reach") + " column " +
                                render_column(cols, 0));

    PerronResult pr = perron_power(m, tol);
    double lambda = pr.lambda;
    const std::vector<double>& v = pr.right_vector;

    std::vector<double> u;
    if (m.symmetric) {
        u = v;
    } else {
        u.assign(m.dim, 1.0);
        std::vector<double> w(m.dim), t(m.dim);
        for (int it = 0; it < 200000; ++it) {
            m.apply_transpose(u, w);
            double lo = HUGE_VAL, hi = 0.0, norm = 0.0;
            for (int i = 0; i < m.dim; ++i) {
                t[i] = w[i] + u[i];
                double r = t[i] / u[i];
                lo = std::min(lo, r);
                hi = std::max(hi, r);
                norm = std::max(norm, t[i]);
            }
            for (int i = 0; i < m.dim; ++i) u[i] = t[i] / norm;
            if ((hi - lo) / lo < tol) break;
        }
    }

    ParryChain chain;
    chain.columns = cols;
    chain.lambda = lambda;
    chain.edge = m;
    chain.P = m;
    for (int r = 0; r < m.dim; ++r) {
        double row_sum = 0.0;
        for (size_t k = m.row_ptr[r]; k < m.row_ptr[r + 1]; ++k) {
            chain.P.val[k] = m.val[k] * v[m.col_idx[k]] / (lambda * v[r]);
            row_sum += chain.P.val[k];
        }
        for (size_t k = m.row_ptr[r]; k < m.row_ptr[r + 1]; ++k) chain.P.val[k] /= row_sum;
    }
    chain.pi.resize(m.dim);
    double z = 0.0;
    for (int i = 0; i < m.dim; ++i) {
        chain.pi[i] = u[i] * v[i];
        z += chain.pi[i];
    }
    for (double& x : chain.pi) x /= z;
    return chain;
}

double site_marginal(const ParryChain& chain, int height, int value) {
    if (height < 1 || height > chain.height())
        throw ContractError("site_marginal: height out of range");
    double p = 0.0;
    for (int i = 0; i < chain.dim(); ++i)
        if (chain.columns.columns[i][height - 1] == value) p += chain.pi[i];
    return p;
}

double verify_uniform_conditional(const ParryChain& chain, int w, long long node_cap) {
    if (w < 1) throw ContractError("verify_uniform_conditional: w must be >= 1");
    int d = chain.dim();
    const TransferMatrix& M = chain.edge;
    long long nodes = 0;

    // pass 1: per (L,R) totals and counts over interior paths of length w
    std::map<std::pair<int, int>, std::pair<double, long long>> agg; // (sum, count)
    std::vector<int> path;
    auto walk1 = [&](auto&& self, int from, int depth, double weight, int L) -> void {
        if (++nodes > node_cap) throw ResourceError("verify_uniform_conditional: path cap exceeded");
        if (depth == w) {
            for (size_t k = M.row_ptr[from]; k < M.row_ptr[from + 1]; ++k) {
                auto& a = agg[{L, M.col_idx[k]}];
                a.first += weight * M.val[k];
                a.second += 1;
            }
            return;
        }
        for (size_t k = M.row_ptr[from]; k < M.row_ptr[from + 1]; ++k)
            self(self, M.col_idx[k], depth + 1, weight * M.val[k], L);
    };
    for (int L = 0; L < d; ++L) walk1(walk1, L, 0, 1.0, L);

    // pass 2: deviation of each path's conditional from uniform
    double dev = 0.0;
    auto walk2 = [&](auto&& self, int from, int depth, double weight, int L) -> void {
        if (depth == w) {
            for (size_t k = M.row_ptr[from]; k < M.row_ptr[from + 1]; ++k) {
                const auto& a = agg[{L, M.col_idx[k]}];
                double cond = weight * M.val[k] / a.first;
                dev = std::max(dev, std::fabs(cond - 1.0 / static_cast<double>(a.second)));
            }
            return;
        }
        for (size_t k = M.row_ptr[from]; k < M.row_ptr[from + 1]; ++k)
            self(self, M.col_idx[k], depth + 1, weight * M.val[k], L);
    };
    for (int L = 0; L < d; ++L) walk2(walk2, L, 0, 1.0, L);
    return dev;
}

namespace {

DecayFit fit_family(const std::vector<MarginalDecayRow>& rows, bool bottom, double floor) {
    DecayFit f;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (const auto& r : rows) {
        if (r.bottom_aligned != bottom || r.diff <= floor) continue;
        double x = r.distance, y = std::log(r.diff);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++n;
    }
    f.points = n;
    if (n >= 2) {
        double det = n * sxx - sx * sx;
        f.slope = (n * sxy - sx * sy) / det;
        f.intercept = (sy * sxx - sx * sxy) / det;
    }
    for (const auto& r : rows) {
        if (r.bottom_aligned != bottom || r.diff <= floor) continue;
        double env = std::exp(f.intercept + f.slope * r.distance);
        f.max_ratio_to_envelope = std::max(f.max_ratio_to_envelope, r.diff / env);
    }
    return f;
}

} // namespace

MarginalDecayReport marginal_decay_table(const SftSpec& spec, int n_max, int value, double floor) {
    if (n_max < 3) throw ContractError("marginal_decay_table: n_max must be >= 3");
    MarginalDecayReport rep;
    rep.floor = floor;
    std::map<int, ParryChain> chains;
    for (int n = 3; n <= n_max + 1; ++n) {
        ColumnSet cols = enumerate_columns(spec, n);
        chains.emplace(n, parry(build_transfer(spec, cols), cols));
    }
    for (int n = 3; n <= n_max; ++n) {
        const ParryChain& a = chains.at(n);
        const ParryChain& b = chains.at(n + 1);
        for (int i = 1; i <= n; ++i) {
            rep.rows.push_back({n, i, true, n - i,
                                std::fabs(site_marginal(a, i, value) - site_marginal(b, i, value))});
            rep.rows.push_back({n, i, false, i,
                                std::fabs(site_marginal(a, i, value) - site_marginal(b, i + 1, value))});
        }
    }
    rep.bottom_fit = fit_family(rep.rows, true, floor);
    rep.shift_fit = fit_family(rep.rows, false, floor);
    return rep;
}

namespace {

struct FactorContext {
    const ParryChain* chain;
    std::vector<int> code;    // letter id per state
    int n_letters = 0;
    long long budget = 0;

    void spend(long long cost) {
        budget -= cost;
        if (budget < 0) throw ResourceError("row_entropy_bounds: word enumeration exceeds cap");
    }
};

FactorContext make_context(const ParryChain& chain, const RowSelector& sel, long long cap) {
    FactorContext ctx;
    ctx.chain = &chain;
    ctx.budget = cap;
    int n = chain.height();
    if (sel.heights.empty()) throw ContractError("row selector must be nonempty");
    for (int h : sel.heights)
        if (h < 1 || h > n) throw ContractError("row selector height out of [1,n]");
    std::map<std::vector<int>, int> ids;
    ctx.code.resize(chain.dim());
    for (int i = 0; i < chain.dim(); ++i) {
        std::vector<int> key;
        for (int h : sel.heights) key.push_back(chain.columns.columns[i][h - 1]);
        auto [it, fresh] = ids.emplace(key, static_cast<int>(ids.size()));
        ctx.code[i] = it->second;
    }
    ctx.n_letters = static_cast<int>(ids.size());
    return ctx;
}

// -sum p ln p accumulated at word lengths len and len-1 (len = m+1)
void ub_walk(FactorContext& ctx, const std::vector<double>& alpha, int t, int len,
             double& h_full, double& h_prefix) {
    const TransferMatrix& P = ctx.chain->P;
    int d = P.dim;
    if (t >= 1) {
        double p = 0.0;
        for (double x : alpha) p += x;
        if (t == len) { h_full += -p * std::log(p); return; }
        if (t == len - 1) h_prefix += -p * std::log(p);
    }
    ctx.spend(d);
    std::vector<double> base(d, 0.0);
    if (t == 0) {
        base = ctx.chain->pi;
    } else {
        ctx.spend(static_cast<long long>(P.nnz()));
        for (int r = 0; r < d; ++r) {
            double ar = alpha[r];
            if (ar == 0.0) continue;
            for (size_t k = P.row_ptr[r]; k < P.row_ptr[r + 1]; ++k)
                base[P.col_idx[k]] += ar * P.val[k];
        }
    }
    std::vector<double> next(d);
    for (int l = 0; l < ctx.n_letters; ++l) {
        double s = 0.0;
        for (int j = 0; j < d; ++j) {
            next[j] = ctx.code[j] == l ? base[j] : 0.0;
            s += next[j];
        }
        if (s > 0.0) ub_walk(ctx, next, t + 1, len, h_full, h_prefix);
    }
}

// A[s][j] = P(Y_2..Y_t = word, X_t = j, X_1 = s); contributions use
// -p ln(p / pi_s) so the result is H(Y_2..Y_t | X_1) directly.
void lb_walk(FactorContext& ctx, const std::vector<double>& A, int t, int len,
             double& h_full, double& h_prefix) {
    const TransferMatrix& P = ctx.chain->P;
    int d = P.dim;
    if (t >= 2) {
        double contrib = 0.0;
        for (int s = 0; s < d; ++s) {
            double p = 0.0;
            for (int j = 0; j < d; ++j) p += A[static_cast<size_t>(s) * d + j];
            if (p > 0.0) contrib += -p * std::log(p / ctx.chain->pi[s]);
        }
        if (t == len) { h_full += contrib; return; }
        if (t == len - 1) h_prefix += contrib;
    }
    ctx.spend(static_cast<long long>(d) * static_cast<long long>(P.nnz()));
    std::vector<double> base(static_cast<size_t>(d) * d, 0.0);
    for (int s = 0; s < d; ++s) {
        const double* as = &A[static_cast<size_t>(s) * d];
        double* bs = &base[static_cast<size_t>(s) * d];
        for (int r = 0; r < d; ++r) {
            double ar = as[r];
            if (ar == 0.0) continue;
            for (size_t k = P.row_ptr[r]; k < P.row_ptr[r + 1]; ++k)
                bs[P.col_idx[k]] += ar * P.val[k];
        }
    }
    std::vector<double> next(static_cast<size_t>(d) * d);
    for (int l = 0; l < ctx.n_letters; ++l) {
        double s = 0.0;
        for (int sj = 0; sj < d; ++sj)
            for (int j = 0; j < d; ++j) {
                double x = ctx.code[j] == l ? base[static_cast<size_t>(sj) * d + j] : 0.0;
                next[static_cast<size_t>(sj) * d + j] = x;
                s += x;
            }
        if (s > 0.0) lb_walk(ctx, next, t + 1, len, h_full, h_prefix);
    }
}

} // namespace

Interval row_entropy_bounds(const ParryChain& chain, const RowSelector& heights, int m,
                            long long node_cap) {
    if (m < 1) throw ContractError("row_entropy_bounds: m must be >= 1");
    FactorContext ctx = make_context(chain, heights, node_cap);
    int d = chain.dim();
    int len = m + 1;

    double h_full = 0.0, h_prefix = 0.0;
    std::vector<double> alpha(d, 0.0);
    ub_walk(ctx, alpha, 0, len, h_full, h_prefix);
    double ub = h_full - h_prefix;

    double hc_full = 0.0, hc_prefix = 0.0;
    std::vector<double> A(static_cast<size_t>(d) * d, 0.0);
    for (int s = 0; s < d; ++s) A[static_cast<size_t>(s) * d + s] = chain.pi[s];
    // t=1 corresponds to knowing X_1 alone
    lb_walk(ctx, A, 1, len, hc_full, hc_prefix);
    double lb = len >= 2 ? hc_full - hc_prefix : 0.0;

    // outward guard for accumulated rounding
    double slack = 1e-11;
    return {lb - slack, ub + slack};
}

Interval conditional_row_entropy(const ParryChain& chain, const RowSelector& J,
                                 const RowSelector& I, int m) {
    std::set<int> ji(J.heights.begin(), J.heights.end());
    for (int h : I.heights)
        if (!ji.insert(h).second) throw ContractError("conditional_row_entropy: I and J must be disjoint");
    RowSelector both;
    both.heights.assign(ji.begin(), ji.end());
    Interval bij = row_entropy_bounds(chain, both, m);
    Interval bi = row_entropy_bounds(chain, I, m);
    return bij.minus(bi);
}

CondIndepReport conditional_independence_test(const ParryChain& chain, int j, int depth, int m) {
    if (depth < 1) throw ContractError("conditional_independence_test: depth must be >= 1");
    if (j - depth < 1 || j > chain.height()) throw ContractError("conditional_independence_test: rows out of range");
    CondIndepReport rep;
    RowSelector Jsel{{j}};
    rep.depth1 = conditional_row_entropy(chain, Jsel, RowSelector{{j - 1}}, m);
    RowSelector deep;
    for (int i = j - depth; i <= j - 1; ++i) deep.heights.push_back(i);
    rep.depth_full = conditional_row_entropy(chain, Jsel, deep, m);
    rep.intersect = rep.depth1.intersects(rep.depth_full);
    return rep;
}

} // namespace stripent
