#include "stripent/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "stripent/entropy.hpp"
#include "stripent/errors.hpp"
#include "stripent/parry.hpp"
#include "stripent/perc.hpp"
#include "stripent/rect.hpp"
#include "stripent/rng.hpp"
#include "stripent/selftest.hpp"
#include "stripent/spectral.hpp"
#include "stripent/transfer.hpp"
#include "stripent/yshift.hpp"

namespace stripent {

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr int kSchemaVersion = 1;
constexpr uint64_t kDefaultSeed = 20240517ULL; // documented default for all randomized runs

using nlohmann::json;

std::string g_out;
std::string g_format = "csv";

void write_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ContractError("cannot open output file " + path);
    os << content;
}

void write_manifest(const std::string& data_path, const std::string& subcommand, json inputs,
                    double wall_seconds) {
    json m;
    m["schema_version"] = kSchemaVersion;
    m["tool_version"] = kVersion;
    m["subcommand"] = subcommand;
    m["inputs"] = std::move(inputs);
    m["wall_time_s"] = wall_seconds;
    write_file(data_path + ".manifest.json", m.dump(2) + "\n");
}

std::string out_path(const std::string& subcommand) {
    if (!g_out.empty()) return g_out;
    return subcommand + (g_format == "json" ? ".json" : ".csv");
}

SftSpec resolve_spec(const std::string& src) {
    if (src == "hardsquare") return hard_square();
    if (src.rfind("fullshift:", 0) == 0) return full_shift(std::stoi(src.substr(10)));
    if (src.rfind("y:", 0) == 0) return build_y(std::stod(src.substr(2)));
    std::ifstream is(src);
    if (!is) throw ContractError("spec source '" + src + "' is neither builtin nor a readable file");
    std::stringstream ss;
    ss << is.rdbuf();
    return load_sft(ss.str());
}

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", x);
    return buf;
}

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

json interval_json(const Interval& iv) { return json{{"lo", iv.lo}, {"hi", iv.hi}}; }

// ---------------------------------------------------------------------------

int cmd_entropy(const std::string& spec_src, int n_max, double tol) {
    Timer timer;
    SftSpec spec = resolve_spec(spec_src);
    EntropyTable t = entropy_sequence(spec, n_max, tol);
    std::string path = out_path("entropy");
    if (g_format == "json") {
        json j;
        j["schema_version"] = kSchemaVersion;
        j["spec"] = t.spec_name;
        j["rows"] = json::array();
        for (const auto& r : t.rows) {
            json row{{"n", r.n}, {"failed", r.failed}};
            if (!r.failed) {
                row["h"] = r.h.mid();
                row["enclosure"] = interval_json(r.h);
                row["h_over_n"] = r.h_over_n;
                if (r.has_delta) row["delta"] = r.delta.mid();
            }
            j["rows"].push_back(row);
        }
        try {
            ExtrapolationResult ex = extrapolate(t);
            j["extrapolation"] = {{"h_est", ex.h_est},
                                  {"rate", ex.rate},
                                  {"ratio", ex.ratio},
                                  {"fit_residual", ex.fit_residual},
                                  {"status", ex.status == FitStatus::Ok ? "ok"
                                             : ex.status == FitStatus::ExactlyConstant
                                                 ? "exactly_constant"
                                                 : "unreliable"}};
        } catch (const ContractError&) {
        }
        write_file(path, j.dump(2) + "\n");
    } else {
        write_file(path, entropy_table_csv(t));
    }
    json inputs{{"spec", spec_src}, {"n_max", n_max}, {"tol", tol}};
    try {
        ExtrapolationResult ex = extrapolate(t);
        inputs["extrapolation"] = {{"h_est", ex.h_est}, {"ratio", ex.ratio},
                                   {"fit_residual", ex.fit_residual}};
    } catch (const ContractError&) {
    }
    write_manifest(path, "entropy", inputs, timer.seconds());
    return 0;
}

int cmd_trace_bound(const std::string& spec_src, int n_max, int precision_n) {
    Timer timer;
    SftSpec spec = resolve_spec(spec_src);
    std::ostringstream csv;
    csv << "n,dim,k,lo,hi,lambda_power\n";
    for (int n = 1; n <= n_max; ++n) {
        TransferMatrix m = build_transfer(spec, n);
        double lam = perron_power(m, 1e-12).lambda;
        long long k = trace_power_schedule(precision_n, m.dim);
        Interval iv = trace_power_bound(m, k);
        csv << n << "," << m.dim << "," << k << "," << fmt(iv.lo) << "," << fmt(iv.hi) << ","
            << fmt(lam) << "\n";
    }
    std::string path = out_path("trace_bound");
    write_file(path, csv.str());
    write_manifest(path, "trace-bound",
                   {{"spec", spec_src}, {"n_max", n_max}, {"precision_n", precision_n}},
                   timer.seconds());
    return 0;
}

int cmd_parry(const std::string& spec_src, int n_max) {
    Timer timer;
    SftSpec spec = resolve_spec(spec_src);
    MarginalDecayReport rep = marginal_decay_table(spec, n_max);
    std::ostringstream csv;
    csv << "n,i,alignment,marginal_diff\n";
    for (const auto& r : rep.rows)
        csv << r.n << "," << r.i << "," << (r.bottom_aligned ? "bottom" : "shift") << ","
            << fmt(r.diff) << "\n";
    std::string path = out_path("parry");
    write_file(path, csv.str());

    // uniform-conditional deviations on small strips
    std::ostringstream extra;
    extra << "n,w,deviation\n";
    for (int n = 2; n <= std::min(n_max, 4); ++n) {
        ColumnSet cols = enumerate_columns(spec, n);
        ParryChain ch = parry(build_transfer(spec, cols), cols);
        for (int w = 1; w <= 3; ++w) extra << n << "," << w << "," << fmt(verify_uniform_conditional(ch, w)) << "\n";
    }
    write_file(path + ".uniform.csv", extra.str());
    write_manifest(path, "parry", {{"spec", spec_src}, {"n_max", n_max}}, timer.seconds());
    return 0;
}

int cmd_rowent(int n, int j, int depth, int window) {
    Timer timer;
    SftSpec hs = hard_square();
    std::ostringstream csv;
    csv << "n,j,depth,m,lo1,hi1,lo2,hi2\n";
    ColumnSet cols = enumerate_columns(hs, n);
    ParryChain ch = parry(build_transfer(hs, cols), cols);
    CondIndepReport rep = conditional_independence_test(ch, j, depth, window);
    csv << n << "," << j << "," << depth << "," << window << "," << fmt(rep.depth1.lo) << ","
        << fmt(rep.depth1.hi) << "," << fmt(rep.depth_full.lo) << "," << fmt(rep.depth_full.hi)
        << "\n";
    std::string path = out_path("rowent");
    write_file(path, csv.str());

    MiddleRowReport mid = middle_row_experiment(std::max(4, n), window);
    std::ostringstream mcsv;
    mcsv << "n,cond_lo,cond_hi,delta_lo,delta_hi,abs_diff,contained\n";
    for (const auto& r : mid.rows)
        mcsv << r.n << "," << fmt(r.conditional.lo) << "," << fmt(r.conditional.hi) << ","
             << fmt(r.delta.lo) << "," << fmt(r.delta.hi) << "," << fmt(r.abs_diff) << ","
             << (r.contained ? 1 : 0) << "\n";
    write_file(path + ".middlerow.csv", mcsv.str());
    write_manifest(path, "rowent", {{"n", n}, {"j", j}, {"depth", depth}, {"m", window}},
                   timer.seconds());
    return 0;
}

int cmd_gibbs(int max_w, int max_h) {
    Timer timer;
    std::ostringstream csv;
    csv << "rect,site,p_minus,p_plus,diff,perc_bound,ok\n";
    bool all_ok = true;
    for (int w = 1; w <= max_w; ++w)
        for (int h = 1; h <= max_h; ++h) {
            Rect r{0, w - 1, 0, h - 1};
            for (const auto& rep : percolation_sandwich(r)) {
                for (const auto& row : rep.rows) {
                    csv << w << "x" << h << " " << rep.pair << ",(" << row.site.first << ";"
                        << row.site.second << ")," << fmt(row.p0_minus) << "," << fmt(row.p0_plus)
                        << "," << fmt(row.diff) << "," << fmt(row.perc_bound) << ","
                        << (row.exact_ok ? 1 : 0) << "\n";
                    all_ok = all_ok && row.exact_ok;
                }
            }
        }
    std::string path = out_path("gibbs");
    write_file(path, csv.str());

    // exhaustive dominance over comparable boundary-label pairs
    std::ostringstream dom;
    dom << "rect,labels_lo,labels_hi,dominated\n";
    const EdgeLabel labs[3] = {EdgeLabel::Minus, EdgeLabel::Zero, EdgeLabel::Plus};
    const char* lc = "-0+";
    for (int w = 1; w <= std::min(max_w, 3); ++w)
        for (int h = 1; h <= std::min(max_h, 3); ++h) {
            Rect r{0, w - 1, 0, h - 1};
            CheckerboardOrder ord = CheckerboardOrder::over(r.sites());
            std::vector<DiscreteMeasure> uniforms(81);
            for (int code = 0; code < 81; ++code) {
                int a = code / 27 % 3, b = code / 9 % 3, l = code / 3 % 3, rr = code % 3;
                uniforms[code] = DiscreteMeasure::uniform(
                    exact_rect_measure(r, labs[a], labs[b], labs[l], labs[rr]));
            }
            for (int lo = 0; lo < 81; ++lo)
                for (int hi = 0; hi < 81; ++hi) {
                    bool cmp = true;
                    for (int d = 0, p = 27; d < 4; ++d, p /= 3)
                        if (lo / p % 3 > hi / p % 3) cmp = false;
                    if (!cmp) continue;
                    bool dominated = dominance_check(uniforms[lo], uniforms[hi], ord).dominated;
                    all_ok = all_ok && dominated;
                    dom << w << "x" << h << ",";
                    for (int d = 0, p = 27; d < 4; ++d, p /= 3) dom << lc[lo / p % 3];
                    dom << ",";
                    for (int d = 0, p = 27; d < 4; ++d, p /= 3) dom << lc[hi / p % 3];
                    dom << "," << (dominated ? 1 : 0) << "\n";
                }
        }
    write_file(path + ".dominance.csv", dom.str());
    write_manifest(path, "gibbs", {{"max_w", max_w}, {"max_h", max_h}}, timer.seconds());
    return all_ok ? 0 : 2;
}

int cmd_cftp(int w, int h, long long samples, uint64_t seed) {
    Timer timer;
    Rect r{0, w - 1, 0, h - 1};
    auto boundary = boundary_config(r, EdgeLabel::Zero, EdgeLabel::Zero, EdgeLabel::Zero,
                                    EdgeLabel::Zero);
    RectMeasure exact = exact_rect_measure(r, boundary);
    std::map<uint32_t, long long> freq;
    for (long long i = 0; i < samples; ++i)
        ++freq[cftp_sample(r, boundary, hash_u64(seed, 0xcf7e9ULL, static_cast<uint64_t>(i)))];
    std::ostringstream csv;
    csv << "filling,observed,expected\n";
    double expected = static_cast<double>(samples) / static_cast<double>(exact.count());
    double chi2 = 0.0;
    for (uint32_t f : exact.fillings) {
        long long obs = freq.count(f) ? freq[f] : 0;
        chi2 += (obs - expected) * (obs - expected) / expected;
        csv << f << "," << obs << "," << fmt(expected) << "\n";
    }
    std::string path = out_path("cftp");
    write_file(path, csv.str());
    write_manifest(path, "cftp",
                   {{"rect", std::to_string(w) + "x" + std::to_string(h)},
                    {"samples", samples},
                    {"seed", seed},
                    {"chi2", chi2},
                    {"df", exact.count() - 1}},
                   timer.seconds());
    std::cout << "seed " << seed << ", chi2 = " << chi2 << " with df = " << exact.count() - 1
              << "\n";
    return 0;
}

int cmd_perc(double p, std::vector<int> ns, long long trials, uint64_t seed) {
    Timer timer;
    std::ostringstream csv;
    csv << "p,n,trials,hits,estimate,lo,hi\n";
    std::vector<std::pair<int, double>> fitpts;
    for (int n : ns) {
        PercEstimate e = perc_mc(p, n, trials, seed);
        csv << fmt(p) << "," << n << "," << e.trials << "," << e.hits << "," << fmt(e.estimate)
            << "," << fmt(e.ci95.lo) << "," << fmt(e.ci95.hi) << "\n";
        if (e.hits > 0) fitpts.push_back({n, std::log(e.estimate)});
    }
    double slope = 0.0;
    if (fitpts.size() >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (auto [x, y] : fitpts) { sx += x; sy += y; sxx += double(x) * x; sxy += x * y; }
        double np = static_cast<double>(fitpts.size());
        slope = (np * sxy - sx * sy) / (np * sxx - sx * sx);
    }
    std::string path = out_path("perc");
    write_file(path, csv.str());
    json inputs{{"p", p}, {"trials", trials}, {"seed", seed}, {"decay_slope", slope}};
    if (p < 0.25) {
        json bounds = json::array();
        for (int n : ns) bounds.push_back({{"n", n}, {"small_p_bound", small_p_bound(p, n)}});
        inputs["small_p_overlay"] = bounds;
    }
    write_manifest(path, "perc", inputs, timer.seconds());
    std::cout << "seed " << seed << ", decay slope " << slope << "\n";
    return 0;
}

int cmd_counterexample(double k, int n_max, double tol) {
    Timer timer;
    YEntropyReport rep = y_entropy_table(k, n_max, tol);
    OscillationReport osc = oscillation_report(k, n_max, tol);
    std::ostringstream csv;
    csv << "n,h_n,lo,hi,bound_lo,bound_hi,asserted,ok\n";
    for (size_t i = 0; i < rep.bounds.size(); ++i) {
        const auto& b = rep.bounds[i];
        csv << b.n << "," << fmt(b.h.mid()) << "," << fmt(b.h.lo) << "," << fmt(b.h.hi) << ","
            << fmt(b.lower) << "," << fmt(b.upper) << "," << (b.asserted ? 1 : 0) << ","
            << (b.ok ? "ok" : "violated") << "\n";
    }
    std::string path = out_path("counterexample");
    write_file(path, csv.str());
    json j{{"k", k},
           {"epsilon_bound", osc.epsilon_bound},
           {"applies", osc.applies},
           {"min_odd_step_gap", osc.min_odd_step},
           {"oscillates", osc.oscillates},
           {"extrapolation_unreliable", osc.extrapolation_unreliable},
           {"deltas", osc.deltas}};
    write_file(path + ".oscillation.json", j.dump(2) + "\n");
    write_manifest(path, "counterexample", {{"k", k}, {"n_max", n_max}, {"tol", tol}},
                   timer.seconds());
    return rep.all_asserted_ok ? 0 : 2;
}

int cmd_selftest(const std::string& fault) {
    Fault f = Fault::None;
    if (fault == "transfer") f = Fault::WrongTransferEntry;
    else if (!fault.empty()) throw ContractError("unknown fault '" + fault + "'");
    auto results = selftest(f);
    bool all = true;
    for (const auto& r : results) {
        std::cout << (r.pass ? "PASS " : "FAIL ") << r.name;
        if (!r.detail.empty()) std::cout << " (" << r.detail << ")";
        std::cout << "\n";
        all = all && r.pass;
    }
    std::cout << (all ? "selftest: all checks passed\n" : "selftest: FAILURES above\n");
    return all ? 0 : 4;
}

} // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"strip entropies of Z^2 nearest-neighbor shifts of finite type"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    std::string spec_src = "hardsquare";
    int n_max = 12, precision_n = 3, n = 4, j = 3, depth = 2, window = 6;
    int max_w = 3, max_h = 3, rect_w = 2, rect_h = 2;
    double tol = 1e-12, p = 0.5, k = 339738625.0;
    long long trials = 100000, samples = 100000;
    uint64_t seed = kDefaultSeed;
    std::vector<int> ns = {2, 4, 8, 16, 32};

    auto* entropy = app.add_subcommand("entropy", "strip entropy table with extrapolation");
    entropy->add_option("--spec", spec_src);
    entropy->add_option("--n-max", n_max);
    entropy->add_option("--tol", tol);

    auto* trace = app.add_subcommand("trace-bound", "trace-power eigenvalue sandwich per strip");
    trace->add_option("--spec", spec_src);
    trace->add_option("--n-max", n_max);
    trace->add_option("--precision-n", precision_n);

    auto* parry_cmd = app.add_subcommand("parry", "marginal decay and uniform conditionals");
    parry_cmd->add_option("--spec", spec_src);
    parry_cmd->add_option("--n-max", n_max);

    auto* rowent = app.add_subcommand("rowent", "row-conditional entropy intervals");
    rowent->add_option("--n", n);
    rowent->add_option("--j", j);
    rowent->add_option("--depth", depth);
    rowent->add_option("--m", window);

    auto* gibbs = app.add_subcommand("gibbs", "site-probability sandwich grid over small rectangles");
    gibbs->add_option("--max-w", max_w);
    gibbs->add_option("--max-h", max_h);

    auto* cftp = app.add_subcommand("cftp", "perfect sampling vs exact enumeration");
    cftp->add_option("--width", rect_w);
    cftp->add_option("--height", rect_h);
    cftp->add_option("--samples", samples);
    cftp->add_option("--seed", seed);

    auto* perc = app.add_subcommand("perc", "site percolation Monte Carlo sweep");
    perc->add_option("--p", p);
    perc->add_option("--n-list,--n", ns)->delimiter(',');
    perc->add_option("--trials", trials);
    perc->add_option("--seed", seed);

    auto* counter = app.add_subcommand("counterexample", "block-gluing counterexample strip table");
    counter->add_option("--k", k);
    counter->add_option("--n-max", n_max);
    counter->add_option("--tol", tol);

    std::string fault;
    auto* self = app.add_subcommand("selftest", "exact-oracle invariant suite");
    self->add_option("--inject-fault", fault)->group(""); // hidden test knob

    for (auto* sc : {entropy, trace, parry_cmd, rowent, gibbs, cftp, perc, counter}) {
        sc->add_option("--out", g_out);
        sc->add_option("--format", g_format)->check(CLI::IsMember({"csv", "json"}));
    }

    try {
        app.parse(argc, argv);
        if (app.got_subcommand(entropy)) return cmd_entropy(spec_src, n_max, tol);
        if (app.got_subcommand(trace)) return cmd_trace_bound(spec_src, n_max, precision_n);
        if (app.got_subcommand(parry_cmd)) return cmd_parry(spec_src, n_max);
        if (app.got_subcommand(rowent)) return cmd_rowent(n, j, depth, window);
        if (app.got_subcommand(gibbs)) return cmd_gibbs(max_w, max_h);
        if (app.got_subcommand(cftp)) return cmd_cftp(rect_w, rect_h, samples, seed);
        if (app.got_subcommand(perc)) return cmd_perc(p, ns, trials, seed);
        if (app.got_subcommand(counter)) return cmd_counterexample(k, n_max, tol);
        if (app.got_subcommand(self)) return cmd_selftest(fault);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const ResourceError& e) {
        std::cerr << "STRIPENT_ERROR resource " << e.what() << "\n";
        return 3;
    } catch (const ContractError& e) {
        std::cerr << "STRIPENT_ERROR contract " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "STRIPENT_ERROR internal " << e.what() << "\n";
        return 2;
    }
    return 0;
}

} // namespace stripent
