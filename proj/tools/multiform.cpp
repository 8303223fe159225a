#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "multiform/group_lab.hpp"
#include "multiform/operators.hpp"
#include "multiform/random_matrix.hpp"
#include "multiform/reduction.hpp"
#include "multiform/scan.hpp"
#include "multiform/selector.hpp"
#include "multiform/trace_oracle.hpp"

using nlohmann::json;
using namespace multiform;

namespace {

std::uint64_t fnv1a(const void* data, std::size_t len, std::uint64_t h = 0xcbf29ce484222325ULL) {
    const auto* b = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= b[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t witness_hash(const AscentResult& w) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    h = fnv1a(w.f.values.data(), w.f.values.size() * sizeof(double), h);
    for (const auto& g : w.gs) h = fnv1a(g.values.data(), g.values.size() * sizeof(double), h);
    return h;
}

int cmd_obstruction(std::int64_t p, std::int64_t d) {
    GroupSpec spec(p, d);
    GroupFunction mu = build_mu_p(spec);
    GroupFunction m = build_m_p(spec);
    GroupFunction nu = build_nu_p(spec);
    auto w = obstruction_witness(spec);
    double gauss = max_nonzero_fourier(mu);
    double expected = std::pow(static_cast<double>(p), -0.5 * static_cast<double>(d));
    cdouble tri = trilinear_form(w.f, w.g, w.h, nu);
    cdouble tri_m = trilinear_form(w.f, w.g, w.h, m);
    double norm_product = w.f.norm2() * w.g.norm2() * w.h.norm_inf();

    json out;
    out["p"] = p;
    out["d"] = d;
    out["gauss_max"] = gauss;
    out["gauss_expected"] = expected;
    out["trilinear_value"] = std::abs(tri);
    out["trilinear_m_kernel"] = std::abs(tri_m);
    out["norm_product"] = norm_product;
    out["ratio"] = std::abs(tri) / norm_product;
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_sample(std::int64_t N, double gamma, bool has_p, double p, std::uint64_t seed) {
    double prob = has_p ? p : SelectorModel::gamma_to_p(N, gamma);
    SelectorModel model(N, prob, seed);
    SignedMeasure r = sample_r(model);
    std::cout << "x,value\n";
    std::cout.precision(17);
    for (std::int64_t x = -N; x <= N; ++x) std::cout << x << "," << r.value(x) << "\n";
    return 0;
}

int cmd_norm(const std::string& family_text, std::int64_t N, double gamma, std::int64_t trials,
             int restarts, std::uint64_t seed, bool maximal) {
    FormFamily family = parse_family(family_text);
    if (auto viol = validate_family(family)) {
        std::cerr << "invalid family: " << viol->what << "\n";
        return 1;
    }
    double p = scan_gamma_to_p(N, gamma);
    std::cout << "trial,estimate,witness_hash\n";
    std::cout.precision(12);
    for (std::int64_t t = 0; t < trials; ++t) {
        SelectorModel model(N, p, seed, static_cast<std::uint64_t>(t));
        MultilinearInstance inst;
        inst.family = family;
        inst.kernel = sample_r(model);
        inst.window_A = 1;
        inst.N = N;
        if (maximal) {
            auto res = maximal_norm_lower(inst, 8 * inst.window(), restarts, 30,
                                          seed ^ static_cast<std::uint64_t>(t));
            std::uint64_t h = fnv1a(res.f.values.data(), res.f.values.size() * sizeof(cdouble));
            std::cout << t << "," << res.value << "," << std::hex << h << std::dec << "\n";
        } else {
            auto res = op_norm_lower(inst, restarts, 50, seed ^ static_cast<std::uint64_t>(t));
            std::cout << t << "," << res.value << "," << std::hex << witness_hash(res) << std::dec
                      << "\n";
        }
    }
    return 0;
}

int cmd_reduce_check(const std::string& family_text, std::int64_t N, double gamma,
                     std::int64_t trials, std::uint64_t seed) {
    FormFamily family = parse_family(family_text);
    if (family.degree() < 2) {
        std::cerr << "reduce-check needs M >= 2\n";
        return 1;
    }
    double p = scan_gamma_to_p(N, gamma);
    for (std::int64_t t = 0; t < trials; ++t) {
        SelectorModel model(N, p, seed, static_cast<std::uint64_t>(t));
        MultilinearInstance inst;
        inst.family = family;
        inst.kernel = sample_r(model);
        inst.window_A = 1;
        inst.N = N;
        Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(t), 0xf5ULL);
        std::vector<FunctionVec> fs;
        for (int j = 0; j < family.degree(); ++j)
            fs.push_back(random_gaussian_vec(inst.window(), rng));
        CsStepReport rep = verify_cs_step(inst, fs);
        std::set<std::int64_t> B;
        if (!inst.family.kernel_form().is_x_axis()) {
            ShiftTuple single({0});
            B = exceptional_set(single, inst.family.kernel_form(), -2 * inst.window(),
                                2 * inst.window());
        }
        ExceptionalBoundReport eb = verify_exceptional_bound(inst, fs, B);
        json row;
        row["trial"] = t;
        row["lhs2"] = rep.lhs2;
        row["rhs"] = rep.rhs;
        row["B_size"] = eb.b_size;
        row["holds"] = rep.holds && eb.holds;
        std::cout << row.dump() << "\n";
    }
    return 0;
}

int cmd_trace(std::int64_t N, double p, int q, std::int64_t trials, std::uint64_t seed,
              bool matrix_mode) {
    json out;
    if (matrix_mode) {
        MatrixTraceResult exact = matrix_trace_exact(N, p, q);
        MonteCarloStat mc = matrix_trace_monte_carlo(N, p, q, trials, seed);
        out["exact"] = exact.value;
        out["mc_mean"] = mc.mean;
        out["mc_stderr"] = mc.stderr_;
        out["z_score"] = mc.z_score(exact.value);
        out["counting_bound_holds"] = exact.counting_bound_holds;
    } else {
        TraceConfig cfg(N, p, q);
        double exact = expected_trace_exact(cfg);
        MonteCarloStat mc = trace_monte_carlo(cfg, trials, seed);
        out["exact"] = exact;
        out["mc_mean"] = mc.mean;
        out["mc_stderr"] = mc.stderr_;
        out["z_score"] = mc.z_score(exact);
    }
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_matrix(std::int64_t N, double gamma, int M, const std::string& family_text,
               const std::string& mode, std::int64_t trials, std::uint64_t seed) {
    double p = scan_gamma_to_p(N, gamma);
    FormFamily family;
    if (!family_text.empty()) {
        family = parse_family(family_text);
    } else {
        std::vector<LinearForm> presets{LinearForm(1, -1), LinearForm(1, 1), LinearForm(1, -2),
                                        LinearForm(2, 1), LinearForm(1, 2)};
        std::vector<LinearForm> fs(presets.begin(),
                                   presets.begin() + std::min<std::size_t>(presets.size(),
                                                                           std::max(M, 2) + 1));
        family = FormFamily(fs);
    }
    if (mode == "form") {
        MatrixModel model(N, p, seed);
        SelectorMatrix sample(model);
        Rng rng = Rng::stream(seed, 1, 0xabcULL);
        std::vector<FunctionVec> fsv;
        for (int j = 0; j < family.degree(); ++j) fsv.push_back(random_gaussian_vec(N, rng));
        json out;
        out["value"] = matrix_form(sample, family, fsv);
        out["ones"] = sample.ones_count();
        std::cout << out.dump(2) << "\n";
    } else if (mode == "weak") {
        MatrixModel model(N, p, seed);
        SelectorMatrix sample(model);
        auto res = weak_norm_bruteforce(sample, family);
        json out;
        out["weak_norm"] = res.value;
        out["witness"] = res.witness;
        std::cout << out.dump(2) << "\n";
    } else if (mode == "chernoff") {
        MatrixModel model(N, p, seed);
        std::vector<std::pair<std::int64_t, std::int64_t>> E;
        for (std::int64_t x = -N; x <= N; ++x)
            for (std::int64_t y = -N; y <= N; ++y) E.emplace_back(x, y);
        auto rep = chernoff_tail_check(model, E, {1.0, 2.0, 3.0}, trials, seed);
        json out;
        out["sigma"] = rep.sigma;
        out["mean_X"] = rep.mean_X;
        out["rows"] = json::array();
        for (const auto& r : rep.rows)
            out["rows"].push_back({{"lambda", r.lambda},
                                   {"empirical", r.empirical},
                                   {"bound", r.bound},
                                   {"holds", r.holds}});
        out["holds"] = rep.holds;
        std::cout << out.dump(2) << "\n";
    } else if (mode == "rowsum") {
        std::vector<std::int64_t> Ns;
        for (std::int64_t n = 64; n <= N; n *= 2) Ns.push_back(n);
        if (Ns.empty()) Ns.push_back(N);
        auto rep = row_sum_sup(gamma, true, Ns, trials, seed);
        std::cout << "N,mean,stderr\n";
        std::cout.precision(12);
        for (std::size_t i = 0; i < rep.N_list.size(); ++i)
            std::cout << rep.N_list[i] << "," << rep.means[i] << "," << rep.stderrs[i] << "\n";
        std::cerr << "loglinear slope " << rep.loglinear_slope << ", power slope "
                  << rep.power_slope << "\n";
    } else if (mode == "scaling") {
        std::cout << "trial,spectral_norm\n";
        std::cout.precision(12);
        for (std::int64_t t = 0; t < trials; ++t) {
            MatrixModel model(N, p, seed, static_cast<std::uint64_t>(t));
            SelectorMatrix sample(model);
            std::cout << t << "," << sample.spectral_norm() << "\n";
        }
    } else {
        std::cerr << "unknown mode " << mode << "\n";
        return 1;
    }
    return 0;
}

int cmd_scan(const std::string& config_path, const std::string& csv_out,
             const std::string& plot_out) {
    std::ifstream in(config_path);
    if (!in) {
        std::cerr << "cannot open " << config_path << "\n";
        return 1;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    ScanConfig cfg = scan_config_from_json(buf.str());
    ScanResult res = run_scan(cfg);
    if (!csv_out.empty()) {
        std::ofstream os(csv_out);
        os << res.to_csv();
    } else {
        std::cout << res.to_csv();
    }
    std::cout << res.summary_json() << "\n";
    if (!plot_out.empty()) {
        std::ofstream os(plot_out);
        os << res.plot_data();
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for random multilinear operator forms"};
    app.require_subcommand(1);

    // obstruction
    std::int64_t ob_p = 5, ob_d = 1;
    auto* obstruction = app.add_subcommand("obstruction", "finite-group trilinear obstruction");
    obstruction->add_option("--p", ob_p, "odd prime")->required();
    obstruction->add_option("--d", ob_d, "dimension of the quadratic part")->required();

    // sample
    std::int64_t sm_n = 64;
    double sm_gamma = 0.0, sm_p = 0.5;
    std::uint64_t sm_seed = 1;
    auto* sample = app.add_subcommand("sample", "emit one centered selector measure as CSV");
    sample->add_option("--n", sm_n, "window half-width N")->required();
    sample->add_option("--gamma", sm_gamma, "p = N^-gamma");
    auto* sm_popt = sample->add_option("--p", sm_p, "explicit probability (overrides gamma)");
    sample->add_option("--seed", sm_seed, "seed");

    // norm
    std::string nm_family = "1,-1; 1,1; 1,2";
    std::int64_t nm_n = 16, nm_trials = 10;
    double nm_gamma = 0.0;
    int nm_restarts = 5;
    std::uint64_t nm_seed = 1;
    bool nm_maximal = false;
    auto* norm = app.add_subcommand("norm", "operator norm lower bounds per trial (CSV)");
    norm->add_option("--family", nm_family, "forms 'a,b[/den]; ...' with L_0 first");
    norm->add_option("--n", nm_n, "N")->required();
    norm->add_option("--gamma", nm_gamma, "gamma");
    norm->add_option("--trials", nm_trials, "trials");
    norm->add_option("--restarts", nm_restarts, "ascent restarts");
    norm->add_option("--seed", nm_seed, "seed");
    norm->add_flag("--maximal", nm_maximal, "estimate the modulation-maximal norm");

    // reduce-check
    std::string rc_family = "2,-1; 1,0; 0,1; 1,1";
    std::int64_t rc_n = 16, rc_trials = 5;
    double rc_gamma = 0.0;
    std::uint64_t rc_seed = 1;
    auto* reduce_check =
        app.add_subcommand("reduce-check", "Cauchy-Schwarz reduction checks (JSON lines)");
    reduce_check->add_option("--family", rc_family, "normalized family (L_1 = x, L_2 = y)");
    reduce_check->add_option("--n", rc_n, "N")->required();
    reduce_check->add_option("--gamma", rc_gamma, "gamma");
    reduce_check->add_option("--trials", rc_trials, "instances");
    reduce_check->add_option("--seed", rc_seed, "seed");

    // trace-oracle
    std::int64_t tr_n = 4, tr_trials = 100000;
    double tr_p = 0.5;
    int tr_q = 1;
    std::uint64_t tr_seed = 1;
    bool tr_matrix = false;
    auto* trace = app.add_subcommand("trace-oracle", "exact vs Monte Carlo trace moments");
    trace->add_option("--n", tr_n, "N")->required();
    trace->add_option("--p", tr_p, "probability");
    trace->add_option("--q", tr_q, "moment order");
    trace->add_option("--trials", tr_trials, "Monte Carlo trials");
    trace->add_option("--seed", tr_seed, "seed");
    trace->add_flag("--matrix", tr_matrix, "fully-independent matrix model");

    // matrix
    std::int64_t mx_n = 8, mx_trials = 1000;
    double mx_gamma = 0.0;
    int mx_m = 2;
    std::string mx_family, mx_mode = "form";
    std::uint64_t mx_seed = 1;
    auto* matrix = app.add_subcommand("matrix", "fully-independent model experiments");
    matrix->add_option("--n", mx_n, "N")->required();
    matrix->add_option("--gamma", mx_gamma, "gamma");
    matrix->add_option("--m", mx_m, "degree M");
    matrix->add_option("--family", mx_family, "form family");
    matrix->add_option("--mode", mx_mode, "form|weak|chernoff|rowsum|scaling");
    matrix->add_option("--trials", mx_trials, "trials");
    matrix->add_option("--seed", mx_seed, "seed");

    // scan
    std::string sc_config, sc_csv, sc_plot;
    auto* scan = app.add_subcommand("scan", "grid scan with exponent fits");
    scan->add_option("--config", sc_config, "JSON config")->required();
    scan->add_option("--csv", sc_csv, "write per-cell CSV here (default stdout)");
    scan->add_option("--emit-plot-data", sc_plot, "write (log N, log mean) pairs to this file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*obstruction) return cmd_obstruction(ob_p, ob_d);
        if (*sample) return cmd_sample(sm_n, sm_gamma, sm_popt->count() > 0, sm_p, sm_seed);
        if (*norm)
            return cmd_norm(nm_family, nm_n, nm_gamma, nm_trials, nm_restarts, nm_seed,
                            nm_maximal);
        if (*reduce_check) return cmd_reduce_check(rc_family, rc_n, rc_gamma, rc_trials, rc_seed);
        if (*trace) return cmd_trace(tr_n, tr_p, tr_q, tr_trials, tr_seed, tr_matrix);
        if (*matrix)
            return cmd_matrix(mx_n, mx_gamma, mx_m, mx_family, mx_mode, mx_trials, mx_seed);
        if (*scan) return cmd_scan(sc_config, sc_csv, sc_plot);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
