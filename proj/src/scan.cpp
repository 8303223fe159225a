#include "multiform/scan.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "multiform/operators.hpp"
#include "multiform/parallel.hpp"
#include "multiform/random_matrix.hpp"
#include "multiform/selector.hpp"

namespace multiform {

using nlohmann::json;

Estimator estimator_from_string(const std::string& s) {
    if (s == "bilinear_exact") return Estimator::bilinear_exact;
    if (s == "ascent") return Estimator::ascent;
    if (s == "maximal") return Estimator::maximal;
    if (s == "matrix_spectral") return Estimator::matrix_spectral;
    throw std::invalid_argument("unknown estimator: " + s);
}

std::string estimator_name(Estimator e) {
    switch (e) {
        case Estimator::bilinear_exact: return "bilinear_exact";
        case Estimator::ascent: return "ascent";
        case Estimator::maximal: return "maximal";
        case Estimator::matrix_spectral: return "matrix_spectral";
    }
    return "?";
}

void ScanConfig::validate() const {
    if (N_list.empty() || gamma_list.empty())
        throw std::invalid_argument("ScanConfig: empty N or gamma list");
    for (std::size_t i = 1; i < N_list.size(); ++i)
        if (N_list[i] <= N_list[i - 1])
            throw std::invalid_argument("ScanConfig: N_list must be strictly increasing");
    if (trials < 10) throw std::invalid_argument("ScanConfig: trials >= 10");
    if (estimator == Estimator::ascent || estimator == Estimator::maximal) {
        if (family.degree() < (estimator == Estimator::ascent ? 1 : 0))
            throw std::invalid_argument("ScanConfig: estimator needs a form family");
        if (auto viol = validate_family(family))
            throw std::invalid_argument("ScanConfig: invalid family: " + viol->what);
    }
}

ScanConfig scan_config_from_json(const std::string& text) {
    json j = json::parse(text);
    ScanConfig cfg;
    cfg.N_list = j.at("N_list").get<std::vector<std::int64_t>>();
    cfg.gamma_list = j.at("gamma_list").get<std::vector<double>>();
    if (j.contains("family")) cfg.family = parse_family(j.at("family").get<std::string>());
    cfg.trials = j.value("trials", std::int64_t{10});
    cfg.restarts = j.value("restarts", 5);
    cfg.sweeps = j.value("sweeps", 30);
    cfg.seed = j.value("seed", std::uint64_t{1});
    cfg.estimator = estimator_from_string(j.value("estimator", std::string("bilinear_exact")));
    cfg.oversample = j.value("oversample", 8);
    cfg.validate();
    return cfg;
}

std::string scan_config_to_json(const ScanConfig& cfg) {
    json j;
    j["N_list"] = cfg.N_list;
    j["gamma_list"] = cfg.gamma_list;
    if (cfg.family.degree() >= 1) j["family"] = cfg.family.str();
    j["trials"] = cfg.trials;
    j["restarts"] = cfg.restarts;
    j["sweeps"] = cfg.sweeps;
    j["seed"] = cfg.seed;
    j["estimator"] = estimator_name(cfg.estimator);
    j["oversample"] = cfg.oversample;
    return j.dump(2);
}

namespace {

double one_trial(const ScanConfig& cfg, std::int64_t N, double p, std::size_t cell_index,
                 std::int64_t trial) {
    // streams keyed by (cell, trial) so cells and trials are order-free
    std::uint64_t stream = (static_cast<std::uint64_t>(cell_index) << 32) ^
                           static_cast<std::uint64_t>(trial);
    switch (cfg.estimator) {
        case Estimator::bilinear_exact: {
            SelectorModel model(N, p, cfg.seed, stream);
            return bilinear_norm_exact(sample_r(model), cfg.oversample);
        }
        case Estimator::ascent: {
            SelectorModel model(N, p, cfg.seed, stream);
            MultilinearInstance inst;
            inst.family = cfg.family;
            inst.kernel = sample_r(model);
            inst.window_A = 1;
            inst.N = N;
            return op_norm_lower(inst, cfg.restarts, cfg.sweeps, Rng::mix(cfg.seed ^ stream))
                .value;
        }
        case Estimator::maximal: {
            SelectorModel model(N, p, cfg.seed, stream);
            MultilinearInstance inst;
            inst.family = cfg.family;
            inst.kernel = sample_r(model);
            inst.window_A = 1;
            inst.N = N;
            return maximal_norm_lower(inst, cfg.oversample * inst.window(), cfg.restarts,
                                      cfg.sweeps, Rng::mix(cfg.seed ^ stream))
                .value;
        }
        case Estimator::matrix_spectral: {
            MatrixModel model(N, p, cfg.seed, stream);
            SelectorMatrix mat(model, /*parallel_rows=*/false);
            return mat.spectral_norm();
        }
    }
    return 0.0;
}

double threshold_for(const ScanConfig& cfg) {
    // reference decay thresholds: 2^{-M} for the operator norm, 2^{-M-1}
    // for the maximal variant, (1-gamma)/2-type decay for the matrix model
    int M = cfg.family.degree();
    switch (cfg.estimator) {
        case Estimator::bilinear_exact: return 1.0;
        case Estimator::ascent: return M >= 1 ? std::pow(2.0, -M) : 1.0;
        case Estimator::maximal: return M >= 0 ? std::pow(2.0, -M - 1) : 0.5;
        case Estimator::matrix_spectral: return 1.0;
    }
    return 1.0;
}

}  // namespace

ScanResult run_scan(const ScanConfig& cfg) {
    cfg.validate();
    ScanResult result;
    const std::size_t n_cells = cfg.N_list.size() * cfg.gamma_list.size();
    result.cells.resize(n_cells);

    for (std::size_t gi = 0; gi < cfg.gamma_list.size(); ++gi) {
        for (std::size_t ni = 0; ni < cfg.N_list.size(); ++ni) {
            const std::size_t cell_index = gi * cfg.N_list.size() + ni;
            const std::int64_t N = cfg.N_list[ni];
            const double gamma = cfg.gamma_list[gi];
            const double p = scan_gamma_to_p(N, gamma);

            std::vector<double> vals(static_cast<std::size_t>(cfg.trials));
            parallel_for(static_cast<std::size_t>(cfg.trials), [&](std::size_t t) {
                vals[t] = one_trial(cfg, N, p, cell_index, static_cast<std::int64_t>(t));
            });

            double sum = 0;
            for (double v : vals) sum += v;
            double mean = sum / static_cast<double>(cfg.trials);
            double ss = 0;
            for (double v : vals) ss += (v - mean) * (v - mean);
            std::vector<double> sorted = vals;
            std::sort(sorted.begin(), sorted.end());
            double median = sorted[sorted.size() / 2];
            if (sorted.size() % 2 == 0)
                median = 0.5 * (median + sorted[sorted.size() / 2 - 1]);

            ScanCell& cell = result.cells[cell_index];
            cell.N = N;
            cell.gamma = gamma;
            cell.p = p;
            cell.mean = mean;
            cell.stderr_ = cfg.trials > 1
                               ? std::sqrt(ss / (static_cast<double>(cfg.trials - 1) *
                                                 static_cast<double>(cfg.trials)))
                               : 0.0;
            cell.median = median;
            cell.trials = cfg.trials;
        }
    }

    for (std::size_t gi = 0; gi < cfg.gamma_list.size(); ++gi) {
        std::vector<std::int64_t> Ns;
        std::vector<double> means;
        for (std::size_t ni = 0; ni < cfg.N_list.size(); ++ni) {
            const ScanCell& c = result.cells[gi * cfg.N_list.size() + ni];
            Ns.push_back(c.N);
            means.push_back(c.mean);
        }
        ScanResult::SlopeRow row;
        row.gamma = cfg.gamma_list[gi];
        row.fit = fit_exponent(Ns, means);
        row.predicted_threshold = threshold_for(cfg);
        row.decay_predicted = row.gamma < row.predicted_threshold;
        row.decay_observed =
            row.fit.defined && row.fit.slope + row.fit.ci95 < 0.0;
        result.slopes.push_back(row);
    }
    return result;
}

std::string ScanResult::to_csv() const {
    std::ostringstream os;
    os << "N,gamma,p,mean,stderr,median,trials\n";
    os.precision(12);
    for (const auto& c : cells)
        os << c.N << "," << c.gamma << "," << c.p << "," << c.mean << "," << c.stderr_ << ","
           << c.median << "," << c.trials << "\n";
    return os.str();
}

std::string ScanResult::summary_json() const {
    json j;
    j["slopes"] = json::array();
    for (const auto& s : slopes) {
        json row;
        row["gamma"] = s.gamma;
        row["slope"] = s.fit.slope;
        row["ci95"] = s.fit.ci95;
        row["points_used"] = s.fit.points_used;
        row["points_skipped"] = s.fit.points_skipped;
        row["defined"] = s.fit.defined;
        row["predicted_threshold"] = s.predicted_threshold;
        row["decay_predicted"] = s.decay_predicted;
        row["decay_observed"] = s.decay_observed;
        j["slopes"].push_back(row);
    }
    return j.dump(2);
}

std::string ScanResult::plot_data() const {
    std::ostringstream os;
    os.precision(12);
    os << "gamma,log2N,log2mean\n";
    for (const auto& c : cells) {
        if (!(c.mean > 0)) continue;
        os << c.gamma << "," << std::log2(static_cast<double>(c.N)) << "," << std::log2(c.mean)
           << "\n";
    }
    return os.str();
}

}  // namespace multiform
