#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "multiform/fit.hpp"
#include "multiform/forms.hpp"

namespace multiform {

enum class Estimator { bilinear_exact, ascent, maximal, matrix_spectral };

Estimator estimator_from_string(const std::string& s);
std::string estimator_name(Estimator e);

// Grid scan over (N, gamma): per cell, `trials` kernels are sampled and the
// chosen statistic is averaged; per gamma the slope of log2 mean vs log2 N
// is fitted. Cell probabilities follow p = min(N^{-gamma}, 1/2).
struct ScanConfig {
    std::vector<std::int64_t> N_list;  // strictly increasing, dyadic in practice
    std::vector<double> gamma_list;
    FormFamily family;        // used by ascent / maximal
    std::int64_t trials = 10; // >= 10
    int restarts = 5;
    int sweeps = 30;
    std::uint64_t seed = 1;
    Estimator estimator = Estimator::bilinear_exact;
    int oversample = 8;       // xi-grid factor for bilinear_exact / maximal

    void validate() const;
};

ScanConfig scan_config_from_json(const std::string& json_text);
std::string scan_config_to_json(const ScanConfig& cfg);

struct ScanCell {
    std::int64_t N;
    double gamma;
    double p;
    double mean;
    double stderr_;
    double median;
    std::int64_t trials;
};

struct ScanResult {
    std::vector<ScanCell> cells;  // gamma-major, N within
    struct SlopeRow {
        double gamma;
        FitResult fit;
        double predicted_threshold;  // decay predicted when gamma below it
        bool decay_predicted;
        bool decay_observed;  // slope < 0 with CI excluding 0
    };
    std::vector<SlopeRow> slopes;

    std::string to_csv() const;
    std::string summary_json() const;
    std::string plot_data() const;  // (log2 N, log2 mean) rows per gamma
};

ScanResult run_scan(const ScanConfig& cfg);

}  // namespace multiform
