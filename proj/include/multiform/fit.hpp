#pragma once

#include <cstdint>
#include <vector>

namespace multiform {

struct FitResult {
    double slope = 0;
    double intercept = 0;
    double slope_stderr = 0;
    double ci95 = 0;         // 1.96 * slope_stderr
    int points_used = 0;
    int points_skipped = 0;  // nonpositive means excluded
    bool defined = false;    // needs >= 2 usable points; stderr needs >= 3
};

// Ordinary least squares y = a + b x.
FitResult ols(const std::vector<double>& x, const std::vector<double>& y);

// OLS on (log2 N, log2 mean); nonpositive means are skipped with a count.
FitResult fit_exponent(const std::vector<std::int64_t>& N_values,
                       const std::vector<double>& means);

}  // namespace multiform
