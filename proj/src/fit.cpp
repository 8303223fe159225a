#include "multiform/fit.hpp"

#include <cmath>
#include <stdexcept>

namespace multiform {

FitResult ols(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw std::invalid_argument("ols: size mismatch");
    FitResult r;
    const std::size_t n = x.size();
    r.points_used = static_cast<int>(n);
    if (n < 2) return r;
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
    }
    double mx = sx / static_cast<double>(n), my = sy / static_cast<double>(n);
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0) return r;
    r.slope = sxy / sxx;
    r.intercept = my - r.slope * mx;
    r.defined = true;
    if (n >= 3) {
        double sse = 0;
        for (std::size_t i = 0; i < n; ++i) {
            double e = y[i] - (r.intercept + r.slope * x[i]);
            sse += e * e;
        }
        double s2 = sse / static_cast<double>(n - 2);
        r.slope_stderr = std::sqrt(s2 / sxx);
        r.ci95 = 1.96 * r.slope_stderr;
    }
    return r;
}

FitResult fit_exponent(const std::vector<std::int64_t>& N_values,
                       const std::vector<double>& means) {
    if (N_values.size() != means.size()) throw std::invalid_argument("fit_exponent: size mismatch");
    std::vector<double> x, y;
    int skipped = 0;
    for (std::size_t i = 0; i < N_values.size(); ++i) {
        if (!(means[i] > 0.0)) {
            ++skipped;
            continue;
        }
        x.push_back(std::log2(static_cast<double>(N_values[i])));
        y.push_back(std::log2(means[i]));
    }
    FitResult r = ols(x, y);
    r.points_skipped = skipped;
    return r;
}

}  // namespace multiform
