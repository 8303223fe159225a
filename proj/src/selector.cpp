#include "multiform/selector.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace multiform {

SelectorModel::SelectorModel(std::int64_t N_, double p_, std::uint64_t seed_,
                             std::uint64_t stream_id_)
    : N(N_), p(p_), seed(seed_), stream_id(stream_id_) {
    if (N < 1) throw std::invalid_argument("SelectorModel: N must be positive");
    if (!(p > 0.0) || p > 1.0) throw std::invalid_argument("SelectorModel: p must be in (0,1]");
    if (static_cast<double>(N) * p < 1.0)
        throw std::invalid_argument("SelectorModel: Np >= 1 required");
}

double SelectorModel::gamma_to_p(std::int64_t N, double gamma) {
    if (gamma < 0.0) throw std::invalid_argument("gamma must be nonnegative");
    double p = std::pow(static_cast<double>(N), -gamma);
    return std::min(std::max(p, 1e-300), 1.0);
}

SelectorModel SelectorModel::from_gamma(std::int64_t N, double gamma, std::uint64_t seed,
                                        std::uint64_t stream_id) {
    return SelectorModel(N, gamma_to_p(N, gamma), seed, stream_id);
}

double scan_gamma_to_p(std::int64_t N, double gamma) {
    return std::min(SelectorModel::gamma_to_p(N, gamma), 0.5);
}

SignedMeasure sample_r(const SelectorModel& model) {
    Rng rng = Rng::stream(model.seed, model.stream_id);
    return sample_r_with(model.N, model.p, [&rng] { return rng.uniform(); });
}

ShiftTuple::ShiftTuple(std::vector<std::int64_t> s) : shifts(std::move(s)) {
    if (shifts.empty()) throw std::invalid_argument("ShiftTuple: empty");
    std::vector<std::int64_t> sorted = shifts;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw std::invalid_argument("ShiftTuple: shifts must be pairwise distinct");
}

SignedMeasure shifted_product(const SignedMeasure& r, const ShiftTuple& z, std::int64_t N,
                              bool normalized) {
    double scale = 1.0;
    if (normalized)
        scale = std::pow(static_cast<double>(N), static_cast<double>(z.size()) - 1.0);
    return r.shifted_pointwise_product(z.shifts, scale);
}

double r_moment(int q, std::int64_t N, double p) {
    if (q < 1) throw std::invalid_argument("r_moment: q >= 1");
    const double on = 1.0 / (static_cast<double>(N) * p) - 1.0 / static_cast<double>(N);
    const double off = -1.0 / static_cast<double>(N);
    return p * std::pow(on, q) + (1.0 - p) * std::pow(off, q);
}

double expected_shifted_product_l2sq(const ShiftTuple& z, std::int64_t N, double p,
                                     bool normalized) {
    auto [mn, mx] = std::minmax_element(z.shifts.begin(), z.shifts.end());
    std::int64_t span = 2 * N + 1 - (*mx - *mn);
    if (span <= 0) return 0.0;
    double m2 = r_moment(2, N, p);
    double v = static_cast<double>(span) * std::pow(m2, static_cast<double>(z.size()));
    if (normalized)
        v *= std::pow(static_cast<double>(N), 2.0 * (static_cast<double>(z.size()) - 1.0));
    return v;
}

double expected_r_l1(std::int64_t N, double p) {
    // E|r| = p (1-p)/(Np) + (1-p)/N = 2(1-p)/N per site
    return static_cast<double>(2 * N + 1) * 2.0 * (1.0 - p) / static_cast<double>(N);
}

}  // namespace multiform
