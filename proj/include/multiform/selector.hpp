#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "multiform/rng.hpp"
#include "multiform/signed_measure.hpp"

namespace multiform {

// Bernoulli selector field on [-N, N]. p may be given directly or through
// gamma with p = N^{-gamma}, clamped to (0,1].
struct SelectorModel {
    std::int64_t N;
    double p;
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;

    SelectorModel(std::int64_t N_, double p_, std::uint64_t seed_ = 0,
                  std::uint64_t stream_id_ = 0);

    static SelectorModel from_gamma(std::int64_t N, double gamma, std::uint64_t seed = 0,
                                    std::uint64_t stream_id = 0);

    static double gamma_to_p(std::int64_t N, double gamma);
};

// gamma -> p for scan cells: min(N^{-gamma}, 1/2). gamma = 0 means constant
// selection probability 1/2; p = 1 would make r identically zero and every
// scaling statistic degenerate.
double scan_gamma_to_p(std::int64_t N, double gamma);

// r(omega,x) = (Np)^{-1} s(omega,x) - N^{-1} on [-N,N], 0 elsewhere.
// Deterministic in (seed, stream_id): one counter-based stream, one draw per x.
SignedMeasure sample_r(const SelectorModel& model);

// Test seam: draw s(x) = (uniform(x) < p) from an injected uniform source.
template <class UniformSource>
SignedMeasure sample_r_with(std::int64_t N, double p, UniformSource&& uniform) {
    SignedMeasure r(N);
    const double on_value = 1.0 / (static_cast<double>(N) * p) - 1.0 / static_cast<double>(N);
    r.set_background(-1.0 / static_cast<double>(N), -N, N);
    for (std::int64_t x = -N; x <= N; ++x)
        if (uniform() < p) r.push_override(x, on_value);
    r.canonicalize();
    return r;
}

// Distinct integer shifts z_1,...,z_K.
struct ShiftTuple {
    std::vector<std::int64_t> shifts;
    explicit ShiftTuple(std::vector<std::int64_t> s);  // rejects duplicates
    std::size_t size() const { return shifts.size(); }
};

// rho(x) = prod_i r(x + z_i); with `normalized`, times N^{K-1}.
SignedMeasure shifted_product(const SignedMeasure& r, const ShiftTuple& z, std::int64_t N,
                              bool normalized = false);

// E[r(omega,x)^q] = p ((Np)^{-1} - N^{-1})^q + (1-p)(-N^{-1})^q, exact.
double r_moment(int q, std::int64_t N, double p);

// Exact E ||rho_{omega,z}||_2^2 = |W_z| (E r^2)^K with
// |W_z| = max(0, 2N+1 - (max z - min z)); includes the N^{2(K-1)} factor
// when normalized.
double expected_shifted_product_l2sq(const ShiftTuple& z, std::int64_t N, double p,
                                     bool normalized = false);

// Exact E ||r||_1 = (2N+1) * 2p(1-p)/(Np)... = 2(1-p)(2N+1)/N.
double expected_r_l1(std::int64_t N, double p);

}  // namespace multiform
