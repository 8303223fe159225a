#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "multiform/rng.hpp"

namespace multiform {

// Weight h on pairs (x,y); identity when empty.
using PairWeight = std::function<double(std::int64_t, std::int64_t)>;

struct TraceConfig {
    std::int64_t N;
    double p;
    int q;  // moment order, trace((L*L)^q)
    PairWeight h;  // default: h == 1

    TraceConfig(std::int64_t N_, double p_, int q_, PairWeight h_ = nullptr);
};

// Admissibility of n = (n_1,...,n_2q): in the alternating-difference vector
// m = (n_2-n_1, n_2-n_3, n_4-n_3, n_4-n_5, ..., n_2q-n_1), no integer
// appears exactly once.
bool is_admissible(const std::vector<std::int64_t>& n);

// E trace((L*L)^q) for L f(x) = sum_y f(y) r(x-y) h(x,y) on [-N,N]:
// enumerates admissible tuples, groups r-arguments by value, and multiplies
// exact Bernoulli moments. Arguments with |m| > N contribute factor 0
// (r vanishes off [-N,N]). Guard: (2N+1)^{2q} <= 10^9.
double expected_trace_exact(const TraceConfig& cfg);

struct MonteCarloStat {
    double mean = 0;
    double stderr_ = 0;
    std::int64_t trials = 0;
    double z_score(double reference) const;
};

// Samples r, forms K(x,y) = r(x-y) h(x,y), averages trace((K^T K)^q).
MonteCarloStat trace_monte_carlo(const TraceConfig& cfg, std::int64_t trials,
                                 std::uint64_t seed);

// Fully-independent model: E trace((T^*T)^q) for K(x,y) = s(x,y) - p.
// Enumerates cycles (x_1,y_1,...,x_q,y_q), drops any with a multiplicity-1
// pair, multiplies central Bernoulli moments. Reports the partition
// histogram (sorted multiplicity vector -> tuple count) and whether each
// J-class partition obeys the count <= C (2N+1)^{J+1} with C the number of
// slot partitions with those class sizes.
struct MatrixTraceResult {
    double value = 0;
    std::map<std::vector<int>, std::int64_t> partition_histogram;
    bool counting_bound_holds = true;
};
MatrixTraceResult matrix_trace_exact(std::int64_t N, double p, int q);

// Monte Carlo companion: samples s(x,y), K = s - p, trace((K^T K)^q).
MonteCarloStat matrix_trace_monte_carlo(std::int64_t N, double p, int q, std::int64_t trials,
                                        std::uint64_t seed);

// E[(s - p)^m] for s ~ Bernoulli(p).
double bernoulli_central_moment(int m, double p);

// Per-sample estimate of the sum over NON-admissible tuples (ought to be 0
// in expectation); used to check the vanishing of non-admissible terms.
MonteCarloStat nonadmissible_contribution_mc(const TraceConfig& cfg, std::int64_t trials,
                                             std::uint64_t seed);

}  // namespace multiform
