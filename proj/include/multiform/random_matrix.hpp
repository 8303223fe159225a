#pragma once

#include <cstdint>
#include <vector>

#include "multiform/forms.hpp"
#include "multiform/function_vec.hpp"
#include "multiform/rng.hpp"

namespace multiform {

// Fully-independent selector field on [-N,N]^2.
struct MatrixModel {
    std::int64_t N;
    double p;
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;

    MatrixModel(std::int64_t N_, double p_, std::uint64_t seed_ = 0,
                std::uint64_t stream_id_ = 0);
};

// Sampled matrix: r(x,y) = (Np)^{-1}(s(x,y) - p), stored as sorted column
// indices of the s = 1 sites per row. Rows use independent substreams so
// sampling parallelizes without changing the draw.
class SelectorMatrix {
  public:
    SelectorMatrix(const MatrixModel& model, bool parallel_rows = true);

    std::int64_t N() const { return N_; }
    std::int64_t side() const { return 2 * N_ + 1; }
    double p() const { return p_; }

    bool selected(std::int64_t x, std::int64_t y) const;
    double value(std::int64_t x, std::int64_t y) const;
    const std::vector<std::int32_t>& row_ones(std::int64_t x) const;
    std::int64_t ones_count() const;

    // y_out = R v and y_out = R^T v on side()-length arrays.
    void matvec(const double* v, double* out) const;
    void rmatvec(const double* v, double* out) const;

    // sigma_max via Lanczos on R^T R.
    double spectral_norm(int max_iters = 64, double tol = 1e-7) const;

    bool operator==(const SelectorMatrix& o) const {
        return N_ == o.N_ && p_ == o.p_ && rows_ == o.rows_;
    }

  private:
    std::int64_t N_;
    double p_;
    std::vector<std::vector<std::int32_t>> rows_;  // 0-based column indices
};

// T(f_1..f_M) = sum_{x,y} r(x,y) prod_j f_j(L_j(x,y)), a scalar.
double matrix_form(const SelectorMatrix& sample, const FormFamily& family,
                   const std::vector<FunctionVec>& fs);

// Restricted weak-type norm sup |E_1|^{-1/2}|E_2|^{-1/2}|T(E_1,...,E_M)|
// over indicator tuples. E_1, E_2 are enumerated (nonempty); sets in slots
// j >= 3 enter linearly and unnormalized, so their optimum is read off the
// sign structure of the fiber coefficients exactly. `full_enumeration`
// disables that shortcut for validation. Cap: (2N+1) <= 12, M <= 3.
struct WeakNormResult {
    double value = 0;
    std::vector<std::vector<std::int64_t>> witness;  // chosen sets
};
WeakNormResult weak_norm_bruteforce(const SelectorMatrix& sample, const FormFamily& family,
                                    bool full_enumeration = false);

// X_E = Np sum_{(x,y) in E} r(x,y) = sum_E (s - p); empirical tails
// P(|X_E| > lambda sigma) with sigma^2 = |E| p (1-p), against the Bernstein
// bound 2 exp(-t^2 / (2 sigma^2 + 2t/3)) at t = lambda sigma.
struct ChernoffReport {
    struct Row {
        double lambda;
        double empirical;  // tail frequency
        double bound;      // Bernstein value
        double sampling_sigma;  // binomial sd of the frequency estimate
        bool holds;        // empirical <= bound + 4 sampling sigma
    };
    std::vector<Row> rows;
    double mean_X = 0;
    double stderr_X = 0;
    double sigma = 0;
    bool holds = true;
};
ChernoffReport chernoff_tail_check(const MatrixModel& model,
                                   const std::vector<std::pair<std::int64_t, std::int64_t>>& E,
                                   const std::vector<double>& lambdas, std::int64_t trials,
                                   std::uint64_t seed);

// E sup_x sum_y |r(x,y)| over trials for each N in `N_list`, with a
// linear-in-log-N fit and a log-log power fit (growth should be sublinear,
// consistent with O(log N)). `single_row` restricts the sup to one row.
struct RowSumReport {
    std::vector<std::int64_t> N_list;
    std::vector<double> means;
    std::vector<double> stderrs;
    double loglinear_intercept = 0, loglinear_slope = 0;  // mean ~ a + b ln N
    double power_slope = 0;                                // log mean ~ c + s log N
    bool increasing = false;
};
RowSumReport row_sum_sup(double p_of_gamma_or_fixed, bool use_gamma,
                         const std::vector<std::int64_t>& N_list, std::int64_t trials,
                         std::uint64_t seed, bool single_row = false);

// Split-lemma facts on small instances: the averaging form
// A(f_1..f_M) = N^{-1} sum prod f_j(L_j), its monotonicity, the counting
// bound A(E_1,..,E_M) <= N^{-1}|E_1||E_2|, and the complement trick
// max(count(E_M), count(complement)) >= half the E_M-free fiber count.
struct SplitCheckReport {
    double a_full = 0;           // A with all sets full
    double a_full_expected = 0;  // N^{-1} * direct pair count
    bool monotone_ok = true;
    bool counting_ok = true;
    bool complement_ok = true;
};
SplitCheckReport split_bound_check(const SelectorMatrix& sample, const FormFamily& family,
                                   std::uint64_t seed);

// The averaging form A on indicator tuples.
double averaging_form(std::int64_t N, const FormFamily& family,
                      const std::vector<std::vector<std::int64_t>>& sets);

}  // namespace multiform
