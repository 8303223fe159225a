#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "multiform/forms.hpp"
#include "multiform/function_vec.hpp"
#include "multiform/signed_measure.hpp"

namespace multiform {

// A kernel, a form family and a window: everything the operator and scalar
// forms are evaluated on. `lattice` is the range-lattice membership test
// left behind by change_of_variables (identity for fresh instances):
// (x,y) pairs outside it do not enter any sum.
struct MultilinearInstance {
    FormFamily family;
    SignedMeasure kernel;
    std::int64_t window_A = 1;
    std::int64_t N = 1;
    LatticeMap lattice;

    std::int64_t window() const { return window_A * N; }
    int degree() const { return family.degree(); }
};

// T(f, g_1..g_M)(x) = sum_y f(y) ker(L_0(x,y)) prod_j g_j(L_j(x,y)).
// Non-integer form values and out-of-window reads contribute factor 0.
template <class Scalar>
FunctionVecT<Scalar> apply_T(const MultilinearInstance& inst, const FunctionVecT<Scalar>& f,
                             const std::vector<FunctionVecT<Scalar>>& gs);

// Scalar form sum_{(x,y)} prod_j f_j(L_j(x,y)) ker(L_0(x,y)); |fs| = M.
double scalar_form(const MultilinearInstance& inst, const std::vector<FunctionVec>& fs);

// max over the xi-grid of |rho_hat(xi)| with K * (window points) grid
// samples; equals the l2->l2 convolution norm up to O(||rho||_1 W / grid).
double bilinear_norm_exact(const SignedMeasure& kernel, int oversample = 8);

// The matrix K(x,y) = ker(L_0(x,y)) prod_j g_j(L_j(x,y)) on the window.
Eigen::MatrixXd kernel_matrix(const MultilinearInstance& inst,
                              const std::vector<FunctionVec>& gs);

struct AscentResult {
    double value = 0;
    FunctionVec f;
    std::vector<FunctionVec> gs;
};

// Alternating ascent lower bound for ||T||_op: optimal f is the top right
// singular vector at fixed g's (power iteration); each optimal g_j at fixed
// others is a coordinatewise sign vector; ties keep the previous sign.
// Monotone per half-step; `history` (optional) collects the objective after
// every half-step. The best restart's final pattern is re-evaluated with
// leading signs canonicalized to +1 so the value is exactly one of the
// brute-force enumerator's candidates.
AscentResult op_norm_lower(const MultilinearInstance& inst, int restarts, int iters,
                           std::uint64_t seed, std::vector<double>* history = nullptr);

// Exhausts all sign patterns g_j in {-1,+1}^window (leading sign fixed by
// symmetry) and takes the exact top singular value for each. Refuses
// instances with more than 27 total sign bits.
double op_norm_bruteforce(const MultilinearInstance& inst);

struct MaximalAscentResult {
    double value = 0;
    CFunctionVec f;
    std::vector<CFunctionVec> gs;
};

// Lower bound for ||T*||_op: per-x phase selection over the xi-grid,
// complex f via power iteration, unimodular g_j updates. The returned value
// is ||T*(f, g)||_2 evaluated at unit f, hence a true lower bound.
MaximalAscentResult maximal_norm_lower(const MultilinearInstance& inst, std::int64_t xi_grid,
                                       int restarts, int iters, std::uint64_t seed);

// ||T*(f,g)||_2 with the per-x supremum taken over the xi-grid.
double maximal_objective(const MultilinearInstance& inst, const CFunctionVec& f,
                         const std::vector<CFunctionVec>& gs, std::int64_t xi_grid);

}  // namespace multiform
