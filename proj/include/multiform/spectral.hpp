#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <functional>

#include "multiform/rng.hpp"

namespace multiform {

// Largest singular value via power iteration on K^T K.
// Stops on relative value change <= tol or after max_iters.
struct SigmaResult {
    double sigma = 0;
    Eigen::VectorXd right;  // argmax f
    Eigen::VectorXd left;   // K f / sigma
    int iters = 0;
};
SigmaResult sigma_max(const Eigen::MatrixXd& K, double tol = 1e-10, int max_iters = 500);

struct CSigmaResult {
    double sigma = 0;
    Eigen::VectorXcd right;
    Eigen::VectorXcd left;
    int iters = 0;
};
CSigmaResult sigma_max(const Eigen::MatrixXcd& K, double tol = 1e-10, int max_iters = 500);

// Largest singular value of an implicit real operator (matvec y = Av,
// rmatvec y = A^T v), via Lanczos on A^T A with full reorthogonalization.
// Deterministic start from (seed, stream).
double lanczos_sigma_max(std::int64_t n,
                         const std::function<void(const double*, double*)>& matvec,
                         const std::function<void(const double*, double*)>& rmatvec,
                         int max_iters = 64, double tol = 1e-7,
                         std::uint64_t seed = 0x5eedULL, std::uint64_t stream = 0);

// Top eigenvalue of a symmetric tridiagonal matrix (Sturm bisection).
double tridiag_max_eig(const std::vector<double>& diag, const std::vector<double>& off);

}  // namespace multiform
