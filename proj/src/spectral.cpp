#include "multiform/spectral.hpp"

#include <cmath>
#include <vector>

namespace multiform {

namespace {
// Deterministic start with all-distinct entries so it is never orthogonal to
// the top singular space by symmetry accident.
Eigen::VectorXd start_vector(Eigen::Index n) {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i)
        v[i] = 1.0 + 1e-3 * std::sin(0.7 * static_cast<double>(i) + 0.3);
    return v.normalized();
}
}  // namespace

SigmaResult sigma_max(const Eigen::MatrixXd& K, double tol, int max_iters) {
    SigmaResult res;
    if (K.rows() == 0 || K.cols() == 0) return res;
    Eigen::VectorXd v = start_vector(K.cols());
    double sigma_prev = -1.0;
    for (int it = 0; it < max_iters; ++it) {
        Eigen::VectorXd u = K * v;
        double sigma = u.norm();
        res.iters = it + 1;
        if (sigma == 0.0) {
            res.sigma = 0.0;
            res.right = v;
            res.left = Eigen::VectorXd::Zero(K.rows());
            return res;
        }
        Eigen::VectorXd w = K.transpose() * u;
        v = w.normalized();
        if (std::fabs(sigma - sigma_prev) <= tol * std::max(sigma, 1e-300)) {
            sigma_prev = sigma;
            break;
        }
        sigma_prev = sigma;
    }
    res.sigma = (K * v).norm();
    res.right = v;
    res.left = res.sigma > 0 ? Eigen::VectorXd((K * v) / res.sigma)
                             : Eigen::VectorXd::Zero(K.rows());
    return res;
}

CSigmaResult sigma_max(const Eigen::MatrixXcd& K, double tol, int max_iters) {
    CSigmaResult res;
    if (K.rows() == 0 || K.cols() == 0) return res;
    Eigen::VectorXd v0 = start_vector(K.cols());
    Eigen::VectorXcd v = v0.cast<std::complex<double>>();
    // tilt into the complex plane so complex singular pairs are reachable
    for (Eigen::Index i = 0; i < v.size(); ++i)
        v[i] *= std::polar(1.0, 1e-3 * static_cast<double>(i));
    v.normalize();
    double sigma_prev = -1.0;
    for (int it = 0; it < max_iters; ++it) {
        Eigen::VectorXcd u = K * v;
        double sigma = u.norm();
        res.iters = it + 1;
        if (sigma == 0.0) {
            res.sigma = 0.0;
            res.right = v;
            res.left = Eigen::VectorXcd::Zero(K.rows());
            return res;
        }
        Eigen::VectorXcd w = K.adjoint() * u;
        v = w.normalized();
        if (std::fabs(sigma - sigma_prev) <= tol * std::max(sigma, 1e-300)) {
            sigma_prev = sigma;
            break;
        }
        sigma_prev = sigma;
    }
    res.sigma = (K * v).norm();
    res.right = v;
    res.left = res.sigma > 0 ? Eigen::VectorXcd((K * v) / res.sigma)
                             : Eigen::VectorXcd::Zero(K.rows());
    return res;
}

double tridiag_max_eig(const std::vector<double>& diag, const std::vector<double>& off) {
    const std::size_t k = diag.size();
    if (k == 0) return 0.0;
    // Gershgorin bracket
    double lo = diag[0], hi = diag[0];
    for (std::size_t i = 0; i < k; ++i) {
        double r = 0;
        if (i > 0) r += std::fabs(off[i - 1]);
        if (i + 1 < k) r += std::fabs(off[i]);
        lo = std::min(lo, diag[i] - r);
        hi = std::max(hi, diag[i] + r);
    }
    // Sturm count: number of eigenvalues < x
    auto count_below = [&](double x) {
        int count = 0;
        double q = 1.0;
        for (std::size_t i = 0; i < k; ++i) {
            double off2 = (i > 0) ? off[i - 1] * off[i - 1] : 0.0;
            if (q == 0.0) q = 1e-300;
            q = diag[i] - x - off2 / q;
            if (q < 0) ++count;
        }
        return count;
    };
    for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, std::fabs(hi)); ++it) {
        double mid = 0.5 * (lo + hi);
        if (count_below(mid) >= static_cast<int>(k))
            hi = mid;  // all eigenvalues below mid
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

double lanczos_sigma_max(std::int64_t n,
                         const std::function<void(const double*, double*)>& matvec,
                         const std::function<void(const double*, double*)>& rmatvec,
                         int max_iters, double tol, std::uint64_t seed, std::uint64_t stream) {
    if (n <= 0) return 0.0;
    const std::size_t un = static_cast<std::size_t>(n);
    Rng rng = Rng::stream(seed, stream, 0x1a9c205ULL);
    std::vector<std::vector<double>> basis;
    std::vector<double> alpha, beta;
    std::vector<double> v(un), av(un), w(un);
    for (std::size_t i = 0; i < un; ++i) v[i] = rng.normal();
    double nv = 0;
    for (double x : v) nv += x * x;
    nv = std::sqrt(nv);
    for (double& x : v) x /= nv;

    double ritz_prev = -1.0;
    for (int it = 0; it < max_iters; ++it) {
        basis.push_back(v);
        // w = A^T A v
        matvec(v.data(), av.data());
        rmatvec(av.data(), w.data());
        double a = 0;
        for (std::size_t i = 0; i < un; ++i) a += w[i] * v[i];
        alpha.push_back(a);
        // w -= alpha v + beta v_prev, then full reorthogonalization
        for (std::size_t i = 0; i < un; ++i) w[i] -= a * v[i];
        if (!beta.empty()) {
            const auto& vp = basis[basis.size() - 2];
            double b = beta.back();
            for (std::size_t i = 0; i < un; ++i) w[i] -= b * vp[i];
        }
        for (const auto& q : basis) {
            double dot = 0;
            for (std::size_t i = 0; i < un; ++i) dot += w[i] * q[i];
            for (std::size_t i = 0; i < un; ++i) w[i] -= dot * q[i];
        }
        double nb = 0;
        for (double x : w) nb += x * x;
        nb = std::sqrt(nb);

        double ritz = tridiag_max_eig(alpha, beta);
        bool converged = it >= 4 && std::fabs(ritz - ritz_prev) <= tol * std::max(ritz, 1e-300);
        ritz_prev = ritz;
        if (converged || nb < 1e-14) break;
        beta.push_back(nb);
        for (std::size_t i = 0; i < un; ++i) v[i] = w[i] / nb;
    }
    double top = tridiag_max_eig(alpha, beta);
    return top > 0 ? std::sqrt(top) : 0.0;
}

}  // namespace multiform
