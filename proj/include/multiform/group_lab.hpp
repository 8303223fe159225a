#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "multiform/rng.hpp"

namespace multiform {

using cdouble = std::complex<double>;

// The finite group G_p = Z_p^d x Z_p. Elements are tuples
// (x_1,...,x_d, x_{d+1}) indexed row-major with the last coordinate fastest.
struct GroupSpec {
    std::int64_t p;
    std::int64_t d;

    GroupSpec(std::int64_t p_, std::int64_t d_);  // validates prime p >= 3, d >= 1

    std::int64_t size() const { return size_; }
    std::int64_t coords() const { return d + 1; }

    std::int64_t index(const std::vector<std::int64_t>& x) const;
    std::vector<std::int64_t> element(std::int64_t idx) const;

    std::int64_t add_index(std::int64_t i, std::int64_t j) const;  // i + j in G_p
    std::int64_t sub_index(std::int64_t i, std::int64_t j) const;  // i - j

    bool operator==(const GroupSpec& o) const { return p == o.p && d == o.d; }

  private:
    std::int64_t size_;
};

bool is_prime(std::int64_t n);  // deterministic trial division

// Complex-valued function on G_p, dense.
struct GroupFunction {
    GroupSpec spec;
    std::vector<cdouble> values;

    explicit GroupFunction(const GroupSpec& s) : spec(s), values(s.size()) {}

    cdouble sum() const;
    double norm2() const;    // l2 norm
    double norm_inf() const;
};

// mu_p: mass p^{-d} on the paraboloid x_{d+1} = |x'|^2 mod p.
GroupFunction build_mu_p(const GroupSpec& spec);
// m_p: uniform p^{-d-1}.
GroupFunction build_m_p(const GroupSpec& spec);
// nu_p = mu_p - m_p.
GroupFunction build_nu_p(const GroupSpec& spec);
GroupFunction build_delta(const GroupSpec& spec, std::int64_t at_index = 0);

// Non-unitary transform f_hat(xi) = sum_x f(x) e^{-2 pi i (xi.x mod p)/p}.
// Naive O(|G|^2) up to |G| <= 10^4, coordinate-wise passes beyond.
GroupFunction dft(const GroupFunction& f);

double max_nonzero_fourier(const GroupFunction& f);
double max_fourier(const GroupFunction& f);

// The three unimodular phase functions of the obstruction:
//   h(x) = e(|x'|^2), f(x) = e(x_{d+1} - 2|x'|^2), g(x) = e(-x_{d+1} - 2|x'|^2)
// with e(k) = e^{2 pi i k/p}.
struct ObstructionWitness {
    GroupFunction f, g, h;
};
ObstructionWitness obstruction_witness(const GroupSpec& spec);

// sum_{x,y} f(x) g(y) h(x+y) kernel(x-y), double-precision accumulation.
cdouble trilinear_form(const GroupFunction& f, const GroupFunction& g,
                       const GroupFunction& h, const GroupFunction& kernel);

// Bilinear form sum_{x,y} f(x) g(y) kernel(x-y).
cdouble bilinear_form(const GroupFunction& f, const GroupFunction& g,
                      const GroupFunction& kernel);

// Checks |sum f(x)g(y)nu_p(x-y)| <= p^{-d/2} ||f||_2 ||g||_2 on random
// Gaussian pairs and on the extremal character pair.
struct BilinearBoundReport {
    double bound;           // p^{-d/2}
    double max_ratio;       // max over the random batch
    double extremal_ratio;  // character pair, should equal bound
    int trials;
    bool holds;
};
BilinearBoundReport bilinear_bound_check(const GroupSpec& spec, int trials = 100,
                                         std::uint64_t seed = 1);

// Phi(x,y) = |x'+y'|^2 + x_{d+1}-y_{d+1} - 2|x'|^2 - 2|y'|^2 mod p.
std::int64_t witness_phase(const GroupSpec& spec, std::int64_t ix, std::int64_t iy);

}  // namespace multiform
