#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "multiform/rng.hpp"

namespace multiform {

// Dense function on [-W, W]; reads outside the window give 0, matching the
// convention that everything is supported in [-AN, AN].
template <class Scalar>
struct FunctionVecT {
    std::int64_t half_width = 0;
    std::vector<Scalar> values;

    FunctionVecT() = default;
    explicit FunctionVecT(std::int64_t w)
        : half_width(w), values(static_cast<std::size_t>(2 * w + 1), Scalar(0)) {}

    std::int64_t size() const { return 2 * half_width + 1; }

    Scalar at(std::int64_t u) const {
        if (u < -half_width || u > half_width) return Scalar(0);
        return values[static_cast<std::size_t>(u + half_width)];
    }
    void set(std::int64_t u, Scalar v) { values.at(static_cast<std::size_t>(u + half_width)) = v; }

    double norm2() const {
        double s = 0;
        for (const Scalar& v : values) s += std::norm(std::complex<double>(v));
        return std::sqrt(s);
    }
    double norm_inf() const {
        double m = 0;
        for (const Scalar& v : values) m = std::max(m, std::abs(std::complex<double>(v)));
        return m;
    }
    double norm1() const {
        double s = 0;
        for (const Scalar& v : values) s += std::abs(std::complex<double>(v));
        return s;
    }

    FunctionVecT& operator*=(double c) {
        for (Scalar& v : values) v *= c;
        return *this;
    }

    // f^c(u) = f(u) f(u+c), the translate-product of the degree reduction.
    FunctionVecT translate_product(std::int64_t c) const {
        FunctionVecT out(half_width);
        for (std::int64_t u = -half_width; u <= half_width; ++u)
            out.set(u, at(u) * at(u + c));
        return out;
    }

    static FunctionVecT delta(std::int64_t w, std::int64_t at_u) {
        FunctionVecT f(w);
        f.set(at_u, Scalar(1));
        return f;
    }
    static FunctionVecT constant(std::int64_t w, Scalar c) {
        FunctionVecT f(w);
        for (Scalar& v : f.values) v = c;
        return f;
    }
};

using FunctionVec = FunctionVecT<double>;
using CFunctionVec = FunctionVecT<std::complex<double>>;

FunctionVec random_gaussian_vec(std::int64_t w, Rng& rng);
FunctionVec random_sign_vec(std::int64_t w, Rng& rng);
CFunctionVec random_complex_vec(std::int64_t w, Rng& rng);

}  // namespace multiform
