#include "multiform/group_lab.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace multiform {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

// e^{-2 pi i k/p} for k = 0..p-1.
std::vector<cdouble> root_table(std::int64_t p) {
    std::vector<cdouble> w(p);
    for (std::int64_t k = 0; k < p; ++k)
        w[k] = std::polar(1.0, -kTwoPi * static_cast<double>(k) / static_cast<double>(p));
    return w;
}
}  // namespace

bool is_prime(std::int64_t n) {
    if (n < 2) return false;
    for (std::int64_t q = 2; q * q <= n; ++q)
        if (n % q == 0) return false;
    return true;
}

GroupSpec::GroupSpec(std::int64_t p_, std::int64_t d_) : p(p_), d(d_) {
    if (d < 1) throw std::invalid_argument("GroupSpec: d must be >= 1");
    if (p < 3 || !is_prime(p)) throw std::invalid_argument("GroupSpec: p must be a prime >= 3");
    size_ = 1;
    for (std::int64_t i = 0; i <= d; ++i) {
        if (size_ > std::numeric_limits<std::int64_t>::max() / p)
            throw std::invalid_argument("GroupSpec: p^{d+1} overflows");
        size_ *= p;
    }
}

std::int64_t GroupSpec::index(const std::vector<std::int64_t>& x) const {
    std::int64_t idx = 0;
    for (std::int64_t c : x) idx = idx * p + ((c % p) + p) % p;
    return idx;
}

std::vector<std::int64_t> GroupSpec::element(std::int64_t idx) const {
    std::vector<std::int64_t> x(coords());
    for (std::int64_t i = coords() - 1; i >= 0; --i) {
        x[i] = idx % p;
        idx /= p;
    }
    return x;
}

std::int64_t GroupSpec::add_index(std::int64_t i, std::int64_t j) const {
    std::int64_t out = 0, scale = 1;
    std::int64_t r = 0;
    // combine digit-wise mod p, last coordinate fastest
    for (std::int64_t c = 0; c <= d; ++c) {
        std::int64_t a = i % p, b = j % p;
        i /= p;
        j /= p;
        r = (a + b) % p;
        out += r * scale;
        scale *= p;
    }
    return out;
}

std::int64_t GroupSpec::sub_index(std::int64_t i, std::int64_t j) const {
    std::int64_t out = 0, scale = 1;
    for (std::int64_t c = 0; c <= d; ++c) {
        std::int64_t a = i % p, b = j % p;
        i /= p;
        j /= p;
        std::int64_t r = (a - b + p) % p;
        out += r * scale;
        scale *= p;
    }
    return out;
}

cdouble GroupFunction::sum() const {
    cdouble s = 0;
    for (const cdouble& v : values) s += v;
    return s;
}

double GroupFunction::norm2() const {
    double s = 0;
    for (const cdouble& v : values) s += std::norm(v);
    return std::sqrt(s);
}

double GroupFunction::norm_inf() const {
    double m = 0;
    for (const cdouble& v : values) m = std::max(m, std::abs(v));
    return m;
}

GroupFunction build_mu_p(const GroupSpec& spec) {
    GroupFunction mu(spec);
    const double mass = std::pow(static_cast<double>(spec.p), -static_cast<double>(spec.d));
    for (std::int64_t i = 0; i < spec.size(); ++i) {
        auto x = spec.element(i);
        std::int64_t q = 0;
        for (std::int64_t j = 0; j < spec.d; ++j) q = (q + x[j] * x[j]) % spec.p;
        if (x[spec.d] == q) mu.values[i] = mass;
    }
    return mu;
}

GroupFunction build_m_p(const GroupSpec& spec) {
    GroupFunction m(spec);
    const double mass = std::pow(static_cast<double>(spec.p), -static_cast<double>(spec.d + 1));
    for (auto& v : m.values) v = mass;
    return m;
}

GroupFunction build_nu_p(const GroupSpec& spec) {
    GroupFunction nu = build_mu_p(spec);
    const double mass = std::pow(static_cast<double>(spec.p), -static_cast<double>(spec.d + 1));
    for (auto& v : nu.values) v -= mass;
    return nu;
}

GroupFunction build_delta(const GroupSpec& spec, std::int64_t at_index) {
    GroupFunction f(spec);
    f.values.at(at_index) = 1.0;
    return f;
}

namespace {

GroupFunction dft_naive(const GroupFunction& f) {
    const GroupSpec& spec = f.spec;
    auto w = root_table(spec.p);
    GroupFunction out(spec);
    const std::int64_t n = spec.size();
    std::vector<std::vector<std::int64_t>> elems(n);
    for (std::int64_t i = 0; i < n; ++i) elems[i] = spec.element(i);
    for (std::int64_t xi = 0; xi < n; ++xi) {
        cdouble acc = 0;
        const auto& xiv = elems[xi];
        for (std::int64_t x = 0; x < n; ++x) {
            std::int64_t k = 0;
            const auto& xv = elems[x];
            for (std::int64_t c = 0; c <= spec.d; ++c) k += xiv[c] * xv[c];
            acc += f.values[x] * w[k % spec.p];
        }
        out.values[xi] = acc;
    }
    return out;
}

// Separable transform: one length-p pass per coordinate. Exact for the
// product group, O(|G| p (d+1)).
GroupFunction dft_passes(const GroupFunction& f) {
    const GroupSpec& spec = f.spec;
    auto w = root_table(spec.p);
    std::vector<cdouble> cur = f.values;
    std::vector<cdouble> nxt(cur.size());
    const std::int64_t n = spec.size();
    std::int64_t stride = n / spec.p;  // stride of coordinate 0
    for (std::int64_t c = 0; c <= spec.d; ++c) {
        // iterate lines: indices with the c-th digit zeroed
        for (std::int64_t outer = 0; outer < n / (stride * spec.p); ++outer) {
            for (std::int64_t inner = 0; inner < stride; ++inner) {
                std::int64_t line = outer * stride * spec.p + inner;
                for (std::int64_t xi = 0; xi < spec.p; ++xi) {
                    cdouble acc = 0;
                    for (std::int64_t x = 0; x < spec.p; ++x)
                        acc += cur[line + x * stride] * w[(xi * x) % spec.p];
                    nxt[line + xi * stride] = acc;
                }
            }
        }
        cur.swap(nxt);
        stride /= spec.p;
    }
    GroupFunction out(spec);
    out.values = std::move(cur);
    return out;
}

}  // namespace

GroupFunction dft(const GroupFunction& f) {
    if (f.spec.size() <= 10000) return dft_naive(f);
    return dft_passes(f);
}

double max_nonzero_fourier(const GroupFunction& f) {
    GroupFunction fh = dft(f);
    double m = 0;
    for (std::int64_t i = 1; i < f.spec.size(); ++i) m = std::max(m, std::abs(fh.values[i]));
    return m;
}

double max_fourier(const GroupFunction& f) {
    GroupFunction fh = dft(f);
    return fh.norm_inf();
}

ObstructionWitness obstruction_witness(const GroupSpec& spec) {
    ObstructionWitness w{GroupFunction(spec), GroupFunction(spec), GroupFunction(spec)};
    const std::int64_t p = spec.p;
    for (std::int64_t i = 0; i < spec.size(); ++i) {
        auto x = spec.element(i);
        std::int64_t q = 0;
        for (std::int64_t j = 0; j < spec.d; ++j) q = (q + x[j] * x[j]) % p;
        std::int64_t last = x[spec.d];
        auto phase = [&](std::int64_t k) {
            k = ((k % p) + p) % p;
            return std::polar(1.0, kTwoPi * static_cast<double>(k) / static_cast<double>(p));
        };
        w.h.values[i] = phase(q);
        w.f.values[i] = phase(last - 2 * q);
        w.g.values[i] = phase(-last - 2 * q);
    }
    return w;
}

std::int64_t witness_phase(const GroupSpec& spec, std::int64_t ix, std::int64_t iy) {
    const std::int64_t p = spec.p;
    auto x = spec.element(ix), y = spec.element(iy);
    std::int64_t qx = 0, qy = 0, qs = 0;
    for (std::int64_t j = 0; j < spec.d; ++j) {
        qx = (qx + x[j] * x[j]) % p;
        qy = (qy + y[j] * y[j]) % p;
        std::int64_t s = (x[j] + y[j]) % p;
        qs = (qs + s * s) % p;
    }
    std::int64_t phi = qs + x[spec.d] - y[spec.d] - 2 * qx - 2 * qy;
    return ((phi % p) + p) % p;
}

cdouble trilinear_form(const GroupFunction& f, const GroupFunction& g,
                       const GroupFunction& h, const GroupFunction& kernel) {
    if (!(f.spec == g.spec && f.spec == h.spec && f.spec == kernel.spec))
        throw std::invalid_argument("trilinear_form: spec mismatch");
    const GroupSpec& spec = f.spec;
    const std::int64_t n = spec.size();
    cdouble acc = 0;
    for (std::int64_t x = 0; x < n; ++x) {
        if (f.values[x] == cdouble(0)) continue;
        for (std::int64_t y = 0; y < n; ++y) {
            cdouble k = kernel.values[spec.sub_index(x, y)];
            if (k == cdouble(0)) continue;
            acc += f.values[x] * g.values[y] * h.values[spec.add_index(x, y)] * k;
        }
    }
    return acc;
}

cdouble bilinear_form(const GroupFunction& f, const GroupFunction& g,
                      const GroupFunction& kernel) {
    if (!(f.spec == g.spec && f.spec == kernel.spec))
        throw std::invalid_argument("bilinear_form: spec mismatch");
    const GroupSpec& spec = f.spec;
    const std::int64_t n = spec.size();
    cdouble acc = 0;
    for (std::int64_t x = 0; x < n; ++x)
        for (std::int64_t y = 0; y < n; ++y)
            acc += f.values[x] * g.values[y] * kernel.values[spec.sub_index(x, y)];
    return acc;
}

BilinearBoundReport bilinear_bound_check(const GroupSpec& spec, int trials, std::uint64_t seed) {
    GroupFunction nu = build_nu_p(spec);
    const double bound = std::pow(static_cast<double>(spec.p), -0.5 * static_cast<double>(spec.d));
    double max_ratio = 0;
    for (int t = 0; t < trials; ++t) {
        Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(t));
        GroupFunction f(spec), g(spec);
        for (auto& v : f.values) v = cdouble(rng.normal(), rng.normal());
        for (auto& v : g.values) v = cdouble(rng.normal(), rng.normal());
        double denom = f.norm2() * g.norm2();
        if (denom == 0) continue;
        max_ratio = std::max(max_ratio, std::abs(bilinear_form(f, g, nu)) / denom);
    }
    // extremal pair: characters at the xi maximizing |nu_hat|
    GroupFunction nuh = dft(nu);
    std::int64_t best = 0;
    for (std::int64_t i = 0; i < spec.size(); ++i)
        if (std::abs(nuh.values[i]) > std::abs(nuh.values[best])) best = i;
    auto xiv = spec.element(best);
    GroupFunction f(spec), g(spec);
    for (std::int64_t i = 0; i < spec.size(); ++i) {
        auto x = spec.element(i);
        std::int64_t k = 0;
        for (std::int64_t c = 0; c <= spec.d; ++c) k += xiv[c] * x[c];
        k = ((k % spec.p) + spec.p) % spec.p;
        double ang = kTwoPi * static_cast<double>(k) / static_cast<double>(spec.p);
        f.values[i] = std::polar(1.0, ang);
        g.values[i] = std::polar(1.0, -ang);
    }
    double extremal = std::abs(bilinear_form(f, g, nu)) / (f.norm2() * g.norm2());
    BilinearBoundReport rep;
    rep.bound = bound;
    rep.max_ratio = max_ratio;
    rep.extremal_ratio = extremal;
    rep.trials = trials;
    rep.holds = max_ratio <= bound + 1e-9 && extremal <= bound + 1e-9;
    return rep;
}

}  // namespace multiform
