#include "multiform/signed_measure.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace multiform {

SignedMeasure SignedMeasure::delta(std::int64_t at, double v, std::int64_t half_width) {
    SignedMeasure m(std::max(half_width, std::abs(at)));
    if (v != 0.0) m.overrides_.emplace_back(at, v);
    return m;
}

SignedMeasure SignedMeasure::from_dense(const std::vector<double>& vals, std::int64_t lo) {
    std::int64_t hi = lo + static_cast<std::int64_t>(vals.size()) - 1;
    SignedMeasure m(std::max(std::abs(lo), std::abs(hi)));
    for (std::size_t i = 0; i < vals.size(); ++i)
        if (vals[i] != 0.0) m.overrides_.emplace_back(lo + static_cast<std::int64_t>(i), vals[i]);
    return m;
}

void SignedMeasure::set_background(double v, std::int64_t lo, std::int64_t hi) {
    if (v == 0.0 || lo > hi) {
        background_ = 0.0;
        bg_lo_ = 1;
        bg_hi_ = 0;
        return;
    }
    background_ = v;
    bg_lo_ = lo;
    bg_hi_ = hi;
    half_width_ = std::max({half_width_, std::abs(lo), std::abs(hi)});
}

void SignedMeasure::push_override(std::int64_t x, double v) {
    if (!overrides_.empty() && overrides_.back().first >= x)
        throw std::invalid_argument("SignedMeasure: overrides must be pushed in increasing x");
    half_width_ = std::max(half_width_, std::abs(x));
    overrides_.emplace_back(x, v);
}

void SignedMeasure::canonicalize() {
    auto layer = [&](std::int64_t x) {
        return (bg_lo_ <= x && x <= bg_hi_) ? background_ : 0.0;
    };
    overrides_.erase(std::remove_if(overrides_.begin(), overrides_.end(),
                                    [&](const auto& kv) { return kv.second == layer(kv.first); }),
                     overrides_.end());
}

double SignedMeasure::value(std::int64_t x) const {
    auto it = std::lower_bound(overrides_.begin(), overrides_.end(), x,
                               [](const auto& kv, std::int64_t key) { return kv.first < key; });
    if (it != overrides_.end() && it->first == x) return it->second;
    if (bg_lo_ <= x && x <= bg_hi_) return background_;
    return 0.0;
}

bool SignedMeasure::is_zero() const {
    if (bg_lo_ <= bg_hi_ && background_ != 0.0) {
        // background nonzero: zero only if every bg point is overridden to 0
        std::int64_t covered = 0;
        for (const auto& kv : overrides_) {
            if (kv.first >= bg_lo_ && kv.first <= bg_hi_) {
                if (kv.second != 0.0) return false;
                ++covered;
            } else if (kv.second != 0.0) {
                return false;
            }
        }
        return covered == bg_hi_ - bg_lo_ + 1;
    }
    for (const auto& kv : overrides_)
        if (kv.second != 0.0) return false;
    return true;
}

namespace {
template <class F>
void accumulate_measure(const SignedMeasure& m, F&& per_point) {
    // per_point(value, in_background) for every support point
    std::int64_t in_bg_overridden = 0;
    for (const auto& kv : m.overrides()) {
        bool in_bg = m.has_background() && kv.first >= m.bg_lo() && kv.first <= m.bg_hi();
        if (in_bg) ++in_bg_overridden;
        per_point(kv.second, 1);
    }
    if (m.has_background()) {
        std::int64_t span = m.bg_hi() - m.bg_lo() + 1;
        per_point(m.background(), span - in_bg_overridden);
    }
}
}  // namespace

double SignedMeasure::l1() const {
    double s = 0;
    accumulate_measure(*this, [&](double v, std::int64_t count) {
        s += std::fabs(v) * static_cast<double>(count);
    });
    return s;
}

double SignedMeasure::l2sq() const {
    double s = 0;
    accumulate_measure(*this, [&](double v, std::int64_t count) {
        s += v * v * static_cast<double>(count);
    });
    return s;
}

double SignedMeasure::linf() const {
    double m = 0;
    accumulate_measure(*this, [&](double v, std::int64_t count) {
        if (count > 0) m = std::max(m, std::fabs(v));
    });
    return m;
}

double SignedMeasure::total() const {
    double s = 0;
    accumulate_measure(*this, [&](double v, std::int64_t count) {
        s += v * static_cast<double>(count);
    });
    return s;
}

std::int64_t SignedMeasure::support_points() const {
    std::int64_t n = 0;
    accumulate_measure(*this, [&](double, std::int64_t count) { n += count; });
    return n;
}

void SignedMeasure::for_each(const std::function<void(std::int64_t, double)>& fn) const {
    auto it = overrides_.begin();
    // overrides strictly before the background interval
    for (; it != overrides_.end() && (!has_background() || it->first < bg_lo_); ++it)
        fn(it->first, it->second);
    if (has_background()) {
        for (std::int64_t x = bg_lo_; x <= bg_hi_; ++x) {
            if (it != overrides_.end() && it->first == x) {
                fn(x, it->second);
                ++it;
            } else {
                fn(x, background_);
            }
        }
    }
    for (; it != overrides_.end(); ++it) fn(it->first, it->second);
}

SignedMeasure SignedMeasure::scaled(double c) const {
    SignedMeasure out(half_width_);
    if (c != 0.0 && has_background()) out.set_background(background_ * c, bg_lo_, bg_hi_);
    if (c != 0.0)
        for (const auto& kv : overrides_) out.push_override(kv.first, kv.second * c);
    out.canonicalize();
    return out;
}

SignedMeasure SignedMeasure::abs() const {
    SignedMeasure out(half_width_);
    if (has_background()) out.set_background(std::fabs(background_), bg_lo_, bg_hi_);
    for (const auto& kv : overrides_) out.push_override(kv.first, std::fabs(kv.second));
    out.canonicalize();
    return out;
}

SignedMeasure SignedMeasure::shifted_pointwise_product(const std::vector<std::int64_t>& shifts,
                                                       double scale) const {
    if (shifts.empty()) throw std::invalid_argument("shifted_pointwise_product: no shifts");
    const std::size_t k = shifts.size();

    // background region of the product: x + shift_i inside [bg_lo, bg_hi] for all i
    std::int64_t blo = 1, bhi = 0;
    double bgprod = 0.0;
    if (has_background()) {
        blo = bg_lo_ - shifts[0];
        bhi = bg_hi_ - shifts[0];
        for (std::size_t i = 1; i < k; ++i) {
            blo = std::max(blo, bg_lo_ - shifts[i]);
            bhi = std::min(bhi, bg_hi_ - shifts[i]);
        }
        if (blo <= bhi) {
            bgprod = scale;
            for (std::size_t i = 0; i < k; ++i) bgprod *= background_;
        }
    }

    // candidate override sites: some factor reads an override
    std::vector<std::int64_t> cand;
    cand.reserve(overrides_.size() * k);
    for (const auto& kv : overrides_)
        for (std::size_t i = 0; i < k; ++i) cand.push_back(kv.first - shifts[i]);
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

    std::int64_t w = half_width_;
    for (std::int64_t s : shifts) w = std::max(w, half_width_ + std::abs(s));
    SignedMeasure out(w);
    if (blo <= bhi && bgprod != 0.0) out.set_background(bgprod, blo, bhi);
    for (std::int64_t x : cand) {
        double v = scale;
        for (std::size_t i = 0; i < k && v != 0.0; ++i) v *= value(x + shifts[i]);
        bool in_bg = blo <= x && x <= bhi && bgprod != 0.0;
        if (in_bg ? (v != bgprod) : (v != 0.0)) out.push_override(x, v);
    }
    return out;
}

bool SignedMeasure::operator==(const SignedMeasure& o) const {
    SignedMeasure a = *this, b = o;
    a.canonicalize();
    b.canonicalize();
    return a.background_ == b.background_ && a.bg_lo_ == b.bg_lo_ && a.bg_hi_ == b.bg_hi_ &&
           a.overrides_ == b.overrides_;
}

}  // namespace multiform
