#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

namespace multiform {

// Real-valued function on the integer window [-W, W], stored as a constant
// background on a sub-interval plus sparse overrides:
//   value(x) = override(x) if present, else background on [bg_lo, bg_hi], else 0.
// The centered kernel r(omega,.) is the motivating case: background -1/N on
// [-N,N] with one override per selected site, so memory stays O(Np).
// Overrides equal to the layer underneath are dropped on canonicalization;
// zero overrides punching holes in a nonzero background are kept.
class SignedMeasure {
  public:
    SignedMeasure() = default;
    explicit SignedMeasure(std::int64_t half_width) : half_width_(half_width) {}

    static SignedMeasure zero(std::int64_t half_width) { return SignedMeasure(half_width); }
    static SignedMeasure delta(std::int64_t at, double v = 1.0, std::int64_t half_width = 1);
    static SignedMeasure from_dense(const std::vector<double>& vals, std::int64_t lo);

    std::int64_t half_width() const { return half_width_; }
    double background() const { return background_; }
    bool has_background() const { return bg_lo_ <= bg_hi_; }
    std::int64_t bg_lo() const { return bg_lo_; }
    std::int64_t bg_hi() const { return bg_hi_; }
    const std::vector<std::pair<std::int64_t, double>>& overrides() const { return overrides_; }

    void set_background(double v, std::int64_t lo, std::int64_t hi);
    // Overrides must be added in strictly increasing x order.
    void push_override(std::int64_t x, double v);
    void canonicalize();

    double value(std::int64_t x) const;
    bool is_zero() const;

    double l1() const;
    double l2sq() const;
    double linf() const;
    double total() const;  // sum of all values

    // Number of points where the measure may be nonzero (background span
    // plus overrides outside it).
    std::int64_t support_points() const;

    // Walks every point with a (possibly) nonzero value, in increasing x.
    void for_each(const std::function<void(std::int64_t, double)>& fn) const;

    SignedMeasure scaled(double c) const;
    SignedMeasure abs() const;

    // Pointwise product of shifted copies: out(x) = prod_i this(x + shift_i),
    // times `scale`. Used for the kernels rho^z and rho_{omega,z}.
    SignedMeasure shifted_pointwise_product(const std::vector<std::int64_t>& shifts,
                                            double scale = 1.0) const;

    bool operator==(const SignedMeasure& o) const;

  private:
    std::int64_t half_width_ = 0;
    double background_ = 0.0;
    std::int64_t bg_lo_ = 1, bg_hi_ = 0;  // empty
    std::vector<std::pair<std::int64_t, double>> overrides_;
};

}  // namespace multiform
