#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace multiform {

// Q-linear form (a x + b y) / den with gcd(a,b,den) = 1, den > 0.
// Evaluation follows the convention that non-integer values mean "factor 0"
// at the call site; evaluate() reports them as nullopt.
struct LinearForm {
    std::int64_t a = 0;
    std::int64_t b = 0;
    std::int64_t den = 1;

    LinearForm() = default;
    LinearForm(std::int64_t a_, std::int64_t b_, std::int64_t den_ = 1);  // normalizes

    // Exact rational evaluation; nullopt when den does not divide a x + b y.
    std::optional<std::int64_t> evaluate(std::int64_t x, std::int64_t y) const;

    // L(0, z), the shift action on the second variable.
    std::optional<std::int64_t> at_zero(std::int64_t z) const { return evaluate(0, z); }

    bool proportional_to(const LinearForm& o) const;  // over Q
    bool is_x_axis() const { return b == 0; }         // multiple of (x,y) -> x
    bool is_y_axis() const { return a == 0; }

    std::string str() const;
    bool operator==(const LinearForm& o) const = default;
};

// L_0, ..., L_M; slot 0 is the kernel form.
struct FormFamily {
    std::vector<LinearForm> forms;

    FormFamily() = default;
    explicit FormFamily(std::vector<LinearForm> fs) : forms(std::move(fs)) {}

    int degree() const { return static_cast<int>(forms.size()) - 1; }  // M
    const LinearForm& kernel_form() const { return forms.at(0); }
    const LinearForm& form(int j) const { return forms.at(static_cast<std::size_t>(j)); }

    std::string str() const;
};

// Parses "a,b/den; a,b/den; ..." (den optional). First entry is L_0.
FormFamily parse_family(const std::string& text);

struct FamilyViolation {
    std::string what;
    int i = -1, j = -1;
};

// Checks the standing hypotheses: pairwise non-proportionality over Q for
// all pairs, and (for j >= 1) non-proportionality to either coordinate axis.
// Normalized families keep L_1 = x, L_2 = y, so callers that operate
// post-change-of-variables pass require_nonaxis = false.
std::optional<FamilyViolation> validate_family(const FormFamily& family,
                                               bool require_nonaxis = true);

// Integer 2x2 matrix (u,v) = P (x,y) with det != 0, plus the rational
// inverse used for range-lattice membership.
struct LatticeMap {
    std::int64_t p11 = 1, p12 = 0, p21 = 0, p22 = 1;
    std::int64_t det = 1;

    bool identity() const { return p11 == 1 && p12 == 0 && p21 == 0 && p22 == 1; }

    // Preimage (x,y) of (u,v) when it is an integer point; nullopt otherwise.
    std::optional<std::pair<std::int64_t, std::int64_t>> preimage(std::int64_t u,
                                                                  std::int64_t v) const;
    bool contains(std::int64_t u, std::int64_t v) const { return preimage(u, v).has_value(); }

    std::pair<std::int64_t, std::int64_t> image(std::int64_t x, std::int64_t y) const;
};

// Result of rewriting a family so that slot 1 reads u and slot 2 reads v:
// (u,v) = lambda (L_1(x,y), L_2(x,y)). Functions in slots 1 and 2 must be
// rebound by the lambda-dilation u -> u/lambda; sums over (u,v) must be
// restricted to the lattice (membership test in `lattice`). The window
// factor grows to `window_factor` times the old A.
struct ChangeOfVariables {
    FormFamily family;   // L~_0; u; v; L~_3, ...
    std::int64_t lambda; // denominator-clearing multiplier
    std::int64_t window_factor;
    LatticeMap lattice;
};

ChangeOfVariables change_of_variables(const FormFamily& family);

}  // namespace multiform
