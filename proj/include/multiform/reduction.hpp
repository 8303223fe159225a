#pragma once

#include <cstdint>
#include <set>
#include <vector>

#include "multiform/operators.hpp"
#include "multiform/selector.hpp"

namespace multiform {

// One Cauchy-Schwarz step T -> T^z on a normalized instance (L_1 = x,
// L_2 = y). Consumes f_1 and produces the (M-1)-linear child with forms
// (L_0; L_2, ..., L_M), functions f_j^z(u) = f_j(u) f_j(u + L_j(0,z)) and
// kernel rho^z(u) = rho(u) rho(u + L_0(0,z)).
struct ReductionStep {
    MultilinearInstance child;
    std::vector<FunctionVec> child_fs;  // f_2^z, ..., f_M^z
    std::int64_t z = 0;
    bool exceptional = false;  // z in the supplied exceptional set
};

ReductionStep reduce(const MultilinearInstance& parent, const std::vector<FunctionVec>& fs,
                     std::int64_t z, const std::set<std::int64_t>* exceptional_set = nullptr);

// B = { z in [lo, hi] : exists i,j with z_i = z_j + L_0(0,z) }.
// Requires L_0(0,.) injective, i.e. b != 0. Solved per shift pair;
// |B| <= |I|^2 always.
std::set<std::int64_t> exceptional_set(const ShiftTuple& shifts, const LinearForm& L0,
                                       std::int64_t z_lo, std::int64_t z_hi);

struct CsStepReport {
    double lhs2 = 0;      // |T(f_1..f_M, rho)|^2
    double rhs = 0;       // ||f_1||_2^2 * sum_z |T^z|
    double sum_tz = 0;    // sum_z T^z (signed); equals sum_x F(x)^2 exactly
    double sum_fsq = 0;   // sum_x F(x)^2 computed directly
    bool holds = false;
};

// Computes both sides of |T|^2 <= ||f_1||_2^2 sum_z |T^z(f_2^z,...,rho^z)|
// with the z-sum over the full range [-2W, 2W], at 1e-9 relative slack.
CsStepReport verify_cs_step(const MultilinearInstance& parent,
                            const std::vector<FunctionVec>& fs);

struct ExceptionalBoundReport {
    std::size_t b_size = 0;
    double worst_ratio = 0;  // max over z in B of |T^z| / bound
    bool holds = false;
};

// For each z in B checks the crude bound
// |T^z| <= ||f_2||_2^2 prod_{j>2} ||f_j||_inf^2 ||rho||_2^2 (constant 1).
// Requires a_0 != 0 (x -> L_0(x,y) injective for fixed y).
ExceptionalBoundReport verify_exceptional_bound(const MultilinearInstance& parent,
                                                const std::vector<FunctionVec>& fs,
                                                const std::set<std::int64_t>& B);

// The fiber marginal F(x) = sum_y f_2(y) rho(L_0) prod_{j>2} f_j(L_j), the
// Cauchy-Schwarz equality choice for f_1.
FunctionVec fiber_marginal(const MultilinearInstance& parent, const std::vector<FunctionVec>& fs);

}  // namespace multiform
