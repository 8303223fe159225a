#include "multiform/reduction.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace multiform {

namespace {
bool is_normalized(const FormFamily& fam) {
    return fam.degree() >= 2 && fam.form(1) == LinearForm(1, 0, 1) &&
           fam.form(2) == LinearForm(0, 1, 1);
}
}  // namespace

ReductionStep reduce(const MultilinearInstance& parent, const std::vector<FunctionVec>& fs,
                     std::int64_t z, const std::set<std::int64_t>* exc) {
    if (parent.degree() < 2) throw std::invalid_argument("reduce: M >= 2 required");
    if (!is_normalized(parent.family))
        throw std::invalid_argument("reduce: parent must be normalized (L_1 = x, L_2 = y)");
    if (static_cast<int>(fs.size()) != parent.degree())
        throw std::invalid_argument("reduce: need M functions");
    const std::int64_t W = parent.window();
    if (std::abs(z) > 2 * W) throw std::invalid_argument("reduce: z outside [-2W, 2W]");

    ReductionStep step;
    step.z = z;
    step.exceptional = exc != nullptr && exc->count(z) > 0;

    std::vector<LinearForm> child_forms;
    child_forms.push_back(parent.family.kernel_form());
    for (int j = 2; j <= parent.degree(); ++j) child_forms.push_back(parent.family.form(j));

    step.child.family = FormFamily(std::move(child_forms));
    step.child.window_A = parent.window_A;
    step.child.N = parent.N;
    step.child.lattice = parent.lattice;

    auto c0 = parent.family.kernel_form().at_zero(z);
    step.child.kernel =
        c0 ? parent.kernel.shifted_pointwise_product({0, *c0}) : SignedMeasure::zero(W);

    for (int j = 2; j <= parent.degree(); ++j) {
        auto cj = parent.family.form(j).at_zero(z);
        step.child_fs.push_back(cj ? fs[static_cast<std::size_t>(j - 1)].translate_product(*cj)
                                   : FunctionVec(W));
    }
    return step;
}

std::set<std::int64_t> exceptional_set(const ShiftTuple& shifts, const LinearForm& L0,
                                       std::int64_t z_lo, std::int64_t z_hi) {
    if (L0.is_x_axis())
        throw std::invalid_argument("exceptional_set: L_0(0,.) must be injective (b != 0)");
    std::set<std::int64_t> B;
    for (std::int64_t zi : shifts.shifts) {
        for (std::int64_t zj : shifts.shifts) {
            // z_i = z_j + b z / den  =>  z = (z_i - z_j) den / b
            __int128 num = static_cast<__int128>(zi - zj) * L0.den;
            if (num % L0.b != 0) continue;
            __int128 z = num / L0.b;
            if (z < z_lo || z > z_hi) continue;
            B.insert(static_cast<std::int64_t>(z));
        }
    }
    return B;
}

FunctionVec fiber_marginal(const MultilinearInstance& parent, const std::vector<FunctionVec>& fs) {
    const std::int64_t W = parent.window();
    FunctionVec F(W);
    for (std::int64_t x = -W; x <= W; ++x) {
        double acc = 0;
        for (std::int64_t y = -W; y <= W; ++y) {
            if (!parent.lattice.identity() && !parent.lattice.contains(x, y)) continue;
            auto l0 = parent.family.kernel_form().evaluate(x, y);
            if (!l0) continue;
            double term = parent.kernel.value(*l0);
            if (term == 0.0) continue;
            for (int j = 2; j <= parent.degree() && term != 0.0; ++j) {
                auto lj = parent.family.form(j).evaluate(x, y);
                term *= lj ? fs[static_cast<std::size_t>(j - 1)].at(*lj) : 0.0;
            }
            acc += term;
        }
        F.set(x, acc);
    }
    return F;
}

CsStepReport verify_cs_step(const MultilinearInstance& parent,
                            const std::vector<FunctionVec>& fs) {
    if (parent.degree() < 2) throw std::invalid_argument("verify_cs_step: M >= 2");
    const std::int64_t W = parent.window();
    CsStepReport rep;

    double tval = scalar_form(parent, fs);
    rep.lhs2 = tval * tval;

    FunctionVec F = fiber_marginal(parent, fs);
    for (double v : F.values) rep.sum_fsq += v * v;

    double rhs_abs = 0;
    for (std::int64_t z = -2 * W; z <= 2 * W; ++z) {
        ReductionStep step = reduce(parent, fs, z);
        if (step.child.kernel.is_zero()) continue;
        double tz = scalar_form(step.child, step.child_fs);
        rep.sum_tz += tz;
        rhs_abs += std::fabs(tz);
    }
    double f1sq = 0;
    for (double v : fs[0].values) f1sq += v * v;
    rep.rhs = f1sq * rhs_abs;
    rep.holds = rep.lhs2 <= rep.rhs * (1.0 + 1e-9) + 1e-18;
    return rep;
}

ExceptionalBoundReport verify_exceptional_bound(const MultilinearInstance& parent,
                                                const std::vector<FunctionVec>& fs,
                                                const std::set<std::int64_t>& B) {
    if (parent.family.kernel_form().is_y_axis())
        throw std::invalid_argument(
            "verify_exceptional_bound: a_0 != 0 required for the row-sum step");
    ExceptionalBoundReport rep;
    rep.b_size = B.size();
    double f2sq = 0;
    for (double v : fs[1].values) f2sq += v * v;
    double bound = f2sq * parent.kernel.l2sq();
    for (int j = 3; j <= parent.degree(); ++j) {
        double m = fs[static_cast<std::size_t>(j - 1)].norm_inf();
        bound *= m * m;
    }
    rep.holds = true;
    for (std::int64_t z : B) {
        ReductionStep step = reduce(parent, fs, z);
        double tz = std::fabs(scalar_form(step.child, step.child_fs));
        double ratio = bound > 0 ? tz / bound : (tz > 0 ? HUGE_VAL : 0.0);
        rep.worst_ratio = std::max(rep.worst_ratio, ratio);
        if (tz > bound * (1.0 + 1e-9) + 1e-18) rep.holds = false;
    }
    return rep;
}

}  // namespace multiform
