#include "multiform/operators.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "multiform/dft_grid.hpp"
#include "multiform/spectral.hpp"

namespace multiform {

namespace {

constexpr std::int64_t kDeadForm = INT64_MIN;

// Flattened evaluation table: the terms (x,y) that survive the lattice test
// and have a nonzero kernel factor, with each form's value precomputed.
struct EvalTable {
    std::int64_t W = 0;
    int M = 0;
    struct Term {
        std::int32_t x, y;       // offsets in [0, 2W]
        double kv;               // kernel(L_0(x,y))
        std::int64_t v[3];       // form values; kDeadForm = factor 0; M <= 3 fast path
        std::vector<std::int64_t> vext;  // used when M > 3
        std::int64_t form_value(int j) const { return j < 3 ? v[j] : vext[j - 3]; }
    };
    std::vector<Term> terms;
};

EvalTable build_table(const MultilinearInstance& inst) {
    EvalTable t;
    t.W = inst.window();
    t.M = inst.degree();
    const std::int64_t W = t.W;
    for (std::int64_t x = -W; x <= W; ++x) {
        for (std::int64_t y = -W; y <= W; ++y) {
            if (!inst.lattice.identity() && !inst.lattice.contains(x, y)) continue;
            auto l0 = inst.family.kernel_form().evaluate(x, y);
            if (!l0) continue;
            double kv = inst.kernel.value(*l0);
            if (kv == 0.0) continue;
            EvalTable::Term term;
            term.x = static_cast<std::int32_t>(x + W);
            term.y = static_cast<std::int32_t>(y + W);
            term.kv = kv;
            bool dead = false;
            if (t.M > 3) term.vext.resize(static_cast<std::size_t>(t.M) - 3);
            for (int j = 1; j <= t.M; ++j) {
                auto lj = inst.family.form(j).evaluate(x, y);
                std::int64_t val = kDeadForm;
                if (lj && std::abs(*lj) <= W)
                    val = *lj;
                else
                    dead = true;
                if (j <= 3)
                    term.v[j - 1] = val;
                else
                    term.vext[static_cast<std::size_t>(j) - 4] = val;
            }
            // forms falling outside the window or on non-integers kill the
            // whole term for every admissible g (supported in [-W, W])
            if (dead) continue;
            t.terms.push_back(std::move(term));
        }
    }
    return t;
}

}  // namespace

template <class Scalar>
FunctionVecT<Scalar> apply_T(const MultilinearInstance& inst, const FunctionVecT<Scalar>& f,
                             const std::vector<FunctionVecT<Scalar>>& gs) {
    if (static_cast<int>(gs.size()) != inst.degree())
        throw std::invalid_argument("apply_T: need exactly M functions g_j");
    const std::int64_t W = inst.window();
    FunctionVecT<Scalar> out(W);
    for (std::int64_t x = -W; x <= W; ++x) {
        Scalar acc(0);
        for (std::int64_t y = -W; y <= W; ++y) {
            if (!inst.lattice.identity() && !inst.lattice.contains(x, y)) continue;
            Scalar fy = f.at(y);
            if (fy == Scalar(0)) continue;
            auto l0 = inst.family.kernel_form().evaluate(x, y);
            if (!l0) continue;
            double kv = inst.kernel.value(*l0);
            if (kv == 0.0) continue;
            Scalar term = fy * kv;
            for (int j = 1; j <= inst.degree() && term != Scalar(0); ++j) {
                auto lj = inst.family.form(j).evaluate(x, y);
                term *= lj ? gs[static_cast<std::size_t>(j - 1)].at(*lj) : Scalar(0);
            }
            acc += term;
        }
        out.set(x, acc);
    }
    return out;
}

template FunctionVecT<double> apply_T<double>(const MultilinearInstance&,
                                              const FunctionVecT<double>&,
                                              const std::vector<FunctionVecT<double>>&);
template FunctionVecT<std::complex<double>> apply_T<std::complex<double>>(
    const MultilinearInstance&, const FunctionVecT<std::complex<double>>&,
    const std::vector<FunctionVecT<std::complex<double>>>&);

double scalar_form(const MultilinearInstance& inst, const std::vector<FunctionVec>& fs) {
    if (static_cast<int>(fs.size()) != inst.degree())
        throw std::invalid_argument("scalar_form: need exactly M functions");
    const std::int64_t W = inst.window();
    double acc = 0;
    for (std::int64_t x = -W; x <= W; ++x) {
        for (std::int64_t y = -W; y <= W; ++y) {
            if (!inst.lattice.identity() && !inst.lattice.contains(x, y)) continue;
            auto l0 = inst.family.kernel_form().evaluate(x, y);
            if (!l0) continue;
            double term = inst.kernel.value(*l0);
            if (term == 0.0) continue;
            for (int j = 1; j <= inst.degree() && term != 0.0; ++j) {
                auto lj = inst.family.form(j).evaluate(x, y);
                term *= lj ? fs[static_cast<std::size_t>(j - 1)].at(*lj) : 0.0;
            }
            acc += term;
        }
    }
    return acc;
}

double bilinear_norm_exact(const SignedMeasure& kernel, int oversample) {
    if (oversample < 4) throw std::invalid_argument("bilinear_norm_exact: oversample >= 4");
    if (kernel.is_zero()) return 0.0;
    std::int64_t W = kernel.half_width();
    std::int64_t grid = std::max<std::int64_t>(oversample * std::max<std::int64_t>(W, 1),
                                               2 * W + 1);
    return measure_symbol_grid_max(kernel, grid);
}

Eigen::MatrixXd kernel_matrix(const MultilinearInstance& inst,
                              const std::vector<FunctionVec>& gs) {
    const std::int64_t W = inst.window();
    const auto n = static_cast<Eigen::Index>(2 * W + 1);
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n, n);
    EvalTable t = build_table(inst);
    for (const auto& term : t.terms) {
        double v = term.kv;
        for (int j = 0; j < t.M && v != 0.0; ++j)
            v *= gs[static_cast<std::size_t>(j)].at(term.form_value(j));
        K(term.x, term.y) += v;
    }
    return K;
}

namespace {

Eigen::MatrixXd matrix_from_table(const EvalTable& t, const std::vector<FunctionVec>& gs) {
    const auto n = static_cast<Eigen::Index>(2 * t.W + 1);
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n, n);
    for (const auto& term : t.terms) {
        double v = term.kv;
        for (int j = 0; j < t.M && v != 0.0; ++j)
            v *= gs[static_cast<std::size_t>(j)].at(term.form_value(j));
        K(term.x, term.y) += v;
    }
    return K;
}

void canonicalize_signs(std::vector<FunctionVec>& gs) {
    for (auto& g : gs)
        if (!g.values.empty() && g.values.front() < 0)
            for (double& v : g.values) v = -v;
}

}  // namespace

AscentResult op_norm_lower(const MultilinearInstance& inst, int restarts, int iters,
                           std::uint64_t seed, std::vector<double>* history) {
    if (inst.degree() < 1) throw std::invalid_argument("op_norm_lower: M >= 1");
    const std::int64_t W = inst.window();
    EvalTable table = build_table(inst);
    AscentResult best;
    best.f = FunctionVec(W);
    best.gs.assign(static_cast<std::size_t>(inst.degree()), FunctionVec(W));

    for (int rs = 0; rs < std::max(restarts, 1); ++rs) {
        Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(rs), 0xa5ce27ULL);
        std::vector<FunctionVec> gs;
        gs.reserve(static_cast<std::size_t>(inst.degree()));
        for (int j = 0; j < inst.degree(); ++j) gs.push_back(random_sign_vec(W, rng));

        double prev_sigma = -1.0;
        Eigen::VectorXd f, u;
        double sigma = 0;
        for (int sweep = 0; sweep < std::max(iters, 1); ++sweep) {
            Eigen::MatrixXd K = matrix_from_table(table, gs);
            SigmaResult s = sigma_max(K);
            sigma = s.sigma;
            f = s.right;
            u = s.left;
            if (history) history->push_back(sigma);
            if (sigma <= prev_sigma + 1e-12) break;
            prev_sigma = sigma;
            if (sigma == 0.0) break;

            for (int j = 0; j < inst.degree(); ++j) {
                std::vector<double> coef(static_cast<std::size_t>(2 * W + 1), 0.0);
                for (const auto& term : table.terms) {
                    double v = term.kv * u[term.x] * f[term.y];
                    for (int j2 = 0; j2 < table.M && v != 0.0; ++j2) {
                        if (j2 == j) continue;
                        v *= gs[static_cast<std::size_t>(j2)].at(term.form_value(j2));
                    }
                    coef[static_cast<std::size_t>(term.form_value(j) + W)] += v;
                }
                double obj = 0;
                auto& g = gs[static_cast<std::size_t>(j)];
                for (std::size_t i = 0; i < coef.size(); ++i) {
                    if (coef[i] > 0)
                        g.values[i] = 1.0;
                    else if (coef[i] < 0)
                        g.values[i] = -1.0;
                    // zero inner product: keep the previous sign
                    obj += std::fabs(coef[i]);
                }
                if (history) history->push_back(obj);
            }
        }

        canonicalize_signs(gs);
        Eigen::MatrixXd K = matrix_from_table(table, gs);
        SigmaResult s = sigma_max(K);
        if (s.sigma > best.value) {
            best.value = s.sigma;
            best.f = FunctionVec(W);
            for (std::int64_t x = -W; x <= W; ++x)
                best.f.set(x, s.right[static_cast<Eigen::Index>(x + W)]);
            best.gs = gs;
        }
    }
    return best;
}

double op_norm_bruteforce(const MultilinearInstance& inst) {
    const std::int64_t W = inst.window();
    const int M = inst.degree();
    const std::int64_t n = 2 * W + 1;
    if (M < 1 || M > 3 || n > 9 || M * n > 27)
        throw std::invalid_argument("op_norm_bruteforce: instance exceeds the enumeration cap");
    EvalTable table = build_table(inst);
    const int free_bits = M * static_cast<int>(n - 1);
    const std::uint64_t total = 1ULL << free_bits;

    std::vector<FunctionVec> gs(static_cast<std::size_t>(M), FunctionVec(W));
    double best = 0;
    for (std::uint64_t code = 0; code < total; ++code) {
        std::uint64_t c = code;
        for (int j = 0; j < M; ++j) {
            auto& g = gs[static_cast<std::size_t>(j)];
            g.values[0] = 1.0;  // leading sign fixed; g and -g have equal norm
            for (std::int64_t i = 1; i < n; ++i) {
                g.values[static_cast<std::size_t>(i)] = (c & 1) ? 1.0 : -1.0;
                c >>= 1;
            }
        }
        Eigen::MatrixXd K = matrix_from_table(table, gs);
        SigmaResult s = sigma_max(K, 1e-9, 300);
        best = std::max(best, s.sigma);
    }
    return best;
}

namespace {

// S(x, 2 pi k/G) = sum_y e^{-2 pi i k y/G} h_x(y) for all k, via one FFT per x.
std::vector<std::vector<std::complex<double>>> modulation_rows(
    const MultilinearInstance& inst, const CFunctionVec& f, const std::vector<CFunctionVec>& gs,
    std::int64_t G) {
    const std::int64_t W = inst.window();
    std::vector<std::vector<std::complex<double>>> rows;
    rows.reserve(static_cast<std::size_t>(2 * W + 1));
    for (std::int64_t x = -W; x <= W; ++x) {
        std::vector<std::complex<double>> buf(static_cast<std::size_t>(G), 0.0);
        for (std::int64_t y = -W; y <= W; ++y) {
            if (!inst.lattice.identity() && !inst.lattice.contains(x, y)) continue;
            auto l0 = inst.family.kernel_form().evaluate(x, y);
            if (!l0) continue;
            std::complex<double> term = f.at(y) * inst.kernel.value(*l0);
            for (int j = 1; j <= inst.degree() && term != std::complex<double>(0); ++j) {
                auto lj = inst.family.form(j).evaluate(x, y);
                term *= lj ? gs[static_cast<std::size_t>(j - 1)].at(*lj)
                           : std::complex<double>(0);
            }
            if (term == std::complex<double>(0)) continue;
            std::int64_t pos = ((y % G) + G) % G;
            buf[static_cast<std::size_t>(pos)] += term;
        }
        fft_forward(buf);
        rows.push_back(std::move(buf));
    }
    return rows;
}

}  // namespace

double maximal_objective(const MultilinearInstance& inst, const CFunctionVec& f,
                         const std::vector<CFunctionVec>& gs, std::int64_t xi_grid) {
    CFunctionVec fn = f;
    double nf = fn.norm2();
    if (nf == 0) return 0.0;
    fn *= 1.0 / nf;
    auto rows = modulation_rows(inst, fn, gs, xi_grid);
    double acc = 0;
    for (const auto& row : rows) {
        double m = 0;
        for (const auto& z : row) m = std::max(m, std::abs(z));
        acc += m * m;
    }
    return std::sqrt(acc);
}

MaximalAscentResult maximal_norm_lower(const MultilinearInstance& inst, std::int64_t xi_grid,
                                       int restarts, int iters, std::uint64_t seed) {
    const std::int64_t W = inst.window();
    if (xi_grid < 4 * W)
        throw std::invalid_argument("maximal_norm_lower: xi_grid >= 4*A*N required");
    const std::int64_t G = xi_grid;
    const int M = inst.degree();
    MaximalAscentResult best;
    best.f = CFunctionVec(W);
    best.gs.assign(static_cast<std::size_t>(M), CFunctionVec(W));

    for (int rs = 0; rs < std::max(restarts, 1); ++rs) {
        Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(rs), 0x3a7177ULL);
        CFunctionVec f = random_complex_vec(W, rng);
        double nf = f.norm2();
        if (nf > 0) f *= 1.0 / nf;
        std::vector<CFunctionVec> gs;
        for (int j = 0; j < M; ++j) {
            CFunctionVec g(W);
            for (auto& v : g.values)
                v = rs == 0 ? std::complex<double>(1.0)
                            : std::polar(1.0, 6.283185307179586 * rng.uniform());
            gs.push_back(std::move(g));
        }

        double prev = -1.0;
        for (int sweep = 0; sweep < std::max(iters, 1); ++sweep) {
            // per-x phase selection over the grid
            auto rows = modulation_rows(inst, f, gs, G);
            std::vector<std::int64_t> kx(rows.size(), 0);
            for (std::size_t i = 0; i < rows.size(); ++i) {
                double m = -1;
                for (std::size_t k = 0; k < rows[i].size(); ++k) {
                    double a = std::abs(rows[i][k]);
                    if (a > m) {
                        m = a;
                        kx[i] = static_cast<std::int64_t>(k);
                    }
                }
            }
            // linear operator at frozen phases
            const auto nn = static_cast<Eigen::Index>(2 * W + 1);
            Eigen::MatrixXcd K = Eigen::MatrixXcd::Zero(nn, nn);
            for (std::int64_t x = -W; x <= W; ++x) {
                double xi = 6.283185307179586 * static_cast<double>(kx[static_cast<std::size_t>(x + W)]) /
                            static_cast<double>(G);
                for (std::int64_t y = -W; y <= W; ++y) {
                    if (!inst.lattice.identity() && !inst.lattice.contains(x, y)) continue;
                    auto l0 = inst.family.kernel_form().evaluate(x, y);
                    if (!l0) continue;
                    std::complex<double> term =
                        inst.kernel.value(*l0) * std::polar(1.0, -xi * static_cast<double>(y));
                    for (int j = 1; j <= M && term != std::complex<double>(0); ++j) {
                        auto lj = inst.family.form(j).evaluate(x, y);
                        term *= lj ? gs[static_cast<std::size_t>(j - 1)].at(*lj)
                                   : std::complex<double>(0);
                    }
                    K(x + W, y + W) = term;
                }
            }
            CSigmaResult s = sigma_max(K);
            if (s.sigma == 0.0) break;
            for (std::int64_t y = -W; y <= W; ++y)
                f.set(y, s.right[static_cast<Eigen::Index>(y + W)]);
            // unimodular g updates against the dual vector
            for (int j = 0; j < M; ++j) {
                std::vector<std::complex<double>> coef(static_cast<std::size_t>(2 * W + 1), 0.0);
                for (std::int64_t x = -W; x <= W; ++x) {
                    double xi = 6.283185307179586 *
                                static_cast<double>(kx[static_cast<std::size_t>(x + W)]) /
                                static_cast<double>(G);
                    for (std::int64_t y = -W; y <= W; ++y) {
                        if (!inst.lattice.identity() && !inst.lattice.contains(x, y)) continue;
                        auto l0 = inst.family.kernel_form().evaluate(x, y);
                        if (!l0) continue;
                        auto lj = inst.family.form(j + 1).evaluate(x, y);
                        if (!lj || std::abs(*lj) > W) continue;
                        std::complex<double> term = inst.kernel.value(*l0) *
                                                    std::polar(1.0, -xi * static_cast<double>(y)) *
                                                    std::conj(s.left[static_cast<Eigen::Index>(x + W)]) *
                                                    f.at(y);
                        for (int j2 = 1; j2 <= M && term != std::complex<double>(0); ++j2) {
                            if (j2 == j + 1) continue;
                            auto lj2 = inst.family.form(j2).evaluate(x, y);
                            term *= lj2 ? gs[static_cast<std::size_t>(j2 - 1)].at(*lj2)
                                        : std::complex<double>(0);
                        }
                        coef[static_cast<std::size_t>(*lj + W)] += term;
                    }
                }
                auto& g = gs[static_cast<std::size_t>(j)];
                for (std::size_t i = 0; i < coef.size(); ++i)
                    if (std::abs(coef[i]) > 0) g.values[i] = std::conj(coef[i]) / std::abs(coef[i]);
            }
            double obj = maximal_objective(inst, f, gs, G);
            if (obj <= prev + 1e-12) {
                prev = std::max(prev, obj);
                break;
            }
            prev = obj;
        }
        double value = maximal_objective(inst, f, gs, G);
        if (value > best.value) {
            best.value = value;
            best.f = f;
            best.gs = gs;
        }
    }
    return best;
}

}  // namespace multiform
