#include "multiform/random_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "multiform/fit.hpp"
#include "multiform/parallel.hpp"
#include "multiform/selector.hpp"
#include "multiform/spectral.hpp"

namespace multiform {

MatrixModel::MatrixModel(std::int64_t N_, double p_, std::uint64_t seed_, std::uint64_t stream_id_)
    : N(N_), p(p_), seed(seed_), stream_id(stream_id_) {
    if (N < 1) throw std::invalid_argument("MatrixModel: N must be positive");
    if (!(p > 0.0) || p > 1.0) throw std::invalid_argument("MatrixModel: p must be in (0,1]");
    if (static_cast<double>(N) * p < 1.0)
        throw std::invalid_argument("MatrixModel: Np >= 1 required");
}

SelectorMatrix::SelectorMatrix(const MatrixModel& model, bool parallel_rows)
    : N_(model.N), p_(model.p) {
    const std::int64_t n = side();
    rows_.resize(static_cast<std::size_t>(n));
    auto sample_row = [&](std::size_t row) {
        Rng rng = Rng::stream(model.seed, model.stream_id, 0x70000000ULL + row);
        auto& cols = rows_[row];
        if (p_ >= 0.05) {
            for (std::int64_t y = 0; y < n; ++y)
                if (rng.uniform() < p_) cols.push_back(static_cast<std::int32_t>(y));
        } else {
            // geometric skipping: exact Bernoulli run lengths, O(ones) work
            std::int64_t y = static_cast<std::int64_t>(rng.geometric_skip(p_));
            while (y < n) {
                cols.push_back(static_cast<std::int32_t>(y));
                y += 1 + static_cast<std::int64_t>(rng.geometric_skip(p_));
            }
        }
    };
    if (parallel_rows)
        parallel_for(static_cast<std::size_t>(n), sample_row);
    else
        for (std::size_t r = 0; r < static_cast<std::size_t>(n); ++r) sample_row(r);
}

bool SelectorMatrix::selected(std::int64_t x, std::int64_t y) const {
    const auto& cols = rows_.at(static_cast<std::size_t>(x + N_));
    return std::binary_search(cols.begin(), cols.end(), static_cast<std::int32_t>(y + N_));
}

double SelectorMatrix::value(std::int64_t x, std::int64_t y) const {
    double s = selected(x, y) ? 1.0 : 0.0;
    return (s - p_) / (static_cast<double>(N_) * p_);
}

const std::vector<std::int32_t>& SelectorMatrix::row_ones(std::int64_t x) const {
    return rows_.at(static_cast<std::size_t>(x + N_));
}

std::int64_t SelectorMatrix::ones_count() const {
    std::int64_t c = 0;
    for (const auto& r : rows_) c += static_cast<std::int64_t>(r.size());
    return c;
}

void SelectorMatrix::matvec(const double* v, double* out) const {
    const std::int64_t n = side();
    double total = 0;
    for (std::int64_t i = 0; i < n; ++i) total += v[i];
    const double scale = 1.0 / (static_cast<double>(N_) * p_);
    for (std::int64_t x = 0; x < n; ++x) {
        double s = 0;
        for (std::int32_t y : rows_[static_cast<std::size_t>(x)]) s += v[y];
        out[x] = scale * (s - p_ * total);
    }
}

void SelectorMatrix::rmatvec(const double* v, double* out) const {
    const std::int64_t n = side();
    double total = 0;
    for (std::int64_t i = 0; i < n; ++i) total += v[i];
    const double scale = 1.0 / (static_cast<double>(N_) * p_);
    for (std::int64_t y = 0; y < n; ++y) out[y] = 0;
    for (std::int64_t x = 0; x < n; ++x) {
        double vx = v[x];
        if (vx == 0.0) continue;
        for (std::int32_t y : rows_[static_cast<std::size_t>(x)]) out[y] += vx;
    }
    for (std::int64_t y = 0; y < n; ++y) out[y] = scale * (out[y] - p_ * total);
}

double SelectorMatrix::spectral_norm(int max_iters, double tol) const {
    return lanczos_sigma_max(
        side(), [this](const double* v, double* o) { matvec(v, o); },
        [this](const double* v, double* o) { rmatvec(v, o); }, max_iters, tol);
}

double matrix_form(const SelectorMatrix& sample, const FormFamily& family,
                   const std::vector<FunctionVec>& fs) {
    if (static_cast<int>(fs.size()) != family.degree())
        throw std::invalid_argument("matrix_form: need M functions");
    if (family.degree() < 1) throw std::invalid_argument("matrix_form: M >= 1");
    const std::int64_t N = sample.N();
    double acc = 0;
    for (std::int64_t x = -N; x <= N; ++x) {
        const auto& ones = sample.row_ones(x);
        auto it = ones.begin();
        for (std::int64_t y = -N; y <= N; ++y) {
            while (it != ones.end() && *it < y + N) ++it;
            bool s = it != ones.end() && *it == y + N;
            double r = ((s ? 1.0 : 0.0) - sample.p()) / (static_cast<double>(N) * sample.p());
            double term = r;
            for (int j = 1; j <= family.degree() && term != 0.0; ++j) {
                auto lj = family.form(j).evaluate(x, y);
                term *= lj ? fs[static_cast<std::size_t>(j - 1)].at(*lj) : 0.0;
            }
            acc += term;
        }
    }
    return acc;
}

namespace {

struct WeakTerm {
    std::int32_t v1, v2, v3;  // set-slot values shifted to [0, 2N]; -1 = dead
    double r;
};

std::vector<std::int64_t> mask_to_set(std::uint32_t mask, std::int64_t N) {
    std::vector<std::int64_t> s;
    for (std::int64_t i = 0; i <= 2 * N; ++i)
        if (mask & (1u << i)) s.push_back(i - N);
    return s;
}

}  // namespace

WeakNormResult weak_norm_bruteforce(const SelectorMatrix& sample, const FormFamily& family,
                                    bool full_enumeration) {
    const std::int64_t N = sample.N();
    const std::int64_t n = 2 * N + 1;
    const int M = family.degree();
    if (n > 12 || M > 3 || M < 2)
        throw std::invalid_argument("weak_norm_bruteforce: cap is (2N+1) <= 12, 2 <= M <= 3");
    if (full_enumeration && M * n > 24)
        throw std::invalid_argument("weak_norm_bruteforce: full enumeration cap exceeded");

    // precompute surviving terms
    std::vector<WeakTerm> terms;
    for (std::int64_t x = -N; x <= N; ++x) {
        for (std::int64_t y = -N; y <= N; ++y) {
            WeakTerm t;
            t.r = sample.value(x, y);
            auto slot = [&](int j) -> std::int32_t {
                auto lj = family.form(j).evaluate(x, y);
                if (!lj || std::abs(*lj) > N) return -1;
                return static_cast<std::int32_t>(*lj + N);
            };
            t.v1 = slot(1);
            t.v2 = slot(2);
            t.v3 = M >= 3 ? slot(3) : 0;
            if (t.v1 < 0 || t.v2 < 0 || (M >= 3 && t.v3 < 0)) continue;
            terms.push_back(t);
        }
    }

    WeakNormResult best;
    const std::uint32_t full = (1u << n) - 1;
    std::vector<double> fiber(static_cast<std::size_t>(n));
    for (std::uint32_t m1 = 1; m1 <= full; ++m1) {
        const double w1 = 1.0 / std::sqrt(static_cast<double>(__builtin_popcount(m1)));
        for (std::uint32_t m2 = 1; m2 <= full; ++m2) {
            const double w12 = w1 / std::sqrt(static_cast<double>(__builtin_popcount(m2)));
            if (M == 2) {
                double tv = 0;
                for (const auto& t : terms)
                    if ((m1 >> t.v1) & 1u && (m2 >> t.v2) & 1u) tv += t.r;
                double val = std::fabs(tv) * w12;
                if (val > best.value) {
                    best.value = val;
                    best.witness = {mask_to_set(m1, N), mask_to_set(m2, N)};
                }
                continue;
            }
            if (!full_enumeration) {
                // slot 3 enters linearly and unnormalized: the extremal E_3
                // is the positive (or negative) part of the fiber sums
                std::fill(fiber.begin(), fiber.end(), 0.0);
                for (const auto& t : terms)
                    if ((m1 >> t.v1) & 1u && (m2 >> t.v2) & 1u)
                        fiber[static_cast<std::size_t>(t.v3)] += t.r;
                double pos = 0, neg = 0;
                std::uint32_t mp = 0, mn = 0;
                for (std::int64_t v = 0; v < n; ++v) {
                    if (fiber[static_cast<std::size_t>(v)] > 0) {
                        pos += fiber[static_cast<std::size_t>(v)];
                        mp |= 1u << v;
                    } else if (fiber[static_cast<std::size_t>(v)] < 0) {
                        neg -= fiber[static_cast<std::size_t>(v)];
                        mn |= 1u << v;
                    }
                }
                double val = std::max(pos, neg) * w12;
                if (val > best.value && (mp || mn)) {
                    best.value = val;
                    best.witness = {mask_to_set(m1, N), mask_to_set(m2, N),
                                    mask_to_set(pos >= neg ? mp : mn, N)};
                }
            } else {
                for (std::uint32_t m3 = 1; m3 <= full; ++m3) {
                    double tv = 0;
                    for (const auto& t : terms)
                        if ((m1 >> t.v1) & 1u && (m2 >> t.v2) & 1u && (m3 >> t.v3) & 1u)
                            tv += t.r;
                    double val = std::fabs(tv) * w12;
                    if (val > best.value) {
                        best.value = val;
                        best.witness = {mask_to_set(m1, N), mask_to_set(m2, N),
                                        mask_to_set(m3, N)};
                    }
                }
            }
        }
    }
    return best;
}

ChernoffReport chernoff_tail_check(const MatrixModel& model,
                                   const std::vector<std::pair<std::int64_t, std::int64_t>>& E,
                                   const std::vector<double>& lambdas, std::int64_t trials,
                                   std::uint64_t seed) {
    if (E.empty()) throw std::invalid_argument("chernoff_tail_check: |E| >= 1");
    const double p = model.p;
    const double card = static_cast<double>(E.size());
    const double sigma = std::sqrt(card * p * (1.0 - p));

    std::vector<double> xs(static_cast<std::size_t>(trials));
    parallel_for(static_cast<std::size_t>(trials), [&](std::size_t t) {
        Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(t), 0xc4e2ULL);
        // X depends on the selectors only through the sites in E
        std::int64_t successes = 0;
        for (std::size_t i = 0; i < E.size(); ++i)
            if (rng.uniform() < p) ++successes;
        xs[t] = static_cast<double>(successes) - card * p;
    });

    ChernoffReport rep;
    rep.sigma = sigma;
    double sum = 0, sumsq = 0;
    for (double x : xs) sum += x;
    rep.mean_X = sum / static_cast<double>(trials);
    for (double x : xs) sumsq += (x - rep.mean_X) * (x - rep.mean_X);
    rep.stderr_X = trials > 1 ? std::sqrt(sumsq / (static_cast<double>(trials - 1) *
                                                   static_cast<double>(trials)))
                              : 0.0;

    for (double lambda : lambdas) {
        double t_thresh = lambda * sigma;
        std::int64_t exceed = 0;
        for (double x : xs)
            if (std::fabs(x) > t_thresh) ++exceed;
        ChernoffReport::Row row;
        row.lambda = lambda;
        row.empirical = static_cast<double>(exceed) / static_cast<double>(trials);
        row.bound = 2.0 * std::exp(-(t_thresh * t_thresh) /
                                   (2.0 * sigma * sigma + 2.0 * t_thresh / 3.0));
        double b = std::min(row.bound, 1.0);
        row.sampling_sigma = std::sqrt(b * (1.0 - b) / static_cast<double>(trials));
        row.holds = row.empirical <= row.bound + 4.0 * row.sampling_sigma;
        if (!row.holds) rep.holds = false;
        rep.rows.push_back(row);
    }
    return rep;
}

RowSumReport row_sum_sup(double gamma_or_p, bool use_gamma,
                         const std::vector<std::int64_t>& N_list, std::int64_t trials,
                         std::uint64_t seed, bool single_row) {
    RowSumReport rep;
    rep.N_list = N_list;
    for (std::size_t ni = 0; ni < N_list.size(); ++ni) {
        const std::int64_t N = N_list[ni];
        const double p = use_gamma ? scan_gamma_to_p(N, gamma_or_p) : gamma_or_p;
        const std::int64_t n = 2 * N + 1;
        const double scale = 1.0 / (static_cast<double>(N) * p);
        std::vector<double> vals(static_cast<std::size_t>(trials));
        parallel_for(static_cast<std::size_t>(trials), [&](std::size_t t) {
            Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(t), 0x2057 + ni);
            double sup = 0;
            const std::int64_t rows = single_row ? 1 : n;
            for (std::int64_t x = 0; x < rows; ++x) {
                // row sum of |r| needs only the count of ones in the row
                std::int64_t k = 0;
                if (p >= 0.05) {
                    for (std::int64_t y = 0; y < n; ++y)
                        if (rng.uniform() < p) ++k;
                } else {
                    std::int64_t y = static_cast<std::int64_t>(rng.geometric_skip(p));
                    while (y < n) {
                        ++k;
                        y += 1 + static_cast<std::int64_t>(rng.geometric_skip(p));
                    }
                }
                double row_sum = scale * ((1.0 - p) * static_cast<double>(k) +
                                          p * static_cast<double>(n - k));
                sup = std::max(sup, row_sum);
            }
            vals[t] = sup;
        });
        double sum = 0;
        for (double v : vals) sum += v;
        double mean = sum / static_cast<double>(trials);
        double ss = 0;
        for (double v : vals) ss += (v - mean) * (v - mean);
        rep.means.push_back(mean);
        rep.stderrs.push_back(trials > 1 ? std::sqrt(ss / (static_cast<double>(trials - 1) *
                                                           static_cast<double>(trials)))
                                         : 0.0);
    }
    if (N_list.size() >= 3) {
        std::vector<double> lx, y;
        for (std::size_t i = 0; i < N_list.size(); ++i) {
            lx.push_back(std::log(static_cast<double>(N_list[i])));
            y.push_back(rep.means[i]);
        }
        FitResult lin = ols(lx, y);
        rep.loglinear_intercept = lin.intercept;
        rep.loglinear_slope = lin.slope;
        FitResult pw = fit_exponent(N_list, rep.means);
        rep.power_slope = pw.slope;
        rep.increasing = rep.means.back() > rep.means.front() +
                                                2.0 * (rep.stderrs.back() + rep.stderrs.front());
    }
    return rep;
}

double averaging_form(std::int64_t N, const FormFamily& family,
                      const std::vector<std::vector<std::int64_t>>& sets) {
    if (static_cast<int>(sets.size()) != family.degree())
        throw std::invalid_argument("averaging_form: need M sets");
    std::int64_t count = 0;
    for (std::int64_t x = -N; x <= N; ++x) {
        for (std::int64_t y = -N; y <= N; ++y) {
            bool all = true;
            for (int j = 1; j <= family.degree() && all; ++j) {
                auto lj = family.form(j).evaluate(x, y);
                all = lj && std::binary_search(sets[static_cast<std::size_t>(j - 1)].begin(),
                                               sets[static_cast<std::size_t>(j - 1)].end(), *lj);
            }
            if (all) ++count;
        }
    }
    return static_cast<double>(count) / static_cast<double>(N);
}

namespace {
std::int64_t fiber_count(std::int64_t N, const FormFamily& family,
                         const std::vector<std::vector<std::int64_t>>& sets, int upto) {
    std::int64_t count = 0;
    for (std::int64_t x = -N; x <= N; ++x) {
        for (std::int64_t y = -N; y <= N; ++y) {
            bool all = true;
            for (int j = 1; j <= upto && all; ++j) {
                auto lj = family.form(j).evaluate(x, y);
                all = lj && std::binary_search(sets[static_cast<std::size_t>(j - 1)].begin(),
                                               sets[static_cast<std::size_t>(j - 1)].end(), *lj);
            }
            if (all) ++count;
        }
    }
    return count;
}

std::vector<std::int64_t> random_subset(std::int64_t N, Rng& rng) {
    std::vector<std::int64_t> s;
    for (std::int64_t v = -N; v <= N; ++v)
        if (rng.bernoulli(0.5)) s.push_back(v);
    if (s.empty()) s.push_back(0);
    return s;
}
}  // namespace

SplitCheckReport split_bound_check(const SelectorMatrix& sample, const FormFamily& family,
                                   std::uint64_t seed) {
    const std::int64_t N = sample.N();
    const int M = family.degree();
    if (2 * N + 1 > 12 || M < 2 || M > 3)
        throw std::invalid_argument("split_bound_check: same caps as weak_norm_bruteforce");
    SplitCheckReport rep;

    std::vector<std::int64_t> full;
    for (std::int64_t v = -N; v <= N; ++v) full.push_back(v);
    std::vector<std::vector<std::int64_t>> full_sets(static_cast<std::size_t>(M), full);
    rep.a_full = averaging_form(N, family, full_sets);
    rep.a_full_expected =
        static_cast<double>(fiber_count(N, family, full_sets, M)) / static_cast<double>(N);

    Rng rng = Rng::stream(seed, 0, 0x5b17ULL);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::vector<std::int64_t>> sets;
        for (int j = 0; j < M; ++j) sets.push_back(random_subset(N, rng));

        // counting bound: A <= N^{-1} |E_1| |E_2|
        double a = averaging_form(N, family, sets);
        double cap = static_cast<double>(sets[0].size()) * static_cast<double>(sets[1].size()) /
                     static_cast<double>(N);
        if (a > cap * (1.0 + 1e-12)) rep.counting_ok = false;

        // monotonicity of A and (T - A) under enlarging the last set
        auto grown = sets;
        grown.back() = full;
        double a2 = averaging_form(N, family, grown);
        if (a2 + 1e-12 < a) rep.monotone_ok = false;
        auto ta = [&](const std::vector<std::vector<std::int64_t>>& ss) {
            // (T - A)(E) = (Np)^{-1} sum s(x,y) prod chi_j : nonneg kernel
            double acc = 0;
            for (std::int64_t x = -N; x <= N; ++x) {
                for (std::int64_t y = -N; y <= N; ++y) {
                    if (!sample.selected(x, y)) continue;
                    bool all = true;
                    for (int j = 1; j <= M && all; ++j) {
                        auto lj = family.form(j).evaluate(x, y);
                        all = lj && std::binary_search(ss[static_cast<std::size_t>(j - 1)].begin(),
                                                       ss[static_cast<std::size_t>(j - 1)].end(),
                                                       *lj);
                    }
                    if (all) acc += 1.0;
                }
            }
            return acc / (static_cast<double>(N) * sample.p());
        };
        if (ta(grown) + 1e-12 < ta(sets)) rep.monotone_ok = false;

        // complement trick: E_M and its complement within [-N,N] partition
        // the E_M-free fiber (the count with the last slot full)
        std::vector<std::int64_t> comp;
        for (std::int64_t v = -N; v <= N; ++v)
            if (!std::binary_search(sets.back().begin(), sets.back().end(), v)) comp.push_back(v);
        std::int64_t with_set = fiber_count(N, family, sets, M);
        auto sets_comp = sets;
        sets_comp.back() = comp;
        std::int64_t with_comp = comp.empty() ? 0 : fiber_count(N, family, sets_comp, M);
        auto sets_full = sets;
        sets_full.back() = full;
        std::int64_t free_fiber = fiber_count(N, family, sets_full, M);
        if (with_set + with_comp != free_fiber) rep.complement_ok = false;
        if (2 * std::max(with_set, with_comp) < free_fiber) rep.complement_ok = false;
    }
    return rep;
}

}  // namespace multiform
