#include "multiform/trace_oracle.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "multiform/parallel.hpp"
#include "multiform/selector.hpp"

namespace multiform {

namespace {

// Compensated (Neumaier) accumulator; workers each keep one and results are
// merged in index order so sums do not depend on scheduling.
struct Accum {
    double s = 0, c = 0;
    void add(double x) {
        double t = s + x;
        if (std::fabs(s) >= std::fabs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }
    double get() const { return s + c; }
};

void check_guard(std::int64_t N, int q) {
    double count = std::pow(static_cast<double>(2 * N + 1), 2.0 * q);
    if (count > 1e9) throw std::invalid_argument("trace enumeration guard exceeded (10^9 tuples)");
}

// Odometer over [-N,N]^k starting from a fixed first coordinate.
template <class Fn>
void enumerate_tuples(std::int64_t N, int k, std::int64_t first, Fn&& fn) {
    std::vector<std::int64_t> n(static_cast<std::size_t>(k), -N);
    n[0] = first;
    for (;;) {
        fn(n);
        int i = k - 1;
        while (i >= 1 && n[static_cast<std::size_t>(i)] == N) {
            n[static_cast<std::size_t>(i)] = -N;
            --i;
        }
        if (i == 0) return;
        ++n[static_cast<std::size_t>(i)];
    }
}

std::vector<std::int64_t> diff_vector(const std::vector<std::int64_t>& n) {
    const int q2 = static_cast<int>(n.size());
    std::vector<std::int64_t> m(n.size());
    for (int t = 0; 2 * t < q2; ++t) {
        std::int64_t n2t = n[static_cast<std::size_t>(2 * t + 1)];
        std::int64_t prev = n[static_cast<std::size_t>(2 * t)];
        std::int64_t next = n[static_cast<std::size_t>((2 * t + 2) % q2)];
        m[static_cast<std::size_t>(2 * t)] = n2t - prev;
        m[static_cast<std::size_t>(2 * t + 1)] = n2t - next;
    }
    return m;
}

}  // namespace

TraceConfig::TraceConfig(std::int64_t N_, double p_, int q_, PairWeight h_)
    : N(N_), p(p_), q(q_), h(std::move(h_)) {
    if (N < 1 || q < 1) throw std::invalid_argument("TraceConfig: N >= 1, q >= 1");
    if (!(p > 0.0) || p > 1.0) throw std::invalid_argument("TraceConfig: p in (0,1]");
    check_guard(N, q);
}

bool is_admissible(const std::vector<std::int64_t>& n) {
    if (n.empty() || n.size() % 2 != 0) throw std::invalid_argument("is_admissible: need 2q entries");
    auto m = diff_vector(n);
    std::sort(m.begin(), m.end());
    for (std::size_t i = 0; i < m.size();) {
        std::size_t j = i;
        while (j < m.size() && m[j] == m[i]) ++j;
        if (j - i == 1) return false;
        i = j;
    }
    return true;
}

double expected_trace_exact(const TraceConfig& cfg) {
    const std::int64_t N = cfg.N;
    const int q2 = 2 * cfg.q;
    const std::size_t slots = static_cast<std::size_t>(2 * N + 1);
    std::vector<Accum> partial(slots);

    parallel_for(slots, [&](std::size_t slot) {
        Accum acc;
        std::vector<std::pair<std::int64_t, int>> groups;
        enumerate_tuples(N, q2, static_cast<std::int64_t>(slot) - N,
                         [&](const std::vector<std::int64_t>& n) {
            auto m = diff_vector(n);
            // group r-arguments by value; any |m| > N kills the term,
            // any multiplicity 1 has zero expectation
            std::sort(m.begin(), m.end());
            groups.clear();
            for (std::size_t i = 0; i < m.size();) {
                std::size_t j = i;
                while (j < m.size() && m[j] == m[i]) ++j;
                groups.emplace_back(m[i], static_cast<int>(j - i));
                i = j;
            }
            double contrib = 1.0;
            for (const auto& [value, mult] : groups) {
                if (std::abs(value) > N || mult == 1) {
                    contrib = 0.0;
                    break;
                }
                contrib *= r_moment(mult, N, cfg.p);
            }
            if (contrib == 0.0) return;
            if (cfg.h) {
                for (int t = 0; 2 * t < q2; ++t) {
                    std::int64_t xt = n[static_cast<std::size_t>(2 * t + 1)];
                    std::int64_t yt = n[static_cast<std::size_t>(2 * t)];
                    std::int64_t ynext = n[static_cast<std::size_t>((2 * t + 2) % q2)];
                    contrib *= cfg.h(xt, yt) * cfg.h(xt, ynext);
                }
            }
            acc.add(contrib);
        });
        partial[slot] = acc;
    });

    Accum total;
    for (const auto& a : partial) total.add(a.get());
    return total.get();
}

double MonteCarloStat::z_score(double reference) const {
    if (stderr_ == 0) return mean == reference ? 0.0 : HUGE_VAL;
    return (mean - reference) / stderr_;
}

namespace {

MonteCarloStat run_mc(std::int64_t trials, const std::function<double(std::int64_t)>& one) {
    std::vector<double> vals(static_cast<std::size_t>(trials));
    parallel_for(static_cast<std::size_t>(trials),
                 [&](std::size_t t) { vals[t] = one(static_cast<std::int64_t>(t)); });
    Accum sum;
    for (double v : vals) sum.add(v);
    double mean = sum.get() / static_cast<double>(trials);
    Accum ss;
    for (double v : vals) ss.add((v - mean) * (v - mean));
    MonteCarloStat st;
    st.mean = mean;
    st.trials = trials;
    st.stderr_ = trials > 1 ? std::sqrt(ss.get() / (static_cast<double>(trials - 1) *
                                                    static_cast<double>(trials)))
                            : 0.0;
    return st;
}

Eigen::MatrixXd convolution_matrix(const SignedMeasure& r, std::int64_t N, const PairWeight& h) {
    const auto n = static_cast<Eigen::Index>(2 * N + 1);
    Eigen::MatrixXd K(n, n);
    for (std::int64_t x = -N; x <= N; ++x)
        for (std::int64_t y = -N; y <= N; ++y)
            K(x + N, y + N) = r.value(x - y) * (h ? h(x, y) : 1.0);
    return K;
}

double trace_power(const Eigen::MatrixXd& K, int q) {
    if (q == 1) return K.squaredNorm();  // trace(K^T K) = ||K||_F^2
    Eigen::MatrixXd B = K.transpose() * K;
    Eigen::MatrixXd P = B;
    for (int i = 1; i < q; ++i) P = P * B;
    return P.trace();
}

}  // namespace

MonteCarloStat trace_monte_carlo(const TraceConfig& cfg, std::int64_t trials,
                                 std::uint64_t seed) {
    return run_mc(trials, [&](std::int64_t t) {
        SelectorModel model(cfg.N, cfg.p, seed, static_cast<std::uint64_t>(t));
        SignedMeasure r = sample_r(model);
        return trace_power(convolution_matrix(r, cfg.N, cfg.h), cfg.q);
    });
}

double bernoulli_central_moment(int m, double p) {
    return p * std::pow(1.0 - p, m) + (1.0 - p) * std::pow(-p, m);
}

MatrixTraceResult matrix_trace_exact(std::int64_t N, double p, int q) {
    check_guard(N, q);
    const int q2 = 2 * q;
    const std::int64_t side = 2 * N + 1;
    MatrixTraceResult res;
    Accum total;
    // count per partition, and the slot-partition constant for the bound
    std::map<std::vector<int>, std::int64_t>& hist = res.partition_histogram;

    std::vector<std::int64_t> pairs(static_cast<std::size_t>(q2));
    // enumerate all cycles (x_1,y_1,...,x_q,y_q)
    std::vector<std::int64_t> n(static_cast<std::size_t>(q2), -N);
    for (;;) {
        // visited pairs: (x_t, y_t) then (x_{t+1}, y_t), x_{q+1} = x_1
        for (int t = 0; t < q; ++t) {
            std::int64_t xt = n[static_cast<std::size_t>(2 * t)];
            std::int64_t yt = n[static_cast<std::size_t>(2 * t + 1)];
            std::int64_t xnext = n[static_cast<std::size_t>((2 * t + 2) % q2)];
            pairs[static_cast<std::size_t>(2 * t)] = (xt + N) * side + (yt + N);
            pairs[static_cast<std::size_t>(2 * t + 1)] = (xnext + N) * side + (yt + N);
        }
        std::vector<std::int64_t> sorted = pairs;
        std::sort(sorted.begin(), sorted.end());
        std::vector<int> mults;
        double contrib = 1.0;
        for (std::size_t i = 0; i < sorted.size();) {
            std::size_t j = i;
            while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
            int mult = static_cast<int>(j - i);
            mults.push_back(mult);
            if (mult == 1)
                contrib = 0.0;
            else if (contrib != 0.0)
                contrib *= bernoulli_central_moment(mult, p);
            i = j;
        }
        std::sort(mults.begin(), mults.end(), std::greater<int>());
        ++hist[mults];
        if (contrib != 0.0) total.add(contrib);

        int i = q2 - 1;
        while (i >= 0 && n[static_cast<std::size_t>(i)] == N) {
            n[static_cast<std::size_t>(i)] = -N;
            --i;
        }
        if (i < 0) break;
        ++n[static_cast<std::size_t>(i)];
    }
    res.value = total.get();

    // counting bound: tuples per J-class partition <= C * side^{J+1},
    // C = number of set partitions of the 2q slots with those class sizes
    for (const auto& [mults, count] : hist) {
        double log_c = std::lgamma(static_cast<double>(q2) + 1);
        for (int m : mults) log_c -= std::lgamma(static_cast<double>(m) + 1);
        for (std::size_t i = 0; i < mults.size();) {
            std::size_t j = i;
            while (j < mults.size() && mults[j] == mults[i]) ++j;
            log_c -= std::lgamma(static_cast<double>(j - i) + 1);
            i = j;
        }
        double c = std::exp(log_c);
        double bound = c * std::pow(static_cast<double>(side),
                                    static_cast<double>(mults.size()) + 1.0);
        if (static_cast<double>(count) > bound * (1.0 + 1e-9)) res.counting_bound_holds = false;
    }
    return res;
}

MonteCarloStat matrix_trace_monte_carlo(std::int64_t N, double p, int q, std::int64_t trials,
                                        std::uint64_t seed) {
    const auto n = static_cast<Eigen::Index>(2 * N + 1);
    return run_mc(trials, [&, n](std::int64_t t) {
        Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(t), 0x8712ULL);
        Eigen::MatrixXd K(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j)
                K(i, j) = (rng.uniform() < p ? 1.0 : 0.0) - p;
        return trace_power(K, q);
    });
}

MonteCarloStat nonadmissible_contribution_mc(const TraceConfig& cfg, std::int64_t trials,
                                             std::uint64_t seed) {
    const std::int64_t N = cfg.N;
    const int q2 = 2 * cfg.q;
    return run_mc(trials, [&](std::int64_t t) {
        SelectorModel model(cfg.N, cfg.p, seed, static_cast<std::uint64_t>(t));
        SignedMeasure r = sample_r(model);
        Accum acc;
        for (std::int64_t first = -N; first <= N; ++first) {
            enumerate_tuples(N, q2, first, [&](const std::vector<std::int64_t>& n) {
                if (is_admissible(n)) return;
                auto m = diff_vector(n);
                double term = 1.0;
                for (std::int64_t mi : m) {
                    term *= r.value(mi);
                    if (term == 0.0) return;
                }
                if (cfg.h) {
                    for (int tt = 0; 2 * tt < q2; ++tt) {
                        std::int64_t xt = n[static_cast<std::size_t>(2 * tt + 1)];
                        std::int64_t yt = n[static_cast<std::size_t>(2 * tt)];
                        std::int64_t ynext = n[static_cast<std::size_t>((2 * tt + 2) % q2)];
                        term *= cfg.h(xt, yt) * cfg.h(xt, ynext);
                    }
                }
                acc.add(term);
            });
        }
        return acc.get();
    });
}

}  // namespace multiform
