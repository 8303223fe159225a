#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "multiform/random_matrix.hpp"
#include "multiform/spectral.hpp"

using namespace multiform;

TEST_SUITE_BEGIN("random_matrix");

TEST_CASE("p = 1 gives the zero matrix") {
    SelectorMatrix m(MatrixModel(6, 1.0, 1));
    for (std::int64_t x = -6; x <= 6; ++x)
        for (std::int64_t y = -6; y <= 6; ++y) CHECK(m.value(x, y) == 0.0);
    CHECK(m.spectral_norm() == 0.0);
}

TEST_CASE("determinism and stream separation") {
    SelectorMatrix a(MatrixModel(20, 0.3, 5, 2));
    SelectorMatrix b(MatrixModel(20, 0.3, 5, 2));
    SelectorMatrix c(MatrixModel(20, 0.3, 5, 3));
    CHECK(a == b);
    CHECK(!(a == c));
    // parallel and serial row sampling agree
    SelectorMatrix d(MatrixModel(20, 0.3, 5, 2), /*parallel_rows=*/false);
    CHECK(a == d);
}

TEST_CASE("geometric-skip sampling matches per-entry sampling statistics") {
    // p < 0.05 triggers the skip path; row densities should match p within 4 SE
    const std::int64_t N = 400;
    const double p = 0.02;
    SelectorMatrix m(MatrixModel(N, p, 9));
    double total = static_cast<double>(m.ones_count());
    double cells = static_cast<double>((2 * N + 1)) * static_cast<double>(2 * N + 1);
    double se = std::sqrt(cells * p * (1 - p));
    CHECK(std::fabs(total - cells * p) <= 4.0 * se);
}

TEST_CASE("empirical row sums of s are (2N+1)p within 4 SE") {
    const std::int64_t N = 64;
    const double p = 0.2;
    double sum = 0;
    const int trials = 200;
    for (int t = 0; t < trials; ++t) {
        SelectorMatrix m(MatrixModel(N, p, 33, static_cast<std::uint64_t>(t)));
        sum += static_cast<double>(m.row_ones(0).size());
    }
    double n = 2.0 * N + 1;
    double mean = sum / trials;
    double se = std::sqrt(n * p * (1 - p) / trials);
    CHECK(std::fabs(mean - n * p) <= 4.0 * se);
}

TEST_CASE("matvec and rmatvec agree with the dense matrix") {
    const std::int64_t N = 10;
    SelectorMatrix m(MatrixModel(N, 0.3, 7));
    const auto n = static_cast<Eigen::Index>(2 * N + 1);
    Eigen::MatrixXd R(n, n);
    for (std::int64_t x = -N; x <= N; ++x)
        for (std::int64_t y = -N; y <= N; ++y) R(x + N, y + N) = m.value(x, y);
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = std::sin(0.3 * static_cast<double>(i)) + 0.2;
    std::vector<double> out(static_cast<std::size_t>(n)), out2(static_cast<std::size_t>(n));
    m.matvec(v.data(), out.data());
    m.rmatvec(v.data(), out2.data());
    Eigen::VectorXd rv = R * v, rtv = R.transpose() * v;
    for (Eigen::Index i = 0; i < n; ++i) {
        CHECK(out[static_cast<std::size_t>(i)] == doctest::Approx(rv[i]).epsilon(1e-12));
        CHECK(out2[static_cast<std::size_t>(i)] == doctest::Approx(rtv[i]).epsilon(1e-12));
    }
}

TEST_CASE("Lanczos spectral norm matches the dense eigensolver") {
    const std::int64_t N = 30;
    for (std::uint64_t seed : {1ULL, 2ULL}) {
        SelectorMatrix m(MatrixModel(N, 0.3, seed));
        const auto n = static_cast<Eigen::Index>(2 * N + 1);
        Eigen::MatrixXd R(n, n);
        for (std::int64_t x = -N; x <= N; ++x)
            for (std::int64_t y = -N; y <= N; ++y) R(x + N, y + N) = m.value(x, y);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(R.transpose() * R);
        double dense = std::sqrt(es.eigenvalues().maxCoeff());
        CHECK(m.spectral_norm(96, 1e-9) == doctest::Approx(dense).epsilon(1e-6));
    }
}

TEST_CASE("matrix form: constant data sums the entries, delta data picks one") {
    const std::int64_t N = 6;
    SelectorMatrix m(MatrixModel(N, 0.4, 11));
    FormFamily fam = parse_family("1,-1; 1,0; 0,1");
    double total = 0;
    for (std::int64_t x = -N; x <= N; ++x)
        for (std::int64_t y = -N; y <= N; ++y) total += m.value(x, y);
    std::vector<FunctionVec> ones{FunctionVec::constant(N, 1.0), FunctionVec::constant(N, 1.0)};
    CHECK(matrix_form(m, fam, ones) == doctest::Approx(total).epsilon(1e-12));
    std::vector<FunctionVec> deltas{FunctionVec::delta(N, 2), FunctionVec::delta(N, -3)};
    CHECK(matrix_form(m, fam, deltas) == doctest::Approx(m.value(2, -3)));
}

TEST_CASE("matrix form centering: E T(1,...,1) = 0 within 4 SE") {
    const std::int64_t N = 16;
    FormFamily fam = parse_family("1,-1; 1,0; 0,1");
    std::vector<FunctionVec> ones{FunctionVec::constant(N, 1.0), FunctionVec::constant(N, 1.0)};
    double sum = 0, sumsq = 0;
    const int trials = 2000;
    for (int t = 0; t < trials; ++t) {
        SelectorMatrix m(MatrixModel(N, 0.3, 21, static_cast<std::uint64_t>(t)));
        double v = matrix_form(m, fam, ones);
        sum += v;
        sumsq += v * v;
    }
    double mean = sum / trials;
    double se = std::sqrt((sumsq / trials - mean * mean) / trials);
    CHECK(std::fabs(mean) <= 4.0 * se);
}

TEST_CASE("matrix form against a double-loop oracle at N = 8") {
    const std::int64_t N = 8;
    SelectorMatrix m(MatrixModel(N, 0.5, 13));
    FormFamily fam = parse_family("1,-1; 1,1; 1,-2");
    Rng rng = Rng::stream(14, 0);
    std::vector<FunctionVec> fs{random_gaussian_vec(N, rng), random_gaussian_vec(N, rng)};
    double direct = 0;
    for (std::int64_t x = -N; x <= N; ++x)
        for (std::int64_t y = -N; y <= N; ++y) {
            auto l1 = fam.form(1).evaluate(x, y);
            auto l2 = fam.form(2).evaluate(x, y);
            direct += m.value(x, y) * (l1 ? fs[0].at(*l1) : 0.0) * (l2 ? fs[1].at(*l2) : 0.0);
        }
    CHECK(matrix_form(m, fam, fs) == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("weak norm: zero matrix gives 0, singleton witnesses reach entries") {
    SelectorMatrix zero(MatrixModel(3, 1.0, 1));
    FormFamily fam = parse_family("1,-1; 1,0; 0,1");
    CHECK(weak_norm_bruteforce(zero, fam).value == 0.0);

    SelectorMatrix m(MatrixModel(3, 0.4, 5));
    auto res = weak_norm_bruteforce(m, fam);
    // the singleton pair (a,b) certifies at least |r(a,b)|
    double best_entry = 0;
    for (std::int64_t x = -3; x <= 3; ++x)
        for (std::int64_t y = -3; y <= 3; ++y)
            best_entry = std::max(best_entry, std::fabs(m.value(x, y)));
    CHECK(res.value >= best_entry - 1e-12);
    // soundness: the witness tuple evaluates back to the reported value
    REQUIRE(res.witness.size() == 2);
    double check = 0;
    for (std::int64_t a : res.witness[0])
        for (std::int64_t b : res.witness[1]) check += m.value(a, b);
    double weight = 1.0 / std::sqrt(static_cast<double>(res.witness[0].size()) *
                                    static_cast<double>(res.witness[1].size()));
    CHECK(res.value == doctest::Approx(std::fabs(check) * weight).epsilon(1e-10));
}

TEST_CASE("weak norm dominates sampled random tuples") {
    SelectorMatrix m(MatrixModel(3, 0.5, 7));
    FormFamily fam = parse_family("1,-1; 1,0; 0,1");
    auto res = weak_norm_bruteforce(m, fam);
    Rng rng = Rng::stream(15, 1);
    for (int t = 0; t < 50; ++t) {
        std::vector<std::vector<std::int64_t>> sets(2);
        for (auto& s : sets) {
            for (std::int64_t v = -3; v <= 3; ++v)
                if (rng.bernoulli(0.5)) s.push_back(v);
            if (s.empty()) s.push_back(0);
        }
        double val = 0;
        for (std::int64_t a : sets[0])
            for (std::int64_t b : sets[1]) val += m.value(a, b);
        double weight = 1.0 / std::sqrt(static_cast<double>(sets[0].size()) *
                                        static_cast<double>(sets[1].size()));
        CHECK(res.value >= std::fabs(val) * weight - 1e-12);
    }
}

TEST_CASE("pruned M = 3 weak norm equals full enumeration at N = 2") {
    SelectorMatrix m(MatrixModel(2, 0.5, 9));
    FormFamily fam = parse_family("1,-1; 1,0; 0,1; 1,1");
    auto pruned = weak_norm_bruteforce(m, fam, false);
    auto full = weak_norm_bruteforce(m, fam, true);
    CHECK(pruned.value == doctest::Approx(full.value).epsilon(1e-12));
}

TEST_CASE("weak norm cap enforcement") {
    SelectorMatrix m(MatrixModel(8, 0.5, 1));
    CHECK_THROWS(weak_norm_bruteforce(m, parse_family("1,-1; 1,0; 0,1")));
}

TEST_CASE("Chernoff: lambda = 0 bound is vacuous, mean is centered") {
    MatrixModel model(8, 0.3, 3);
    std::vector<std::pair<std::int64_t, std::int64_t>> E;
    for (std::int64_t x = -8; x <= 8; ++x)
        for (std::int64_t y = -8; y <= 8; ++y) E.emplace_back(x, y);
    auto rep = chernoff_tail_check(model, E, {0.0, 1.0, 2.0}, 20000, 5);
    CHECK(rep.rows[0].bound == doctest::Approx(2.0));
    CHECK(rep.rows[0].holds);
    CHECK(std::fabs(rep.mean_X) <= 4.0 * rep.stderr_X);
    CHECK(rep.holds);
    // exact variance: sample sd of X should approach sigma
    CHECK(rep.sigma == doctest::Approx(std::sqrt(static_cast<double>(E.size()) * 0.3 * 0.7)));
}

TEST_CASE("row sums: p = 1 vanishes; single-row mean matches the exact formula") {
    auto rep1 = row_sum_sup(1.0, false, {16}, 50, 3);
    CHECK(rep1.means[0] == 0.0);

    const std::int64_t N = 64;
    const double p = 0.3;
    auto rep = row_sum_sup(p, false, {N}, 4000, 7, /*single_row=*/true);
    // E sum_y |r(x,y)| = (2N+1) 2p(1-p)/(Np)
    double expect = (2.0 * N + 1) * 2.0 * (1 - p) / static_cast<double>(N);
    CHECK(std::fabs(rep.means[0] - expect) <= 4.0 * rep.stderrs[0]);
}

TEST_CASE("sup over rows grows with N but sublinearly") {
    auto rep = row_sum_sup(0.3, true, {64, 128, 256, 512, 1024}, 60, 11);
    CHECK(rep.increasing);
    CHECK(rep.power_slope < 0.5);  // far below linear growth
    CHECK(rep.loglinear_slope > 0.0);
}

TEST_CASE("split checks: counting, monotonicity, complement trick") {
    SelectorMatrix m(MatrixModel(4, 0.4, 13));
    FormFamily fam = parse_family("1,-1; 1,0; 0,1; 1,1");
    auto rep = split_bound_check(m, fam, 17);
    CHECK(rep.a_full == doctest::Approx(rep.a_full_expected));
    CHECK(rep.monotone_ok);
    CHECK(rep.counting_ok);
    CHECK(rep.complement_ok);
}

TEST_SUITE_END();
