#include <doctest.h>

#include <cmath>

#include "multiform/selector.hpp"
#include "multiform/trace_oracle.hpp"

using namespace multiform;

TEST_SUITE_BEGIN("trace_oracle");

TEST_CASE("q = 1 tuples are always admissible") {
    for (std::int64_t a : {-3, 0, 2})
        for (std::int64_t b : {-1, 0, 3}) CHECK(is_admissible({a, b}));
}

TEST_CASE("q = 2 hand-evaluated admissibility") {
    CHECK(is_admissible({0, 1, 0, 2}));   // m = (1, 1, 2, 2)
    CHECK(is_admissible({0, 1, 0, 3}));   // m = (1, 1, 3, 3)
    CHECK(!is_admissible({0, 1, 2, 3}));  // m = (1, -1, 1, 3): -1 and 3 once
    CHECK(is_admissible({5, 5, 5, 5}));   // constant tuple, m = 0
}

TEST_CASE("q = 1 closed form: window-cut pair count times E r^2") {
    const std::int64_t N = 4;
    for (double p : {0.25, 0.5}) {
        TraceConfig cfg(N, p, 1);
        double side = 2.0 * N + 1;
        double expected = (side * side - static_cast<double>(N * (N + 1))) * r_moment(2, N, p);
        CHECK(expected_trace_exact(cfg) == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("p = 1 selectors are deterministic: every moment vanishes") {
    TraceConfig cfg(4, 1.0, 2);
    CHECK(expected_trace_exact(cfg) == 0.0);
    auto mc = trace_monte_carlo(cfg, 50, 1);
    CHECK(mc.mean == 0.0);
    CHECK(mc.stderr_ == 0.0);
}

TEST_CASE("Frobenius identity per sample at q = 1") {
    TraceConfig cfg(5, 0.5, 1);
    auto mc = trace_monte_carlo(cfg, 200, 7);
    // every sampled trace((K^T K)^1) equals sum of squares, so the mean is
    // nonnegative and finite; exactness is covered by the oracle agreement
    CHECK(mc.mean >= 0.0);
    CHECK(std::isfinite(mc.stderr_));
}

TEST_CASE("oracle vs Monte Carlo at (N,q) = (4,2), p = 0.5") {
    TraceConfig cfg(4, 0.5, 2);
    double exact = expected_trace_exact(cfg);
    auto mc = trace_monte_carlo(cfg, 20000, 11);
    CHECK(std::fabs(mc.z_score(exact)) <= 4.0);
}

TEST_CASE("oracle vs Monte Carlo with a non-constant weight h") {
    auto h = [](std::int64_t x, std::int64_t y) {
        return 1.0 + 0.3 * std::cos(0.7 * static_cast<double>(x) + 0.3 * static_cast<double>(y));
    };
    TraceConfig cfg(3, 0.5, 2, h);
    double exact = expected_trace_exact(cfg);
    auto mc = trace_monte_carlo(cfg, 20000, 13);
    CHECK(std::fabs(mc.z_score(exact)) <= 4.0);
    CHECK(exact != doctest::Approx(expected_trace_exact(TraceConfig(3, 0.5, 2))));
}

TEST_CASE("expected trace is a nonnegative quadratic-form expectation") {
    for (std::uint64_t s = 0; s < 3; ++s) {
        TraceConfig cfg(3, 0.25 + 0.2 * static_cast<double>(s), 2);
        CHECK(expected_trace_exact(cfg) >= 0.0);
    }
}

TEST_CASE("non-admissible tuples aggregate to zero in expectation") {
    TraceConfig cfg(2, 0.5, 2);
    auto mc = nonadmissible_contribution_mc(cfg, 20000, 17);
    CHECK(std::fabs(mc.mean) <= 4.0 * mc.stderr_);
}

TEST_CASE("matrix trace q = 1 closed form (2N+1)^2 p(1-p)") {
    for (double p : {0.25, 0.5, 1.0}) {
        auto res = matrix_trace_exact(3, p, 1);
        double side = 7;
        CHECK(res.value == doctest::Approx(side * side * p * (1 - p)).epsilon(1e-12));
        CHECK(res.counting_bound_holds);
    }
}

TEST_CASE("matrix trace oracle vs Monte Carlo at (3,2)") {
    auto res = matrix_trace_exact(3, 0.5, 2);
    auto mc = matrix_trace_monte_carlo(3, 0.5, 2, 20000, 19);
    CHECK(std::fabs(mc.z_score(res.value)) <= 4.0);
}

TEST_CASE("partition histogram: q = 1 is a single multiplicity-2 class") {
    auto res = matrix_trace_exact(2, 0.5, 1);
    REQUIRE(res.partition_histogram.size() == 1);
    auto it = res.partition_histogram.begin();
    CHECK(it->first == std::vector<int>{2});
    CHECK(it->second == 25);
    CHECK(res.counting_bound_holds);
}

TEST_CASE("partition counting bound holds at q = 2 and q = 3") {
    CHECK(matrix_trace_exact(3, 0.5, 2).counting_bound_holds);
    CHECK(matrix_trace_exact(2, 0.5, 3).counting_bound_holds);
}

TEST_CASE("central Bernoulli moments") {
    CHECK(bernoulli_central_moment(1, 0.3) == doctest::Approx(0.0));
    CHECK(bernoulli_central_moment(2, 0.3) == doctest::Approx(0.3 * 0.7));
    CHECK(bernoulli_central_moment(2, 1.0) == 0.0);
}

TEST_CASE("enumeration guard throws") {
    CHECK_THROWS(TraceConfig(200, 0.5, 4));
    CHECK_THROWS(matrix_trace_exact(200, 0.5, 4));
}

TEST_SUITE_END();
