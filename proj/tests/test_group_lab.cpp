#include <doctest.h>

#include <cmath>

#include "multiform/group_lab.hpp"

using namespace multiform;

TEST_SUITE_BEGIN("group_lab");

TEST_CASE("mu_p at (3,1): three entries of 1/3 on the parabola") {
    GroupSpec spec(3, 1);
    GroupFunction mu = build_mu_p(spec);
    int nonzero = 0;
    for (std::int64_t x = 0; x < 3; ++x) {
        std::int64_t idx = spec.index({x, (x * x) % 3});
        CHECK(mu.values[idx].real() == doctest::Approx(1.0 / 3.0));
        for (const auto& v : mu.values)
            if (v != cdouble(0)) void(0);
    }
    for (const auto& v : mu.values)
        if (v != cdouble(0)) ++nonzero;
    CHECK(nonzero == 3);
}

TEST_CASE("masses: mu has mass 1, nu has mass 0") {
    GroupSpec s72(7, 2);
    CHECK(build_mu_p(s72).sum().real() == doctest::Approx(1.0).epsilon(1e-12));
    GroupSpec s51(5, 1);
    CHECK(std::abs(build_nu_p(s51).sum()) < 1e-12);
}

TEST_CASE("dft of m_p is the point mass at 0") {
    GroupSpec spec(5, 1);
    GroupFunction mh = dft(build_m_p(spec));
    CHECK(std::abs(mh.values[0] - cdouble(1.0)) < 1e-12);
    for (std::int64_t i = 1; i < spec.size(); ++i) CHECK(std::abs(mh.values[i]) < 1e-12);
    CHECK(max_nonzero_fourier(build_m_p(spec)) < 1e-12);
}

TEST_CASE("dft of delta_0 is identically 1") {
    GroupSpec spec(7, 1);
    GroupFunction dh = dft(build_delta(spec));
    for (const auto& v : dh.values) CHECK(std::abs(v - cdouble(1.0)) < 1e-12);
}

TEST_CASE("Plancherel on random input") {
    GroupSpec spec(5, 1);
    GroupFunction f(spec);
    Rng rng = Rng::stream(42, 0);
    for (auto& v : f.values) v = cdouble(rng.normal(), rng.normal());
    GroupFunction fh = dft(f);
    double lhs = 0, rhs = 0;
    for (const auto& v : fh.values) lhs += std::norm(v);
    for (const auto& v : f.values) rhs += std::norm(v);
    CHECK(lhs == doctest::Approx(static_cast<double>(spec.size()) * rhs).epsilon(1e-10));
}

TEST_CASE("double transform reflects and scales by |G| (naive and pass paths)") {
    // (11,2) has 1331 points and runs the naive path; (23,2) has 12167 and
    // runs the coordinate-pass decomposition
    for (auto [p, d] : {std::pair<std::int64_t, std::int64_t>{11, 2}, {23, 2}}) {
        GroupSpec spec(p, d);
        GroupFunction f(spec);
        Rng rng = Rng::stream(9, static_cast<std::uint64_t>(p));
        for (auto& v : f.values) v = cdouble(rng.normal(), rng.normal());
        GroupFunction b = dft(dft(f));
        for (std::int64_t i = 0; i < spec.size(); ++i) {
            auto x = spec.element(i);
            for (auto& c : x) c = (spec.p - c) % spec.p;
            std::int64_t j = spec.index(x);
            CHECK(std::abs(b.values[j] - static_cast<double>(spec.size()) * f.values[i]) <
                  1e-8 * static_cast<double>(spec.size()));
        }
    }
}

TEST_CASE("Gauss maximum equals p^{-d/2}") {
    CHECK(max_nonzero_fourier(build_mu_p(GroupSpec(5, 1))) ==
          doctest::Approx(std::pow(5.0, -0.5)).epsilon(1e-9));
    GroupSpec s72(7, 2);
    GroupFunction nu = build_nu_p(s72);
    double expected = 1.0 / 7.0;
    CHECK(max_nonzero_fourier(nu) == doctest::Approx(expected).epsilon(1e-9));
    CHECK(max_fourier(nu) == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("witness is unimodular and aligned at the origin") {
    GroupSpec spec(7, 2);
    auto w = obstruction_witness(spec);
    for (const auto& v : w.f.values) CHECK(std::abs(v) == doctest::Approx(1.0));
    CHECK(std::abs(w.f.values[0] * w.g.values[0] * w.h.values[0] - cdouble(1.0)) < 1e-12);
    CHECK(w.f.norm2() == doctest::Approx(std::pow(7.0, 1.5)));
    CHECK(w.h.norm_inf() == doctest::Approx(1.0));
}

TEST_CASE("witness phase vanishes on the support of mu(x-y), exhaustively at (3,1)") {
    GroupSpec spec(3, 1);
    GroupFunction mu = build_mu_p(spec);
    for (std::int64_t x = 0; x < spec.size(); ++x)
        for (std::int64_t y = 0; y < spec.size(); ++y)
            if (mu.values[spec.sub_index(x, y)] != cdouble(0))
                CHECK(witness_phase(spec, x, y) == 0);
}

TEST_CASE("trilinear form: witness against mu, m, and delta kernels") {
    GroupSpec spec(5, 1);
    auto w = obstruction_witness(spec);
    cdouble t_mu = trilinear_form(w.f, w.g, w.h, build_mu_p(spec));
    CHECK(std::abs(t_mu - cdouble(25.0)) < 1e-9 * 25.0);
    GroupSpec s71(7, 1);
    auto w7 = obstruction_witness(s71);
    CHECK(std::abs(trilinear_form(w7.f, w7.g, w7.h, build_m_p(s71))) < 1e-9);
    GroupFunction d0 = build_delta(spec);
    CHECK(std::abs(trilinear_form(d0, d0, d0, d0) - cdouble(1.0)) < 1e-12);
}

TEST_CASE("trilinear form rejects mismatched specs") {
    GroupSpec a(3, 1), b(5, 1);
    auto d3 = build_delta(a);
    auto d5 = build_delta(b);
    CHECK_THROWS(trilinear_form(d3, d3, d3, d5));
}

TEST_CASE("bilinear bound: delta pair, random batch, extremal characters") {
    GroupSpec spec(7, 1);
    GroupFunction nu = build_nu_p(spec);
    GroupFunction d0 = build_delta(spec);
    double ratio = std::abs(bilinear_form(d0, d0, nu));
    CHECK(ratio == doctest::Approx(std::abs(nu.values[0].real())));
    CHECK(ratio <= std::pow(7.0, -0.5) + 1e-12);

    auto rep = bilinear_bound_check(spec, 100, 11);
    CHECK(rep.holds);
    CHECK(rep.max_ratio <= std::pow(7.0, -0.5) + 1e-9);
    CHECK(rep.extremal_ratio == doctest::Approx(std::pow(7.0, -0.5)).epsilon(1e-9));
}

TEST_CASE("no-cancellation identity across the acceptance grid, small part") {
    for (std::int64_t p : {5, 7}) {
        for (std::int64_t d : {1, 2}) {
            GroupSpec spec(p, d);
            auto w = obstruction_witness(spec);
            double expect = std::pow(static_cast<double>(p), static_cast<double>(d + 1));
            cdouble t_nu = trilinear_form(w.f, w.g, w.h, build_nu_p(spec));
            CHECK(std::abs(t_nu - cdouble(expect)) < 1e-9 * expect);
            double denom = w.f.norm2() * w.g.norm2() * w.h.norm_inf();
            CHECK(std::abs(t_nu) / denom == doctest::Approx(1.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("primality and spec validation") {
    CHECK(is_prime(2));
    CHECK(is_prime(13));
    CHECK(!is_prime(1));
    CHECK(!is_prime(91));
    CHECK_THROWS(GroupSpec(4, 1));
    CHECK_THROWS(GroupSpec(5, 0));
}

TEST_SUITE_END();
