#include <doctest.h>

#include <cmath>

#include "multiform/dft_grid.hpp"
#include "multiform/operators.hpp"
#include "multiform/selector.hpp"
#include "multiform/spectral.hpp"

using namespace multiform;

TEST_SUITE_BEGIN("multilinear_operator");

namespace {
MultilinearInstance make_instance(const std::string& fam, SignedMeasure ker, std::int64_t N,
                                  std::int64_t A = 1) {
    MultilinearInstance inst;
    inst.family = parse_family(fam);
    inst.kernel = std::move(ker);
    inst.N = N;
    inst.window_A = A;
    return inst;
}
}  // namespace

TEST_CASE("apply_T with delta kernel at L_0 = x-y and g == 1 is the identity") {
    // L_1 = (x+y)/2 equals x on the diagonal the delta kernel selects, so
    // g == 1 never gets clipped by the window
    auto inst = make_instance("1,-1; 1,1/2", SignedMeasure::delta(0), 6);
    Rng rng = Rng::stream(1, 1);
    FunctionVec f = random_gaussian_vec(6, rng);
    auto out = apply_T(inst, f, {FunctionVec::constant(6, 1.0)});
    for (std::int64_t x = -6; x <= 6; ++x) CHECK(out.at(x) == doctest::Approx(f.at(x)));
}

TEST_CASE("apply_T matches a direct dense double loop") {
    const std::int64_t N = 16;
    SelectorModel model(N, 0.4, 3);
    auto inst = make_instance("2,-1; 1,1; 1,-2", sample_r(model), N);
    Rng rng = Rng::stream(2, 2);
    FunctionVec f = random_gaussian_vec(N, rng);
    std::vector<FunctionVec> gs{random_gaussian_vec(N, rng), random_gaussian_vec(N, rng)};
    auto out = apply_T(inst, f, gs);
    for (std::int64_t x = -N; x <= N; ++x) {
        double acc = 0;
        for (std::int64_t y = -N; y <= N; ++y) {
            auto l0 = inst.family.form(0).evaluate(x, y);
            auto l1 = inst.family.form(1).evaluate(x, y);
            auto l2 = inst.family.form(2).evaluate(x, y);
            double term = f.at(y);
            term *= l0 ? inst.kernel.value(*l0) : 0.0;
            term *= l1 ? gs[0].at(*l1) : 0.0;
            term *= l2 ? gs[1].at(*l2) : 0.0;
            acc += term;
        }
        CHECK(out.at(x) == doctest::Approx(acc).epsilon(1e-12));
    }
}

TEST_CASE("apply_T of the zero function is zero; arity is checked") {
    auto inst = make_instance("1,-1; 1,1", SignedMeasure::delta(0), 4);
    auto out = apply_T(inst, FunctionVec(4), {FunctionVec::constant(4, 1.0)});
    for (double v : out.values) CHECK(v == 0.0);
    CHECK_THROWS(apply_T(inst, FunctionVec(4), {}));
}

TEST_CASE("scalar form: delta data picks the single term") {
    auto inst = make_instance("1,-1; 1,0; 0,1", SignedMeasure::delta(0), 4);
    std::vector<FunctionVec> fs{FunctionVec::delta(4, 0), FunctionVec::delta(4, 0)};
    CHECK(scalar_form(inst, fs) == doctest::Approx(1.0));
    // linearity in the kernel: negating rho negates the form
    auto neg = inst;
    neg.kernel = inst.kernel.scaled(-1.0);
    CHECK(scalar_form(neg, fs) == doctest::Approx(-1.0));
}

TEST_CASE("scalar form against a brute-force double loop at N = 8") {
    const std::int64_t N = 8;
    SelectorModel model(N, 0.5, 11);
    auto inst = make_instance("1,1; 1,0; 0,1; 1,-1", sample_r(model), N);
    Rng rng = Rng::stream(7, 1);
    std::vector<FunctionVec> fs;
    for (int j = 0; j < 3; ++j) fs.push_back(random_gaussian_vec(N, rng));
    double direct = 0;
    for (std::int64_t x = -N; x <= N; ++x)
        for (std::int64_t y = -N; y <= N; ++y) {
            double t = inst.kernel.value(x + y) * fs[0].at(x) * fs[1].at(y);
            auto l3 = inst.family.form(3).evaluate(x, y);
            direct += t * (l3 ? fs[2].at(*l3) : 0.0);
        }
    CHECK(scalar_form(inst, fs) == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("bilinear norm: delta kernel has norm 1") {
    CHECK(bilinear_norm_exact(SignedMeasure::delta(0)) == doctest::Approx(1.0));
}

TEST_CASE("bilinear norm: difference kernel attains 2 on the grid") {
    SignedMeasure m(1);
    m.push_override(0, 1.0);
    m.push_override(1, -1.0);
    CHECK(bilinear_norm_exact(m, 64) == doctest::Approx(2.0).epsilon(1e-4));
}

TEST_CASE("grid symbol maximum matches direct summation") {
    SelectorModel model(24, 0.4, 5);
    SignedMeasure r = sample_r(model);
    std::int64_t grid = 8 * 24;
    double via_fft = measure_symbol_grid_max(r, grid);
    double direct = 0;
    for (std::int64_t j = 0; j < grid; ++j) {
        double xi = 2.0 * 3.14159265358979323846 * static_cast<double>(j) /
                    static_cast<double>(grid);
        direct = std::max(direct, std::abs(measure_symbol_at(r, xi)));
    }
    CHECK(via_fft == doctest::Approx(direct).epsilon(1e-10));
}

TEST_CASE("bilinear norm dominates the truncated convolution matrix norm") {
    // kernel sampled on [-8,8], convolution operator truncated to [-32,32]:
    // the symbol sup dominates, and with the kernel short relative to the
    // window the two agree within 5%
    const std::int64_t N = 32;
    SelectorModel model(8, 0.5, 9);
    SignedMeasure r = sample_r(model);
    double symbol = bilinear_norm_exact(r, 64);
    const auto n = static_cast<Eigen::Index>(2 * N + 1);
    Eigen::MatrixXd K(n, n);
    for (std::int64_t x = -N; x <= N; ++x)
        for (std::int64_t y = -N; y <= N; ++y) K(x + N, y + N) = r.value(x - y);
    double truncated = sigma_max(K, 1e-12, 2000).sigma;
    CHECK(truncated <= symbol * 1.0001);  // truncation only loses mass
    CHECK(truncated >= symbol * 0.95);

    // kernel as wide as the window: domination still holds but the boundary
    // layer keeps an N-independent gap (about a fifth here)
    SelectorModel wide(N, 0.5, 9);
    SignedMeasure rw = sample_r(wide);
    double symbol_w = bilinear_norm_exact(rw, 16);
    Eigen::MatrixXd Kw(n, n);
    for (std::int64_t x = -N; x <= N; ++x)
        for (std::int64_t y = -N; y <= N; ++y) Kw(x + N, y + N) = rw.value(x - y);
    double truncated_w = sigma_max(Kw).sigma;
    CHECK(truncated_w <= symbol_w * 1.0001);
    CHECK(truncated_w >= symbol_w * 0.5);
}

TEST_CASE("op_norm_lower: M=1 delta kernel instance has norm 1") {
    auto inst = make_instance("1,-1; 1,1", SignedMeasure::delta(0), 3);
    auto res = op_norm_lower(inst, 8, 40, 17);
    double brute = op_norm_bruteforce(inst);
    CHECK(res.value == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(brute == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("op_norm_lower: zero kernel gives 0") {
    auto inst = make_instance("1,-1; 1,1", SignedMeasure::zero(3), 3);
    CHECK(op_norm_lower(inst, 3, 20, 1).value == 0.0);
    CHECK(op_norm_bruteforce(inst) == 0.0);
}

TEST_CASE("ascent objective is monotone across half-steps") {
    const std::int64_t N = 6;
    SelectorModel model(N, 0.5, 23);
    auto inst = make_instance("2,-1; 1,1; 1,-2", sample_r(model), N);
    std::vector<double> history;
    op_norm_lower(inst, 3, 40, 5, &history);
    // restarts are concatenated; within a restart the sequence never decreases
    // (a fresh restart may reset). detect resets by the recorded pattern:
    // each restart begins at a sigma value after a full rebuild.
    CHECK(history.size() >= 2);
    int violations = 0;
    for (std::size_t i = 1; i < history.size(); ++i)
        if (history[i] < history[i - 1] - 1e-9) ++violations;
    // at most restarts-1 resets may drop
    CHECK(violations <= 2);
}

TEST_CASE("homogeneity: doubling the kernel doubles every estimator") {
    const std::int64_t N = 3;
    SelectorModel model(N, 0.5, 31);
    SignedMeasure r = sample_r(model);
    auto inst = make_instance("2,-1; 1,1; 1,-2", r, N);
    auto doubled = make_instance("2,-1; 1,1; 1,-2", r.scaled(2.0), N);
    CHECK(op_norm_bruteforce(doubled) == doctest::Approx(2.0 * op_norm_bruteforce(inst)));
    CHECK(bilinear_norm_exact(r.scaled(2.0)) == doctest::Approx(2.0 * bilinear_norm_exact(r)));
    auto a = op_norm_lower(inst, 5, 30, 3);
    auto b = op_norm_lower(doubled, 5, 30, 3);
    CHECK(b.value == doctest::Approx(2.0 * a.value).epsilon(1e-6));
}

TEST_CASE("soundness on random instances: ascent never exceeds brute force") {
    int exact_matches = 0;
    const int instances = 20;
    for (int i = 0; i < instances; ++i) {
        Rng rng = Rng::stream(100, static_cast<std::uint64_t>(i));
        std::int64_t N = 2 + static_cast<std::int64_t>(rng.below(2));  // 2..3
        int M = 1 + static_cast<int>(rng.below(2));                    // 1..2
        std::string fam = M == 1 ? "2,-1; 1,1" : "2,-1; 1,1; 1,-2";
        SelectorModel model(N, 0.5, 200 + static_cast<std::uint64_t>(i));
        auto inst = make_instance(fam, sample_r(model), N);
        auto low = op_norm_lower(inst, 20, 40, 300 + static_cast<std::uint64_t>(i));
        double brute = op_norm_bruteforce(inst);
        CHECK(low.value <= brute + 1e-9);
        if (std::fabs(low.value - brute) <= 1e-3 * std::max(1.0, brute)) ++exact_matches;
    }
    CHECK(exact_matches >= instances * 80 / 100);
}

TEST_CASE("bruteforce refuses instances over the cap") {
    auto inst = make_instance("2,-1; 1,1; 1,-2; 2,1", SignedMeasure::delta(0), 4);  // 3*9 = 27 ok
    CHECK_NOTHROW(op_norm_bruteforce(make_instance("2,-1; 1,1", SignedMeasure::delta(0), 4)));
    CHECK_THROWS(op_norm_bruteforce(make_instance("2,-1; 1,1", SignedMeasure::delta(0), 5)));
    (void)inst;
}

TEST_CASE("maximal norm: M=0 delta kernel has norm 1") {
    auto inst = make_instance("1,-1; 1,1", SignedMeasure::delta(0), 4);
    inst.family = FormFamily({LinearForm(1, -1)});  // M = 0
    auto res = maximal_norm_lower(inst, 4 * 8, 3, 20, 7);
    CHECK(res.value == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("T* dominates T pointwise for fixed data") {
    const std::int64_t N = 6;
    SelectorModel model(N, 0.5, 41);
    auto inst = make_instance("2,-1; 1,1", sample_r(model), N);
    Rng rng = Rng::stream(6, 6);
    CFunctionVec f = random_complex_vec(N, rng);
    std::vector<CFunctionVec> gs{CFunctionVec::constant(N, 1.0)};
    auto tf = apply_T(inst, f, gs);
    double t_norm = tf.norm2();
    double star = maximal_objective(inst, f, gs, 8 * N) * f.norm2();
    CHECK(star >= t_norm - 1e-9);
}

TEST_CASE("maximal estimate is stable under grid refinement") {
    const std::int64_t N = 8;
    SelectorModel model(N, 0.5, 51);
    auto inst = make_instance("2,-1; 1,1", sample_r(model), N);
    auto coarse = maximal_norm_lower(inst, 64 * N, 4, 25, 9);
    auto fine = maximal_norm_lower(inst, 256 * N, 4, 25, 9);
    CHECK(std::fabs(coarse.value - fine.value) <= 0.02 * std::max(coarse.value, fine.value));
}

TEST_SUITE_END();
