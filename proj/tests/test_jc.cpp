#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include <Eigen/Eigenvalues>

#include "openrabi/jc.hpp"

using namespace openrabi;

namespace {

ModelParams make_params(double nu_q, double g, double kappa) {
    ModelParams p;
    p.nu_q = nu_q;
    p.g = g;
    p.kappa_c2 = kappa;
    return p;
}

// 2x2 eigensolve of the doublet block: the oracle for the closed forms.
std::pair<Complex, Complex> doublet_eigenvalues(const ModelParams& params, int n) {
    Eigen::ComplexEigenSolver<Eigen::Matrix2cd> solver(jc_doublet_block(params, n));
    Complex a = solver.eigenvalues()(0), b = solver.eigenvalues()(1);
    if (a.real() > b.real()) std::swap(a, b);
    return {a, b};
}

}  // namespace

TEST_CASE("singlet frequency is -nu_q/2") {
    CHECK(jc_singlet(make_params(0.8, 0.3, 0.1)) == Complex{-0.4, 0.0});
}

TEST_CASE("resonant vacuum doublet splits by 2g") {
    const ModelParams params = make_params(1.0, 0.1, 0.0);
    const JcLevelPair pair = jc_eigenfrequencies(params, 1);
    CHECK(pair.omega_upper.real() == doctest::Approx(0.6).epsilon(1e-14));
    CHECK(pair.omega_lower.real() == doctest::Approx(0.4).epsilon(1e-14));
    CHECK(pair.omega_upper.imag() == 0.0);
    CHECK(pair.omega_lower.imag() == 0.0);
}

TEST_CASE("resonant splitting is 2g sqrt(n) exactly in the closed case") {
    for (int n = 1; n <= 8; ++n) {
        const ModelParams params = make_params(1.0, 0.37, 0.0);
        const JcLevelPair pair = jc_eigenfrequencies(params, n);
        CHECK(std::abs(pair.omega_upper - pair.omega_lower) ==
              doctest::Approx(2.0 * params.g * std::sqrt(double(n))).epsilon(1e-14));
    }
}

TEST_CASE("closed forms equal the 2x2 eigensolve") {
    SUBCASE("paper parameters, n = 3") {
        const ModelParams params = make_params(0.8, 0.5, 1.0 / 40.0);
        const JcLevelPair pair = jc_eigenfrequencies(params, 3);
        const auto [lo, hi] = doublet_eigenvalues(params, 3);
        CHECK(std::abs(pair.omega_lower - lo) < 1e-12);
        CHECK(std::abs(pair.omega_upper - hi) < 1e-12);
    }

    SUBCASE("random parameter draws up to n = 20") {
        std::mt19937 rng(7);
        std::uniform_real_distribution<double> nu_q(0.1, 2.0), g(0.0, 3.0), kappa(0.0, 0.2);
        std::uniform_int_distribution<int> n_draw(1, 20);
        for (int trial = 0; trial < 100; ++trial) {
            const ModelParams params = make_params(nu_q(rng), g(rng), kappa(rng));
            const int n = n_draw(rng);
            const JcLevelPair pair = jc_eigenfrequencies(params, n);
            const auto [lo, hi] = doublet_eigenvalues(params, n);
            const double scale = std::max(1.0, std::abs(hi));
            const bool upper_is_hi = pair.omega_upper.real() >= pair.omega_lower.real();
            const Complex upper = upper_is_hi ? pair.omega_upper : pair.omega_lower;
            const Complex lower = upper_is_hi ? pair.omega_lower : pair.omega_upper;
            CHECK(std::abs(upper - hi) < 1e-12 * scale);
            CHECK(std::abs(lower - lo) < 1e-12 * scale);
        }
    }
}

TEST_CASE("sum of the pair equals the block trace (sum rule)") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> nu_q(0.1, 2.0), g(0.0, 3.0), kappa(0.0, 0.2);
    for (int trial = 0; trial < 30; ++trial) {
        const ModelParams params = make_params(nu_q(rng), g(rng), kappa(rng));
        for (int n : {1, 2, 5, 13}) {
            const JcLevelPair pair = jc_eigenfrequencies(params, n);
            const Complex trace = jc_doublet_block(params, n).trace();
            CHECK(std::abs(pair.omega_upper + pair.omega_lower - trace) < 1e-13 * std::max(1.0, std::abs(trace)));
        }
    }
}

TEST_CASE("labels anchor to the bare states at g = 0") {
    const ModelParams params = make_params(0.8, 0.0, 1.0 / 40.0);
    for (int n = 1; n <= 6; ++n) {
        const JcLevelPair pair = jc_eigenfrequencies(params, n);
        // + branch -> |n,g>, - branch -> |n-1,e>, with decay kappa*m*(m-1).
        CHECK(pair.omega_upper.real() == doctest::Approx(n * 1.0 - 0.4).epsilon(1e-13));
        CHECK(pair.omega_upper.imag() == doctest::Approx(-params.kappa_c2 * n * (n - 1)).epsilon(1e-13));
        CHECK(pair.omega_lower.real() == doctest::Approx((n - 1) * 1.0 + 0.4).epsilon(1e-13));
        CHECK(pair.omega_lower.imag() == doctest::Approx(-params.kappa_c2 * (n - 1) * (n - 2)).epsilon(1e-13));
    }
}

TEST_CASE("JC and Rabi agree at g = 0 and split at g > 0") {
    std::vector<double> grid{0.0, 0.1, 0.2};
    const JcRabiComparison cmp =
        jc_vs_rabi_comparison(make_params(0.8, 0.0, 1.0 / 40.0), grid, Truncation(25), 3);
    REQUIRE(!cmp.branches.empty());
    for (const JcRabiBranch& branch : cmp.branches) {
        CHECK(std::abs(branch.jc[0] - branch.rabi[0]) < 1e-10);
        // Counter-rotating terms shift the Rabi levels away from JC at g > 0.
        CHECK(std::abs(branch.jc[2] - branch.rabi[2]) > 1e-6);
    }
}

TEST_CASE("JC decay rates plateau at ultrastrong coupling; Rabi rates keep rising") {
    const ModelParams params = make_params(0.8, 0.0, 1.0 / 40.0);
    std::vector<double> grid;
    for (int i = 0; i <= 80; ++i) grid.push_back(4.0 * i / 80);
    const JcRabiComparison cmp = jc_vs_rabi_comparison(params, grid, Truncation(70), 3);

    int tested = 0;
    for (const JcRabiBranch& branch : cmp.branches) {
        if (branch.bare_m < 2) continue;  // bare decay vanishes below m = 2
        const double jc_slope = std::abs(decay_slope(cmp.g_grid, branch.jc, 2.0, 4.0));
        const double rabi_slope = decay_slope(cmp.g_grid, branch.rabi, 2.0, 4.0);
        CHECK(jc_slope < 0.02 * params.kappa_c2);
        CHECK(rabi_slope > 0.02 * params.kappa_c2);
        ++tested;
    }
    CHECK(tested >= 2);
}

TEST_CASE("spurious real-part crossings between JC doublets") {
    const ModelParams params = make_params(0.8, 0.0, 1.0 / 40.0);
    // The singlet stays at -nu_q/2 while lower branches of higher doublets
    // sink with g; their difference changes sign.
    bool crossed = false;
    double prev_gap = 0.0;
    for (int i = 0; i <= 100; ++i) {
        ModelParams p = params;
        p.g = 4.0 * i / 100;
        const double gap = jc_eigenfrequencies(p, 2).omega_lower.real() - jc_singlet(p).real();
        if (i > 0 && gap * prev_gap < 0.0) crossed = true;
        prev_gap = gap;
    }
    CHECK(crossed);
}

TEST_CASE("decay_slope input validation") {
    CHECK_THROWS_AS(decay_slope({0.0}, {Complex{0.0, 0.0}}, 0.0, 1.0), std::invalid_argument);
    // Both window ends resolve to the same grid point.
    CHECK_THROWS_AS(decay_slope({0.0, 1.0}, {Complex{0.0, 0.0}, Complex{0.0, 0.0}}, 0.1, 0.4),
                    std::invalid_argument);
}
