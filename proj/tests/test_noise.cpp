// Noise synthesis: damping field, increment distribution, hierarchical
// coupling and counter-based determinism.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numeric>

#include "snse/noise.hpp"

using namespace snse;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("alpha for a lone zero mode on the torus is 1/(2 pi)") {
    SpectralBasis basis(Domain::Torus, 1, 8);
    std::vector<double> q(8, 0.0);
    q[0] = 1.0;  // rank 0 is the zero mode
    NoiseModel model = build_noise(basis, q, NoiseType::Multiplicative, true, 8);
    for (double a : model.alpha) CHECK(a == doctest::Approx(1.0 / (2.0 * kPi)).epsilon(1e-14));
}

TEST_CASE("additive noise has alpha identically zero") {
    SpectralBasis basis(Domain::Torus, 1, 8);
    NoiseModel model = build_noise(basis, 2.0, 1.0, NoiseType::Additive, true, 8);
    for (double a : model.alpha) CHECK(a == 0.0);
    CHECK(model.alpha_sup == 0.0);
}

TEST_CASE("alpha for a lone first sine mode is (2/pi) sin^2") {
    SpectralBasis basis(Domain::Sine, 1, 16);
    std::vector<double> q(16, 0.0);
    q[0] = 1.0;
    NoiseModel model = build_noise(basis, q, NoiseType::Multiplicative, true, 16);
    for (int m = 0; m < basis.n_grid(); ++m) {
        double x = basis.grid_point(m)[0];
        CHECK(model.alpha[m] ==
              doctest::Approx((2.0 / kPi) * std::sin(x) * std::sin(x)).epsilon(1e-12));
    }
}

TEST_CASE("torus multiplicative alpha is constant for the eigenvalue family") {
    // equal q on every cos/sin pair adds up to a flat damping field
    SpectralBasis basis(Domain::Torus, 1, 16);
    NoiseModel model = build_noise(basis, 1.5, 0.7, NoiseType::Multiplicative, true, 16);
    for (double a : model.alpha) CHECK(a == doctest::Approx(model.alpha[0]).epsilon(1e-12));
    CHECK(model.alpha_sup > 0.0);
}

TEST_CASE("negative covariance entries are rejected") {
    SpectralBasis basis(Domain::Torus, 1, 8);
    std::vector<double> q(8, 1.0);
    q[3] = -0.25;
    CHECK_THROWS_AS(build_noise(basis, q, NoiseType::Additive, true, 8), ConfigError);
    CHECK_THROWS_AS(build_noise(basis, 2.0, 1.0, NoiseType::Multiplicative, false, 8),
                    ConfigError);
}

TEST_CASE("modes with q = 0 receive exactly zero increment") {
    SpectralBasis basis(Domain::Sine, 1, 8);
    std::vector<double> q(8, 1.0);
    q[2] = 0.0;
    NoiseModel model = build_noise(basis, q, NoiseType::Multiplicative, true, 8);
    IncrementPlan plan{123, 0, 64, 1.0};
    for (int s = 0; s < 8; ++s) {
        Field dw = sample_increment(model, plan, s, 0);
        CHECK(dw.coeffs()[2] == cplx(0.0, 0.0));
    }
}

TEST_CASE("per-mode increment variance is q dt within 3 standard errors") {
    const int n_draws = 100000;
    IncrementPlan plan{2024, 0, n_draws, double(n_draws) * 1e-3};
    double dt = plan.dt_fine();

    SUBCASE("real sine noise") {
        SpectralBasis basis(Domain::Sine, 1, 4);
        std::vector<double> q = {0.9, 0.5, 0.2, 0.1};
        NoiseModel model = build_noise(basis, q, NoiseType::Multiplicative, true, 4);
        std::vector<double> acc(4, 0.0);
        for (int s = 0; s < n_draws; ++s) {
            Field dw = sample_increment(model, plan, s, 0);
            for (int j = 0; j < 4; ++j) acc[j] += std::norm(dw.coeffs()[j]);
        }
        for (int j = 0; j < 4; ++j) {
            double mean = acc[j] / n_draws;
            double se = q[j] * dt * std::sqrt(2.0 / n_draws);  // Var |dW|^2 = 2 (q dt)^2
            CHECK(std::abs(mean - q[j] * dt) < 3.0 * se);
        }
    }

    SUBCASE("complex torus noise") {
        SpectralBasis basis(Domain::Torus, 1, 4);
        NoiseModel model = build_noise(basis, 1.0, 1.0, NoiseType::Additive, false, 4);
        const auto& sorted = basis.sorted_modes();
        std::vector<double> acc(4, 0.0);
        for (int s = 0; s < n_draws; ++s) {
            Field dw = sample_increment(model, plan, s, 0);
            for (int r = 0; r < 4; ++r) acc[r] += std::norm(dw.coeffs()[sorted[r]]);
        }
        for (int r = 0; r < 4; ++r) {
            double mean = acc[r] / n_draws;
            double se = model.q[r] * dt * std::sqrt(2.0 / n_draws);
            CHECK(std::abs(mean - model.q[r] * dt) < 3.0 * se);
        }
    }

    SUBCASE("real torus noise fills complex bins at variance q dt") {
        SpectralBasis basis(Domain::Torus, 1, 8);
        NoiseModel model = build_noise(basis, 1.0, 1.0, NoiseType::Multiplicative, true, 8);
        const auto& sorted = basis.sorted_modes();
        const int n = 20000;
        IncrementPlan p2{77, 0, n, double(n) * 1e-3};
        std::vector<double> acc(8, 0.0);
        for (int s = 0; s < n; ++s) {
            Field dw = sample_increment(model, p2, s, 0);
            for (int r = 0; r < 8; ++r) acc[r] += std::norm(dw.coeffs()[sorted[r]]);
        }
        for (int r = 0; r < 8; ++r) {
            double mean = acc[r] / n;
            double expect = model.q[r] * p2.dt_fine();
            CHECK(std::abs(mean - expect) < 4.0 * expect * std::sqrt(2.0 / n));
        }
    }
}

TEST_CASE("real-valued noise gives real grid increments") {
    SpectralBasis basis(Domain::Torus, 1, 16);
    NoiseModel model = build_noise(basis, 1.0, 1.0, NoiseType::Multiplicative, true, 16);
    IncrementPlan plan{5, 3, 32, 0.032};
    Field dw = sample_increment(model, plan, 7, 0);
    auto values = to_physical(dw);
    double scale = 0.0;
    for (auto v : values) scale = std::max(scale, std::abs(v));
    for (auto v : values) CHECK(std::abs(v.imag()) < 1e-13 * std::max(1.0, scale));
}

TEST_CASE("coarse increments telescope over their fine constituents") {
    SpectralBasis basis(Domain::Sine, 1, 8);
    NoiseModel model = build_noise(basis, 1.0, 1.0, NoiseType::Multiplicative, true, 8);
    IncrementPlan plan{99, 4, 64, 1.0};

    SUBCASE("refinement 1 equals the finest sample") {
        for (int s = 0; s < 5; ++s) {
            Field a = sample_increment(model, plan, s, 0);
            Field b = aggregate_increments(model, plan, s, 1);
            for (int j = 0; j < 8; ++j) CHECK(a.coeffs()[j] == b.coeffs()[j]);
        }
    }

    SUBCASE("refinement 16 equals the sum of 16 fine calls") {
        Field coarse = aggregate_increments(model, plan, 1, 16);
        Field sum(basis);
        for (int s = 16; s < 32; ++s) sum += sample_increment(model, plan, s, 0);
        for (int j = 0; j < 8; ++j)
            CHECK(std::abs(coarse.coeffs()[j] - sum.coeffs()[j]) <= 1e-14);
    }

    SUBCASE("levels compose: level 2 equals four level-0 steps") {
        Field coarse = sample_increment(model, plan, 3, 2);
        Field sum(basis);
        for (int s = 12; s < 16; ++s) sum += sample_increment(model, plan, s, 0);
        for (int j = 0; j < 8; ++j)
            CHECK(std::abs(coarse.coeffs()[j] - sum.coeffs()[j]) <= 1e-14);
    }

    SUBCASE("out-of-horizon step index is rejected") {
        CHECK_THROWS_AS(sample_increment(model, plan, 64, 0), std::out_of_range);
        CHECK_THROWS_AS(aggregate_increments(model, plan, 3, 32), std::out_of_range);
    }
}

TEST_CASE("distinct paths are empirically independent") {
    SpectralBasis basis(Domain::Sine, 1, 2);
    std::vector<double> q = {1.0, 0.0};
    NoiseModel model = build_noise(basis, q, NoiseType::Multiplicative, true, 2);
    const int n = 10000;
    IncrementPlan plan_a{31415, 0, n, 1.0};
    IncrementPlan plan_b{31415, 1, n, 1.0};
    double sa = 0.0, sb = 0.0, saa = 0.0, sbb = 0.0, sab = 0.0;
    for (int s = 0; s < n; ++s) {
        double a = sample_increment(model, plan_a, s, 0).coeffs()[0].real();
        double b = sample_increment(model, plan_b, s, 0).coeffs()[0].real();
        sa += a; sb += b; saa += a * a; sbb += b * b; sab += a * b;
    }
    double cov = sab / n - (sa / n) * (sb / n);
    double va = saa / n - (sa / n) * (sa / n);
    double vb = sbb / n - (sb / n) * (sb / n);
    CHECK(std::abs(cov / std::sqrt(va * vb)) < 0.05);
}

TEST_CASE("draws are pure functions of (seed, path, step, mode)") {
    auto a = gaussian_pair(42, 7, 1000, 3);
    // interleave unrelated draws, then repeat
    gaussian_pair(42, 7, 999, 3);
    gaussian_pair(1, 0, 0, 0);
    auto b = gaussian_pair(42, 7, 1000, 3);
    CHECK(a[0] == b[0]);
    CHECK(a[1] == b[1]);
    // any coordinate change gives a different draw
    CHECK(gaussian_pair(43, 7, 1000, 3)[0] != a[0]);
    CHECK(gaussian_pair(42, 8, 1000, 3)[0] != a[0]);
    CHECK(gaussian_pair(42, 7, 1001, 3)[0] != a[0]);
    CHECK(gaussian_pair(42, 7, 1000, 4)[0] != a[0]);
}

TEST_CASE("trace condition check flags slowly convergent covariances") {
    SpectralBasis basis(Domain::Torus, 1, 256);
    NoiseModel fast = build_noise(basis, 2.0, 1.0, NoiseType::Multiplicative, true, 256);
    CHECK_FALSE(trace_check(fast, 1.0).warning);
    NoiseModel flat = build_noise(basis, 0.0, 1.0, NoiseType::Multiplicative, true, 256);
    CHECK(trace_check(flat, 1.0).warning);
    CHECK(trace_check(flat, 1.0).partial_sums.size() == 256);
}
