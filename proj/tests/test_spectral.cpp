// Spectral core: eigenvalues, transforms, free flow, projection, norms.
// Expected values come from independent oracles: direct basis-function
// summation, composite quadrature, and closed-form integrals.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "snse/spectral.hpp"

using namespace snse;

namespace {

constexpr double kPi = 3.14159265358979323846;

// O(n^2) evaluation of a sine expansion at x, independent of the library path
cplx naive_sine_eval(const std::vector<cplx>& coeffs, double x) {
    cplx acc(0.0, 0.0);
    for (size_t j = 0; j < coeffs.size(); ++j)
        acc += coeffs[j] * std::sqrt(2.0 / kPi) * std::sin(double(j + 1) * x);
    return acc;
}

cplx naive_torus_eval(const SpectralBasis& basis, const std::vector<cplx>& coeffs,
                      double x, double y) {
    cplx acc(0.0, 0.0);
    for (int i = 0; i < basis.n_modes(); ++i) {
        auto k = basis.wave_vector(i);
        double phase = k[0] * x + k[1] * y;
        acc += coeffs[i] * cplx(std::cos(phase), std::sin(phase));
    }
    return acc / std::pow(2.0 * kPi, 0.5 * basis.dim());
}

Field random_field(const SpectralBasis& basis, std::mt19937& gen, double scale = 1.0) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Field f(basis);
    for (auto& c : f.coeffs()) c = scale * cplx(normal(gen), normal(gen));
    return f;
}

}  // namespace

TEST_CASE("sine basis eigenvalues are j^2") {
    SpectralBasis basis(Domain::Sine, 1, 8);
    REQUIRE(basis.n_modes() == 8);
    for (int j = 1; j <= 8; ++j)
        CHECK(basis.eigenvalue(j - 1) == doctest::Approx(double(j) * j).epsilon(0));
    // sorted order is the natural order
    for (int r = 0; r < 8; ++r) CHECK(basis.sorted_modes()[r] == r);
    CHECK(basis.lambda_M(8) == 64.0);
    CHECK(basis.measure() == doctest::Approx(kPi));
}

TEST_CASE("torus 1d wave-vectors and zero mode") {
    SpectralBasis basis(Domain::Torus, 1, 8);
    std::vector<int> waves;
    for (int i = 0; i < 8; ++i) waves.push_back(basis.wave_vector(i)[0]);
    std::sort(waves.begin(), waves.end());
    CHECK(waves == std::vector<int>{-4, -3, -2, -1, 0, 1, 2, 3});
    // rank 0 is the zero mode with zero eigenvalue
    CHECK(basis.eigenvalue(basis.sorted_modes()[0]) == 0.0);
    // eigenvalue ties resolved lexicographically: -1 before +1
    CHECK(basis.wave_vector(basis.sorted_modes()[1])[0] == -1);
    CHECK(basis.wave_vector(basis.sorted_modes()[2])[0] == 1);
    CHECK(basis.lambda_M(8) == 16.0);
}

TEST_CASE("torus 2d mode count and lambda_(1,1)") {
    SpectralBasis basis(Domain::Torus, 2, 4);
    CHECK(basis.n_modes() == 16);
    bool found = false;
    for (int i = 0; i < 16; ++i) {
        auto k = basis.wave_vector(i);
        if (k[0] == 1 && k[1] == 1) {
            found = true;
            CHECK(basis.eigenvalue(i) == 2.0);
        }
    }
    CHECK(found);
}

TEST_CASE("unsupported domain combinations are rejected") {
    CHECK_THROWS_AS(SpectralBasis(Domain::Sine, 2, 8), ConfigError);
    CHECK_THROWS_AS(SpectralBasis(Domain::Torus, 3, 8), ConfigError);
    CHECK_THROWS_AS(SpectralBasis(Domain::Torus, 1, 12), ConfigError);  // not a power of 2
}

TEST_CASE("single sine mode transforms to sqrt(2/pi) sin(x)") {
    SpectralBasis basis(Domain::Sine, 1, 16);
    Field f(basis);
    f.coeffs()[0] = 1.0;
    auto values = to_physical(f);
    for (int m = 0; m < basis.n_grid(); ++m) {
        double x = basis.grid_point(m)[0];
        CHECK(values[m].real() ==
              doctest::Approx(std::sqrt(2.0 / kPi) * std::sin(x)).epsilon(1e-13));
        CHECK(values[m].imag() == doctest::Approx(0.0).epsilon(1e-15));
    }
}

TEST_CASE("zero coefficients give zero grid values") {
    for (auto domain : {Domain::Sine, Domain::Torus}) {
        SpectralBasis basis(domain, 1, 8);
        Field f(basis);
        for (auto v : to_physical(f)) CHECK(std::abs(v) == 0.0);
    }
}

TEST_CASE("transforms agree with naive basis summation") {
    std::mt19937 gen(7);
    SpectralBasis sine(Domain::Sine, 1, 16);
    Field f = random_field(sine, gen);
    auto values = to_physical(f);
    for (int m = 0; m < sine.n_grid(); ++m) {
        cplx expect = naive_sine_eval(f.coeffs(), sine.grid_point(m)[0]);
        CHECK(std::abs(values[m] - expect) < 1e-12);
    }

    SpectralBasis torus(Domain::Torus, 2, 4);
    Field g = random_field(torus, gen);
    auto gv = to_physical(g);
    for (int m = 0; m < torus.n_grid(); ++m) {
        auto pt = torus.grid_point(m);
        cplx expect = naive_torus_eval(torus, g.coeffs(), pt[0], pt[1]);
        CHECK(std::abs(gv[m] - expect) < 1e-12);
    }
}

TEST_CASE("round trip is the identity on 1000 random fields") {
    std::mt19937 gen(42);
    SpectralBasis sine(Domain::Sine, 1, 32);
    SpectralBasis torus1(Domain::Torus, 1, 32);
    SpectralBasis torus2(Domain::Torus, 2, 8);
    const SpectralBasis* bases[] = {&sine, &torus1, &torus2};
    for (int trial = 0; trial < 1000; ++trial) {
        const SpectralBasis& basis = *bases[trial % 3];
        Field f = random_field(basis, gen);
        Field back = to_spectral(basis, to_physical(f));
        double num = 0.0, den = 0.0;
        for (int i = 0; i < basis.n_modes(); ++i) {
            num += std::norm(back.coeffs()[i] - f.coeffs()[i]);
            den += std::norm(f.coeffs()[i]);
        }
        CHECK(std::sqrt(num / den) < 1e-12);
    }
}

TEST_CASE("basis functions are discretely orthonormal") {
    SpectralBasis sine(Domain::Sine, 1, 16);
    // quadrature inner products of e_j against e_k
    for (int j = 0; j < 16; ++j) {
        Field ej(sine);
        ej.coeffs()[j] = 1.0;
        auto vj = to_physical(ej);
        for (int k = j; k < 16; ++k) {
            Field ek(sine);
            ek.coeffs()[k] = 1.0;
            auto vk = to_physical(ek);
            double ip = 0.0;
            for (int m = 0; m < sine.n_grid(); ++m)
                ip += sine.quad_weight() * (std::conj(vj[m]) * vk[m]).real();
            CHECK(ip == doctest::Approx(j == k ? 1.0 : 0.0).epsilon(1e-12));
        }
    }
    SpectralBasis torus(Domain::Torus, 1, 8);
    for (int j = 0; j < 8; ++j)
        for (int k = 0; k < 8; ++k) {
            Field ej(torus), ek(torus);
            ej.coeffs()[j] = 1.0;
            ek.coeffs()[k] = 1.0;
            auto vj = to_physical(ej);
            auto vk = to_physical(ek);
            cplx ip(0.0, 0.0);
            for (int m = 0; m < 8; ++m)
                ip += torus.quad_weight() * std::conj(vj[m]) * vk[m];
            CHECK(std::abs(ip - (j == k ? 1.0 : 0.0)) < 1e-12);
        }
}

TEST_CASE("free flow phases, unitarity and group property") {
    SpectralBasis basis(Domain::Sine, 1, 8);
    Field f(basis);
    f.coeffs()[0] = 1.0;

    SUBCASE("t = 0 is the identity") {
        Field g = free_flow(f, 0.0);
        CHECK(g.coeffs()[0] == cplx(1.0, 0.0));
    }
    SUBCASE("mode 1 at t = pi picks up e^{-i pi} = -1") {
        Field g = free_flow(f, kPi);
        CHECK(g.coeffs()[0].real() == doctest::Approx(-1.0).epsilon(1e-14));
        CHECK(std::abs(g.coeffs()[0].imag()) < 1e-14);
    }
    SUBCASE("norm preserved and group composition on random fields") {
        std::mt19937 gen(3);
        for (int trial = 0; trial < 1000; ++trial) {
            Field u = random_field(basis, gen);
            double n0 = l2_norm(u);
            Field v = free_flow(u, 0.37);
            CHECK(l2_norm(v) == doctest::Approx(n0).epsilon(1e-14));
            Field w1 = free_flow(free_flow(u, 0.2), 0.17);
            Field w2 = free_flow(u, 0.37);
            double diff = 0.0;
            for (int i = 0; i < 8; ++i) diff += std::norm(w1.coeffs()[i] - w2.coeffs()[i]);
            CHECK(std::sqrt(diff) < 1e-12 * std::max(1.0, n0));
        }
    }
}

TEST_CASE("projection: identity, annihilation, contraction, idempotence, self-adjointness") {
    SpectralBasis basis(Domain::Torus, 1, 16);
    std::mt19937 gen(5);
    Field u = random_field(basis, gen);

    Field full = project_modes(u, basis.n_modes());
    for (int i = 0; i < 16; ++i) CHECK(full.coeffs()[i] == u.coeffs()[i]);

    // a field supported on mode rank M alone projects to zero under P^M
    int M = 5;
    Field single(basis);
    single.coeffs()[basis.sorted_modes()[M]] = 1.0;
    CHECK(l2_norm(project_modes(single, M)) == 0.0);

    Field pu = project_modes(u, M);
    CHECK(l2_norm(pu) <= l2_norm(u));
    Field ppu = project_modes(pu, M);
    for (int i = 0; i < 16; ++i) CHECK(ppu.coeffs()[i] == pu.coeffs()[i]);

    Field v = random_field(basis, gen);
    cplx ip1(0.0, 0.0), ip2(0.0, 0.0);
    Field pv = project_modes(v, M);
    for (int i = 0; i < 16; ++i) {
        ip1 += std::conj(pu.coeffs()[i]) * v.coeffs()[i];
        ip2 += std::conj(u.coeffs()[i]) * pv.coeffs()[i];
    }
    CHECK(std::abs(ip1 - ip2) < 1e-12);

    CHECK_THROWS_AS(project_modes(u, 0), ConfigError);
    CHECK_THROWS_AS(project_modes(u, 17), ConfigError);
}

TEST_CASE("projection tail bound lambda_M^{-s/2} on manufactured decay") {
    // coefficients (1+lambda_j)^{-2}: the H^s norm is finite for s < 3.5,
    // so the tail obeys ||(I-P^M)w|| <= lambda_M^{-s/2} ||w||_{H^s} for s
    // slightly below that.
    SpectralBasis basis(Domain::Sine, 1, 512);
    Field w(basis);
    for (int j = 0; j < basis.n_modes(); ++j)
        w.coeffs()[j] = std::pow(1.0 + basis.eigenvalue(j), -2.0);
    double s = 3.0;
    double ws = hs_norm(w, s);
    for (int M : {8, 16, 32, 64, 128}) {
        Field tail = w - project_modes(w, M);
        CHECK(l2_norm(tail) <= std::pow(basis.lambda_M(M), -0.5 * s) * ws);
    }
}

TEST_CASE("norms: closed-form values and consistency") {
    SpectralBasis basis(Domain::Sine, 1, 64);

    SUBCASE("normalized first mode: L2 = 1, H1 = sqrt(2)") {
        Field f(basis);
        f.coeffs()[0] = 1.0;
        CHECK(l2_norm(f) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(hs_norm(f, 1.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    }

    SUBCASE("u = sin(x): L4 norm equals (3 pi / 8)^{1/4}") {
        Field f(basis);
        f.coeffs()[0] = std::sqrt(kPi / 2.0);  // sin = sqrt(pi/2) e_1
        // oracle: composite Simpson quadrature of sin^4 over (0, pi)
        int n = 20000;
        double h = kPi / n, integral = 0.0;
        for (int i = 0; i <= n; ++i) {
            double wq = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
            integral += wq * std::pow(std::sin(i * h), 4.0);
        }
        integral *= h / 3.0;
        CHECK(integral == doctest::Approx(3.0 * kPi / 8.0).epsilon(1e-10));
        CHECK(lp_norm(f, 4.0) ==
              doctest::Approx(std::pow(3.0 * kPi / 8.0, 0.25)).epsilon(1e-6));
    }

    SUBCASE("zero field has zero norm of every kind") {
        Field f(basis);
        CHECK(l2_norm(f) == 0.0);
        CHECK(hs_norm(f, 2.0) == 0.0);
        CHECK(lp_norm(f, 4.0) == 0.0);
        CHECK(linf_norm(f) == 0.0);
    }

    SUBCASE("H0 equals L2, H1 dominates L2") {
        std::mt19937 gen(11);
        Field f = random_field(basis, gen);
        CHECK(hs_norm(f, 0.0) == doctest::Approx(l2_norm(f)).epsilon(1e-14));
        CHECK(hs_norm(f, 1.0) >= l2_norm(f));
    }

    SUBCASE("overflow-flagged field reports infinity") {
        Field f(basis);
        f.coeffs()[0] = 1.0;
        f.mark_overflowed();
        CHECK(std::isinf(l2_norm(f)));
        CHECK(std::isinf(linf_norm(f)));
    }
}

TEST_CASE("dealiased cubic nonlinearity is exact for retained modes") {
    // |u|^2 u of a J/4-supported torus field has frequencies within 3J/4;
    // with sigma+1 padding the inverse transform of the product matches the
    // naive convolution on the retained band.
    SpectralBasis basis(Domain::Torus, 1, 32);
    std::mt19937 gen(17);
    Field u(basis);
    for (int i = 0; i < 32; ++i) {
        auto k = basis.wave_vector(i);
        if (std::abs(k[0]) <= 4)
            u.coeffs()[i] = cplx(std::normal_distribution<double>()(gen),
                                 std::normal_distribution<double>()(gen));
    }
    Field f = nonlinearity(u, 1, 1.0, true);

    // oracle: dense evaluation of i |u|^2 u on a 4x finer grid via naive sums
    int fine = 128;
    double h = 2.0 * kPi / fine;
    std::vector<cplx> prod(fine);
    for (int m = 0; m < fine; ++m) {
        cplx val = naive_torus_eval(basis, u.coeffs(), m * h, 0.0);
        prod[m] = cplx(0.0, 1.0) * std::norm(val) * val;
    }
    // project the dense product onto each retained mode by quadrature
    for (int i = 0; i < 32; ++i) {
        auto k = basis.wave_vector(i);
        cplx acc(0.0, 0.0);
        for (int m = 0; m < fine; ++m) {
            double phase = -k[0] * (m * h);
            acc += prod[m] * cplx(std::cos(phase), std::sin(phase));
        }
        acc *= h / std::sqrt(2.0 * kPi);
        CHECK(std::abs(f.coeffs()[i] - acc) < 1e-10);
    }
}
