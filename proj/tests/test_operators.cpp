#include "doctest.h"

#include "dnls/conservation.hpp"
#include "dnls/exact_solutions.hpp"
#include "dnls/operators.hpp"
#include "gen.hpp"

using namespace dnls;

TEST_SUITE("operators") {

TEST_CASE("spectral parameter branch") {
    for (double k : {1.0, 2.5, -1.0, -7.0}) {
        const SpectralParam p = spectral(k);
        CHECK(std::abs(p.sqrt_kappa * p.sqrt_kappa - k) < 1e-14);
        if (k < 0) CHECK(p.sqrt_kappa.real() == 0.0);
    }
    CHECK_THROWS_AS(spectral(0.5), std::invalid_argument);
    CHECK_THROWS_AS(spectral(-0.99), std::invalid_argument);
}

TEST_CASE("zero potential") {
    const Field z(make_grid(64, 10.0));
    const SpectralParam k = spectral(2.0);
    CHECK(hs_norm(build_lambda(k, z)) == 0.0);
    CHECK(op_norm(build_gamma(k, z)) == 0.0);
    CHECK(std::abs(det_a(k, z).a - 1.0) < 1e-15);
    CHECK(std::abs(A_value(k, z).A) < 1e-15);
    CHECK(std::abs(A_series(k, z).A) < 1e-15);
}

TEST_CASE("single mode gives a single diagonal") {
    const Grid g = make_grid(64, 2 * kPi);
    const int m0 = 3;
    const cplx c(0.7, -0.2);
    const Field q = sample(g, [&](double x) { return c * std::exp(kI * double(m0) * x); });
    const SpectralParam k = spectral(2.0);
    const DenseOperator Lam = build_lambda(k, q);
    const int n = g.n();
    for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) {
            const cplx e = Lam.matrix(r, s);
            if (r - s != m0) {
                CHECK(std::abs(e) < 1e-14);
                continue;
            }
            const double xi = r - n / 2, eta = s - n / 2;
            const cplx want = c / (std::sqrt(cplx(2.0, -xi)) * std::sqrt(cplx(2.0, eta)));
            CHECK(std::abs(e - want) < 1e-12);
        }
}

TEST_CASE("Hilbert-Schmidt norms of Lambda and Gamma coincide") {
    gen::Rng r(31);
    const Grid g = make_grid(128, 20.0);
    for (int trial = 0; trial < 6; ++trial) {
        const Field q = gen::bumps(r, g, r.uniform(0.1, 1.0), r.integer(1, 3));
        for (double kap : {1.0, 3.0, -2.0}) {
            const SpectralParam k = spectral(kap);
            const double a = hs_norm(build_lambda(k, q)), b = hs_norm(build_gamma(k, q));
            CHECK(std::abs(a - b) < 1e-10 * (1 + a));
        }
    }
}

TEST_CASE("HS norm tracks its log-weighted integrand across kappa") {
    const Grid g = make_grid(256, 20.0);
    const Field q = gen::gaussian(g, 0.5, 0.5);
    std::vector<double> ratio;
    for (double kap : {1.0, 2.0, 4.0, 8.0})
        ratio.push_back(std::pow(hs_norm(build_lambda(spectral(kap), q)), 2) / hs_integrand(q, kap));
    const auto [lo, hi] = std::minmax_element(ratio.begin(), ratio.end());
    CHECK(*hi / *lo < 1.5);
}

TEST_CASE("sqrt(kappa) op norm decays") {
    const Grid g = make_grid(256, 20.0);
    const Field q = gen::gaussian(g, 0.8, 0.3);
    double prev = 1e300;
    for (double kap : {1.0, 4.0, 16.0, 64.0}) {
        const double v = std::sqrt(kap) * op_norm(build_lambda(spectral(kap), q));
        CHECK(v < prev);
        prev = v;
    }
    CHECK(prev < 0.25);
}

TEST_CASE("series and determinant agree on small data") {
    const Grid g = make_grid(256, 16.0);
    const Field q = gen::gaussian(g, 0.1, 0.5);
    const SpectralParam k = spectral(4.0);
    const SeriesResult s = A_series(k, q);
    const AValue a = A_value(k, q);
    CHECK(s.convergent);
    CHECK(std::abs(s.A - a.A) < 1e-10);
    CHECK(std::abs(s.A - a.A) <= s.tail_bound + s.rounding + a.rounding);
}

TEST_CASE("Fredholm and Jost routes agree") {
    gen::Rng r(9);
    const Grid g = make_grid(256, 24.0);
    for (int trial = 0; trial < 3; ++trial) {
        const Field q = gen::bumps(r, g, r.uniform(0.2, 0.8), 2, 1.5);
        for (double kap : {2.0, -3.0}) {
            const SpectralParam k = spectral(kap);
            const AValue f = A_value(k, q, ARoute::fredholm), j = A_value(k, q, ARoute::jost);
            CHECK(std::abs(f.A - j.A) < 1e-8);
        }
    }
}

TEST_CASE("reflection symmetry of A") {
    gen::Rng r(12);
    const Grid g = make_grid(256, 24.0);
    for (int trial = 0; trial < 4; ++trial) {
        const Field q = gen::bumps(r, g, r.uniform(0.2, 1.0), 2, 1.5);
        for (double kap : {1.5, 4.0}) {
            const cplx p = A_value(spectral(kap), q, ARoute::jost).A;
            const cplx m = A_value(spectral(-kap), q, ARoute::jost).A;
            CHECK(std::abs(p + std::conj(m)) < 1e-10 * (1 + std::abs(p)));
        }
    }
}

TEST_CASE("determinant is stable under grid refinement") {
    const Field q = gen::gaussian(make_grid(128, 16.0), 0.4, 0.5);
    const Field q2 = resample(q, 256);
    const SpectralParam k = spectral(2.0);
    CHECK(std::abs(det_a(k, q).a - det_a(k, q2).a) < 1e-8);
}

TEST_CASE("large-kappa expansion") {
    const Grid g = make_grid(256, 16.0);
    const Field q = gen::gaussian(g, 0.5, 0.5);
    SUBCASE("leading terms") {
        const double M = mass(q), H = hamiltonian(q);
        const cplx A32 = A_value(spectral(32.0), q, ARoute::jost).A;
        const cplx A64 = A_value(spectral(64.0), q, ARoute::jost).A;
        // Richardson in 1/kappa on the imaginary part, whose 1/kappa term vanishes
        CHECK(std::abs((4 * A64.imag() - A32.imag()) / 3 - M / 2) < 1e-4);
        CHECK(std::abs(4 * 64 * A64.real() - H) < 1e-3);
    }
    SUBCASE("residual decays like kappa^-3") {
        const Report rep = asymptotic_residual(q, {8, 16, 32, 64}, ARoute::jost);
        CHECK(rep.all_pass());
        const Table& t = rep.find_table("expansion");
        for (size_t i = 1; i < t.rows.size(); ++i) {
            const double ratio = t.rows[i - 1][3] / t.rows[i][3];
            CHECK(ratio > 6.5);
            CHECK(ratio < 9.7);
        }
    }
    SUBCASE("zero data") {
        const Report rep = asymptotic_residual(Field(g), {8, 16});
        for (const auto& row : rep.find_table("expansion").rows) CHECK(row[3] == 0.0);
    }
}

TEST_CASE("algebraic soliton determinant is one") {
    const Grid g = make_grid(32768, 4096.0);
    const Field qa = algebraic_soliton(0.0, g);
    const AValue a = A_value(spectral(2.0), qa, ARoute::jost);
    CHECK(std::abs(std::exp(-a.A) - 1.0) < 5e-2);
}

TEST_CASE("rescaling") {
    gen::Rng r(44);
    const Grid g = make_grid(256, 32.0);
    const Field q = gen::bumps(r, g, 1.0, 3);
    CHECK(gen::dist(rescale(q, 1.0), q) == 0.0);
    for (double lam : {0.5, 2.0, 8.0}) CHECK(std::abs(mass(rescale(q, lam)) - mass(q)) < 1e-10 * mass(q));
    CHECK_THROWS_AS(rescale(q, 0.0), std::invalid_argument);

    const GoodRescaling gr = rescale_to_good({gen::gaussian(g, 1.0, 0.5)}, 0.05, 0.25);
    CHECK(gr.lambda < 1.0);
    CHECK(std::log2(gr.lambda) == doctest::Approx(std::round(std::log2(gr.lambda))));
    CHECK(goodness(gr.members[0], 0.25) <= 0.05 * 0.05);
    // one halving less is not good enough
    CHECK(goodness(rescale(gen::gaussian(g, 1.0, 0.5), 2 * gr.lambda), 0.25) > 0.05 * 0.05);
    CHECK_THROWS_AS(rescale_to_good({}, 0.05), std::invalid_argument);
    CHECK_THROWS_AS(rescale_to_good({q}, 0.0), std::invalid_argument);
}

}
