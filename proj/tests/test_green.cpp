#include "doctest.h"

#include "dnls/green.hpp"
#include "gen.hpp"

using namespace dnls;

TEST_SUITE("green") {

TEST_CASE("free Lax operator") {
    const Grid g = make_grid(64, 2 * kPi);
    const SpectralParam k = spectral(2.0);
    const DenseOperator L = build_lax(k, Field(g));
    const int n = g.n();
    CHECK(L.matrix.rows() == 2 * n);
    for (int r = 0; r < n; ++r) {
        const double xi = r == 0 ? 0.0 : r - n / 2;  // derivative symbols drop the Nyquist mode
        CHECK(std::abs(L.matrix(r, r) - cplx(2.0, -xi)) < 1e-14);
        CHECK(std::abs(L.matrix(n + r, n + r) + cplx(2.0, xi)) < 1e-14);
    }
    const double off = L.matrix.topRightCorner(n, n).norm() + L.matrix.bottomLeftCorner(n, n).norm();
    CHECK(off == 0.0);
    // normal with singular values |k -+ i xi|
    const Eigen::MatrixXcd M = L.matrix;
    CHECK((M * M.adjoint() - M.adjoint() * M).norm() < 1e-12);
}

TEST_CASE("Lax operator with a Gaussian is well conditioned") {
    const Grid g = make_grid(512, 32.0);
    const DenseOperator L = build_lax(spectral(2.0), gen::gaussian(g, 0.5, 0.5));
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(L.matrix);
    const auto& s = svd.singularValues();
    const double cond = s(0) / s(s.size() - 1);
    CHECK(std::isfinite(cond));
    CHECK(cond < 1e4);
}

TEST_CASE("zero potential gives zero Green functions") {
    const Grid g = make_grid(128, 20.0);
    for (GreenMethod m : {GreenMethod::jost, GreenMethod::dense}) {
        const GreenTriple t = green_diagonal(spectral(3.0), Field(g), m);
        CHECK(l2_norm(t.g12) == 0.0);
        CHECK(l2_norm(t.g21) == 0.0);
        CHECK(l2_norm(t.gamma) == 0.0);
    }
    const GreenSeries s = green_series(spectral(3.0), Field(g));
    CHECK(l2_norm(s.g12_1) + l2_norm(s.g12_3) + l2_norm(s.g21_1) + l2_norm(s.g21_3) + l2_norm(s.gamma_2) == 0.0);
}

TEST_CASE("linear term on a single mode") {
    const Grid g = make_grid(128, 20.0);
    const double xi0 = 5 * g.dxi();
    const cplx c(0.3, 0.1);
    const Field q = sample(g, [&](double x) { return c * std::exp(kI * xi0 * x); });
    const SpectralParam k = spectral(2.0);
    const GreenSeries s = green_series(k, q);
    const Field want(g, std::sqrt(2.0) * q.v / (4.0 - kI * xi0));
    CHECK(gen::dist(s.g12_1, want) < 1e-13);
}

TEST_CASE("perturbative limits") {
    const Grid g = make_grid(512, 32.0);
    const SpectralParam k = spectral(2.0);
    std::vector<double> e1, e3, eg;
    for (double eps : {0.2, 0.1, 0.05}) {
        const Field q = gen::gaussian(g, eps, 0.5);
        const GreenTriple t = green_diagonal(k, q);
        const GreenSeries s = green_series(k, q);
        e1.push_back(gen::dist(t.g12, s.g12_1));
        e3.push_back(gen::dist(Field(g, t.g12.v - s.g12_1.v), s.g12_3));
        eg.push_back(gen::dist(t.gamma, s.gamma_2));
    }
    for (size_t i = 1; i < e1.size(); ++i) {
        CHECK(e1[i - 1] / e1[i] == doctest::Approx(8.0).epsilon(0.1));    // O(eps^3)
        CHECK(e3[i - 1] / e3[i] == doctest::Approx(32.0).epsilon(0.15));  // O(eps^5)
        CHECK(eg[i - 1] / eg[i] == doctest::Approx(16.0).epsilon(0.1));   // O(eps^4)
    }
}

TEST_CASE("identities hold on random data") {
    gen::Rng r(123);
    const Grid g = make_grid(1024, 32.0);
    for (int trial = 0; trial < 4; ++trial) {
        const Field q = gen::bumps(r, g, r.uniform(0.2, 0.8), r.integer(1, 3), 2.0);
        const double kap = r.uniform(1.0, 6.0) * (trial % 2 ? -1 : 1);
        const SpectralParam k = spectral(kap);
        const GreenTriple t = green_diagonal(k, q);
        const Report rep = identity_residuals(t, q);
        for (const Verdict& v : rep.verdicts) {
            INFO(v.name << " = " << v.value << " at kappa " << kap);
            CHECK(v.pass);
        }
        CHECK(rep.get("min_abs_2_plus_gamma") > 1.0);
    }
}

TEST_CASE("quadratic identity detects a corrupted gamma") {
    const Grid g = make_grid(512, 32.0);
    const Field q = gen::gaussian(g, 0.5, 0.5);
    GreenTriple t = green_diagonal(spectral(2.0), q);
    CHECK(identity_residuals(t, q).get("quadratic") < 1e-10);
    t.gamma.v += 1e-3;
    // (gamma + d)^2/2 + gamma + d - identity = d (gamma + 1) + d^2/2, gamma small
    const double want = 1e-3 * std::sqrt(g.length());
    CHECK(identity_residuals(t, q).get("quadratic") == doctest::Approx(want).epsilon(0.05));
}

TEST_CASE("symmetry between kappa and -kappa") {
    gen::Rng r(6);
    const Grid g = make_grid(512, 32.0);
    const Field q = gen::bumps(r, g, 0.6, 2);
    for (double kap : {1.0, 3.0}) {
        const GreenTriple p = green_diagonal(spectral(kap), q), m = green_diagonal(spectral(-kap), q);
        CHECK(gen::dist(p.g12, Field(g, -m.g21.v.conjugate())) < 1e-9);
        CHECK(gen::dist(p.gamma, m.gamma.conj()) < 1e-9);
    }
}

TEST_CASE("dense and Jost routes agree to first order in 1/n") {
    const SpectralParam k = spectral(2.0);
    std::vector<double> err;
    for (int n : {128, 256}) {
        const Field q = gen::gaussian(make_grid(n, 16.0), 0.5, 0.5);
        err.push_back(gen::dist(green_diagonal(k, q, GreenMethod::dense).g12, green_diagonal(k, q).g12));
    }
    CHECK(err[1] < err[0]);
    CHECK(err[0] / err[1] == doctest::Approx(2.0).epsilon(0.3));
}

TEST_CASE("variational derivative") {
    const Grid g = make_grid(256, 16.0);
    const Field q = gen::gaussian(g, 0.5, 0.5);
    const Field f = sample(g, [](double x) { return std::exp(-(x - 0.5) * (x - 0.5)) * cplx(1.0, 0.3); });
    const Report rep = variational_check(spectral(4.0), q, f);
    CHECK(rep.all_pass());
    // central differences: error ratio about 100 between eps = 1e-3 and 1e-4
    CHECK(rep.get("residual_qbar_eps1") / rep.get("residual_qbar_eps2") > 30.0);
    const Report zero = variational_check(spectral(4.0), q, Field(g));
    CHECK(zero.all_pass());
}

}
