#include "doctest.h"

#include "dnls/exact_solutions.hpp"
#include "dnls/microlaws.hpp"
#include "gen.hpp"

using namespace dnls;

namespace {

Trajectory short_run(FlowKind kind, const Field& q, double dt, double kappa = 4.0, int steps = 8) {
    FlowSpec s;
    s.kind = kind;
    s.kappa = kappa;
    s.dt = dt;
    s.T = steps * dt;
    return evolve(s, q);
}

}  // namespace

TEST_SUITE("microlaws") {

TEST_CASE("zero field") {
    const Field z(make_grid(128, 20.0));
    const SpectralParam k = spectral(2.0);
    CHECK(l2_norm(rho(k, z)) == 0.0);
    CHECK(l2_norm(j_dnls(k, z)) == 0.0);
    CHECK(l2_norm(j_diff(k, spectral(4.0), z)) == 0.0);
    Trajectory tr;
    tr.spec.dt = 0.1;
    tr.times = {0.0, 0.1, 0.2};
    tr.fields = {z, z, z};
    CHECK(micro_residual(tr, k, MicroLaw::dnls) == 0.0);
}

TEST_CASE("density to leading order") {
    const Grid g = make_grid(512, 32.0);
    const SpectralParam k = spectral(2.0);
    std::vector<double> err;
    for (double eps : {0.2, 0.1, 0.05}) {
        const Field q = gen::gaussian(g, eps, 0.5);
        const GreenSeries s = green_series(k, q);
        // with gamma ~ 0 the fractions are g/2
        const CArray lead = (q.v * kI * s.g21_1.v + q.v.conjugate() * s.g12_1.v) / (2.0 * k.sqrt_kappa);
        err.push_back(gen::dist(rho(k, q), Field(g, lead)));
    }
    CHECK(err[0] / err[1] == doctest::Approx(16.0).epsilon(0.1));
    CHECK(err[1] / err[2] == doctest::Approx(16.0).epsilon(0.1));
}

TEST_CASE("the two current forms agree") {
    gen::Rng r(8);
    const Grid g = make_grid(512, 32.0);
    for (int trial = 0; trial < 4; ++trial) {
        const Field q = gen::bumps(r, g, r.uniform(0.2, 0.8), 2);
        const SpectralParam k = spectral(r.uniform(1.0, 4.0));
        const GreenTriple t = green_diagonal(k, q);
        const Field a = j_dnls(t, q, CurrentForm::first), b = j_dnls(t, q, CurrentForm::second);
        CHECK(gen::dist(a, b) < 1e-10 * (1 + l2_norm(a)));
    }
}

TEST_CASE("reflected triple matches a fresh solve") {
    const Grid g = make_grid(512, 32.0);
    const Field q = gen::gaussian(g, 0.6, 0.5);
    const GreenTriple p = green_diagonal(spectral(3.0), q);
    const GreenTriple m = green_diagonal(spectral(-3.0), q);
    const GreenTriple rf = reflect(p);
    CHECK(gen::dist(rf.g12, m.g12) < 1e-10);
    CHECK(gen::dist(rf.g21, m.g21) < 1e-10);
    CHECK(gen::dist(rf.gamma, m.gamma) < 1e-10);
    CHECK(rf.kappa.kappa == -3.0);
}

TEST_CASE("poles and validity") {
    const Grid g = make_grid(256, 32.0);
    const Field q = gen::gaussian(g, 0.3, 0.5);
    CHECK_THROWS_AS(j_diff(spectral(2.0), spectral(2.0), q), std::invalid_argument);
    CHECK_THROWS_AS(j_diff(spectral(-2.0), spectral(2.0), q), std::invalid_argument);
}

TEST_CASE("difference current vanishes as kappa grows") {
    // H - H_kappa generates a flow tending to the identity, so its current decays
    // (like kappa^-2); j_diff - j_dnls tends to -j_dnls, not to zero
    const Grid g = make_grid(512, 32.0);
    const Field q = gen::gaussian(g, 0.5, 0.5);
    const SpectralParam k = spectral(1.0);
    std::vector<double> nrm;
    for (double kap : {8.0, 16.0, 32.0}) nrm.push_back(l2_norm(j_diff(k, spectral(kap), q)));
    for (size_t i = 1; i < nrm.size(); ++i) CHECK(nrm[i - 1] / nrm[i] == doctest::Approx(4.0).epsilon(0.05));
    const double jd = l2_norm(j_dnls(k, q));
    CHECK(std::abs(gen::dist(j_diff(k, spectral(32.0), q), Field(g, -j_dnls(k, q).v)) - jd) < 0.01 * jd);
}

TEST_CASE("DNLS law is second order in dt") {
    const Grid g = make_grid(512, 32.0);
    const Field q = gen::gaussian(g, 0.5, 0.5);
    const SpectralParam k = spectral(2.0);
    const double r1 = micro_residual(short_run(FlowKind::dnls, q, 1e-3), k, MicroLaw::dnls);
    const double r2 = micro_residual(short_run(FlowKind::dnls, q, 5e-4), k, MicroLaw::dnls);
    CHECK(r1 < 1e-4);
    CHECK(r1 / r2 == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("laws detect the wrong flow") {
    const Grid g = make_grid(512, 32.0);
    const Field q = gen::gaussian(g, 0.5, 0.5);
    const SpectralParam k = spectral(1.0);
    const Trajectory dn = short_run(FlowKind::dnls, q, 1e-3);
    CHECK_THROWS_AS(micro_residual(dn, k, MicroLaw::diff, 4.0), std::invalid_argument);
    CHECK(micro_residual(dn, k, MicroLaw::diff, 4.0, false) > 0.1);
    const Trajectory df = short_run(FlowKind::diff, q, 1e-3);
    CHECK(micro_residual(df, k, MicroLaw::diff, 4.0) < 1e-4);
    CHECK(micro_residual(df, k, MicroLaw::dnls, 0.0, false) > 0.1);
}

TEST_CASE("residual is invariant under a global phase") {
    const Grid g = make_grid(512, 32.0);
    const Field q = gen::gaussian(g, 0.5, 0.5);
    const SpectralParam k = spectral(2.0);
    Trajectory tr = short_run(FlowKind::dnls, q, 1e-3, 4.0, 4);
    const double r0 = micro_residual(tr, k, MicroLaw::dnls);
    for (Field& f : tr.fields) f.v *= std::exp(kI * 0.9);
    CHECK(std::abs(micro_residual(tr, k, MicroLaw::dnls) - r0) < 1e-12);
}

TEST_CASE("stationary soliton law holds") {
    const Grid g = make_grid(512, 32.0);
    const Trajectory tr = short_run(FlowKind::dnls, stationary_soliton(0.0, g), 1e-3);
    const Report rep = micro_report(tr, spectral(2.0), MicroLaw::dnls, 0.0);
    CHECK(rep.all_pass());
}

}
