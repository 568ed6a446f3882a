#include "dnls/conservation.hpp"

#include <algorithm>
#include <stdexcept>

namespace dnls {

namespace {

cplx h_density_integral(const Field& q) {
    const CArray qx = deriv(q).v;
    const CArray qb = q.v.conjugate();
    const CArray dens = kI * (q.v * qx.conjugate() - qb * qx) + q.v.abs2().square().cast<cplx>();
    return -0.5 * integral(q.grid, dens);
}

cplx h2_density_integral(const Field& q) {
    const CArray qx = deriv(q).v;
    const CArray qb = q.v.conjugate();
    const CArray a2 = q.v.abs2().cast<cplx>();
    const CArray dens = qx.abs2().cast<cplx>() + 0.75 * kI * a2 * (q.v * qx.conjugate() - qb * qx) +
                        0.5 * a2 * a2 * a2;
    return integral(q.grid, dens);
}

}  // namespace

double mass(const Field& q) { return q.v.abs2().sum() * q.grid.dx(); }

double hamiltonian(const Field& q) { return h_density_integral(q).real(); }
double hamiltonian_imag(const Field& q) { return h_density_integral(q).imag(); }
double h2(const Field& q) { return h2_density_integral(q).real(); }
double h2_imag(const Field& q) { return h2_density_integral(q).imag(); }

Field mass_flux(const Field& q) {
    const CArray qx = deriv(q).v;
    const RArray a2 = q.v.abs2();
    CArray f = (2.0 * (qx * q.v.conjugate()).imag() + 1.5 * a2 * a2).cast<cplx>();
    return Field(q.grid, std::move(f));
}

double micro_mass_residual(const std::vector<Field>& snaps, double dt) {
    if (snaps.size() < 3) throw std::invalid_argument("micro_mass_residual: need at least 3 snapshots");
    double worst = 0.0, scale = 0.0;
    for (size_t i = 1; i + 1 < snaps.size(); ++i) {
        const RArray dt_rho = (snaps[i + 1].v.abs2() - snaps[i - 1].v.abs2()) / (2.0 * dt);
        const Field dflux = deriv(mass_flux(snaps[i]));
        const Field r(snaps[i].grid, dt_rho.cast<cplx>() + dflux.v);
        worst = std::max(worst, l2_norm(r));
        scale = std::max(scale, l2_norm(dflux));
    }
    return scale > 0 ? worst / scale : worst;
}

}  // namespace dnls
