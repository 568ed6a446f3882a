#include "dnls/microlaws.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dnls {

namespace {

CArray denom(const GreenTriple& t) {
    const CArray d = t.kappa.sqrt_kappa * (2.0 + t.gamma.v);
    const double low = (2.0 + t.gamma.v).abs().minCoeff();
    if (!(low >= 0.5))
        throw std::runtime_error("microlaws: |2 + gamma| = " + fmt(low) + " < 0.5, outside the validity regime");
    return d;
}

}  // namespace

GreenTriple reflect(const GreenTriple& t) {
    GreenTriple r;
    r.kappa = spectral(-t.kappa.kappa);
    r.g12 = Field(t.g12.grid, -t.g21.v.conjugate());
    r.g21 = Field(t.g12.grid, -t.g12.v.conjugate());
    r.gamma = Field(t.g12.grid, t.gamma.v.conjugate());
    return r;
}

Field rho(const GreenTriple& t, const Field& q) {
    const CArray d = denom(t);
    return Field(q.grid, (q.v * kI * t.g21.v + q.v.conjugate() * t.g12.v) / d);
}

Field rho(const SpectralParam& k, const Field& q) { return rho(green_diagonal(k, q), q); }

Field j_dnls(const GreenTriple& t, const Field& q, CurrentForm form) {
    const Grid& g = q.grid;
    const CArray d = denom(t);
    const CArray a2 = q.abs2().cast<cplx>();
    const CArray qx = deriv(q).v;
    const double k = t.kappa.kappa;
    if (form == CurrentForm::first) {
        const CArray r = rho(t, q).v;
        return Field(g, (a2 - 2.0 * kI * k) * r + (qx * t.g21.v + kI * qx.conjugate() * t.g12.v) / d + kI * a2);
    }
    const CArray qb = q.v.conjugate();
    return Field(g, t.g21.v / d * (2.0 * k * q.v + qx + kI * a2 * q.v) -
                        kI * t.g12.v / d * (2.0 * k * qb - qx.conjugate() + kI * a2 * qb) + kI * a2);
}

Field j_dnls(const SpectralParam& k, const Field& q, CurrentForm form) {
    return j_dnls(green_diagonal(k, q), q, form);
}

Field j_diff(const GreenTriple& a, const GreenTriple& p, const GreenTriple& m, const Field& q) {
    const double kap = a.kappa.kappa;
    const double kk = p.kappa.kappa;
    if (!(kk > 0) || m.kappa.kappa != -kk) throw std::invalid_argument("j_diff: triples must sit at +-kappa, kappa > 0");
    if (std::abs(std::abs(kap) - kk) < 1e-12 * kk) throw std::invalid_argument("j_diff: k = +-kappa is a pole");
    const Grid& g = q.grid;
    const CArray d = denom(a);
    const CArray a2 = q.abs2().cast<cplx>();
    const CArray qx = deriv(q).v;
    const CArray qb = q.v.conjugate();
    const double k52 = kk * kk * std::sqrt(kk);
    const CArray t1 = a.g21.v / d *
                      ((2.0 * kap * q.v + qx + kI * a2 * q.v) - 2.0 * k52 * (p.g12.v / (kk - kap) - kI * m.g12.v / (kk + kap)));
    const CArray t2 = -kI * a.g12.v / d *
                      ((2.0 * kap * qb - qx.conjugate() + kI * a2 * qb) -
                       2.0 * k52 * (m.g21.v / (kk + kap) + kI * p.g21.v / (kk - kap)));
    return Field(g, t1 + t2 + kI * a2 - kk * kk / (kk - kap) * p.gamma.v + kk * kk / (kk + kap) * m.gamma.v);
}

Field j_diff(const SpectralParam& k, const SpectralParam& kappa, const Field& q) {
    const GreenTriple p = green_diagonal(kappa, q);
    return j_diff(green_diagonal(k, q), p, reflect(p), q);
}

namespace {

struct LawFields {
    CArray rho, jx;
};

LawFields law_fields(const Field& q, const SpectralParam& k, MicroLaw law, double kappa) {
    const GreenTriple a = green_diagonal(k, q);
    LawFields f;
    f.rho = rho(a, q).v;
    Field j;
    if (law == MicroLaw::dnls) {
        j = j_dnls(a, q);
    } else {
        const GreenTriple p = green_diagonal(spectral(kappa), q);
        j = j_diff(a, p, reflect(p), q);
    }
    f.jx = deriv(j).v;
    return f;
}

}  // namespace

double micro_residual(const Trajectory& traj, const SpectralParam& k, MicroLaw law, double kappa,
                      bool check_metadata) {
    const size_t m = traj.fields.size();
    if (m < 3) throw std::invalid_argument("micro_residual: need at least 3 snapshots");
    if (law == MicroLaw::diff && !(kappa > 0)) throw std::invalid_argument("micro_residual: diff law needs kappa > 0");
    if (check_metadata) {
        const FlowKind want = law == MicroLaw::dnls ? FlowKind::dnls : FlowKind::diff;
        if (traj.spec.kind != want)
            throw std::invalid_argument("micro_residual: law does not match the trajectory flow (" +
                                        to_string(traj.spec.kind) + ")");
        if (law == MicroLaw::diff && traj.spec.kappa != kappa)
            throw std::invalid_argument("micro_residual: kappa differs from the trajectory's");
    }
    const double dt = traj.record_dt();
    for (size_t i = 1; i < m; ++i)
        if (std::abs(traj.times[i] - traj.times[i - 1] - dt) > 1e-9 * std::abs(dt))
            throw std::invalid_argument("micro_residual: snapshots are not uniform in time");
    std::vector<LawFields> f;
    f.reserve(m);
    for (const Field& q : traj.fields) f.push_back(law_fields(q, k, law, kappa));
    const Grid& g = traj.fields[0].grid;
    double res = 0.0, scale = 0.0;
    for (size_t i = 1; i + 1 < m; ++i) {
        const CArray rt = (f[i + 1].rho - f[i - 1].rho) / (2.0 * dt);
        res = std::max(res, l2_norm(Field(g, rt + f[i].jx)));
        // ||rho|| keeps the scale honest for stationary data, where d_x j is ~0
        scale = std::max({scale, l2_norm(Field(g, f[i].jx)), l2_norm(Field(g, f[i].rho))});
    }
    return scale > 0 ? res / scale : res;
}

Report micro_report(const Trajectory& traj, const SpectralParam& k, MicroLaw law, double kappa, double tol) {
    Report rep;
    rep.scenario = "micro_laws";
    rep.param("law", law == MicroLaw::dnls ? "dnls" : "diff");
    rep.param("k", k.kappa);
    if (law == MicroLaw::diff) rep.param("kappa", kappa);
    rep.param("record_dt", traj.record_dt());
    const double r = micro_residual(traj, k, law, kappa);
    rep.scalar("residual", r);
    if (law == MicroLaw::diff) {
        const Field& q = traj.fields.front();
        const GreenTriple p = green_diagonal(spectral(kappa), q);
        const GreenTriple fresh = green_diagonal(spectral(-kappa), q);
        const GreenTriple refl = reflect(p);
        auto gap = [&](const Field& a, const Field& b) { return l2_norm(Field(q.grid, a.v - b.v)); };
        const double c = std::max({gap(refl.g12, fresh.g12), gap(refl.g21, fresh.g21), gap(refl.gamma, fresh.gamma)});
        rep.scalar("reflection_crosscheck", c);
        rep.less("reflection_crosscheck", c, 1e-10, "g(-kappa) from symmetry equals a fresh solve");
    }
    const Field& q = traj.fields.front();
    const double forms = l2_norm(Field(q.grid, j_dnls(k, q, CurrentForm::first).v - j_dnls(k, q, CurrentForm::second).v));
    rep.scalar("current_forms_gap", forms);
    rep.less("current_forms_agree", forms, 1e-10, "both forms of the DNLS current are equal");
    rep.less("conservation_law", r, tol,
             law == MicroLaw::dnls ? "d_t rho(k) + d_x j_dnls(k) = 0" : "d_t rho(k) + d_x j_diff(k, kappa) = 0");
    return rep;
}

}  // namespace dnls
