// Acceptance harness: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "dnls/cli.hpp"
#include "dnls/conservation.hpp"
#include "dnls/exact_solutions.hpp"
#include "dnls/norms.hpp"
#include "dnls/operators.hpp"

using namespace dnls;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string failed_verdicts(const Report& r) {
    std::string out;
    for (const Verdict& v : r.verdicts)
        if (!v.pass) out += (out.empty() ? "" : "; ") + v.name + "=" + fmt(v.value);
    return out;
}

Outcome from_report(const Report& r, const std::string& summary) {
    return {r.all_pass(), r.all_pass() ? summary : summary + " | failed: " + failed_verdicts(r)};
}

double value_of(const Report& r, const std::string& verdict) {
    for (const Verdict& v : r.verdicts)
        if (v.name == verdict) return v.value;
    return std::nan("");
}

RunConfig scenario(const std::string& name) {
    RunConfig c;
    c.scenario = name;
    return c;
}

Outcome soliton_mass() {
    const Grid g = make_grid(2048, 64.0);
    double worst = 0;
    for (double th : {kPi / 16, kPi / 8, kPi / 4, 3 * kPi / 8}) {
        SolitonParams p;
        p.theta = th;
        worst = std::max(worst, std::abs(mass(soliton_profile(p, g)) - 8 * th) / (8 * th));
    }
    return {worst < 1e-8, "max relative error " + fmt(worst)};
}

Report evolve_report() {
    RunConfig c = scenario("evolve");
    c.profile = "soliton";
    return run(c);
}

Outcome soliton_evolution(const Report& r) {
    const bool ok = r.get("soliton_error") < 1e-6 && r.get("error_ratio") >= 12.0;
    return {ok, "error " + fmt(r.get("soliton_error")) + ", ratio on dt/2 " + fmt(r.get("error_ratio"))};
}

Outcome conservation(const Report& r) {
    const bool ok = r.get("drift_M") < 1e-8 && r.get("drift_H") < 1e-8 && r.get("drift_H2") < 1e-8 &&
                    r.get("drift_a") < 1e-6;
    return {ok, "drift M " + fmt(r.get("drift_M")) + ", H " + fmt(r.get("drift_H")) + ", H2 " +
                    fmt(r.get("drift_H2")) + ", a(2i), a(8i) " + fmt(r.get("drift_a"))};
}

Outcome determinant() {
    const Report r = run(scenario("determinant-asymptotics"));
    return from_report(r, "exponents fredholm " + fmt(r.get("fredholm/decay_exponent")) + ", jost " +
                              fmt(r.get("jost/decay_exponent")) + ", series " +
                              fmt(r.get("series/decay_exponent")));
}

Outcome green_identities() {
    const Report r = run(scenario("verify-identities"));
    double worst = 0, var = 0;
    for (const Verdict& v : r.verdicts) {
        if (v.name.find("dA_") != std::string::npos) var = std::max(var, v.value);
        else worst = std::max(worst, v.value);
    }
    return from_report(r, "max identity residual " + fmt(worst) + ", variational " + fmt(var));
}

Outcome micro_laws() {
    const Report r = run(scenario("micro-laws"));
    return from_report(r, "dnls " + fmt(value_of(r, "dnls/conservation_law")) + " (ratio " +
                              fmt(r.get("dnls/halving_ratio")) + "), diff " +
                              fmt(value_of(r, "diff/conservation_law")) + " (ratio " +
                              fmt(r.get("diff/halving_ratio")) + ")");
}

Outcome algebraic() {
    const Grid g = make_grid(32768, 4096.0);
    const Field qa = algebraic_soliton(0.0, g);
    const double M = mass(qa), H = hamiltonian(qa), H2 = h2(qa);
    const cplx a = std::exp(-A_value(spectral(2.0), qa, ARoute::jost).A);
    const bool ok = std::abs(M - 4 * kPi) < 1e-2 && std::abs(H) < 1e-2 && std::abs(H2) < 1e-2 &&
                    std::abs(a - 1.0) < 5e-2;
    return {ok, "M - 4pi " + fmt(M - 4 * kPi) + ", H " + fmt(H) + ", H2 " + fmt(H2) + ", |a(2i) - 1| " +
                    fmt(std::abs(a - 1.0))};
}

Outcome no_smoothing() {
    const Report r = no_smoothing_scan({1, 2, 4, 8});
    std::string ratios;
    for (const auto& row : r.find_table("no_smoothing").rows)
        if (std::isfinite(row.back())) ratios += (ratios.empty() ? "" : ", ") + fmt(row.back());
    return from_report(r, "ratios " + ratios + ", mass error " + fmt(value_of(r, "mass_is_2pi")));
}

Outcome gronwall() {
    const Report r = gronwall_scan(gronwall_points(5));
    std::string ratios;
    for (const auto& row : r.find_table("gronwall").rows) ratios += (ratios.empty() ? "" : ", ") + fmt(row[7]);
    return from_report(r, "ratios " + ratios);
}

Outcome diff_convergence() {
    RunConfig gc = scenario("diff-convergence");
    const Report rg = run(gc);
    RunConfig sc = scenario("diff-convergence");
    sc.profile = "soliton";
    sc.theta = kPi / 8;
    const Report rs = run(sc);
    auto column = [](const Report& r) {
        std::string s;
        for (const auto& row : r.find_table("diff_convergence").rows) s += (s.empty() ? "" : ", ") + fmt(row[1]);
        return s;
    };
    const bool ok = rg.all_pass() && rs.all_pass();
    std::string d = "gaussian [" + column(rg) + "], soliton [" + column(rs) + "], commutativity " +
                    fmt(rg.get("commutativity"));
    if (!ok) d += " | failed: " + failed_verdicts(rg) + " " + failed_verdicts(rs);
    return {ok, d};
}

Outcome gauge() {
    const Report r = run(scenario("gauge-check"));
    std::string d;
    for (const Verdict& v : r.verdicts) d += (d.empty() ? "" : ", ") + v.name + " " + fmt(v.value);
    return {r.all_pass(), d};
}

Outcome norm_sanity() {
    const double psi_err = std::abs(psi_integral() - 512.0 / 7.0);
    const Grid g = make_grid(512, 64.0);
    const Field q = sample(g, [](double x) { return 0.5 * std::exp(-x * x) * std::exp(cplx(0.0, 0.5 * x)); });
    bool e_dec = true, x_dec = true;
    double prev_e = 1e300, prev_x = 1e300;
    std::string xs;
    for (double k : {1.0, 4.0, 16.0, 64.0}) {
        const double e = e_norm(q, 0.5, 0.5, k);
        e_dec = e_dec && e < prev_e;
        prev_e = e;
    }
    FlowSpec s;
    s.dt = 1e-3;
    s.T = 1.0;
    s.record_every = 20;
    const Trajectory tr = evolve_window(s, q);
    for (double k : {2.0, 4.0, 8.0, 16.0}) {
        const double x = x_norm(tr, k);
        x_dec = x_dec && x < prev_x;
        prev_x = x;
        xs += (xs.empty() ? "" : ", ") + fmt(x);
    }
    return {psi_err < 1e-6 && e_dec && x_dec,
            "psi integral error " + fmt(psi_err) + ", e_norm decreasing " + (e_dec ? "yes" : "no") + ", x_norm [" + xs +
                "]"};
}

}  // namespace

int main() {
    int failures = 0;
    auto report = [&](int id, const std::string& name, const std::function<Outcome()>& fn) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        failures += !o.pass;
        std::printf("%s %2d %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), o.detail.c_str(), secs);
        std::fflush(stdout);
    };

    report(1, "soliton mass 8 theta", soliton_mass);
    Report ev;
    report(2, "soliton evolution", [&] {
        ev = evolve_report();
        return soliton_evolution(ev);
    });
    report(3, "conservation", [&] {
        if (ev.scalars.empty()) return Outcome{false, "evolution run unavailable"};
        return conservation(ev);
    });
    report(4, "determinant routes and expansion", determinant);
    report(5, "Green function identities", green_identities);
    report(6, "microscopic conservation laws", micro_laws);
    report(7, "algebraic soliton anchors", algebraic);
    report(8, "no-smoothing growth", no_smoothing);
    report(9, "Gronwall instability", gronwall);
    report(10, "difference-flow convergence", diff_convergence);
    report(11, "gauge and Galilei images", gauge);
    report(12, "norm-family sanity", norm_sanity);

    std::printf("%d of 12 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
