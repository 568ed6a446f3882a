// Batch scenario runner: dnls_run <scenario> [-c config] [--set section.key=value ...]
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dnls/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"DNLS scenario runner"};
    app.require_subcommand(1);

    std::string config;
    std::vector<std::string> sets;
    std::string out_dir, prefix;
    bool quiet = false;
    // flag -> config key, applied after the file so flags win
    std::vector<std::pair<std::string, std::string>> flags;
    struct Opt {
        const char* flag;
        const char* key;
        const char* help;
    };
    const Opt opts[] = {
        {"--n", "grid.n", "grid points"},
        {"--length", "grid.length", "box length"},
        {"--flow", "flow.kind", "dnls | hk | diff | linear"},
        {"--kappa", "flow.kappa", "kappa of the hk/diff flow"},
        {"--dt", "flow.dt", "time step"},
        {"--T", "flow.T", "final time"},
        {"--scheme", "flow.scheme", "if_rk4 | etd_rk4"},
        {"--record-every", "flow.record_every", "steps between snapshots"},
        {"--profile", "data.profile", "gaussian | soliton | stationary | algebraic | random | zero"},
        {"--theta", "data.theta", "soliton angle"},
        {"--seed", "data.seed", "seed for random data"},
        {"--kappas", "scan.kappas", "comma-separated kappa list"},
        {"--lambdas", "scan.lambdas", "comma-separated lambda list"},
        {"--points", "scan.points", "number of Gronwall points"},
    };
    std::vector<std::string> values(std::size(opts));

    for (const std::string& name : dnls::scenario_names()) {
        CLI::App* sub = app.add_subcommand(name, "run the " + name + " scenario");
        sub->add_option("-c,--config", config, "key = value config file");
        sub->add_option("--set", sets, "override: section.key=value (repeatable)");
        sub->add_option("-o,--out", out_dir, "output directory for JSON and CSV");
        sub->add_option("--prefix", prefix, "output file prefix");
        sub->add_flag("-q,--quiet", quiet, "print only the verdict summary");
        for (size_t i = 0; i < std::size(opts); ++i) sub->add_option(opts[i].flag, values[i], opts[i].help);
    }

    CLI11_PARSE(app, argc, argv);

    dnls::RunConfig cfg;
    try {
        if (!config.empty()) cfg = dnls::parse_config_file(config);
        cfg.scenario = app.get_subcommands().front()->get_name();
        for (size_t i = 0; i < std::size(opts); ++i)
            if (!values[i].empty()) dnls::apply_setting(cfg, opts[i].key, values[i]);
        for (const std::string& s : sets) {
            const auto eq = s.find('=');
            if (eq == std::string::npos) throw dnls::ConfigError("--set: expected section.key=value, got '" + s + "'");
            dnls::apply_setting(cfg, s.substr(0, eq), s.substr(eq + 1));
        }
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (!prefix.empty()) cfg.prefix = prefix;
        dnls::validate(cfg);
    } catch (const dnls::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }

    dnls::Report rep;
    try {
        rep = dnls::run(cfg);
    } catch (const std::exception& e) {
        std::cerr << cfg.scenario << ": " << e.what() << "\n";
        return 3;
    }
    for (const std::string& p : dnls::write_outputs(rep, cfg)) std::cerr << "wrote " << p << "\n";
    if (!quiet && cfg.out_dir.empty()) std::cout << dnls::to_json(rep) << "\n";
    for (const dnls::Verdict& v : rep.verdicts)
        std::cerr << (v.pass ? "PASS " : "FAIL ") << v.name << " " << dnls::fmt(v.value) << " " << v.relation << " "
                  << dnls::fmt(v.tol) << (v.relation == "in" ? " .. " + dnls::fmt(v.tol_hi) : std::string()) << "\n";
    return rep.all_pass() ? 0 : 1;
}
