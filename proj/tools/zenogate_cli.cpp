// zenogate command-line interface: figure-style CSV outputs, the validation
// suite, and the decoherence sweep.

#include "zenogate/scenario.hpp"
#include "zenogate/validate.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

using zenogate::ScenarioConfig;

ScenarioConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot read config " + path);
    nlohmann::json j;
    f >> j;
    return j.get<ScenarioConfig>();
}

// The fully resolved config is echoed next to the results so a run can be
// reproduced from its output directory alone.
void echo_config(const ScenarioConfig& cfg) {
    std::filesystem::create_directories(cfg.output_dir);
    std::ofstream f(std::filesystem::path(cfg.output_dir) / "effective_config.json");
    nlohmann::json j = cfg;
    f << j.dump(2) << '\n';
}

void write_table(const ScenarioConfig& cfg, const std::string& name,
                 const zenogate::CsvTable& table) {
    std::filesystem::create_directories(cfg.output_dir);
    const auto path = std::filesystem::path(cfg.output_dir) / name;
    table.write(path.string());
    std::cout << "wrote " << path.string() << " (" << table.rows.size() << " rows)\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cavity-QED CNOT gate simulator (dressed-state pulses, Zeno dynamics)"};
    app.require_subcommand(1);

    std::string config_path;
    ScenarioConfig cfg;
    std::optional<double> opt_dt, opt_gamma, opt_kappa;
    std::optional<int> opt_grid;
    std::optional<std::string> opt_out, opt_basis, opt_reg;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON config file");
        sub->add_option("--out", opt_out, "output directory");
        sub->add_option("--dt", opt_dt, "integrator step size (1/Omega0)");
        sub->add_option("--grid", opt_grid, "quadrature points per angle axis");
        sub->add_option("--gamma", opt_gamma, "total atomic decay rate (Omega0)");
        sub->add_option("--kappa", opt_kappa, "photon leakage rate (Omega0)");
        sub->add_option("--basis", opt_basis, "basis mode: full|closure")
            ->check(CLI::IsMember({"full", "closure"}));
        sub->add_option("--reg-center", opt_reg, "regularizer centering: as-written|centered")
            ->check(CLI::IsMember({"as-written", "centered"}));
    };

    auto* cmd_pulses = app.add_subcommand("pulses", "emit the six modified drive envelopes");
    auto* cmd_evolve = app.add_subcommand("evolve", "population trajectory of one initial ket");
    auto* cmd_fidelity = app.add_subcommand("fidelity", "per-step and whole-gate fidelity traces");
    auto* cmd_truth = app.add_subcommand("truth-table", "CNOT truth table");
    auto* cmd_sweep = app.add_subcommand("sweep", "average fidelity over a (gamma, kappa) grid");
    auto* cmd_validate = app.add_subcommand("validate", "run the self-consistency checks");
    for (auto* sub : {cmd_pulses, cmd_evolve, cmd_fidelity, cmd_truth, cmd_sweep, cmd_validate}) {
        add_common(sub);
    }

    std::optional<int> evolve_step;
    std::string evolve_initial = "g0g1|000";
    cmd_evolve->add_option("--step", evolve_step, "simulate one step only (1..3)")
        ->check(CLI::Range(1, 3));
    cmd_evolve->add_option("--initial", evolve_initial, "initial ket label, e.g. g0g1|000");

    int sweep_workers = 1;
    int sweep_points = 11;
    double sweep_max = 0.1;
    cmd_sweep->add_option("--workers", sweep_workers, "parallel workers")->check(CLI::Range(1, 256));
    cmd_sweep->add_option("--points", sweep_points, "grid points per axis")->check(CLI::Range(1, 201));
    cmd_sweep->add_option("--max-rate", sweep_max, "axis maximum (Omega0)");
    cmd_truth->add_option("--workers", sweep_workers, "parallel workers")->check(CLI::Range(1, 256));

    CLI11_PARSE(app, argc, argv);

    try {
        if (!config_path.empty()) cfg = load_config(config_path);
        if (opt_out) cfg.output_dir = *opt_out;
        if (opt_dt) cfg.dt = *opt_dt;
        if (opt_grid) cfg.n_grid = *opt_grid;
        if (opt_gamma) { cfg.gamma = *opt_gamma; }
        if (opt_kappa) { cfg.kappa = *opt_kappa; cfg.kappa_f = *opt_kappa; }
        if (opt_basis) cfg.basis_mode = *opt_basis;
        if (opt_reg) cfg.reg_center = *opt_reg;
        echo_config(cfg);

        if (cmd_pulses->parsed()) {
            write_table(cfg, "pulses.csv", zenogate::run_pulses(cfg));
        } else if (cmd_evolve->parsed()) {
            write_table(cfg, "traj.csv", zenogate::run_evolve(cfg, evolve_step, evolve_initial));
        } else if (cmd_fidelity->parsed()) {
            write_table(cfg, "fidelity.csv", zenogate::run_fidelity(cfg));
        } else if (cmd_truth->parsed()) {
            write_table(cfg, "truth.csv", zenogate::run_truth(cfg, sweep_workers));
        } else if (cmd_sweep->parsed()) {
            zenogate::SweepSpec spec;
            for (int i = 0; i < sweep_points; ++i) {
                const double v = (sweep_points == 1) ? 0.0 : sweep_max * i / (sweep_points - 1);
                spec.gamma_axis.push_back(v);
                spec.kappa_axis.push_back(v);
            }
            spec.workers = sweep_workers;
            write_table(cfg, "sweep.csv", zenogate::run_sweep(cfg, spec));
        } else if (cmd_validate->parsed()) {
            bool all_passed = true;
            for (const zenogate::CheckResult& r : zenogate::run_validation(cfg)) {
                std::printf("%-22s %s  (measured %.3e, bound %.3e)\n", r.name.c_str(),
                            r.passed ? "PASS" : "FAIL", r.measured, r.bound);
                all_passed = all_passed && r.passed;
            }
            if (!all_passed) return 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
