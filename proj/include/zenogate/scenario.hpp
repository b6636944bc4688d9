// scenario.hpp — Scenario configuration (JSON round-trip), high-level runs
// behind the CLI subcommands, CSV serialization, and the validation suite.
//
// All quantities are expressed in units of Omega0 = 1 (frequencies) and
// 1/Omega0 (times).

#pragma once

#include "zenogate/dynamics.hpp"
#include "zenogate/metrics.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <functional>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace zenogate {

// ------------------------------- configuration -------------------------------

struct ScenarioConfig {
    double omega0{1.0};  // fixed unit
    double tf{20.0};
    double tau{2.0};
    double t0{2.0};
    double g{10.0};
    double nu{10.0};
    double gamma{0.0};
    double kappa{0.0};
    double kappa_f{0.0};
    int n_max{1};
    double dt{1e-3};
    int n_grid{16};
    std::string reg_center{"as-written"};  // or "centered"
    std::string basis_mode{"closure"};     // or "full"
    std::string output_dir{"."};

    PulseParams pulse_params() const {
        PulseParams p;
        p.omega0 = omega0;
        p.tf = tf;
        p.tau = tau;
        p.t0 = t0;
        p.reg_center = (reg_center == "centered") ? RegCenter::centered : RegCenter::as_written;
        p.validate();
        if (reg_center != "centered" && reg_center != "as-written") {
            throw std::invalid_argument("reg_center must be 'as-written' or 'centered'");
        }
        return p;
    }

    SystemParams system_params() const {
        SystemParams sp;
        sp.g = g;
        sp.nu = nu;
        sp.gamma = gamma;
        sp.kappa = kappa;
        sp.kappa_f = kappa_f;
        sp.n_max = n_max;
        sp.validate();
        return sp;
    }

    IntegratorConfig integrator() const {
        IntegratorConfig c;
        c.dt = dt;
        c.validate();
        return c;
    }
};

inline void to_json(nlohmann::json& j, const ScenarioConfig& c) {
    j = nlohmann::json{{"omega0", c.omega0},   {"tf", c.tf},
                       {"tau", c.tau},         {"t0", c.t0},
                       {"g", c.g},             {"nu", c.nu},
                       {"gamma", c.gamma},     {"kappa", c.kappa},
                       {"kappa_f", c.kappa_f}, {"n_max", c.n_max},
                       {"dt", c.dt},           {"n_grid", c.n_grid},
                       {"reg_center", c.reg_center}, {"basis_mode", c.basis_mode},
                       {"output_dir", c.output_dir}};
}

inline void from_json(const nlohmann::json& j, ScenarioConfig& c) {
    c = ScenarioConfig{};
    for (const auto& [key, val] : j.items()) {
        if (key == "omega0") val.get_to(c.omega0);
        else if (key == "tf") val.get_to(c.tf);
        else if (key == "tau") val.get_to(c.tau);
        else if (key == "t0") val.get_to(c.t0);
        else if (key == "g") val.get_to(c.g);
        else if (key == "nu") val.get_to(c.nu);
        else if (key == "gamma") val.get_to(c.gamma);
        else if (key == "kappa") val.get_to(c.kappa);
        else if (key == "kappa_f") val.get_to(c.kappa_f);
        else if (key == "n_max") val.get_to(c.n_max);
        else if (key == "dt") val.get_to(c.dt);
        else if (key == "n_grid") val.get_to(c.n_grid);
        else if (key == "reg_center") val.get_to(c.reg_center);
        else if (key == "basis_mode") val.get_to(c.basis_mode);
        else if (key == "output_dir") val.get_to(c.output_dir);
        else throw std::invalid_argument("unknown config key: " + key);
    }
}

// ----------------------------------- CSV -------------------------------------

// 17 significant digits, '.' decimal, comma separator: byte-identical across
// runs for identical inputs.
inline std::string csv_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    std::string serialize() const {
        std::ostringstream os;
        for (std::size_t i = 0; i < header.size(); ++i) {
            os << (i ? "," : "") << header[i];
        }
        os << '\n';
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                os << (i ? "," : "") << csv_number(row[i]);
            }
            os << '\n';
        }
        return os.str();
    }

    void write(const std::string& path) const {
        std::ofstream f(path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + path);
        f << serialize();
    }
};

// --------------------------------- basis setup -------------------------------

// Generators shared by all steps: the three drive couplings, the four
// atom-cavity-fiber coupling pieces, and the (rate-independent) decay
// structure. Using the same closure for every rate keeps outputs comparable.
inline std::vector<SparseOp> closure_generators(const BasisSet& full) {
    std::vector<SparseOp> gens;
    auto sym = [](const SparseOp& op) { return SparseOp(op + SparseOp(op.adjoint())); };
    for (DriveTransition tr : {DriveTransition::g1_e, DriveTransition::a_e,
                               DriveTransition::g2_e}) {
        gens.push_back(sym(drive_op(tr, full)));
    }
    const SparseOp a_A = build_mode_op(Mode::cavA, full);
    const SparseOp a_B = build_mode_op(Mode::cavB, full);
    const SparseOp b = build_mode_op(Mode::fiber, full);
    gens.push_back(sym(SparseOp(a_A * build_atomic_op(AtomSite::A, AtomLevel::e, AtomLevel::g0, full))));
    gens.push_back(sym(SparseOp(a_B * build_atomic_op(AtomSite::B, AtomLevel::e, AtomLevel::g0, full))));
    gens.push_back(sym(SparseOp(b * SparseOp(a_A.adjoint()))));
    gens.push_back(sym(SparseOp(b * SparseOp(a_B.adjoint()))));
    // decay channels enter one-way: populations flow into the sinks only
    for (AtomSite site : {AtomSite::A, AtomSite::B}) {
        for (AtomLevel k : {AtomLevel::a, AtomLevel::g1, AtomLevel::g2, AtomLevel::g0}) {
            gens.push_back(build_atomic_op(site, k, AtomLevel::e, full));
        }
    }
    gens.push_back(a_A);
    gens.push_back(a_B);
    gens.push_back(b);
    return gens;
}

inline BasisSet gate_closure_basis(const BasisSet& full) {
    const auto comp = computational_states();
    return reachable_closure({comp.begin(), comp.end()}, closure_generators(full), full);
}

// ------------------------------- high-level runs -----------------------------

inline const char* pulse_columns[6] = {"omega11", "omega1a", "omega22",
                                       "omega21", "omega3a", "omega32"};

// pulses.csv: 3001 rows over t in [0, 3tf]; out-of-window channels emit 0.
inline CsvTable run_pulses(const ScenarioConfig& cfg, int rows = 3001) {
    const PulseParams p = cfg.pulse_params();
    CsvTable t;
    t.header = {"t", pulse_columns[0], pulse_columns[1], pulse_columns[2],
                pulse_columns[3], pulse_columns[4], pulse_columns[5]};
    for (int r = 0; r < rows; ++r) {
        const double time = 3.0 * p.tf * r / (rows - 1);
        std::vector<double> row(7, 0.0);
        row[0] = time;
        for (int k = 1; k <= 3; ++k) {
            const StepSchedule s = step_schedule(k, p);
            if (time < s.t_start || time > s.t_end) continue;
            const auto [f1, f2] = step_pulses(time, k, p);
            row[static_cast<std::size_t>(2 * k - 1)] = f1;
            row[static_cast<std::size_t>(2 * k)] = f2;
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

// traj.csv: t plus one population column per closure state, ket labels as header.
inline CsvTable run_evolve(const ScenarioConfig& cfg, std::optional<int> step,
                           const std::string& initial_label) {
    const PulseParams p = cfg.pulse_params();
    const SystemParams sp = cfg.system_params();
    const IntegratorConfig ic = cfg.integrator();
    const BasisSet full = build_full_basis(sp.n_max);
    const BasisState initial = parse_ket_label(initial_label);
    if (!full.contains(initial)) {
        throw std::runtime_error("initial state " + initial.label() + " exceeds truncation");
    }
    const BasisSet basis = (cfg.basis_mode == "full")
                               ? build_full_basis(sp.n_max)
                               : reachable_closure({initial}, closure_generators(full), full);
    const TimeDependentHamiltonian h =
        step ? build_step_hamiltonian(*step, sp, p, basis) : build_gate_hamiltonian(sp, p, basis);
    const double t_a = step ? (*step - 1) * p.tf : 0.0;
    const double t_b = step ? *step * p.tf : 3.0 * p.tf;

    CsvTable t;
    t.header.push_back("t");
    for (Eigen::Index i = 0; i < basis.size(); ++i) t.header.push_back(basis.state(i).label());
    StateVector psi0{&basis, basis.unit_vector(initial)};
    evolve_state(psi0, h, t_a, t_b, ic, [&](double time, const Vec& psi) {
        std::vector<double> row;
        row.reserve(static_cast<std::size_t>(basis.size()) + 1);
        row.push_back(time);
        for (Eigen::Index i = 0; i < basis.size(); ++i) row.push_back(std::norm(psi[i]));
        t.rows.push_back(std::move(row));
    });
    return t;
}

struct ClosedGateRun {
    BasisSet basis;
    GateTransferMatrix transfer;
    TransferSnapshots snapshots;
};

inline ClosedGateRun run_closed_gate(const ScenarioConfig& cfg, bool with_snapshots = false) {
    const PulseParams p = cfg.pulse_params();
    const SystemParams sp = cfg.system_params();
    const BasisSet full = build_full_basis(sp.n_max);
    BasisSet basis = (cfg.basis_mode == "full") ? full : gate_closure_basis(full);
    const TimeDependentHamiltonian h = build_gate_hamiltonian(sp, p, basis);
    TransferSnapshots snaps;
    GateTransferMatrix m = compute_transfer_matrix(h, basis, cfg.integrator(), 0.0, 3.0 * p.tf,
                                                   with_snapshots ? &snaps : nullptr);
    return ClosedGateRun{std::move(basis), m, std::move(snaps)};
}

inline ProcessMap run_process_map(const ScenarioConfig& cfg, const BasisSet& basis,
                                  int workers = 1) {
    const PulseParams p = cfg.pulse_params();
    const SystemParams sp = cfg.system_params();
    const TimeDependentHamiltonian h = build_gate_hamiltonian(sp, p, basis);
    const std::vector<SparseOp> collapse = build_collapse_ops(sp, basis);
    return compute_process_map(h, basis, collapse, cfg.integrator(), 0.0, 3.0 * p.tf, workers);
}

// fidelity.csv: t, F_step1, F_step2, F_step3, F_whole. Step columns hold their
// boundary values outside their own windows.
inline CsvTable run_fidelity(const ScenarioConfig& cfg) {
    const PulseParams p = cfg.pulse_params();
    const SystemParams sp = cfg.system_params();
    const IntegratorConfig ic = cfg.integrator();
    const BasisSet full = build_full_basis(sp.n_max);
    const BasisSet basis = (cfg.basis_mode == "full") ? full : gate_closure_basis(full);

    std::array<StepTrace, 3> steps;
    for (int k = 1; k <= 3; ++k) {
        const TimeDependentHamiltonian h = build_step_hamiltonian(k, sp, p, basis);
        steps[static_cast<std::size_t>(k - 1)] =
            step_fidelity_trace(k, h, basis, p, ic, cfg.n_grid);
    }
    ClosedGateRun gate = run_closed_gate(cfg, /*with_snapshots=*/true);
    const StepTrace whole = whole_fidelity_trace(gate.snapshots, cfg.n_grid);

    CsvTable t;
    t.header = {"t", "F_step1", "F_step2", "F_step3", "F_whole"};
    auto step_value = [&](int k, double time) {
        const StepTrace& s = steps[static_cast<std::size_t>(k - 1)];
        if (time <= s.times.front()) return s.fidelity.front();
        if (time >= s.times.back()) return s.fidelity.back();
        const auto it = std::lower_bound(s.times.begin(), s.times.end(), time - 1e-9);
        return s.fidelity[static_cast<std::size_t>(it - s.times.begin())];
    };
    for (std::size_t i = 0; i < whole.times.size(); ++i) {
        const double time = whole.times[i];
        t.rows.push_back({time, step_value(1, time), step_value(2, time), step_value(3, time),
                          whole.fidelity[i]});
    }
    return t;
}

// truth.csv: input_label, p00, p01, p10, p11 (labels as numeric row key 0..3).
inline CsvTable run_truth(const ScenarioConfig& cfg, int workers = 1) {
    const bool noisy = cfg.gamma > 0.0 || cfg.kappa > 0.0 || cfg.kappa_f > 0.0;
    TruthTable tab;
    if (noisy) {
        const BasisSet full = build_full_basis(cfg.n_max);
        const BasisSet basis = (cfg.basis_mode == "full") ? full : gate_closure_basis(full);
        tab = truth_table_open(run_process_map(cfg, basis, workers));
    } else {
        tab = truth_table_closed(run_closed_gate(cfg).transfer);
    }
    CsvTable t;
    t.header = {"input", "p00", "p01", "p10", "p11"};
    for (int i = 0; i < 4; ++i) {
        t.rows.push_back({static_cast<double>(i), tab.populations(i, 0), tab.populations(i, 1),
                          tab.populations(i, 2), tab.populations(i, 3)});
    }
    return t;
}

// ---------------------------------- sweep ------------------------------------

struct SweepSpec {
    std::vector<double> gamma_axis;
    std::vector<double> kappa_axis;
    int workers{1};

    void validate() const {
        if (gamma_axis.empty() || kappa_axis.empty()) {
            throw std::invalid_argument("SweepSpec: axes must be non-empty");
        }
        for (double v : gamma_axis)
            if (v < 0) throw std::invalid_argument("SweepSpec: gamma values must be >= 0");
        for (double v : kappa_axis)
            if (v < 0) throw std::invalid_argument("SweepSpec: kappa values must be >= 0");
        if (workers < 1) throw std::invalid_argument("SweepSpec: workers >= 1");
    }
};

inline SweepSpec default_sweep() {
    SweepSpec s;
    for (int i = 0; i <= 10; ++i) {
        s.gamma_axis.push_back(0.01 * i);
        s.kappa_axis.push_back(0.01 * i);
    }
    return s;
}

// sweep.csv: gamma, kappa, F; rows ordered by (gamma index, kappa index)
// regardless of execution order.
inline CsvTable run_sweep(const ScenarioConfig& cfg, const SweepSpec& sweep) {
    sweep.validate();
    const BasisSet full = build_full_basis(cfg.n_max);
    const BasisSet basis = (cfg.basis_mode == "full") ? full : gate_closure_basis(full);

    const std::size_t cells = sweep.gamma_axis.size() * sweep.kappa_axis.size();
    std::vector<double> fidelities(cells, 0.0);
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::string first_error;
    std::mutex error_mutex;

    auto worker = [&]() {
        for (;;) {
            const std::size_t cell = next.fetch_add(1);
            if (cell >= cells || failed.load()) return;
            const std::size_t gi = cell / sweep.kappa_axis.size();
            const std::size_t ki = cell % sweep.kappa_axis.size();
            try {
                ScenarioConfig local = cfg;
                local.gamma = sweep.gamma_axis[gi];
                local.kappa = sweep.kappa_axis[ki];
                local.kappa_f = sweep.kappa_axis[ki];
                const ProcessMap pm = run_process_map(local, basis, 1);
                fidelities[cell] =
                    average_fidelity_mixed(pm, Stage::whole, cfg.n_grid).value;
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!failed.exchange(true)) first_error = e.what();
            }
        }
    };
    if (sweep.workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < sweep.workers; ++w) pool.emplace_back(worker);
        for (std::thread& th : pool) th.join();
    }
    if (failed.load()) throw std::runtime_error("sweep worker failed: " + first_error);

    CsvTable t;
    t.header = {"gamma", "kappa", "F"};
    for (std::size_t gi = 0; gi < sweep.gamma_axis.size(); ++gi) {
        for (std::size_t ki = 0; ki < sweep.kappa_axis.size(); ++ki) {
            t.rows.push_back({sweep.gamma_axis[gi], sweep.kappa_axis[ki],
                              fidelities[gi * sweep.kappa_axis.size() + ki]});
        }
    }
    return t;
}

}  // namespace zenogate
