// Acceptance suite: one PASS/FAIL line per criterion, hard tolerances, nonzero
// exit when any criterion fails. No tolerances are loosened to force a pass;
// failures are reported with the measured values.

#include "zenogate/scenario.hpp"
#include "zenogate/validate.hpp"

#include <chrono>
#include <cstdarg>
#include <cstdio>
#include <string>
#include <vector>

using namespace zenogate;

namespace {

int g_failures = 0;

void report(const std::string& name, bool ok, const std::string& detail) {
    std::printf("%-34s %s  %s\n", name.c_str(), ok ? "PASS" : "FAIL", detail.c_str());
    if (!ok) ++g_failures;
}

std::string fmt(const char* f, ...) {
    va_list args;
    va_start(args, f);
    char buf[256];
    std::vsnprintf(buf, sizeof(buf), f, args);
    va_end(args);
    return buf;
}

double elapsed_s(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main() {
    ScenarioConfig cfg;  // paper defaults
    const BasisSet full = build_full_basis(cfg.n_max);
    const BasisSet closure = gate_closure_basis(full);
    const PulseParams p = cfg.pulse_params();

    // ---- 1. whole-gate closed-system average fidelity -----------------------
    const auto t1 = std::chrono::steady_clock::now();
    const ClosedGateRun gate = run_closed_gate(cfg);
    const double f_whole = average_fidelity_pure(gate.transfer, Stage::whole, cfg.n_grid).value;
    const double dt1 = elapsed_s(t1);
    report("1 whole-gate fidelity",
           f_whole >= 0.990 && f_whole <= 0.998 && dt1 <= 60.0,
           fmt("F=%.6f required 0.994+-0.004, runtime %.1fs (<=60s)", f_whole, dt1));

    // ---- 2. decoherence corner ----------------------------------------------
    const auto t2 = std::chrono::steady_clock::now();
    ScenarioConfig corner = cfg;
    corner.gamma = 0.1;
    corner.kappa = 0.1;
    corner.kappa_f = 0.1;
    const ProcessMap pm_corner = run_process_map(corner, closure, 4);
    const double f_corner = average_fidelity_mixed(pm_corner, Stage::whole, cfg.n_grid).value;
    const double dt2 = elapsed_s(t2);
    report("2 decoherence corner",
           f_corner >= 0.955 && f_corner <= 0.985 && dt2 <= 300.0,
           fmt("F=%.6f required [0.955,0.985], runtime %.1fs (<=300s)", f_corner, dt2));

    // ---- 3. cesium scenario -------------------------------------------------
    ScenarioConfig cesium = cfg;
    cesium.gamma = 0.0349;
    cesium.kappa = 0.044;
    cesium.kappa_f = 0.044;
    const ProcessMap pm_cesium = run_process_map(cesium, closure, 4);
    const double f_cesium = average_fidelity_mixed(pm_cesium, Stage::whole, cfg.n_grid).value;
    report("3 cesium scenario", f_cesium >= 0.98 && f_cesium <= 1.0,
           fmt("F=%.6f required 0.99+-0.01", f_cesium));

    // ---- 4. pulse amplitude and boundary suppression ------------------------
    double peak = 0.0;
    for (int i = 0; i <= 60000; ++i) {
        const double s = p.tf * i / 60000.0;
        const auto [o1, o2] = modified_pair(s, p);
        peak = std::max({peak, std::sqrt(3.0) * std::abs(o1), std::sqrt(3.0) * std::abs(o2)});
    }
    report("4a pulse peak amplitude", peak >= 2.0 && peak <= 3.0,
           fmt("max=%.6f required [2.0,3.0]", peak));
    double boundary = 0.0;
    for (int k = 1; k <= 3; ++k) {
        const StepSchedule s = step_schedule(k, p);
        for (double t : {s.t_start, s.t_end}) {
            const auto [f1, f2] = step_pulses(t, k, p);
            boundary = std::max({boundary, std::abs(f1), std::abs(f2)});
        }
    }
    report("4b pulse boundary suppression", boundary <= 2e-5,
           fmt("max boundary=%.3e required <=2e-5", boundary));

    // ---- 5. per-step transfers and fidelities -------------------------------
    {
        const SystemParams sp = cfg.system_params();
        const char* mover_in[3] = {"g0g1|000", "g0g2|000", "g0a|000"};
        const char* mover_out[3] = {"g0a|000", "g0g1|000", "g0g2|000"};
        bool ok = true;
        std::string detail;
        for (int k = 1; k <= 3; ++k) {
            const TimeDependentHamiltonian h = build_step_hamiltonian(k, sp, p, closure);
            const StepSchedule sched = step_schedule(k, p);
            StateVector psi0{&closure, closure.unit_vector(parse_ket_label(mover_in[k - 1]))};
            const StateVector fin =
                evolve_state(psi0, h, sched.t_start, sched.t_end, cfg.integrator());
            const double moved =
                std::norm(fin.amplitudes[closure.index_of(parse_ket_label(mover_out[k - 1]))]);
            const StepTrace tr = step_fidelity_trace(k, h, closure, p, cfg.integrator(), cfg.n_grid);
            const double fk = tr.fidelity.back();
            ok = ok && moved >= 0.98 && fk >= 0.99;
            detail += fmt("step%d T=%.4f F=%.4f ", k, moved, fk);
        }
        report("5 per-step transfers/fidelities", ok, detail + "required T>=0.98 F>=0.99");
    }

    // ---- 6. dressed-frame decoupling ----------------------------------------
    {
        const CheckResult xi = check_xi_residual(p);
        const CheckResult gz = check_gz_identity(p);
        report("6 dressed-frame decoupling", xi.passed && gz.passed,
               fmt("|xi|max=%.3e (<=1e-6), gz defect=%.3e (<=1e-12)", xi.measured, gz.measured));
    }

    // ---- 7. oracle equivalences ---------------------------------------------
    {
        // (a) Lindblad at zero rates vs Schrodinger, trace distance
        const SystemParams sp = cfg.system_params();
        const TimeDependentHamiltonian h = build_gate_hamiltonian(sp, p, closure);
        const auto collapse = build_collapse_ops(sp, closure);
        StateVector psi0{&closure, closure.unit_vector(phi_state(3))};
        const StateVector fin = evolve_state(psi0, h, 0.0, 3.0 * p.tf, cfg.integrator());
        DenseOp rho0 = DenseOp::Zero(closure.size(), closure.size());
        rho0(closure.index_of(phi_state(3)), closure.index_of(phi_state(3))) = 1.0;
        const DensityOperator rho = evolve_density(DensityOperator{&closure, rho0}, h, collapse,
                                                   0.0, 3.0 * p.tf, cfg.integrator());
        const Eigen::JacobiSVD<DenseOp> svd(rho.matrix -
                                            DenseOp(fin.amplitudes * fin.amplitudes.adjoint()));
        const double tdist = 0.5 * svd.singularValues().sum();
        report("7a lindblad-vs-schrodinger", tdist <= 1e-6,
               fmt("trace distance=%.3e required <=1e-6", tdist));

        const CheckResult clo = check_closure_equivalence(cfg);
        report("7b closure-vs-full", clo.passed,
               fmt("max pop diff=%.3e required <=1e-10", clo.measured));

        const CheckResult zeno10 = check_zeno_agreement(cfg);
        ScenarioConfig weak = cfg;
        weak.g = 2.0;
        weak.nu = 2.0;
        const CheckResult zeno2 = check_zeno_agreement(weak);
        report("7c zeno effective model",
               zeno10.passed && zeno2.measured > zeno10.measured,
               fmt("diff(g=10)=%.4f (<=0.02), diff(g=2)=%.4f (degrades)", zeno10.measured,
                   zeno2.measured));
    }

    // ---- 8. numerical hygiene -----------------------------------------------
    {
        const CheckResult dtc = check_dt_convergence(cfg);
        report("8a dt-halving stability", dtc.passed,
               fmt("|dF|=%.3e required <=1e-6", dtc.measured));

        const CheckResult quad = check_quadrature_exactness(gate.transfer);
        report("8b quadrature exactness", quad.passed,
               fmt("|F9-F64|=%.3e required <=1e-12", quad.measured));

        double min_eig = 0.0;
        for (int i = 0; i < 4; ++i) {
            const DenseOp& img = pm_corner.images[static_cast<std::size_t>(5 * i)];
            const Eigen::SelfAdjointEigenSolver<DenseOp> es(img);
            min_eig = std::min(min_eig, es.eigenvalues().minCoeff());
        }
        report("8c density positivity", min_eig >= -1e-8,
               fmt("min eigenvalue=%.3e required >=-1e-8", min_eig));

        ScenarioConfig sweep_cfg = cfg;
        sweep_cfg.dt = 5e-3;
        SweepSpec spec;
        spec.gamma_axis = {0.0, 0.05};
        spec.kappa_axis = {0.0, 0.05};
        spec.workers = 1;
        const std::string s1 = run_sweep(sweep_cfg, spec).serialize();
        spec.workers = 8;
        const std::string s8 = run_sweep(sweep_cfg, spec).serialize();
        report("8d sweep determinism", s1 == s8,
               s1 == s8 ? "workers=1 and workers=8 byte-identical"
                        : "outputs differ between worker counts");
    }

    // ---- 9. truth table -----------------------------------------------------
    {
        const TruthTable t = truth_table_closed(gate.transfer);
        const int target[4] = {0, 1, 3, 2};  // CNOT permutation
        double min_diag = 1.0, max_off = 0.0;
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) {
                if (j == target[i]) min_diag = std::min(min_diag, t.populations(i, j));
                else max_off = std::max(max_off, t.populations(i, j));
            }
        }
        report("9 truth table", min_diag >= 0.98 && max_off <= 0.02,
               fmt("min diag=%.4f (>=0.98), max off=%.4f (<=0.02)", min_diag, max_off));
    }

    std::printf("\n%d criterion(s) failed\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
