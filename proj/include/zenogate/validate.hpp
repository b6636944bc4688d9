// validate.hpp — Named self-consistency checks behind the `validate` CLI
// subcommand: pulse identities, boundary conditions, Zeno-model agreement,
// closure equivalence, dt convergence, and quadrature exactness.

#pragma once

#include "zenogate/scenario.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace zenogate {

struct CheckResult {
    std::string name;
    bool passed;
    double measured;
    double bound;
};

inline CheckResult check_xi_residual(const PulseParams& p, int grid = 3000) {
    double worst = 0.0;
    for (int i = 0; i <= grid; ++i) {
        const double s = p.tf * i / grid;
        worst = std::max(worst, std::abs(correction_gains(s, p).xi));
    }
    return {"xi_residual", worst <= 1e-6 * p.omega0, worst, 1e-6 * p.omega0};
}

inline CheckResult check_gz_identity(const PulseParams& p, int grid = 3000) {
    // g_z recomputed through the raw Eq. form -Omega - theta_dot/tan(mu)
    // must cancel to the stable g_reg/tau value.
    double worst = 0.0;
    for (int i = 1; i < grid; ++i) {
        const double s = p.tf * i / grid;
        const auto [theta, omega] = theta_omega(s, p);
        (void)theta;
        const double m = mu(s, p);
        if (std::abs(std::tan(m)) < 1e-300) continue;
        const double gz_raw = -omega - theta_dot(s, p) / std::tan(m);
        worst = std::max(worst, std::abs(gz_raw - regularizer(s, p) / p.tau));
    }
    return {"gz_identity", worst <= 1e-12 * p.omega0, worst, 1e-12 * p.omega0};
}

inline std::vector<CheckResult> check_boundary_conditions(const PulseParams& p) {
    const double th0 = theta_omega(0.0, p).first;
    const double thf = theta_omega(p.tf, p).first;
    return {
        {"theta_initial", th0 <= 1e-8, th0, 1e-8},
        {"theta_final", std::abs(thf - M_PI / 2) <= 1e-8, std::abs(thf - M_PI / 2), 1e-8},
        {"mu_initial", std::abs(mu(0.0, p)) <= 1e-3, std::abs(mu(0.0, p)), 1e-3},
        {"mu_final", std::abs(mu(p.tf, p)) <= 1e-3, std::abs(mu(p.tf, p)), 1e-3},
    };
}

// Step-1 transfer in the full model vs the 3-state Zeno model: final
// populations on {phi3, phi9} agree within 0.02 at the Zeno limit.
inline CheckResult check_zeno_agreement(const ScenarioConfig& cfg, double bound = 0.02) {
    const PulseParams p = cfg.pulse_params();
    const SystemParams sp = cfg.system_params();
    const BasisSet full = build_full_basis(sp.n_max);
    const BasisSet basis =
        reachable_closure({phi_state(3)}, closure_generators(full), full);
    const TimeDependentHamiltonian h = build_step_hamiltonian(1, sp, p, basis);
    StateVector psi0{&basis, basis.unit_vector(phi_state(3))};
    const StateVector fin = evolve_state(psi0, h, 0.0, p.tf, cfg.integrator());
    const double p3_full = std::norm(fin.amplitudes[basis.index_of(phi_state(3))]);
    const double p9_full = std::norm(fin.amplitudes[basis.index_of(phi_state(9))]);

    const ZenoModel zm = build_zeno_effective(p, sp);
    Eigen::Vector3cd v(1.0, 0.0, 0.0);
    const IntegratorConfig ic = cfg.integrator();
    const Eigen::Index n = static_cast<Eigen::Index>(std::llround(p.tf / ic.dt));
    const double h_dt = p.tf / static_cast<double>(n);
    double t = 0.0;
    const Complex mi(0.0, -1.0);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::Matrix3cd h1 = zm.at(t), h2 = zm.at(t + h_dt / 2), h4 = zm.at(t + h_dt);
        const Eigen::Vector3cd k1 = mi * (h1 * v);
        const Eigen::Vector3cd k2 = mi * (h2 * (v + (h_dt / 2) * k1));
        const Eigen::Vector3cd k3 = mi * (h2 * (v + (h_dt / 2) * k2));
        const Eigen::Vector3cd k4 = mi * (h4 * (v + h_dt * k3));
        v += (h_dt / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
        t += h_dt;
    }
    const double diff = std::max(std::abs(p3_full - std::norm(v[0])),
                                 std::abs(p9_full - std::norm(v[1])));
    return {"zeno_agreement", diff <= bound, diff, bound};
}

// Full-basis vs closure-basis step-1 trajectory populations.
inline CheckResult check_closure_equivalence(const ScenarioConfig& cfg) {
    const PulseParams p = cfg.pulse_params();
    const SystemParams sp = cfg.system_params();
    const IntegratorConfig ic = cfg.integrator();
    const BasisSet full = build_full_basis(sp.n_max);
    const BasisSet sub = gate_closure_basis(full);

    double worst = 0.0;
    const auto comp = computational_states();
    for (const BasisState& c : comp) {
        std::vector<std::vector<double>> pops_full, pops_sub;
        {
            const TimeDependentHamiltonian h = build_gate_hamiltonian(sp, p, full);
            StateVector psi0{&full, full.unit_vector(c)};
            evolve_state(psi0, h, 0.0, 3 * p.tf, ic, [&](double, const Vec& psi) {
                std::vector<double> row;
                for (Eigen::Index i = 0; i < sub.size(); ++i) {
                    row.push_back(std::norm(psi[full.index_of(sub.state(i))]));
                }
                pops_full.push_back(std::move(row));
            });
        }
        {
            const TimeDependentHamiltonian h = build_gate_hamiltonian(sp, p, sub);
            StateVector psi0{&sub, sub.unit_vector(c)};
            evolve_state(psi0, h, 0.0, 3 * p.tf, ic, [&](double, const Vec& psi) {
                std::vector<double> row;
                for (Eigen::Index i = 0; i < sub.size(); ++i) row.push_back(std::norm(psi[i]));
                pops_sub.push_back(std::move(row));
            });
        }
        for (std::size_t s = 0; s < pops_full.size(); ++s) {
            for (std::size_t i = 0; i < pops_full[s].size(); ++i) {
                worst = std::max(worst, std::abs(pops_full[s][i] - pops_sub[s][i]));
            }
        }
    }
    return {"closure_equivalence", worst <= 1e-10, worst, 1e-10};
}

inline CheckResult check_dt_convergence(const ScenarioConfig& cfg, double bound = 1e-6) {
    ScenarioConfig coarse = cfg;
    ScenarioConfig fine = cfg;
    fine.dt = cfg.dt / 2.0;
    const double f_coarse =
        average_fidelity_pure(run_closed_gate(coarse).transfer, Stage::whole, cfg.n_grid).value;
    const double f_fine =
        average_fidelity_pure(run_closed_gate(fine).transfer, Stage::whole, cfg.n_grid).value;
    const double diff = std::abs(f_coarse - f_fine);
    return {"dt_convergence", diff <= bound, diff, bound};
}

inline CheckResult check_quadrature_exactness(const GateTransferMatrix& m) {
    const double f9 = average_fidelity_pure(m, Stage::whole, 9).value;
    const double f64 = average_fidelity_pure(m, Stage::whole, 64).value;
    const double diff = std::abs(f9 - f64);
    return {"quadrature_exactness", diff <= 1e-12, diff, 1e-12};
}

inline std::vector<CheckResult> run_validation(const ScenarioConfig& cfg) {
    const PulseParams p = cfg.pulse_params();
    std::vector<CheckResult> results;
    results.push_back(check_xi_residual(p));
    results.push_back(check_gz_identity(p));
    for (CheckResult& r : check_boundary_conditions(p)) results.push_back(std::move(r));
    results.push_back(check_zeno_agreement(cfg));
    results.push_back(check_closure_equivalence(cfg));
    results.push_back(check_dt_convergence(cfg));
    results.push_back(check_quadrature_exactness(run_closed_gate(cfg).transfer));
    return results;
}

}  // namespace zenogate
