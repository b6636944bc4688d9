#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "zenogate/dynamics.hpp"
#include "zenogate/scenario.hpp"

#include <cmath>

using namespace zenogate;
using doctest::Approx;

namespace {

struct Fixture {
    BasisSet full = build_full_basis(1);
    BasisSet clo = gate_closure_basis(full);
    SystemParams sp;
    PulseParams p;
    IntegratorConfig ic;
};

}  // namespace

TEST_CASE("computational and extended alphabets") {
    const auto comp = computational_states();
    REQUIRE(comp.size() == 4);
    CHECK(comp[0].label() == "g1g1|000");
    CHECK(comp[1].label() == "g1g2|000");
    CHECK(comp[2].label() == "g0g1|000");
    CHECK(comp[3].label() == "g0g2|000");
    const auto ext = extended_alphabet();
    REQUIRE(ext.size() == 5);
    CHECK(ext[4].label() == "g0a|000");
}

TEST_CASE("integrator config validation") {
    IntegratorConfig ic;
    ic.dt = 0.0;
    CHECK_THROWS_AS(ic.validate(), std::invalid_argument);
    ic.dt = 1e-3;
    ic.record_stride = 0;
    CHECK_THROWS_AS(ic.validate(), std::invalid_argument);
}

TEST_CASE("evolve_state basics") {
    Fixture f;
    const TimeDependentHamiltonian h = build_step_hamiltonian(1, f.sp, f.p, f.clo);

    SUBCASE("rejects unnormalized input") {
        StateVector bad{&f.clo, 0.5 * f.clo.unit_vector(phi_state(3))};
        CHECK_THROWS_AS(evolve_state(bad, h, 0.0, 1.0, f.ic), std::invalid_argument);
    }

    SUBCASE("norm is preserved") {
        StateVector psi0{&f.clo, f.clo.unit_vector(phi_state(3))};
        const StateVector fin = evolve_state(psi0, h, 0.0, f.p.tf, f.ic);
        CHECK(std::abs(fin.amplitudes.norm() - 1.0) <= 1e-9);
    }

    SUBCASE("observer sees stride-spaced samples plus the endpoint") {
        StateVector psi0{&f.clo, f.clo.unit_vector(phi_state(3))};
        std::vector<double> times;
        evolve_state(psi0, h, 0.0, 1.0, f.ic,
                     [&](double t, const Vec&) { times.push_back(t); });
        REQUIRE(times.size() >= 3);
        CHECK(times.front() == 0.0);
        CHECK(times.back() == Approx(1.0).epsilon(1e-12));
        CHECK(times[1] == Approx(f.ic.dt * f.ic.record_stride).epsilon(1e-9));
    }
}

TEST_CASE("step-1 transfer reproduces the frozen reference") {
    Fixture f;
    const TimeDependentHamiltonian h = build_step_hamiltonian(1, f.sp, f.p, f.clo);
    StateVector psi0{&f.clo, f.clo.unit_vector(phi_state(3))};
    const StateVector fin = evolve_state(psi0, h, 0.0, f.p.tf, f.ic);
    const double p9 = std::norm(fin.amplitudes[f.clo.index_of(phi_state(9))]);
    CHECK(p9 == Approx(0.9998158885309048).epsilon(1e-7));
}

TEST_CASE("gate transfer matrix diagonal under CNOT permutation") {
    Fixture f;
    const TimeDependentHamiltonian h = build_gate_hamiltonian(f.sp, f.p, f.clo);
    const GateTransferMatrix m = compute_transfer_matrix(h, f.clo, f.ic, 0.0, 3.0 * f.p.tf);
    CHECK(std::norm(m.entries(0, 0)) == Approx(0.9751944142481797).epsilon(1e-6));
    CHECK(std::norm(m.entries(1, 1)) == Approx(0.975191833313026).epsilon(1e-6));
    CHECK(std::norm(m.entries(3, 2)) == Approx(0.999322137332631).epsilon(1e-6));
    CHECK(std::norm(m.entries(2, 3)) == Approx(0.9998158887881706).epsilon(1e-6));
    // control g1 never flips; control g0 never stays
    CHECK(std::norm(m.entries(2, 2)) <= 1e-8);
    CHECK(std::norm(m.entries(3, 3)) <= 1e-8);
}

TEST_CASE("lindblad rhs preserves trace") {
    Fixture f;
    f.sp.gamma = 0.1;
    f.sp.kappa = 0.05;
    f.sp.kappa_f = 0.05;
    const TimeDependentHamiltonian h = build_gate_hamiltonian(f.sp, f.p, f.clo);
    const auto collapse = build_collapse_ops(f.sp, f.clo);
    const LindbladRhs rhs(h, collapse);
    DenseOp rho = DenseOp::Zero(f.clo.size(), f.clo.size());
    rho(f.clo.index_of(phi_state(3)), f.clo.index_of(phi_state(3))) = 0.6;
    rho(f.clo.index_of(phi_state(4)), f.clo.index_of(phi_state(4))) = 0.4;
    DenseOp out(f.clo.size(), f.clo.size());
    rhs(10.0, rho, out);
    CHECK(std::abs(out.trace()) <= 1e-14);
}

TEST_CASE("lindblad at zero rates matches the Schrodinger projector") {
    Fixture f;
    const TimeDependentHamiltonian h = build_gate_hamiltonian(f.sp, f.p, f.clo);
    const auto collapse = build_collapse_ops(f.sp, f.clo);

    StateVector psi0{&f.clo, f.clo.unit_vector(phi_state(3))};
    const StateVector fin = evolve_state(psi0, h, 0.0, 3.0 * f.p.tf, f.ic);

    DenseOp rho0 = DenseOp::Zero(f.clo.size(), f.clo.size());
    rho0(f.clo.index_of(phi_state(3)), f.clo.index_of(phi_state(3))) = 1.0;
    const DensityOperator rho =
        evolve_density(DensityOperator{&f.clo, rho0}, h, collapse, 0.0, 3.0 * f.p.tf, f.ic);

    const DenseOp proj = fin.amplitudes * fin.amplitudes.adjoint();
    // trace distance = (1/2) sum of singular values of the difference
    const Eigen::JacobiSVD<DenseOp> svd(rho.matrix - proj);
    CHECK(0.5 * svd.singularValues().sum() <= 1e-6);
}

TEST_CASE("open evolution stays positive and trace-preserving") {
    Fixture f;
    f.sp.gamma = 0.1;
    f.sp.kappa = 0.1;
    f.sp.kappa_f = 0.1;
    const TimeDependentHamiltonian h = build_gate_hamiltonian(f.sp, f.p, f.clo);
    const auto collapse = build_collapse_ops(f.sp, f.clo);
    DenseOp rho0 = DenseOp::Zero(f.clo.size(), f.clo.size());
    rho0(f.clo.index_of(phi_state(3)), f.clo.index_of(phi_state(3))) = 1.0;
    const DensityOperator rho =
        evolve_density(DensityOperator{&f.clo, rho0}, h, collapse, 0.0, 3.0 * f.p.tf, f.ic);
    CHECK(std::abs(rho.trace() - 1.0) <= 1e-9);
    CHECK(rho.hermiticity_defect() <= 1e-12);
    CHECK(rho.min_eigenvalue() >= -1e-8);
}

TEST_CASE("process map symmetry, consistency and determinism") {
    Fixture f;
    f.sp.gamma = 0.02;
    f.sp.kappa = 0.02;
    f.sp.kappa_f = 0.02;
    ScenarioConfig cfg;
    cfg.gamma = f.sp.gamma;
    cfg.kappa = f.sp.kappa;
    cfg.kappa_f = f.sp.kappa_f;

    const ProcessMap pm1 = run_process_map(cfg, f.clo, 1);
    const ProcessMap pm4 = run_process_map(cfg, f.clo, 4);

    // worker count cannot change anything, bit for bit
    for (int k = 0; k < 16; ++k) {
        CHECK((pm1.images[static_cast<std::size_t>(k)] -
               pm4.images[static_cast<std::size_t>(k)]).cwiseAbs().maxCoeff() == 0.0);
    }
    // hermitian symmetry of the map: image of |j><i| is the adjoint image
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            const DenseOp& eij = pm1.images[static_cast<std::size_t>(4 * i + j)];
            const DenseOp& eji = pm1.images[static_cast<std::size_t>(4 * j + i)];
            CHECK((eij - eji.adjoint()).cwiseAbs().maxCoeff() <= 1e-12);
        }
    }
    // diagonal images are unit-trace density matrices
    for (int i = 0; i < 4; ++i) {
        const DenseOp& e = pm1.images[static_cast<std::size_t>(5 * i)];
        CHECK(std::abs(e.trace().real() - 1.0) <= 1e-9);
    }
    // reconstruct a pure computational input and compare with a direct run
    Eigen::Vector4cd c(0.0, 0.0, 1.0, 0.0);
    const DenseOp rho = pm1.reconstruct(c);
    const TimeDependentHamiltonian h = build_gate_hamiltonian(f.sp, f.p, f.clo);
    const auto collapse = build_collapse_ops(f.sp, f.clo);
    DenseOp rho0 = DenseOp::Zero(f.clo.size(), f.clo.size());
    rho0(f.clo.index_of(phi_state(3)), f.clo.index_of(phi_state(3))) = 1.0;
    const DensityOperator direct =
        evolve_density(DensityOperator{&f.clo, rho0}, h, collapse, 0.0, 3.0 * f.p.tf, f.ic);
    CHECK((rho - direct.matrix).cwiseAbs().maxCoeff() <= 1e-9);
}
