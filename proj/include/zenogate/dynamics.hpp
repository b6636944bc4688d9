// dynamics.hpp — RK4 propagation of pure states (Schrodinger) and density
// operators (Lindblad), plus the linear process maps on the computational
// subspace that all fidelity figures derive from.

#pragma once

#include "zenogate/hamiltonian.hpp"
#include "zenogate/hilbert.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace zenogate {

struct IntegratorConfig {
    double dt{1e-3};
    int record_stride{50};

    void validate() const {
        if (dt <= 0) throw std::invalid_argument("IntegratorConfig: dt must be > 0");
        if (record_stride < 1) throw std::invalid_argument("IntegratorConfig: record_stride >= 1");
    }
};

struct TrajectoryRecord {
    std::vector<double> times;
    std::vector<std::string> names;
    std::vector<std::vector<double>> series;  // series[k][sample] for names[k]
};

// The four computational states (|00>,|01>,|10>,|11>) = (g1g1,g1g2,g0g1,g0g2)
// with photonic vacuum, plus the auxiliary |g0 a> slot used by steps 1 and 2.
inline std::array<BasisState, 4> computational_states() {
    using L = AtomLevel;
    return {BasisState{L::g1, L::g1, 0, 0, 0}, BasisState{L::g1, L::g2, 0, 0, 0},
            BasisState{L::g0, L::g1, 0, 0, 0}, BasisState{L::g0, L::g2, 0, 0, 0}};
}

inline std::array<BasisState, 5> extended_alphabet() {
    using L = AtomLevel;
    auto comp = computational_states();
    return {comp[0], comp[1], comp[2], comp[3], BasisState{L::g0, L::a, 0, 0, 0}};
}

// ------------------------------ pure-state RK4 -------------------------------

namespace detail {

inline Eigen::Index step_count(double t_a, double t_b, double dt, double& last_dt) {
    const double span = t_b - t_a;
    if (span < 0) throw std::invalid_argument("evolve: t_b < t_a");
    Eigen::Index n = static_cast<Eigen::Index>(std::floor(span / dt + 1e-9));
    last_dt = span - static_cast<double>(n) * dt;
    if (last_dt > 1e-12) {
        ++n;
    } else {
        last_dt = 0.0;
    }
    return n;
}

}  // namespace detail

// Classical RK4 with H evaluated at substage times; the final norm is a
// diagnostic, no renormalization is applied. The observer runs on the initial
// state, every record_stride-th step, and the final state.
inline StateVector evolve_state(
    const StateVector& psi0, const TimeDependentHamiltonian& H, double t_a, double t_b,
    const IntegratorConfig& cfg,
    const std::function<void(double, const Vec&)>& observer = nullptr) {
    cfg.validate();
    if (std::abs(psi0.amplitudes.norm() - 1.0) > 1e-6) {
        throw std::invalid_argument("evolve_state: initial state not normalized");
    }
    Vec psi = psi0.amplitudes;
    Vec k1(psi.size()), k2(psi.size()), k3(psi.size()), k4(psi.size()), tmp(psi.size());
    double last_dt = 0.0;
    const Eigen::Index n = detail::step_count(t_a, t_b, cfg.dt, last_dt);
    double t = t_a;
    if (observer) observer(t, psi);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double h = (last_dt > 0.0 && i == n - 1) ? last_dt : cfg.dt;
        const Complex mi(0.0, -1.0);
        H.apply(t, psi, tmp);
        k1 = mi * tmp;
        H.apply(t + h / 2, Vec(psi + (h / 2) * k1), tmp);
        k2 = mi * tmp;
        H.apply(t + h / 2, Vec(psi + (h / 2) * k2), tmp);
        k3 = mi * tmp;
        H.apply(t + h, Vec(psi + h * k3), tmp);
        k4 = mi * tmp;
        psi += (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
        t += h;
        const bool record = ((i + 1) % cfg.record_stride == 0) || (i == n - 1);
        if (observer && record) observer(t, psi);
    }
    const double drift = std::abs(psi.norm() - 1.0);
    if (drift > 1e-4) {
        throw std::runtime_error("evolve_state: norm drift " + std::to_string(drift) +
                                 " exceeds 1e-4; use a smaller dt");
    }
    return StateVector{psi0.basis, std::move(psi)};
}

// ------------------------------- Lindblad RK4 --------------------------------

// Right-hand side of Eq.-of-motion for a (not necessarily Hermitian) matrix E:
//   dE/dt = -i[H, E] + sum_c ( C E C^dag - 1/2 {C^dag C, E} ).
class LindbladRhs {
public:
    LindbladRhs(const TimeDependentHamiltonian& H, const std::vector<SparseOp>& collapse)
        : H_(&H), collapse_(&collapse) {
        anticomm_ = SparseOp(H.dim(), H.dim());
        for (const SparseOp& c : collapse) {
            anticomm_ += SparseOp(SparseOp(c.adjoint()) * c);
        }
    }

    void operator()(double t, const DenseOp& E, DenseOp& out) const {
        const SparseOp& g = anticomm_;
        // -i (H E - E H); H applied column- and row-wise through the channels
        out.noalias() = H_->static_part() * E;
        out.noalias() -= E * H_->static_part();
        for (const DriveChannel& ch : H_->channels()) {
            const double f = ch.coefficient(t);
            if (f == 0.0) continue;
            out.noalias() += Complex(f, 0.0) * (ch.coupling_sym * E);
            out.noalias() -= Complex(f, 0.0) * (E * ch.coupling_sym);
        }
        out *= Complex(0.0, -1.0);
        out.noalias() -= 0.5 * (g * E);
        out.noalias() -= 0.5 * (E * g);
        for (const SparseOp& c : *collapse_) {
            out.noalias() += c * E * SparseOp(c.adjoint());
        }
    }

private:
    const TimeDependentHamiltonian* H_;
    const std::vector<SparseOp>* collapse_;
    SparseOp anticomm_;
};

// RK4 on the full Lindblad right-hand side. When `hermitize` is set the state
// is symmetrized once per recorded sample (appropriate for density operators).
inline DenseOp evolve_matrix(
    const DenseOp& E0, const TimeDependentHamiltonian& H, const std::vector<SparseOp>& collapse,
    double t_a, double t_b, const IntegratorConfig& cfg, bool hermitize,
    const std::function<void(double, const DenseOp&)>& observer = nullptr) {
    cfg.validate();
    const LindbladRhs rhs(H, collapse);
    DenseOp E = E0;
    DenseOp k1(E.rows(), E.cols()), k2(E.rows(), E.cols()), k3(E.rows(), E.cols()),
        k4(E.rows(), E.cols());
    double last_dt = 0.0;
    const Eigen::Index n = detail::step_count(t_a, t_b, cfg.dt, last_dt);
    double t = t_a;
    if (observer) observer(t, E);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double h = (last_dt > 0.0 && i == n - 1) ? last_dt : cfg.dt;
        rhs(t, E, k1);
        rhs(t + h / 2, DenseOp(E + (h / 2) * k1), k2);
        rhs(t + h / 2, DenseOp(E + (h / 2) * k2), k3);
        rhs(t + h, DenseOp(E + h * k3), k4);
        E += (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
        t += h;
        const bool record = ((i + 1) % cfg.record_stride == 0) || (i == n - 1);
        if (record) {
            if (hermitize) E = 0.5 * (E + E.adjoint().eval());
            if (observer) observer(t, E);
        }
    }
    return E;
}

inline DensityOperator evolve_density(
    const DensityOperator& rho0, const TimeDependentHamiltonian& H,
    const std::vector<SparseOp>& collapse, double t_a, double t_b, const IntegratorConfig& cfg,
    const std::function<void(double, const DenseOp&)>& observer = nullptr) {
    if (rho0.hermiticity_defect() > 1e-9) {
        throw std::invalid_argument("evolve_density: initial state not Hermitian");
    }
    if (std::abs(rho0.trace() - 1.0) > 1e-6) {
        throw std::invalid_argument("evolve_density: initial trace not 1");
    }
    DenseOp E = evolve_matrix(rho0.matrix, H, collapse, t_a, t_b, cfg, true, observer);
    const double drift = std::abs(E.trace().real() - 1.0);
    if (drift > 1e-4) {
        throw std::runtime_error("evolve_density: trace drift " + std::to_string(drift) +
                                 " exceeds 1e-4; use a smaller dt");
    }
    return DensityOperator{rho0.basis, std::move(E)};
}

// ----------------------------- gate transfer map -----------------------------

struct GateTransferMatrix {
    Eigen::Matrix4cd entries;  // entries(i,j) = <comp_i, vac| U |comp_j, vac>
};

// Closed-system propagation of the four computational columns over the whole
// gate. `snapshots`, when non-null, receives the 5x4 extended-alphabet overlap
// matrix at each recorded time (rows: g1g1, g1g2, g0g1, g0g2, g0a).
struct TransferSnapshots {
    std::vector<double> times;
    std::vector<Eigen::Matrix<Complex, 5, 4>> overlaps;
};

inline GateTransferMatrix compute_transfer_matrix(const TimeDependentHamiltonian& H,
                                                  const BasisSet& basis,
                                                  const IntegratorConfig& cfg, double t_a,
                                                  double t_b,
                                                  TransferSnapshots* snapshots = nullptr) {
    const auto comp = computational_states();
    const auto ext = extended_alphabet();
    std::array<Eigen::Index, 5> ext_idx{};
    for (std::size_t i = 0; i < 5; ++i) ext_idx[i] = basis.index_of(ext[i]);

    GateTransferMatrix result;
    std::array<Vec, 4> finals;
    for (int j = 0; j < 4; ++j) {
        StateVector psi0{&basis, basis.unit_vector(comp[static_cast<std::size_t>(j)])};
        std::function<void(double, const Vec&)> obs = nullptr;
        if (snapshots) {
            obs = [&, j](double t, const Vec& psi) {
                if (j == 0) {
                    snapshots->times.push_back(t);
                    snapshots->overlaps.emplace_back(Eigen::Matrix<Complex, 5, 4>::Zero());
                }
                // all four columns record at identical times
                const std::size_t k = [&] {
                    const auto it = std::lower_bound(snapshots->times.begin(),
                                                     snapshots->times.end(), t - 1e-12);
                    return static_cast<std::size_t>(it - snapshots->times.begin());
                }();
                for (std::size_t i = 0; i < 5; ++i) {
                    snapshots->overlaps[k](static_cast<Eigen::Index>(i), j) = psi[ext_idx[i]];
                }
            };
        }
        const StateVector fin = evolve_state(psi0, H, t_a, t_b, cfg, obs);
        finals[static_cast<std::size_t>(j)] = fin.amplitudes;
        for (int i = 0; i < 4; ++i) {
            result.entries(i, j) = fin.amplitudes[ext_idx[static_cast<std::size_t>(i)]];
        }
    }
    return result;
}

// -------------------------------- process map --------------------------------

// Images of the 16 elementary operators |i><j| on the computational-plus-vacuum
// subspace under the full open-system gate. Linearity of the master equation in
// rho(0) lets any initial computational state be reconstructed from these.
struct ProcessMap {
    const BasisSet* basis{nullptr};
    std::array<Eigen::Index, 5> ext_idx{};  // computational 4 + |g0 a>
    std::array<DenseOp, 16> images;         // images[4*i + j] = image of |i><j|

    // rho(t) for initial amplitudes c over the computational basis
    DenseOp reconstruct(const Eigen::Vector4cd& c) const {
        DenseOp rho = DenseOp::Zero(images[0].rows(), images[0].cols());
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) {
                const Complex w = c[i] * std::conj(c[j]);
                if (w != Complex(0.0, 0.0)) {
                    rho += w * images[static_cast<std::size_t>(4 * i + j)];
                }
            }
        }
        return rho;
    }
};

// `workers` bounds the number of concurrent propagations; results are
// independent of the worker count.
inline ProcessMap compute_process_map(const TimeDependentHamiltonian& H, const BasisSet& basis,
                                      const std::vector<SparseOp>& collapse,
                                      const IntegratorConfig& cfg, double t_a, double t_b,
                                      int workers = 1) {
    if (workers < 1) throw std::invalid_argument("compute_process_map: workers >= 1");
    ProcessMap pm;
    pm.basis = &basis;
    const auto ext = extended_alphabet();
    for (std::size_t i = 0; i < 5; ++i) pm.ext_idx[i] = basis.index_of(ext[i]);

    // 10 independent evolutions; the rest follow by Hermitian symmetry.
    std::vector<std::pair<int, int>> jobs;
    for (int i = 0; i < 4; ++i)
        for (int j = i; j < 4; ++j) jobs.emplace_back(i, j);

    std::atomic<std::size_t> next{0};
    auto run = [&]() {
        for (;;) {
            const std::size_t k = next.fetch_add(1);
            if (k >= jobs.size()) return;
            const auto [i, j] = jobs[k];
            DenseOp E0 = DenseOp::Zero(basis.size(), basis.size());
            E0(pm.ext_idx[static_cast<std::size_t>(i)], pm.ext_idx[static_cast<std::size_t>(j)]) =
                Complex(1.0, 0.0);
            pm.images[static_cast<std::size_t>(4 * i + j)] =
                evolve_matrix(E0, H, collapse, t_a, t_b, cfg, /*hermitize=*/i == j);
        }
    };
    if (workers == 1) {
        run();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(run);
        for (std::thread& th : pool) th.join();
    }
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < i; ++j) {
            pm.images[static_cast<std::size_t>(4 * i + j)] =
                pm.images[static_cast<std::size_t>(4 * j + i)].adjoint();
        }
    }
    return pm;
}

}  // namespace zenogate
