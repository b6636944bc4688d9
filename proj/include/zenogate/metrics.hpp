// metrics.hpp — Ideal-state construction, average-fidelity quadrature,
// per-step fidelity traces, and the truth table.
//
// The ideal-state alphabet has five slots (g1g1, g1g2, g0g1, g0g2, g0a):
// the intermediate steps park the |10> component in the auxiliary |g0 a>.

#pragma once

#include "zenogate/dynamics.hpp"

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace zenogate {

struct GateAngles {
    double epsilon;
    double beta;
};

enum class Stage { input, step1, step2, whole };

struct FidelityResult {
    double value;
    Stage stage;
    int grid;
    bool exact;  // false when grid < 9 (quadrature no longer exact)
};

using ExtState = Eigen::Matrix<Complex, 5, 1>;
using ExtTransfer = Eigen::Matrix<Complex, 5, 4>;

// ------------------------------- ideal states --------------------------------

// Amplitudes over (g1g1, g1g2, g0g1, g0g2, g0a); epsilon and beta are real
// angles integrated over [0, 2pi].
inline ExtState ideal_state(const GateAngles& a, Stage stage) {
    const double se = std::sin(a.epsilon), ce = std::cos(a.epsilon);
    const double sb = std::sin(a.beta), cb = std::cos(a.beta);
    ExtState v = ExtState::Zero();
    v[0] = se * sb;
    v[1] = se * cb;
    switch (stage) {
        case Stage::input:
            v[2] = ce * sb;
            v[3] = ce * cb;
            break;
        case Stage::step1:
            v[4] = ce * sb;
            v[3] = ce * cb;
            break;
        case Stage::step2:
            v[4] = ce * sb;
            v[2] = ce * cb;
            break;
        case Stage::whole:
            v[3] = ce * sb;
            v[2] = ce * cb;
            break;
    }
    return v;
}

// --------------------------------- quadrature --------------------------------

namespace detail {

// Uniform periodic product rule over [0, 2pi)^2; exact for the trigonometric-
// polynomial integrands here (degree <= 4 per angle) once n >= 9.
template <typename F>
double angle_average(int n, F&& integrand) {
    if (n < 1) throw std::invalid_argument("angle_average: grid must be >= 1");
    const double step = 2.0 * M_PI / n;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            acc += integrand(GateAngles{i * step, j * step});
        }
    }
    return acc / (static_cast<double>(n) * n);
}

}  // namespace detail

// Average pure-state fidelity of an extended 5x4 transfer map against the
// stage's ideal states: F = <|<psi_ideal| M |psi_in>|^2>.
inline FidelityResult average_fidelity_pure(const ExtTransfer& m, Stage stage, int n_grid) {
    const double value = detail::angle_average(n_grid, [&](const GateAngles& a) {
        const ExtState in = ideal_state(a, Stage::input);
        const ExtState id = ideal_state(a, stage);
        const Eigen::Vector4cd c = in.head<4>();
        return std::norm(id.adjoint().dot(ExtState(m * c)));
    });
    return {value, stage, n_grid, n_grid >= 9};
}

inline ExtTransfer embed_transfer(const GateTransferMatrix& m) {
    ExtTransfer e = ExtTransfer::Zero();
    e.topRows<4>() = m.entries;
    return e;
}

inline FidelityResult average_fidelity_pure(const GateTransferMatrix& m, Stage stage,
                                            int n_grid) {
    return average_fidelity_pure(embed_transfer(m), stage, n_grid);
}

// Average mixed-state fidelity from a process map: F = <|<psi_id|rho(t)|psi_id>|>.
// Only the restriction of each image to the extended alphabet enters.
inline FidelityResult average_fidelity_mixed(const ProcessMap& pm, Stage stage, int n_grid) {
    // R(a,b; i,j) = <ext_a| image(|i><j|) |ext_b>
    std::array<Eigen::Matrix<Complex, 5, 5>, 16> r;
    for (std::size_t k = 0; k < 16; ++k) {
        for (Eigen::Index a = 0; a < 5; ++a)
            for (Eigen::Index b = 0; b < 5; ++b)
                r[k](a, b) = pm.images[k](pm.ext_idx[static_cast<std::size_t>(a)],
                                          pm.ext_idx[static_cast<std::size_t>(b)]);
    }
    const double value = detail::angle_average(n_grid, [&](const GateAngles& ang) {
        const ExtState in = ideal_state(ang, Stage::input);
        const ExtState id = ideal_state(ang, stage);
        Complex q(0.0, 0.0);
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) {
                const Complex w = in[i] * std::conj(in[j]);
                if (w == Complex(0.0, 0.0)) continue;
                q += w * Complex(id.adjoint().dot(Eigen::Matrix<Complex, 5, 1>(
                         r[static_cast<std::size_t>(4 * i + j)] * id)));
            }
        }
        return std::abs(q);
    });
    return {value, stage, n_grid, n_grid >= 9};
}

// ----------------------------- per-step fidelities ---------------------------

// 5x5 extended transfer of a single step: columns are the propagated extended
// alphabet states, recorded over the step window.
struct StepTrace {
    std::vector<double> times;
    std::vector<double> fidelity;
};

inline StepTrace step_fidelity_trace(int k, const TimeDependentHamiltonian& h_step,
                                     const BasisSet& basis, const PulseParams& p,
                                     const IntegratorConfig& cfg, int n_grid) {
    const StepSchedule sched = step_schedule(k, p);
    const auto ext = extended_alphabet();
    std::array<Eigen::Index, 5> ext_idx{};
    for (std::size_t i = 0; i < 5; ++i) ext_idx[i] = basis.index_of(ext[i]);

    std::vector<double> times;
    std::vector<Eigen::Matrix<Complex, 5, 5>> n_of_t;
    for (int j = 0; j < 5; ++j) {
        StateVector psi0{&basis, basis.unit_vector(ext[static_cast<std::size_t>(j)])};
        std::size_t sample = 0;
        auto obs = [&](double t, const Vec& psi) {
            if (j == 0) {
                times.push_back(t);
                n_of_t.emplace_back(Eigen::Matrix<Complex, 5, 5>::Zero());
            }
            for (std::size_t i = 0; i < 5; ++i) {
                n_of_t[sample](static_cast<Eigen::Index>(i), j) = psi[ext_idx[i]];
            }
            ++sample;
        };
        evolve_state(psi0, h_step, sched.t_start, sched.t_end, cfg, obs);
    }

    const Stage in_stage = (k == 1) ? Stage::input : (k == 2) ? Stage::step1 : Stage::step2;
    const Stage out_stage = (k == 1) ? Stage::step1 : (k == 2) ? Stage::step2 : Stage::whole;
    StepTrace trace;
    trace.times = times;
    trace.fidelity.reserve(times.size());
    for (const auto& n : n_of_t) {
        trace.fidelity.push_back(detail::angle_average(n_grid, [&](const GateAngles& a) {
            const ExtState in = ideal_state(a, in_stage);
            const ExtState id = ideal_state(a, out_stage);
            return std::norm(id.adjoint().dot(ExtState(n * in)));
        }));
    }
    return trace;
}

// Whole-process fidelity trace from continuous-gate snapshots.
inline StepTrace whole_fidelity_trace(const TransferSnapshots& snaps, int n_grid) {
    StepTrace trace;
    trace.times = snaps.times;
    trace.fidelity.reserve(snaps.times.size());
    for (const auto& m : snaps.overlaps) {
        trace.fidelity.push_back(
            average_fidelity_pure(ExtTransfer(m), Stage::whole, n_grid).value);
    }
    return trace;
}

// --------------------------------- truth table -------------------------------

struct TruthTable {
    // rows = inputs (|00>,|01>,|10>,|11>), cols = output computational populations
    Eigen::Matrix4d populations;
};

inline TruthTable truth_table_closed(const GateTransferMatrix& m) {
    TruthTable t;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) t.populations(i, j) = std::norm(m.entries(j, i));
    return t;
}

inline TruthTable truth_table_open(const ProcessMap& pm) {
    TruthTable t;
    for (int i = 0; i < 4; ++i) {
        const DenseOp& rho = pm.images[static_cast<std::size_t>(4 * i + i)];
        for (int j = 0; j < 4; ++j) {
            t.populations(i, j) =
                rho(pm.ext_idx[static_cast<std::size_t>(j)], pm.ext_idx[static_cast<std::size_t>(j)])
                    .real();
        }
    }
    return t;
}

}  // namespace zenogate
