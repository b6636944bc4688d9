// hamiltonian.hpp — Static atom-cavity-fiber coupling, time-dependent drive
// terms, collapse operators, Zeno projectors, and the reduced effective models.

#pragma once

#include "zenogate/hilbert.hpp"
#include "zenogate/pulses.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace zenogate {

struct SystemParams {
    double g{10.0};        // atom-cavity coupling
    double nu{10.0};       // cavity-fiber coupling
    double gamma{0.0};     // total per-atom spontaneous emission rate
    double kappa{0.0};     // cavity photon leakage rate
    double kappa_f{0.0};   // fiber leakage rate
    int n_max{1};

    void validate() const {
        if (g <= 0 || nu <= 0) throw std::invalid_argument("SystemParams: g, nu must be > 0");
        if (gamma < 0 || kappa < 0 || kappa_f < 0) {
            throw std::invalid_argument("SystemParams: decay rates must be >= 0");
        }
        if (n_max < 1 || n_max > 3) {
            throw std::invalid_argument("SystemParams: N_max must be in [1, 3]");
        }
    }
};

// -------------------------- time-dependent Hamiltonian -----------------------

// H(t) = static_part + sum_i f_i(t) * (A_i + A_i^dagger), with real f_i.
// Channels are applied to vectors/matrices without assembling H(t).
struct DriveChannel {
    std::function<double(double)> coefficient;  // of global time
    SparseOp coupling;       // A_i
    SparseOp coupling_sym;   // A_i + A_i^dagger
};

class TimeDependentHamiltonian {
public:
    TimeDependentHamiltonian(SparseOp static_part, std::vector<DriveChannel> channels)
        : static_part_(std::move(static_part)), channels_(std::move(channels)) {}

    const SparseOp& static_part() const { return static_part_; }
    const std::vector<DriveChannel>& channels() const { return channels_; }
    Eigen::Index dim() const { return static_part_.rows(); }

    SparseOp at(double t) const {
        SparseOp h = static_part_;
        for (const DriveChannel& ch : channels_) {
            const double f = ch.coefficient(t);
            if (f != 0.0) h += Complex(f, 0.0) * ch.coupling_sym;
        }
        return h;
    }

    // out = H(t) * v
    void apply(double t, const Vec& v, Vec& out) const {
        out.noalias() = static_part_ * v;
        for (const DriveChannel& ch : channels_) {
            const double f = ch.coefficient(t);
            if (f != 0.0) out.noalias() += Complex(f, 0.0) * (ch.coupling_sym * v);
        }
    }

private:
    SparseOp static_part_;
    std::vector<DriveChannel> channels_;
};

// ------------------------------- construction --------------------------------

// H_acf = sum_k [ g a_k |e>_k<g0| + nu b a_k^dag ] + H.c.
//
// Operator products are composed in the lexicographic full basis and restricted
// afterwards: composing inside a restricted basis would drop matrix elements
// whose intermediate state lies outside it.
inline SparseOp build_H_acf(const SystemParams& sp, const BasisSet& basis) {
    const BasisSet full = build_full_basis(basis.truncation());
    const SparseOp a_A = build_mode_op(Mode::cavA, full);
    const SparseOp a_B = build_mode_op(Mode::cavB, full);
    const SparseOp b = build_mode_op(Mode::fiber, full);
    const SparseOp s_A = build_atomic_op(AtomSite::A, AtomLevel::e, AtomLevel::g0, full);
    const SparseOp s_B = build_atomic_op(AtomSite::B, AtomLevel::e, AtomLevel::g0, full);
    SparseOp half = Complex(sp.g, 0.0) * SparseOp(a_A * s_A)
                  + Complex(sp.g, 0.0) * SparseOp(a_B * s_B)
                  + Complex(sp.nu, 0.0) * SparseOp(b * SparseOp(a_A.adjoint()))
                  + Complex(sp.nu, 0.0) * SparseOp(b * SparseOp(a_B.adjoint()));
    return restrict_op(SparseOp(half + SparseOp(half.adjoint())), basis, full);
}

inline SparseOp drive_op(DriveTransition tr, const BasisSet& basis) {
    switch (tr) {
        case DriveTransition::g1_e:
            return build_atomic_op(AtomSite::B, AtomLevel::e, AtomLevel::g1, basis);
        case DriveTransition::a_e:
            return build_atomic_op(AtomSite::B, AtomLevel::e, AtomLevel::a, basis);
        case DriveTransition::g2_e:
            return build_atomic_op(AtomSite::B, AtomLevel::e, AtomLevel::g2, basis);
    }
    throw std::invalid_argument("drive_op: bad transition");
}

namespace detail {
inline DriveChannel make_channel(SparseOp op, std::function<double(double)> f) {
    SparseOp sym = op + SparseOp(op.adjoint());
    return {std::move(f), std::move(op), std::move(sym)};
}
}  // namespace detail

// Hamiltonian of step k alone: H_acf plus the two drive channels of that step,
// with coefficients defined inside the step window.
inline TimeDependentHamiltonian build_step_hamiltonian(int k, const SystemParams& sp,
                                                       const PulseParams& p,
                                                       const BasisSet& basis) {
    const StepSchedule sched = step_schedule(k, p);
    std::vector<DriveChannel> channels;
    channels.push_back(detail::make_channel(
        drive_op(sched.first, basis),
        [k, p](double t) { return step_pulses(t, k, p).first; }));
    channels.push_back(detail::make_channel(
        drive_op(sched.second, basis),
        [k, p](double t) { return step_pulses(t, k, p).second; }));
    return TimeDependentHamiltonian(build_H_acf(sp, basis), std::move(channels));
}

// Piecewise Hamiltonian of the whole gate over [0, 3 tf]: six drive channels,
// each zero outside its step window (Gaussian tails inside windows are carried).
inline TimeDependentHamiltonian build_gate_hamiltonian(const SystemParams& sp,
                                                       const PulseParams& p,
                                                       const BasisSet& basis) {
    std::vector<DriveChannel> channels;
    for (int k = 1; k <= 3; ++k) {
        const StepSchedule sched = step_schedule(k, p);
        auto in_window = [sched](double t) { return t >= sched.t_start && t <= sched.t_end; };
        channels.push_back(detail::make_channel(
            drive_op(sched.first, basis),
            [k, p, in_window](double t) { return in_window(t) ? step_pulses(t, k, p).first : 0.0; }));
        channels.push_back(detail::make_channel(
            drive_op(sched.second, basis),
            [k, p, in_window](double t) { return in_window(t) ? step_pulses(t, k, p).second : 0.0; }));
    }
    return TimeDependentHamiltonian(build_H_acf(sp, basis), std::move(channels));
}

// 11 collapse operators: sqrt(gamma/4) |k>_j<e| for each atom j and each ground
// level k (gamma_A = gamma_B = gamma/4 per branch), plus sqrt(kappa) a_A,
// sqrt(kappa) a_B, sqrt(kappa_f) b.
inline std::vector<SparseOp> build_collapse_ops(const SystemParams& sp, const BasisSet& basis) {
    std::vector<SparseOp> ops;
    ops.reserve(11);
    const double branch = std::sqrt(sp.gamma / 4.0);
    for (AtomSite site : {AtomSite::A, AtomSite::B}) {
        for (AtomLevel k : {AtomLevel::a, AtomLevel::g1, AtomLevel::g2, AtomLevel::g0}) {
            ops.push_back(Complex(branch, 0.0)
                          * build_atomic_op(site, k, AtomLevel::e, basis));
        }
    }
    ops.push_back(Complex(std::sqrt(sp.kappa), 0.0) * build_mode_op(Mode::cavA, basis));
    ops.push_back(Complex(std::sqrt(sp.kappa), 0.0) * build_mode_op(Mode::cavB, basis));
    ops.push_back(Complex(std::sqrt(sp.kappa_f), 0.0) * build_mode_op(Mode::fiber, basis));
    return ops;
}

// ------------------------------- Zeno subspace -------------------------------

// The step-1 state family: phi_1..phi_15 in the paper's ordering (1-based
// access through phi_state).
inline BasisState phi_state(int i) {
    using L = AtomLevel;
    switch (i) {
        case 1:  return {L::g1, L::g1, 0, 0, 0};
        case 2:  return {L::g1, L::g2, 0, 0, 0};
        case 3:  return {L::g0, L::g1, 0, 0, 0};
        case 4:  return {L::g0, L::g2, 0, 0, 0};
        case 5:  return {L::g1, L::e, 0, 0, 0};
        case 6:  return {L::g0, L::e, 0, 0, 0};
        case 7:  return {L::g1, L::a, 0, 0, 0};
        case 8:  return {L::g1, L::g0, 0, 0, 1};
        case 9:  return {L::g0, L::a, 0, 0, 0};
        case 10: return {L::g0, L::g0, 0, 0, 1};
        case 11: return {L::g1, L::g0, 0, 1, 0};
        case 12: return {L::g0, L::g0, 0, 1, 0};
        case 13: return {L::g1, L::g0, 1, 0, 0};
        case 14: return {L::g0, L::g0, 1, 0, 0};
        case 15: return {L::e,  L::g0, 0, 0, 0};
    }
    throw std::invalid_argument("phi_state: index must be in [1, 15]");
}

// |phi_d> = (nu |phi6> - g |phi12> + nu |phi15>) / sqrt(2 nu^2 + g^2)
inline Vec phi_dark(const SystemParams& sp, const BasisSet& basis) {
    const double norm = std::sqrt(2.0 * sp.nu * sp.nu + sp.g * sp.g);
    Vec v = Vec::Zero(basis.size());
    v[basis.index_of(phi_state(6))] = Complex(sp.nu / norm, 0.0);
    v[basis.index_of(phi_state(12))] = Complex(-sp.g / norm, 0.0);
    v[basis.index_of(phi_state(15))] = Complex(sp.nu / norm, 0.0);
    return v;
}

// Rank-1 projectors onto {phi1, phi2, phi3, phi4, phi7, phi9, phi_d}.
inline std::vector<SparseOp> zeno_projectors(const SystemParams& sp, const BasisSet& basis) {
    if (sp.nu != sp.g) throw std::invalid_argument("zeno_projectors: requires nu == g");
    std::vector<Vec> kets;
    for (int i : {1, 2, 3, 4, 7, 9}) kets.push_back(basis.unit_vector(phi_state(i)));
    kets.push_back(phi_dark(sp, basis));
    std::vector<SparseOp> projs;
    for (const Vec& v : kets) {
        std::vector<Eigen::Triplet<Complex>> trips;
        for (Eigen::Index i = 0; i < v.size(); ++i) {
            if (v[i] == Complex(0.0, 0.0)) continue;
            for (Eigen::Index j = 0; j < v.size(); ++j) {
                if (v[j] == Complex(0.0, 0.0)) continue;
                trips.emplace_back(i, j, v[i] * std::conj(v[j]));
            }
        }
        SparseOp pm(basis.size(), basis.size());
        pm.setFromTriplets(trips.begin(), trips.end());
        projs.push_back(std::move(pm));
    }
    return projs;
}

// --------------------------- reduced effective model -------------------------

// 3-state Zeno model over (phi3, phi9, phi_d): couplings Omega'_{11}/sqrt(3)
// and Omega'_{1a}/sqrt(3), i.e. exactly the designed effective pair.
struct ZenoModel {
    PulseParams pulse;

    // H(s) in the (phi3, phi9, phi_d) ordering, step-local time s.
    Eigen::Matrix3cd at(double s) const {
        const auto [o1, o2] = modified_pair(s, pulse);
        Eigen::Matrix3cd h = Eigen::Matrix3cd::Zero();
        h(0, 2) = Complex(o1, 0.0);
        h(1, 2) = Complex(o2, 0.0);
        h(2, 0) = Complex(o1, 0.0);
        h(2, 1) = Complex(o2, 0.0);
        return h;
    }

    std::pair<double, double> effective_couplings(double s) const {
        return modified_pair(s, pulse);
    }
};

inline ZenoModel build_zeno_effective(const PulseParams& p, const SystemParams& sp) {
    if (sp.nu != sp.g) {
        throw std::invalid_argument("build_zeno_effective: derived for nu == g only");
    }
    return ZenoModel{p};
}

// Dressed dark state over (phi3, phi9, phi_d):
// cos(mu)[cos(theta), sin(theta), 0] + i sin(mu) [0, 0, 1].
inline Eigen::Vector3cd dressed_dark_state(double s, const PulseParams& p) {
    const double m = mu(s, p);
    const double theta = theta_omega(s, p).first;
    Eigen::Vector3cd v;
    v << Complex(std::cos(m) * std::cos(theta), 0.0),
         Complex(std::cos(m) * std::sin(theta), 0.0),
         Complex(0.0, std::sin(m));
    return v;
}

}  // namespace zenogate
