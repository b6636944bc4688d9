// pulses.hpp — Gaussian base pulses, mixing angles, dressed-frame correction
// gains, and the six modified drive envelopes.
//
// All frequencies are in units of the base Rabi amplitude Omega0, times in
// units of 1/Omega0. Step-local time s runs over [0, tf]; the three gate steps
// share one pulse profile, shifted by multiples of tf.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <utility>

namespace zenogate {

// Centering of the sech regularizer inside mu(t): the literal form uses
// sech(s/tau); the centered variant uses sech((s - tf/2)/tau).
enum class RegCenter { as_written, centered };

struct PulseParams {
    double omega0{1.0};
    double tf{20.0};
    double tau{2.0};
    double t0{2.0};
    RegCenter reg_center{RegCenter::as_written};
    double deriv_h{1e-6};  // central-difference half-step for mu_dot

    void validate() const {
        if (tf <= 0 || tau <= 0 || t0 <= 0 || deriv_h <= 0) {
            throw std::invalid_argument("PulseParams: tf, tau, t0, deriv_h must be > 0");
        }
    }
};

struct DressedFrameGains {
    double g_x;             // = mu_dot
    double g_z;             // = g_reg/tau (stable algebraic form)
    double mu;
    double theta;
    double omega;
    double eta;
    std::complex<double> xi;  // residual off-diagonal dressed-frame term
};

// ------------------------------- base pulses ---------------------------------

// The two Gaussian primitives; the first peaks at tf/2 + t0, the second at tf/2 - t0.
inline std::pair<double, double> gaussian_pair(double s, const PulseParams& p) {
    const double c = p.tf / 2.0;
    const double d1 = (s - c - p.t0) / p.tau;
    const double d2 = (s - c + p.t0) / p.tau;
    return {p.omega0 * std::exp(-d1 * d1), p.omega0 * std::exp(-d2 * d2)};
}

// theta = arctan(Omega1/Omega2), Omega = sqrt(Omega1^2 + Omega2^2).
inline std::pair<double, double> theta_omega(double s, const PulseParams& p) {
    const auto [o1, o2] = gaussian_pair(s, p);
    return {std::atan2(o1, o2), std::hypot(o1, o2)};
}

// Closed form from the Gaussian ratio: theta_dot = (2 t0/tau^2) sin(2 theta).
inline double theta_dot(double s, const PulseParams& p) {
    const double theta = theta_omega(s, p).first;
    return (2.0 * p.t0 / (p.tau * p.tau)) * std::sin(2.0 * theta);
}

inline double regularizer(double s, const PulseParams& p) {
    const double arg = (p.reg_center == RegCenter::centered) ? (s - p.tf / 2.0) : s;
    return 1.0 / std::cosh(arg / p.tau);
}

// mu = -arctan(theta_dot / (g_reg/tau + Omega)); the regularizer pins mu to ~0
// at the window edges where Omega alone would be too small.
inline double mu(double s, const PulseParams& p) {
    const auto [theta, omega] = theta_omega(s, p);
    (void)theta;
    return -std::atan(theta_dot(s, p) / (regularizer(s, p) / p.tau + omega));
}

inline double mu_dot(double s, const PulseParams& p) {
    return (mu(s + p.deriv_h, p) - mu(s - p.deriv_h, p)) / (2.0 * p.deriv_h);
}

// ----------------------------- correction gains ------------------------------

// g_x = mu_dot; g_z evaluated through the cancellation g_z = g_reg/tau, exact
// when mu comes from the regularized arctan above (avoids 0/0 at theta_dot = 0).
inline DressedFrameGains correction_gains(double s, const PulseParams& p) {
    DressedFrameGains g{};
    const auto [theta, omega] = theta_omega(s, p);
    g.theta = theta;
    g.omega = omega;
    g.mu = mu(s, p);
    g.g_x = mu_dot(s, p);
    g.g_z = regularizer(s, p) / p.tau;
    const double th_d = theta_dot(s, p);
    const double gz_plus_omega = g.g_z + omega;
    g.eta = gz_plus_omega * std::cos(g.mu) - th_d * std::sin(g.mu);
    const double xi_im = gz_plus_omega * std::sin(g.mu) + th_d * std::cos(g.mu);
    g.xi = std::complex<double>(0.0, xi_im) / std::sqrt(2.0);  // g_x = mu_dot kills the real part
    return g;
}

// ------------------------------ modified pulses ------------------------------

// Omega'_1 = g_x cos(theta) - [g_z + Omega] sin(theta),
// Omega'_2 = g_x sin(theta) + [g_z + Omega] cos(theta).
inline std::pair<double, double> modified_pair(double s, const PulseParams& p) {
    const auto g = correction_gains(s, p);
    const double gz_plus_omega = g.g_z + g.omega;
    const double c = std::cos(g.theta), sn = std::sin(g.theta);
    return {g.g_x * c - gz_plus_omega * sn, g.g_x * sn + gz_plus_omega * c};
}

// ------------------------------ step schedule --------------------------------

// Atom-B transitions driven by (first, second) channel of each step.
enum class DriveTransition { g1_e, a_e, g2_e };

struct StepSchedule {
    int step;
    double t_start;
    double t_end;
    DriveTransition first;
    DriveTransition second;
};

inline StepSchedule step_schedule(int k, const PulseParams& p) {
    if (k < 1 || k > 3) throw std::invalid_argument("step_schedule: step must be 1, 2 or 3");
    static constexpr DriveTransition firsts[] = {DriveTransition::g1_e, DriveTransition::g2_e,
                                                 DriveTransition::a_e};
    static constexpr DriveTransition seconds[] = {DriveTransition::a_e, DriveTransition::g1_e,
                                                  DriveTransition::g2_e};
    return {k, (k - 1) * p.tf, k * p.tf, firsts[k - 1], seconds[k - 1]};
}

// Lab-frame channel amplitudes sqrt(3) * Omega'_{1,2} at global time t inside
// step k's window. "first" drives schedule.first, "second" schedule.second.
inline std::pair<double, double> step_pulses(double t, int k, const PulseParams& p) {
    const StepSchedule sched = step_schedule(k, p);
    // tolerate integrator round-off at the window edges
    const double tol = 1e-9 * p.tf;
    if (t < sched.t_start - tol || t > sched.t_end + tol) {
        throw std::out_of_range("step_pulses: t outside step window");
    }
    const auto [o1, o2] = modified_pair(std::clamp(t - sched.t_start, 0.0, p.tf), p);
    const double root3 = std::sqrt(3.0);
    return {root3 * o1, root3 * o2};
}

}  // namespace zenogate
