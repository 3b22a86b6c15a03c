#pragma once

#include "liegyro/rigidcore.hpp"

#include <array>

namespace liegyro {

struct IntegratorConfig {
    double dt = 1e-4;
    // Optional Gram-Schmidt re-orthonormalization of R each step; off by
    // default, keeping the output a pure discretization of the equations.
    bool renormalize = false;

    void validate() const;
};

// Raw 12-component phase vector (Omega1..3, R11..R33 row-major). The RK4
// stages work on this representation since intermediate stage values are not
// rotation matrices.
using EpState = std::array<double, 12>;

EpState pack_state(const BodyState& state);
BodyState unpack_state(const EpState& z);

// Right side of the Euler-Poisson system with general diagonal inertia:
// dOmega/dt = I^-1 [I Omega, Omega], dR_ij/dt = -eps_jkm Omega_k R_im.
EpState ep_rhs(const std::array<double, 3>& moments, const EpState& z);

// Same derivative in the BodyState vocabulary (dR/dt is not a rotation,
// hence the plain pair of fields).
struct StateDerivative {
    Vec3 omega_dot;
    Mat3 r_dot;
};
StateDerivative ep_derivative(const std::array<double, 3>& moments, const BodyState& state);

// Integration cursor for sampling a long run segment by segment. The running
// state is kept in extended precision so that a segmented run steps exactly
// like one continuous run; at dt ~ 1e-4 the per-step truncation increment is
// below one double ulp of the state and would otherwise be rounded away.
struct Rk4Cursor {
    std::array<long double, 12> z{};

    Rk4Cursor() = default;
    explicit Rk4Cursor(const EpState& s) {
        for (int k = 0; k < 12; ++k) z[k] = s[k];
    }
    EpState state() const {
        EpState s;
        for (int k = 0; k < 12; ++k) s[k] = static_cast<double>(z[k]);
        return s;
    }
};

// Advance the cursor by `span` (>= 0) using fixed steps of cfg.dt; the final
// step is shortened when dt does not divide span. Throws std::runtime_error
// naming the last good time (offset by `t_base` in the message) if the state
// turns non-finite.
void rk4_advance(const std::array<double, 3>& moments, Rk4Cursor& cur, double span,
                 const IntegratorConfig& cfg, double t_base = 0.0);

// Classical fixed-step RK4 over [0, t_end], recording every step. Samples
// carry the motion invariants as diagnostics.
Trajectory integrate(const std::array<double, 3>& moments, const BodyState& state0, double t_end,
                     const IntegratorConfig& cfg = {});

}  // namespace liegyro
