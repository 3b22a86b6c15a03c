#include "liegyro/refintegrator.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace liegyro {

void IntegratorConfig::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw std::invalid_argument("IntegratorConfig: dt must be positive and finite");
}

EpState pack_state(const BodyState& state) {
    EpState z;
    z[0] = state.omega.x;
    z[1] = state.omega.y;
    z[2] = state.omega.z;
    for (int k = 0; k < 9; ++k) z[3 + k] = state.r.a[k];
    return z;
}

BodyState unpack_state(const EpState& z) {
    Vec3 omega{z[0], z[1], z[2]};
    std::array<double, 9> r;
    for (int k = 0; k < 9; ++k) r[k] = z[3 + k];
    return BodyState{omega, Mat3{r}};
}

EpState ep_rhs(const std::array<double, 3>& moments, const EpState& z) {
    const double i1 = moments[0], i2 = moments[1], i3 = moments[2];
    const double w1 = z[0], w2 = z[1], w3 = z[2];
    EpState d;
    d[0] = (i2 - i3) / i1 * w2 * w3;
    d[1] = (i3 - i1) / i2 * w3 * w1;
    d[2] = (i1 - i2) / i3 * w1 * w2;
    // row i of R evolves as dG_i/dt = [G_i, Omega]
    for (int i = 0; i < 3; ++i) {
        const double g1 = z[3 + 3 * i], g2 = z[4 + 3 * i], g3 = z[5 + 3 * i];
        d[3 + 3 * i] = g2 * w3 - g3 * w2;
        d[4 + 3 * i] = g3 * w1 - g1 * w3;
        d[5 + 3 * i] = g1 * w2 - g2 * w1;
    }
    return d;
}

StateDerivative ep_derivative(const std::array<double, 3>& moments, const BodyState& state) {
    EpState d = ep_rhs(moments, pack_state(state));
    StateDerivative out;
    out.omega_dot = Vec3{d[0], d[1], d[2]};
    for (int k = 0; k < 9; ++k) out.r_dot.a[k] = d[3 + k];
    return out;
}

namespace {

// The steps run in extended precision: the per-step truncation increment at
// dt ~ 1e-4 is below one double ulp of the state, and plain double stepping
// would shave it off and spoil the measured convergence order.
using Wide = long double;
using WideState = std::array<Wide, 12>;

WideState widen(const EpState& z) {
    WideState w;
    for (int k = 0; k < 12; ++k) w[k] = z[k];
    return w;
}

EpState narrow(const WideState& w) {
    EpState z;
    for (int k = 0; k < 12; ++k) z[k] = static_cast<double>(w[k]);
    return z;
}

WideState wide_rhs(const std::array<double, 3>& moments, const WideState& z) {
    const Wide i1 = moments[0], i2 = moments[1], i3 = moments[2];
    const Wide w1 = z[0], w2 = z[1], w3 = z[2];
    WideState d;
    d[0] = (i2 - i3) / i1 * w2 * w3;
    d[1] = (i3 - i1) / i2 * w3 * w1;
    d[2] = (i1 - i2) / i3 * w1 * w2;
    for (int i = 0; i < 3; ++i) {
        const Wide g1 = z[3 + 3 * i], g2 = z[4 + 3 * i], g3 = z[5 + 3 * i];
        d[3 + 3 * i] = g2 * w3 - g3 * w2;
        d[4 + 3 * i] = g3 * w1 - g1 * w3;
        d[5 + 3 * i] = g1 * w2 - g2 * w1;
    }
    return d;
}

bool finite_state(const WideState& z) {
    for (Wide v : z)
        if (!std::isfinite(static_cast<double>(v))) return false;
    return true;
}

void rk4_step(const std::array<double, 3>& moments, WideState& z, Wide dt) {
    WideState k1 = wide_rhs(moments, z);
    WideState y;
    for (int i = 0; i < 12; ++i) y[i] = z[i] + dt / 2 * k1[i];
    WideState k2 = wide_rhs(moments, y);
    for (int i = 0; i < 12; ++i) y[i] = z[i] + dt / 2 * k2[i];
    WideState k3 = wide_rhs(moments, y);
    for (int i = 0; i < 12; ++i) y[i] = z[i] + dt * k3[i];
    WideState k4 = wide_rhs(moments, y);
    for (int i = 0; i < 12; ++i) z[i] += dt / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
}

void gram_schmidt_rows(WideState& z) {
    Wide* r = z.data() + 3;
    auto dot3 = [&](int i, int j) {
        return r[3 * i] * r[3 * j] + r[3 * i + 1] * r[3 * j + 1] + r[3 * i + 2] * r[3 * j + 2];
    };
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < i; ++j) {
            Wide p = dot3(i, j);
            for (int k = 0; k < 3; ++k) r[3 * i + k] -= p * r[3 * j + k];
        }
        Wide n = std::sqrt(static_cast<double>(dot3(i, i)));
        for (int k = 0; k < 3; ++k) r[3 * i + k] /= n;
    }
}

// The full-step count and the shortened final step are computed in extended
// precision, so the time actually integrated equals `span` to an extended
// ulp regardless of the step count; a double-sized time defect here would
// show up as a phase error k * ulp(span) in the result.
void advance_wide(const std::array<double, 3>& moments, WideState& z, double span,
                  const IntegratorConfig& cfg, double t_base) {
    const Wide wide_span = span, wide_dt = cfg.dt;
    long n_full = static_cast<long>(std::floor(static_cast<double>(wide_span / wide_dt)));
    Wide remainder = wide_span - static_cast<Wide>(n_full) * wide_dt;
    if (remainder < 0) {  // quotient rounded up across an integer
        --n_full;
        remainder = wide_span - static_cast<Wide>(n_full) * wide_dt;
    }
    for (long k = 0; k < n_full; ++k) {
        rk4_step(moments, z, cfg.dt);
        if (cfg.renormalize) gram_schmidt_rows(z);
        if (!finite_state(z))
            throw std::runtime_error("rk4_advance: non-finite state after t = " +
                                     std::to_string(t_base + static_cast<double>(k + 1) * cfg.dt));
    }
    if (remainder > 0.0) {
        rk4_step(moments, z, remainder);
        if (cfg.renormalize) gram_schmidt_rows(z);
        if (!finite_state(z))
            throw std::runtime_error("rk4_advance: non-finite state after t = " +
                                     std::to_string(t_base + span));
    }
}

}  // namespace

void rk4_advance(const std::array<double, 3>& moments, Rk4Cursor& cur, double span,
                 const IntegratorConfig& cfg, double t_base) {
    cfg.validate();
    if (span < 0.0) throw std::invalid_argument("rk4_advance: negative span");
    advance_wide(moments, cur.z, span, cfg, t_base);
}

Trajectory integrate(const std::array<double, 3>& moments, const BodyState& state0, double t_end,
                     const IntegratorConfig& cfg) {
    cfg.validate();
    if (!std::isfinite(t_end) || t_end < 0.0)
        throw std::invalid_argument("integrate: t_end must be finite and >= 0");

    WideState z = widen(pack_state(state0));
    Trajectory traj;
    traj.push_back({0.0, state0, invariants_of(moments, state0)});

    long step = 0;
    double t = 0.0;
    while (t < t_end) {
        double h = std::min(cfg.dt, t_end - t);
        rk4_step(moments, z, h);
        if (cfg.renormalize) gram_schmidt_rows(z);
        ++step;
        t = std::min(static_cast<double>(step) * cfg.dt, t_end);
        if (!finite_state(z))
            throw std::runtime_error("integrate: non-finite state after t = " + std::to_string(t));
        BodyState s = unpack_state(narrow(z));
        traj.push_back({t, s, invariants_of(moments, s)});
    }
    return traj;
}

}  // namespace liegyro
