#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace liegyro::verify {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

using Suite = std::vector<CheckResult>;

bool all_passed(const Suite& suite);

// Exact symbolic kernel identities of the Euler-Poisson derivation with
// inertia (2, 2, 1): energy, the three momentum components, Omega3 and the
// transverse norm are annihilated, with no tolerance.
Suite kernel_suite();

// Repeated derivation of the weighted momentum form (A Omega, G_i) for
// random rational A = diag(a2, a2, a3) equals the recursion-free closed form
// as polynomials, orders 2..7; plus the vanishing corner A = diag(i2, i2, i3).
Suite momentum_form_suite(uint64_t seed);

// Series coefficients of the (1,1) rotation entry on the canonical rigid
// datum I = (1, 1, 2), m = (0, 3, 4): exact rational agreement with the
// symbolic derivation for n <= 4, vanishing odd orders, and partial sums
// matching the product-of-cosines closed form to 1e-12.
Suite coefficient_suite();

// Flow group law z(t + s) = z(t, z(s)) for random quadratic fields and for
// the Euler-Poisson field, within 1e-10 for |t|, |s| <= 0.2.
Suite flow_suite(uint64_t seed);

// Precession geometry on the rigid datum: the symmetry-axis angle stays at
// mhat3 = 0.8 within 1e-13 over 64 sample times, and the central-difference
// axis speed equals k * mhat2 = 3.0 within 1e-6.
Suite geometry_suite();

// Three-way agreement closed form / Lie series / RK4 on the rigid datum over
// [0, 2] with 200 samples.
Suite trajectory_agreement_suite();

// Orthogonality and invariant drift along the closed-form trajectory.
Suite conservation_suite();

// Pure-spin data: all three methods agree to 1e-10, and the general solution
// approaches the spin branch monotonically as the transverse velocity
// shrinks through 1e-6, 1e-8, 1e-10.
Suite degenerate_branch_suite();

// RK4 error against the closed form drops by a factor in [12, 20] when dt
// halves from 2e-4 to 1e-4.
Suite convergence_order_suite();

// CLI suite names: kernel, lemma1, coeffs, flow, geometry, all.
// Throws std::invalid_argument for unknown names.
Suite run_named_suite(const std::string& name, uint64_t seed);

}  // namespace liegyro::verify
